//! A small binary raster shared by letter pixels and scene masks.

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    pub rows: usize,
    pub cols: usize,
    bits: Vec<u8>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize) -> Grid {
        Grid {
            rows,
            cols,
            bits: vec![0; rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c] != 0
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.bits[r * self.cols + c] = u8::from(v);
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn union(&self, other: &Grid) -> Grid {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        out
    }

    pub fn intersects(&self, other: &Grid) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| a & b != 0)
    }

    /// Cells set in `self` (row, col) in row-major order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Translates down by `dr` rows (negative = up). Errors if any set pixel
    /// would leave the raster.
    pub fn shifted_rows(&self, dr: i32) -> Result<Grid, Error> {
        let mut out = Grid::new(self.rows, self.cols);
        for (r, c) in self.cells() {
            let nr = r as i32 + dr;
            if nr < 0 || nr >= self.rows as i32 {
                return Err(Error::Contract(format!(
                    "shift by {dr} pushes pixel ({r},{c}) outside the raster"
                )));
            }
            out.set(nr as usize, c, true);
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| f64::from(b)).collect()
    }

    pub fn from_f64(rows: usize, cols: usize, values: &[f64]) -> Grid {
        let mut g = Grid::new(rows, cols);
        for (i, v) in values.iter().enumerate() {
            g.bits[i] = u8::from(*v >= 0.5);
        }
        g
    }

    /// Renders with `#` for set and `.` for clear, one text line per row.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '#' } else { '.' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses the `to_text` format; every line must have `cols` characters
    /// from {., #}.
    pub fn from_text_lines(lines: &[&str], base_line: usize) -> Result<Grid, Error> {
        if lines.is_empty() {
            return Err(Error::Parse {
                line: base_line,
                msg: "empty raster block".into(),
            });
        }
        let cols = lines[0].len();
        let mut g = Grid::new(lines.len(), cols);
        for (r, line) in lines.iter().enumerate() {
            if line.len() != cols {
                return Err(Error::Parse {
                    line: base_line + r,
                    msg: format!("raster row has {} chars, expected {cols}", line.len()),
                });
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '#' => g.set(r, c, true),
                    '.' => {}
                    _ => {
                        return Err(Error::Parse {
                            line: base_line + r,
                            msg: format!("unexpected raster character `{ch}`"),
                        })
                    }
                }
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut g = Grid::new(3, 4);
        g.set(0, 0, true);
        g.set(2, 3, true);
        let text = g.to_text();
        let lines: Vec<&str> = text.lines().collect();
        let back = Grid::from_text_lines(&lines, 1).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn shift_inverse_and_bounds() {
        let mut g = Grid::new(5, 2);
        g.set(2, 1, true);
        let up = g.shifted_rows(-2).unwrap();
        assert!(up.get(0, 1));
        assert_eq!(up.shifted_rows(2).unwrap(), g);
        assert!(up.shifted_rows(-1).is_err());
    }
}
