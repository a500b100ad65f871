//! Plain-text PGM (P2) rendering of activation grids: darkness is
//! proportional to activation, so 1.0 renders black and 0.0 white. Each
//! image is written together with an aligned plain-text grid of the values.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Error;

pub const MAXVAL: u32 = 255;

/// Renders a [0,1] value matrix as P2 text. `comment` lines carry
/// provenance (tool version, seed, config hash).
pub fn pgm_string(values: &[f64], rows: usize, cols: usize, comment: &str) -> Result<String, Error> {
    if values.len() != rows * cols {
        return Err(Error::Contract("render_grid shape mismatch".into()));
    }
    if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::Contract("render_grid values must lie in [0, 1]".into()));
    }
    let mut s = String::new();
    s.push_str("P2\n");
    for line in comment.lines() {
        let _ = writeln!(s, "# {line}");
    }
    let _ = writeln!(s, "{cols} {rows}");
    let _ = writeln!(s, "{MAXVAL}");
    for r in 0..rows {
        let mut first = true;
        for c in 0..cols {
            if !first {
                s.push(' ');
            }
            let v = values[r * cols + c];
            let pixel = (MAXVAL as f64 * (1.0 - v)).round() as u32;
            let _ = write!(s, "{pixel}");
            first = false;
        }
        s.push('\n');
    }
    Ok(s)
}

/// Aligned plain-text grid of the same values, two decimals per cell.
pub fn text_grid(values: &[f64], rows: usize, cols: usize) -> String {
    let mut s = String::new();
    for r in 0..rows {
        let mut first = true;
        for c in 0..cols {
            if !first {
                s.push(' ');
            }
            let _ = write!(s, "{:4.2}", values[r * cols + c]);
            first = false;
        }
        s.push('\n');
    }
    s
}

/// Writes the PGM at `path` and the aligned text grid at `path.txt`.
pub fn render_grid(
    values: &[f64],
    rows: usize,
    cols: usize,
    comment: &str,
    path: &Path,
) -> Result<(), Error> {
    let pgm = pgm_string(values, rows, cols, comment)?;
    std::fs::write(path, pgm).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
    let txt_path = path.with_extension(format!(
        "{}txt",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    std::fs::write(&txt_path, text_grid(values, rows, cols))
        .map_err(|e| Error::Io(format!("{}: {}", txt_path.display(), e)))?;
    Ok(())
}

/// Parses a P2 file back into (rows, cols, pixels).
pub fn parse_pgm(text: &str) -> Result<(usize, usize, Vec<u32>), Error> {
    let mut tokens = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        tokens.extend(line.split_whitespace().map(str::to_string));
    }
    if tokens.first().map(String::as_str) != Some("P2") {
        return Err(Error::Parse {
            line: 1,
            msg: "expected P2 magic".into(),
        });
    }
    let nums: Vec<u32> = tokens[1..]
        .iter()
        .map(|t| {
            t.parse().map_err(|e| Error::Parse {
                line: 0,
                msg: format!("bad pgm token `{t}`: {e}"),
            })
        })
        .collect::<Result<_, _>>()?;
    if nums.len() < 3 {
        return Err(Error::Parse {
            line: 0,
            msg: "truncated pgm header".into(),
        });
    }
    let (cols, rows, maxval) = (nums[0] as usize, nums[1] as usize, nums[2]);
    if maxval != MAXVAL {
        return Err(Error::Parse {
            line: 0,
            msg: format!("unexpected maxval {maxval}"),
        });
    }
    let pixels = nums[3..].to_vec();
    if pixels.len() != rows * cols {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {} pixels, found {}", rows * cols, pixels.len()),
        });
    }
    Ok((rows, cols, pixels))
}

/// Lays out equally-sized panels in a grid with 1-cell separators, for the
/// source / source-figure / target / prediction views.
pub fn montage(
    panels: &[Vec<f64>],
    panel_rows: usize,
    panel_cols: usize,
    across: usize,
) -> (Vec<f64>, usize, usize) {
    let down = panels.len().div_ceil(across);
    let rows = down * panel_rows + (down - 1);
    let cols = across * panel_cols + (across - 1);
    let mut out = vec![0.0; rows * cols];
    for (i, panel) in panels.iter().enumerate() {
        let base_r = (i / across) * (panel_rows + 1);
        let base_c = (i % across) * (panel_cols + 1);
        for r in 0..panel_rows {
            for c in 0..panel_cols {
                out[(base_r + r) * cols + base_c + c] = panel[r * panel_cols + c];
            }
        }
    }
    (out, rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_map_to_white_and_black() {
        let s = pgm_string(&[0.0, 1.0], 1, 2, "unit").unwrap();
        let (rows, cols, px) = parse_pgm(&s).unwrap();
        assert_eq!((rows, cols), (1, 2));
        assert_eq!(px, vec![255, 0]);
    }

    #[test]
    fn all_zero_matrix_renders_white() {
        let s = pgm_string(&vec![0.0; 12], 3, 4, "unit").unwrap();
        let (_, _, px) = parse_pgm(&s).unwrap();
        assert!(px.iter().all(|&p| p == 255));
    }

    #[test]
    fn round_trip_reproduces_quantized_values() {
        let values: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
        let s = pgm_string(&values, 4, 5, "unit").unwrap();
        let (_, _, px) = parse_pgm(&s).unwrap();
        for (v, p) in values.iter().zip(px) {
            let expect = (255.0 * (1.0 - v)).round() as u32;
            assert_eq!(p, expect);
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(pgm_string(&[1.2], 1, 1, "x").is_err());
        assert!(pgm_string(&[-0.1], 1, 1, "x").is_err());
    }

    #[test]
    fn montage_places_panels_with_separators() {
        let a = vec![1.0; 4];
        let b = vec![0.0; 4];
        let (out, rows, cols) = montage(&[a, b], 2, 2, 2);
        assert_eq!((rows, cols), (2, 5));
        assert_eq!(out[0], 1.0);
        assert_eq!(out[2], 0.0); // separator column
        assert_eq!(out[3], 0.0);
    }
}
