//! Role/filler tensor binding and iconic what/where scene composition.
//!
//! An object is split into a where-component (its occupancy mask on the
//! scene grid) and a what-component (a localist attribute vector). Binding
//! is the outer product of the two; a whole scene is the component-wise sum
//! of its objects' bindings, reshaped to a width x height x channels tensor.
//! As long as no two objects overlap, their where-components are orthogonal
//! and each what-vector can be read back exactly from the object's cells.

use crate::error::Error;
use crate::grid::Grid;

/// A rank-2 tensor, row-major: `data[i * cols + j] = role[i] * filler[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank2 {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Rank2 {
    pub fn zeros(rows: usize, cols: usize) -> Rank2 {
        Rank2 {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }
}

/// Binds a role to its filler by outer product.
pub fn bind(role: &[f64], filler: &[f64]) -> Result<Rank2, Error> {
    if role.is_empty() || filler.is_empty() {
        return Err(Error::Contract("bind requires non-empty vectors".into()));
    }
    let mut t = Rank2::zeros(role.len(), filler.len());
    for (i, r) in role.iter().enumerate() {
        for (j, f) in filler.iter().enumerate() {
            t.data[i * filler.len() + j] = r * f;
        }
    }
    Ok(t)
}

/// Component-wise sum of same-shape bindings. An empty list gives the zero
/// tensor of the requested shape.
pub fn compose(rows: usize, cols: usize, bindings: &[Rank2]) -> Result<Rank2, Error> {
    let mut out = Rank2::zeros(rows, cols);
    for b in bindings {
        if b.rows != rows || b.cols != cols {
            return Err(Error::Contract(format!(
                "compose shape mismatch: {}x{} vs {}x{}",
                b.rows, b.cols, rows, cols
            )));
        }
        for (o, v) in out.data.iter_mut().zip(&b.data) {
            *o += v;
        }
    }
    Ok(out)
}

/// Attribute alphabet for what-vectors: colors first, then shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    pub colors: Vec<&'static str>,
    pub shapes: Vec<&'static str>,
}

impl Alphabet {
    /// The 6-channel alphabet used by the geometric experiments.
    pub fn rgb() -> Alphabet {
        Alphabet {
            colors: vec!["red", "green", "blue"],
            shapes: vec!["square", "circle", "triangle"],
        }
    }

    /// The 5-channel black/white variant.
    pub fn bw() -> Alphabet {
        Alphabet {
            colors: vec!["black", "white"],
            shapes: vec!["square", "circle", "triangle"],
        }
    }

    pub fn channels(&self) -> usize {
        self.colors.len() + self.shapes.len()
    }

    /// One color bit plus one shape bit.
    pub fn what(&self, color: usize, shape: usize) -> Vec<u8> {
        let mut v = vec![0; self.channels()];
        v[color] = 1;
        v[self.colors.len() + shape] = 1;
        v
    }
}

/// An object in a scene: a 2x2 block anchored at (row, col) and a localist
/// what-vector with exactly one color bit and one shape bit set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SceneObject {
    pub row: usize,
    pub col: usize,
    pub what: Vec<u8>,
}

pub const OBJECT_SIDE: usize = 2;

impl SceneObject {
    pub fn new(row: usize, col: usize, what: Vec<u8>) -> SceneObject {
        SceneObject { row, col, what }
    }

    pub fn where_mask(&self, width: usize, height: usize) -> Grid {
        let mut g = Grid::new(height, width);
        for dr in 0..OBJECT_SIDE {
            for dc in 0..OBJECT_SIDE {
                g.set(self.row + dr, self.col + dc, true);
            }
        }
        g
    }

    fn validate(&self, width: usize, height: usize, alphabet: &Alphabet) -> Result<(), Error> {
        if self.row + OBJECT_SIDE > height || self.col + OBJECT_SIDE > width {
            return Err(Error::Contract(format!(
                "object anchor ({}, {}) leaves the {width}x{height} grid",
                self.row, self.col
            )));
        }
        if self.what.len() != alphabet.channels() {
            return Err(Error::Contract("what-vector length mismatch".into()));
        }
        let ncolor: u8 = self.what[..alphabet.colors.len()].iter().sum();
        let nshape: u8 = self.what[alphabet.colors.len()..].iter().sum();
        if ncolor != 1 || nshape != 1 {
            return Err(Error::Contract(
                "what-vector needs exactly one color bit and one shape bit".into(),
            ));
        }
        Ok(())
    }
}

/// A W x H x K activation tensor plus the objects it was built from.
/// Channel planes are stored channel-major: `values[k][r][c]` flattens to
/// `k * (W * H) + r * W + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct IconicScene {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub values: Vec<f64>,
    pub objects: Vec<SceneObject>,
}

impl IconicScene {
    pub fn value(&self, k: usize, r: usize, c: usize) -> f64 {
        self.values[k * self.width * self.height + r * self.width + c]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Max over channels per cell; a [0,1] occupancy view for rendering.
    pub fn occupancy(&self) -> Vec<f64> {
        let plane = self.width * self.height;
        let mut out = vec![0.0; plane];
        for k in 0..self.channels {
            for (o, v) in out.iter_mut().zip(&self.values[k * plane..(k + 1) * plane]) {
                if *v > *o {
                    *o = *v;
                }
            }
        }
        out
    }
}

/// Encodes non-overlapping objects into one scene tensor by binding each
/// what-vector to its flattened where-mask and composing the results.
pub fn encode_scene(
    objects: &[SceneObject],
    width: usize,
    height: usize,
    alphabet: &Alphabet,
) -> Result<IconicScene, Error> {
    let channels = alphabet.channels();
    for obj in objects {
        obj.validate(width, height, alphabet)?;
    }
    for (i, a) in objects.iter().enumerate() {
        for b in &objects[i + 1..] {
            if a.where_mask(width, height).intersects(&b.where_mask(width, height)) {
                return Err(Error::Contract(
                    "overlapping objects break where-component orthogonality".into(),
                ));
            }
        }
    }
    let cells = width * height;
    let bindings: Vec<Rank2> = objects
        .iter()
        .map(|obj| {
            let whats: Vec<f64> = obj.what.iter().map(|&b| f64::from(b)).collect();
            bind(&obj.where_mask(width, height).to_f64(), &whats)
        })
        .collect::<Result<_, _>>()?;
    let summed = compose(cells, channels, &bindings)?;
    // Reshape cell-major (cell, channel) into channel planes.
    let mut values = vec![0.0; cells * channels];
    for cell in 0..cells {
        for k in 0..channels {
            values[k * cells + cell] = summed.get(cell, k);
        }
    }
    Ok(IconicScene {
        width,
        height,
        channels,
        values,
        objects: objects.to_vec(),
    })
}

/// Mean channel vector over the selected cells: the unbinding read-out.
pub fn decode_at(scene: &IconicScene, cells: &Grid) -> Result<Vec<f64>, Error> {
    if cells.rows != scene.height || cells.cols != scene.width {
        return Err(Error::Contract("decode_at mask shape mismatch".into()));
    }
    let selected = cells.cells();
    if selected.is_empty() {
        return Err(Error::Contract("decode_at requires a non-empty mask".into()));
    }
    let mut out = vec![0.0; scene.channels];
    for &(r, c) in &selected {
        for (k, o) in out.iter_mut().enumerate() {
            *o += scene.value(k, r, c);
        }
    }
    for o in &mut out {
        *o /= selected.len() as f64;
    }
    Ok(out)
}

/// Clockwise quarter turns of an object's 2x2 block on a square grid.
pub fn rotate_object(obj: &SceneObject, side: usize, turns: usize) -> SceneObject {
    let mut row = obj.row;
    let mut col = obj.col;
    for _ in 0..(turns % 4) {
        let (r, c) = (row, col);
        row = c;
        col = side - OBJECT_SIDE - r;
    }
    SceneObject::new(row, col, obj.what.clone())
}

/// Mirror across the vertical axis (left-right).
pub fn flip_object_h(obj: &SceneObject, side: usize) -> SceneObject {
    SceneObject::new(obj.row, side - OBJECT_SIDE - obj.col, obj.what.clone())
}

/// Mirror across the horizontal axis (top-bottom).
pub fn flip_object_v(obj: &SceneObject, side: usize) -> SceneObject {
    SceneObject::new(side - OBJECT_SIDE - obj.row, obj.col, obj.what.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bind_outer_product_rows() {
        let role = [0.9, 0.1, 0.5, 0.1];
        let filler = [0.1, 0.5, 0.9, 0.1];
        let t = bind(&role, &filler).unwrap();
        let row1: Vec<f64> = (0..4).map(|j| t.get(0, j)).collect();
        for (got, want) in row1.iter().zip([0.09, 0.45, 0.81, 0.09]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn bind_zero_filler_gives_zero_matrix() {
        let t = bind(&[0.3, 0.7], &[0.0, 0.0, 0.0]).unwrap();
        assert!(t.data.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn orthonormal_role_unbinds_exactly() {
        // With a one-hot role, the filler is recovered by the inner product
        // of the tensor with the role.
        let role = [0.0, 1.0, 0.0];
        let filler = [0.2, 0.8, 0.4, 0.6];
        let t = bind(&role, &filler).unwrap();
        for j in 0..filler.len() {
            let recovered: f64 = (0..role.len()).map(|i| role[i] * t.get(i, j)).sum();
            assert!((recovered - filler[j]).abs() < 1e-15);
        }
    }

    #[test]
    fn compose_empty_is_zero_and_order_invariant() {
        let z = compose(2, 2, &[]).unwrap();
        assert!(z.data.iter().all(|&x| x == 0.0));
        let a = bind(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        let b = bind(&[0.0, 1.0], &[0.25, 0.75]).unwrap();
        let ab = compose(2, 2, &[a.clone(), b.clone()]).unwrap();
        let ba = compose(2, 2, &[b, a]).unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn compose_three_bindings_matches_per_element_oracle() {
        // Sentence-style structure: three role/filler bindings summed,
        // checked against direct per-element addition.
        let giver = bind(&[1.0, 0.0, 0.0], &[0.2, 0.4, 0.6]).unwrap();
        let receiver = bind(&[0.0, 1.0, 0.0], &[0.9, 0.1, 0.3]).unwrap();
        let object = bind(&[0.0, 0.0, 1.0], &[0.5, 0.5, 0.5]).unwrap();
        let sum = compose(3, 3, &[giver.clone(), receiver.clone(), object.clone()]).unwrap();
        for i in 0..9 {
            let oracle = giver.data[i] + receiver.data[i] + object.data[i];
            assert!((sum.data[i] - oracle).abs() < 1e-15);
        }
    }

    #[test]
    fn white_square_planes_match_construction() {
        // One white square at the top-left of a 7x7, 5-channel scene:
        // the white and square planes carry its 2x2 cells, others are zero.
        let ab = Alphabet::bw();
        let obj = SceneObject::new(0, 0, ab.what(1, 0)); // white square: {0 1 1 0 0}
        assert_eq!(obj.what, vec![0, 1, 1, 0, 0]);
        let scene = encode_scene(&[obj], 7, 7, &ab).unwrap();
        for k in 0..5 {
            for r in 0..7 {
                for c in 0..7 {
                    let inside = r < 2 && c < 2;
                    let expect = if inside && (k == 1 || k == 2) { 1.0 } else { 0.0 };
                    assert_eq!(scene.value(k, r, c), expect);
                }
            }
        }
    }

    #[test]
    fn empty_scene_is_zero_tensor() {
        let scene = encode_scene(&[], 7, 7, &Alphabet::rgb()).unwrap();
        assert!(scene.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn decode_round_trips_each_object() {
        let ab = Alphabet::rgb();
        let objs = vec![
            SceneObject::new(0, 0, ab.what(0, 1)),
            SceneObject::new(5, 5, ab.what(2, 2)),
            SceneObject::new(0, 5, ab.what(1, 0)),
        ];
        let scene = encode_scene(&objs, 7, 7, &ab).unwrap();
        for obj in &objs {
            let got = decode_at(&scene, &obj.where_mask(7, 7)).unwrap();
            let want: Vec<f64> = obj.what.iter().map(|&b| f64::from(b)).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn decode_union_averages_what_vectors() {
        let ab = Alphabet::rgb();
        let a = SceneObject::new(0, 0, ab.what(0, 0));
        let b = SceneObject::new(5, 5, ab.what(1, 1));
        let scene = encode_scene(&[a.clone(), b.clone()], 7, 7, &ab).unwrap();
        let union = a.where_mask(7, 7).union(&b.where_mask(7, 7));
        let got = decode_at(&scene, &union).unwrap();
        for k in 0..6 {
            let avg = (f64::from(a.what[k]) + f64::from(b.what[k])) / 2.0;
            assert!((got[k] - avg).abs() < 1e-15);
        }
    }

    #[test]
    fn decode_empty_scene_gives_zero_vector() {
        let scene = encode_scene(&[], 7, 7, &Alphabet::rgb()).unwrap();
        let mut mask = Grid::new(7, 7);
        mask.set(3, 3, true);
        assert_eq!(decode_at(&scene, &mask).unwrap(), vec![0.0; 6]);
    }

    #[test]
    fn overlap_is_rejected() {
        let ab = Alphabet::rgb();
        let objs = vec![
            SceneObject::new(0, 0, ab.what(0, 0)),
            SceneObject::new(1, 1, ab.what(1, 1)),
        ];
        assert!(encode_scene(&objs, 7, 7, &ab).is_err());
    }

    #[test]
    fn encode_is_permutation_invariant() {
        let ab = Alphabet::rgb();
        let a = SceneObject::new(0, 0, ab.what(0, 1));
        let b = SceneObject::new(5, 0, ab.what(2, 0));
        let s1 = encode_scene(&[a.clone(), b.clone()], 7, 7, &ab).unwrap();
        let s2 = encode_scene(&[b, a], 7, 7, &ab).unwrap();
        assert_eq!(s1.values, s2.values);
    }

    #[test]
    fn rotation_walks_corners_clockwise() {
        let ab = Alphabet::rgb();
        let tl = SceneObject::new(0, 0, ab.what(0, 0));
        let tr = rotate_object(&tl, 7, 1);
        assert_eq!((tr.row, tr.col), (0, 5));
        let br = rotate_object(&tl, 7, 2);
        assert_eq!((br.row, br.col), (5, 5));
        let bl = rotate_object(&tl, 7, 3);
        assert_eq!((bl.row, bl.col), (5, 0));
        let back = rotate_object(&tl, 7, 4);
        assert_eq!((back.row, back.col), (0, 0));
    }

    #[test]
    fn rotation_commutes_with_encoding() {
        let ab = Alphabet::rgb();
        let objs = vec![
            SceneObject::new(0, 0, ab.what(0, 1)),
            SceneObject::new(0, 5, ab.what(1, 2)),
            SceneObject::new(5, 5, ab.what(2, 0)),
        ];
        let rotated: Vec<SceneObject> = objs.iter().map(|o| rotate_object(o, 7, 1)).collect();
        let enc_rot = encode_scene(&rotated, 7, 7, &ab).unwrap();
        let enc = encode_scene(&objs, 7, 7, &ab).unwrap();
        // Rotating the scene tensor cell-wise must equal encoding the
        // rotated objects.
        for k in 0..6 {
            for r in 0..7 {
                for c in 0..7 {
                    // Clockwise: (r, c) -> (c, 6 - r)
                    assert_eq!(enc.value(k, r, c), enc_rot.value(k, c, 6 - r));
                }
            }
        }
    }
}
