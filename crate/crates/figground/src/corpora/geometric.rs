//! Geometric-spatial corpora: rotation analogies over corner-anchored
//! scenes, oddity analogies (same/different on shape or color), and
//! transformed-scene analogies with hint units.
//!
//! Scenes are 7 x 7 with three 2 x 2 objects. Corner anchors sit at the
//! four blocks nearest the corners, listed clockwise from the top left:
//! (0,0), (0,5), (5,5), (5,0).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Domain, PairRecord, HINT_UNITS, SCENE_SIDE};
use crate::error::Error;
use crate::scene::{flip_object_h, flip_object_v, rotate_object, Alphabet, SceneObject};

pub const CORNERS: [(usize, usize); 4] = [(0, 0), (0, 5), (5, 5), (5, 0)];

/// (color, shape) pairs indexing the rgb alphabet; 9 object types.
fn object_type(idx: usize) -> (usize, usize) {
    (idx / 3, idx % 3)
}

fn make_object(corner: usize, type_idx: usize, ab: &Alphabet) -> SceneObject {
    let (color, shape) = object_type(type_idx);
    let (r, c) = CORNERS[corner];
    SceneObject::new(r, c, ab.what(color, shape))
}

/// Canonical object order within a record: ascending (row, col).
fn sort_scene(objects: &mut [SceneObject]) {
    objects.sort_by_key(|o| (o.row, o.col));
}

fn position_of(objects: &[SceneObject], row: usize, col: usize) -> usize {
    objects
        .iter()
        .position(|o| o.row == row && o.col == col)
        .expect("object present at transformed position")
}

/// Relative-position analogies. Sources are three identical objects on
/// three of the four corners; the target is the source pattern rotated
/// 0..=3 quarter turns with a freely chosen object type. The answer is the
/// object whose clockwise offset from the empty corner matches the source
/// figure's offset. Enumerates all 108 x 36 = 3,888 problems; `test_count`
/// of them (seed-chosen) are held out.
pub fn gen_rotation(seed: u64, test_count: usize) -> Result<Corpus, Error> {
    let ab = Alphabet::rgb();
    let mut records = Vec::with_capacity(3_888);
    for empty in 0..4 {
        let occupied: Vec<usize> = (0..4).filter(|&c| c != empty).collect();
        for src_type in 0..9 {
            for &figure_corner in &occupied {
                for rot in 0..4 {
                    for tgt_type in 0..9 {
                        let mut source: Vec<SceneObject> = occupied
                            .iter()
                            .map(|&c| make_object(c, src_type, &ab))
                            .collect();
                        sort_scene(&mut source);
                        let fig_pos = CORNERS[figure_corner];
                        let figure = position_of(&source, fig_pos.0, fig_pos.1);
                        let mut target: Vec<SceneObject> = occupied
                            .iter()
                            .map(|&c| make_object((c + rot) % 4, tgt_type, &ab))
                            .collect();
                        sort_scene(&mut target);
                        let ans_pos = CORNERS[(figure_corner + rot) % 4];
                        let answer = position_of(&target, ans_pos.0, ans_pos.1);
                        records.push(PairRecord::Geometric {
                            source,
                            figure,
                            target,
                            answer,
                            hints: None,
                        });
                    }
                }
            }
        }
    }
    let n = records.len();
    let provenance = format!(
        "rotation corpus: 108 sources x 36 targets = {n} problems enumerated; \
         reference total 46,656 is not derivable from the stated construction \
         and is recorded here for comparison"
    );
    let mut corpus = Corpus::new(
        Domain::Geometric,
        seed,
        0,
        records,
        (0..n).collect(),
        vec![],
        provenance,
    )?;
    corpus.split(test_count.min(n), seed)?;
    Ok(corpus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OddityPositions {
    /// Objects on three of the four corner anchors.
    Corners,
    /// Objects anywhere on the grid, non-overlapping.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OddDim {
    Shape,
    Color,
}

/// Changes one attribute of a type index along the odd dimension;
/// `alt` in 0..2 picks which of the two different values.
fn change_type(type_idx: usize, dim: OddDim, alt: usize) -> usize {
    let (color, shape) = object_type(type_idx);
    match dim {
        OddDim::Shape => {
            let new_shape = (shape + 1 + alt) % 3;
            color * 3 + new_shape
        }
        OddDim::Color => {
            let new_color = (color + 1 + alt) % 3;
            new_color * 3 + shape
        }
    }
}

fn random_positions(rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    // Bounded retries for a non-overlapping triple; the grid is loose
    // enough that this practically always succeeds quickly.
    'outer: for _ in 0..1000 {
        let mut anchors: Vec<(usize, usize)> = Vec::with_capacity(3);
        for _ in 0..3 {
            let mut placed = false;
            for _ in 0..100 {
                let r = rng.gen_range(0..SCENE_SIDE - 1);
                let c = rng.gen_range(0..SCENE_SIDE - 1);
                let overlaps = anchors
                    .iter()
                    .any(|&(ar, ac)| ar.abs_diff(r) < 2 && ac.abs_diff(c) < 2);
                if !overlaps {
                    anchors.push((r, c));
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'outer;
            }
        }
        return anchors;
    }
    unreachable!("placement of three 2x2 blocks on a 7x7 grid cannot starve")
}

fn corner_positions(rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let empty = rng.gen_range(0..4);
    (0..4).filter(|&c| c != empty).map(|c| CORNERS[c]).collect()
}

/// One oddity scene: three objects of a base type with `odd` changed along
/// `dim`. Returns (objects sorted, index of the odd object).
fn oddity_scene(
    rng: &mut ChaCha8Rng,
    positions: OddityPositions,
    ab: &Alphabet,
) -> (Vec<SceneObject>, usize, OddDim) {
    let anchors = match positions {
        OddityPositions::Corners => corner_positions(rng),
        OddityPositions::Random => random_positions(rng),
    };
    let base = rng.gen_range(0..9);
    let odd_slot = rng.gen_range(0..3);
    let dim = if rng.gen_range(0..2) == 0 { OddDim::Shape } else { OddDim::Color };
    let alt = rng.gen_range(0..2);
    let odd_type = change_type(base, dim, alt);
    let mut objects: Vec<SceneObject> = anchors
        .iter()
        .enumerate()
        .map(|(i, &(r, c))| {
            let t = if i == odd_slot { odd_type } else { base };
            let (color, shape) = object_type(t);
            SceneObject::new(r, c, ab.what(color, shape))
        })
        .collect();
    let odd_anchor = anchors[odd_slot];
    sort_scene(&mut objects);
    let odd_idx = position_of(&objects, odd_anchor.0, odd_anchor.1);
    (objects, odd_idx, dim)
}

/// A target scene for the oddity task: three identical objects, then one
/// made shape-odd and another color-odd. Returns (objects, shape-odd index,
/// color-odd index).
fn oddity_target(
    rng: &mut ChaCha8Rng,
    positions: OddityPositions,
    ab: &Alphabet,
) -> (Vec<SceneObject>, usize, usize) {
    let anchors = match positions {
        OddityPositions::Corners => corner_positions(rng),
        OddityPositions::Random => random_positions(rng),
    };
    let base = rng.gen_range(0..9);
    let shape_slot = rng.gen_range(0..3);
    let color_slot = (shape_slot + 1 + rng.gen_range(0..2)) % 3;
    let shape_odd = change_type(base, OddDim::Shape, rng.gen_range(0..2));
    let color_odd = change_type(base, OddDim::Color, rng.gen_range(0..2));
    let mut objects: Vec<SceneObject> = anchors
        .iter()
        .enumerate()
        .map(|(i, &(r, c))| {
            let t = if i == shape_slot {
                shape_odd
            } else if i == color_slot {
                color_odd
            } else {
                base
            };
            let (color, shape) = object_type(t);
            SceneObject::new(r, c, ab.what(color, shape))
        })
        .collect();
    let shape_anchor = anchors[shape_slot];
    let color_anchor = anchors[color_slot];
    sort_scene(&mut objects);
    (
        objects.clone(),
        position_of(&objects, shape_anchor.0, shape_anchor.1),
        position_of(&objects, color_anchor.0, color_anchor.1),
    )
}

fn record_key(rec: &PairRecord) -> String {
    match rec {
        PairRecord::Geometric { source, figure, target, answer, hints } => {
            let mut s = String::new();
            for o in source.iter().chain(target.iter()) {
                s.push_str(&format!("{},{},{:?};", o.row, o.col, o.what));
            }
            s.push_str(&format!("f{figure}a{answer}h{hints:?}"));
            s
        }
        _ => unreachable!("geometric keys only"),
    }
}

/// Abstracted-category analogies: the source's odd object is the figure;
/// the answer is the target object odd on the same dimension. `samples`
/// unique pairs are drawn; `test_count` are held out.
pub fn gen_oddity(
    samples: usize,
    test_count: usize,
    positions: OddityPositions,
    seed: u64,
) -> Result<Corpus, Error> {
    let ab = Alphabet::rgb();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(samples);
    let mut seen = std::collections::HashSet::new();
    let mut attempts = 0usize;
    while records.len() < samples {
        attempts += 1;
        if attempts > samples * 200 {
            return Err(Error::Data(format!(
                "could not draw {samples} unique oddity pairs"
            )));
        }
        let (source, figure, dim) = oddity_scene(&mut rng, positions, &ab);
        let (target, shape_odd, color_odd) = oddity_target(&mut rng, positions, &ab);
        let answer = match dim {
            OddDim::Shape => shape_odd,
            OddDim::Color => color_odd,
        };
        let rec = PairRecord::Geometric { source, figure, target, answer, hints: None };
        if seen.insert(record_key(&rec)) {
            records.push(rec);
        }
    }
    let n = records.len();
    let mode = match positions {
        OddityPositions::Corners => "corner anchors",
        OddityPositions::Random => "random non-overlapping positions",
    };
    let provenance = format!(
        "oddity corpus ({mode}): {n} unique sampled pairs; source variations \
         per odd dimension = 216; reference pool figures 1,080 targets and \
         466,560 pairs are not derivable from the stated construction"
    );
    let mut corpus = Corpus::new(
        Domain::Geometric,
        seed,
        0,
        records,
        (0..n).collect(),
        vec![],
        provenance,
    )?;
    corpus.split(test_count.min(n), seed)?;
    Ok(corpus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flip {
    Horizontal,
    Vertical,
    Both,
    None,
}

pub const FLIPS: [Flip; 4] = [Flip::Horizontal, Flip::Vertical, Flip::Both, Flip::None];

/// Applies flip then clockwise rotation to an object on the square grid.
pub fn transform_object(obj: &SceneObject, flip: Flip, rot: usize) -> SceneObject {
    let flipped = match flip {
        Flip::Horizontal => flip_object_h(obj, SCENE_SIDE),
        Flip::Vertical => flip_object_v(obj, SCENE_SIDE),
        Flip::Both => flip_object_v(&flip_object_h(obj, SCENE_SIDE), SCENE_SIDE),
        Flip::None => obj.clone(),
    };
    rotate_object(&flipped, SCENE_SIDE, rot)
}

/// Hint unit layout: rotation one-hot (0..=3 turns) then flip one-hot
/// (horizontal, vertical, both, none).
pub fn hint_bits(rot: usize, flip: Flip) -> [u8; HINT_UNITS] {
    let mut h = [0u8; HINT_UNITS];
    h[rot] = 1;
    let f = match flip {
        Flip::Horizontal => 0,
        Flip::Vertical => 1,
        Flip::Both => 2,
        Flip::None => 3,
    };
    h[4 + f] = 1;
    h
}

/// Abstract category + position analogies: the target is the source scene
/// flipped and/or rotated, the figure is any source object, and the answer
/// is its image under the transform. With `hints` the 8 concept units
/// encode the transform.
pub fn gen_twist(samples: usize, test_count: usize, hints: bool, seed: u64) -> Result<Corpus, Error> {
    let ab = Alphabet::rgb();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(samples);
    let mut seen = std::collections::HashSet::new();
    let mut attempts = 0usize;
    while records.len() < samples {
        attempts += 1;
        if attempts > samples * 200 {
            return Err(Error::Data(format!("could not draw {samples} unique twist pairs")));
        }
        let (source, _odd_idx, _dim) = oddity_scene(&mut rng, OddityPositions::Corners, &ab);
        // Any object may be pointed to; when it is one of the identical
        // pair, only the transform disambiguates the answer.
        let figure = rng.gen_range(0..3);
        let rot = rng.gen_range(0..4);
        let flip = FLIPS[rng.gen_range(0..4)];
        let mut target: Vec<SceneObject> =
            source.iter().map(|o| transform_object(o, flip, rot)).collect();
        let moved = transform_object(&source[figure], flip, rot);
        sort_scene(&mut target);
        let answer = position_of(&target, moved.row, moved.col);
        // Uniqueness is judged with the transform label even when the
        // emitted records drop the hint units, so the hints and no-hints
        // corpora draw from the same problem pool.
        let labeled = PairRecord::Geometric {
            source,
            figure,
            target,
            answer,
            hints: Some(hint_bits(rot, flip)),
        };
        if seen.insert(record_key(&labeled)) {
            let PairRecord::Geometric { source, figure, target, answer, hints: labels } = labeled
            else {
                unreachable!()
            };
            records.push(PairRecord::Geometric {
                source,
                figure,
                target,
                answer,
                hints: if hints { labels } else { None },
            });
        }
    }
    let n = records.len();
    let provenance = format!(
        "twist corpus: {n} unique sampled pairs, hints={}; transform = flip \
         (horizontal|vertical|both|none) then 0..3 clockwise turns",
        u8::from(hints)
    );
    let mut corpus = Corpus::new(
        Domain::Geometric,
        seed,
        0,
        records,
        (0..n).collect(),
        vec![],
        provenance,
    )?;
    corpus.split(test_count.min(n), seed)?;
    Ok(corpus)
}
