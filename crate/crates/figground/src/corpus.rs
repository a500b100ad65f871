//! Corpus types: analogy pairs, train/test splits and the plain-text
//! serialization shared by the generator, trainer and evaluator.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::grid::Grid;
use crate::letters::{GridLetter, LETTER_COLS, LETTER_ROWS};
use crate::scene::{encode_scene, Alphabet, SceneObject};

pub const SCENE_SIDE: usize = 7;
pub const HINT_UNITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Letter,
    Geometric,
    Family,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Letter => "letter",
            Domain::Geometric => "geometric",
            Domain::Family => "family",
        }
    }

    pub fn parse(s: &str) -> Option<Domain> {
        match s {
            "letter" => Some(Domain::Letter),
            "geometric" => Some(Domain::Geometric),
            "family" => Some(Domain::Family),
            _ => None,
        }
    }
}

/// Which annotated part of a letter plays the figure role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetterRole {
    Brim,
    Body,
}

impl LetterRole {
    pub fn as_str(self) -> &'static str {
        match self {
            LetterRole::Brim => "brim",
            LetterRole::Body => "body",
        }
    }
}

/// Domain-level description of one source-target problem; the network
/// patterns are compiled from this.
#[derive(Debug, Clone, PartialEq)]
pub enum PairRecord {
    Letter {
        role: LetterRole,
        shift: i32,
        source: GridLetter,
        target: GridLetter,
    },
    Geometric {
        source: Vec<SceneObject>,
        /// Index of the pointed-to object in `source`.
        figure: usize,
        target: Vec<SceneObject>,
        /// Index of the correct object in `target`.
        answer: usize,
        /// Rotation one-hot (4) then flip one-hot (4: horizontal, vertical,
        /// both, none); present only for the transform experiments.
        hints: Option<[u8; HINT_UNITS]>,
    },
    Family {
        src_figure: usize,
        src_ground: usize,
        tgt_figure: usize,
        tgt_ground: usize,
    },
}

/// Compiled input/desired patterns for the two training steps.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalogyPair {
    pub source: Vec<f64>,
    pub source_figure_mask: Vec<f64>,
    pub source_figure: Vec<f64>,
    pub source_ground: Vec<f64>,
    pub target: Vec<f64>,
    pub target_figure: Vec<f64>,
    pub target_ground: Vec<f64>,
    pub hints: Option<Vec<f64>>,
}

/// Layer sizing implied by a corpus: input is scene + hints + context,
/// hidden equals the context bank, output is figure + ground.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetShape {
    pub scene: usize,
    pub hints: usize,
    pub context: usize,
    pub out_bank: usize,
}

impl NetShape {
    pub fn input_size(&self) -> usize {
        self.scene + self.hints + self.context
    }

    pub fn output_size(&self) -> usize {
        2 * self.out_bank
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub domain: Domain,
    pub seed: u64,
    /// Bank width for family corpora (24 or 36); unused otherwise.
    pub family_bank: usize,
    pub records: Vec<PairRecord>,
    pub pairs: Vec<AnalogyPair>,
    pub train_idx: Vec<usize>,
    pub test_idx: Vec<usize>,
    /// Generation notes: counts, rules, and any divergence from the
    /// reference figures.
    pub provenance: String,
}

fn one_hot(size: usize, idx: usize) -> Vec<f64> {
    let mut v = vec![0.0; size];
    v[idx] = 1.0;
    v
}

pub fn compile_record(record: &PairRecord, family_bank: usize) -> Result<AnalogyPair, Error> {
    match record {
        PairRecord::Letter { role, source, target, .. } => {
            let (sf, sg) = match role {
                LetterRole::Brim => (&source.brim, &source.body),
                LetterRole::Body => (&source.body, &source.brim),
            };
            let (tf, tg) = match role {
                LetterRole::Brim => (&target.brim, &target.body),
                LetterRole::Body => (&target.body, &target.brim),
            };
            Ok(AnalogyPair {
                source: source.pixels.to_f64(),
                source_figure_mask: sf.to_f64(),
                source_figure: sf.to_f64(),
                source_ground: sg.to_f64(),
                target: target.pixels.to_f64(),
                target_figure: tf.to_f64(),
                target_ground: tg.to_f64(),
                hints: None,
            })
        }
        PairRecord::Geometric { source, figure, target, answer, hints } => {
            let ab = Alphabet::rgb();
            let src_scene = encode_scene(source, SCENE_SIDE, SCENE_SIDE, &ab)?;
            let tgt_scene = encode_scene(target, SCENE_SIDE, SCENE_SIDE, &ab)?;
            let mask_of = |objs: &[SceneObject], pick: &dyn Fn(usize) -> bool| {
                let mut g = Grid::new(SCENE_SIDE, SCENE_SIDE);
                for (i, o) in objs.iter().enumerate() {
                    if pick(i) {
                        g = g.union(&o.where_mask(SCENE_SIDE, SCENE_SIDE));
                    }
                }
                g
            };
            let sf = mask_of(source, &|i| i == *figure);
            let sg = mask_of(source, &|i| i != *figure);
            let tf = mask_of(target, &|i| i == *answer);
            let tg = mask_of(target, &|i| i != *answer);
            Ok(AnalogyPair {
                source: src_scene.values,
                source_figure_mask: sf.to_f64(),
                source_figure: sf.to_f64(),
                source_ground: sg.to_f64(),
                target: tgt_scene.values,
                target_figure: tf.to_f64(),
                target_ground: tg.to_f64(),
                hints: hints.map(|h| h.iter().map(|&b| f64::from(b)).collect()),
            })
        }
        PairRecord::Family { src_figure, src_ground, tgt_figure, tgt_ground } => {
            let two_hot = |a: usize, b: usize| {
                let mut v = vec![0.0; family_bank];
                v[a] = 1.0;
                v[b] = 1.0;
                v
            };
            Ok(AnalogyPair {
                source: two_hot(*src_figure, *src_ground),
                source_figure_mask: one_hot(family_bank, *src_figure),
                source_figure: one_hot(family_bank, *src_figure),
                source_ground: one_hot(family_bank, *src_ground),
                target: two_hot(*tgt_figure, *tgt_ground),
                target_figure: one_hot(family_bank, *tgt_figure),
                target_ground: one_hot(family_bank, *tgt_ground),
                hints: None,
            })
        }
    }
}

impl Corpus {
    /// Builds a corpus from records, compiling every pattern. `train_idx`
    /// and `test_idx` must be disjoint and exhaustive.
    pub fn new(
        domain: Domain,
        seed: u64,
        family_bank: usize,
        records: Vec<PairRecord>,
        train_idx: Vec<usize>,
        test_idx: Vec<usize>,
        provenance: String,
    ) -> Result<Corpus, Error> {
        let n = records.len();
        let mut seen = vec![false; n];
        for &i in train_idx.iter().chain(&test_idx) {
            if i >= n || seen[i] {
                return Err(Error::Contract(
                    "train/test indices must be disjoint and in range".into(),
                ));
            }
            seen[i] = true;
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Contract("train/test indices must cover the corpus".into()));
        }
        let pairs = records
            .iter()
            .map(|r| compile_record(r, family_bank))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Corpus {
            domain,
            seed,
            family_bank,
            records,
            pairs,
            train_idx,
            test_idx,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn has_hints(&self) -> bool {
        self.records
            .iter()
            .any(|r| matches!(r, PairRecord::Geometric { hints: Some(_), .. }))
    }

    pub fn shape(&self) -> NetShape {
        match self.domain {
            Domain::Letter => NetShape {
                scene: LETTER_ROWS * LETTER_COLS,
                hints: 0,
                context: LETTER_ROWS * LETTER_COLS,
                out_bank: LETTER_ROWS * LETTER_COLS,
            },
            Domain::Geometric => NetShape {
                scene: SCENE_SIDE * SCENE_SIDE * Alphabet::rgb().channels(),
                hints: if self.has_hints() { HINT_UNITS } else { 0 },
                context: SCENE_SIDE * SCENE_SIDE,
                out_bank: SCENE_SIDE * SCENE_SIDE,
            },
            Domain::Family => NetShape {
                scene: self.family_bank,
                hints: 0,
                context: self.family_bank,
                out_bank: self.family_bank,
            },
        }
    }

    /// Deterministic, seed-reproducible re-split into disjoint train/test
    /// index sets. `test_count` pairs go to the test side.
    pub fn split(&mut self, test_count: usize, seed: u64) -> Result<(), Error> {
        if test_count > self.len() {
            return Err(Error::Contract("test_count exceeds corpus size".into()));
        }
        let mut idx: Vec<usize> = (0..self.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        idx.shuffle(&mut rng);
        let mut test: Vec<usize> = idx[..test_count].to_vec();
        let mut train: Vec<usize> = idx[test_count..].to_vec();
        test.sort_unstable();
        train.sort_unstable();
        self.test_idx = test;
        self.train_idx = train;
        Ok(())
    }

    pub fn split_fraction(&mut self, test_fraction: f64, seed: u64) -> Result<(), Error> {
        if !(0.0..=1.0).contains(&test_fraction) {
            return Err(Error::Contract("test fraction must be in [0, 1]".into()));
        }
        let count = (self.len() as f64 * test_fraction).round() as usize;
        self.split(count, seed)
    }

    /// FNV-1a over the serialized text; embedded in experiment reports so a
    /// report pins the exact corpus it was produced from.
    pub fn content_hash(&self) -> u64 {
        let text = self.to_text();
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "CORPUS {} {} {} {} {}",
            self.domain.as_str(),
            self.seed,
            self.len(),
            self.train_idx.len(),
            self.test_idx.len()
        );
        for line in self.provenance.lines() {
            let _ = writeln!(s, "# {line}");
        }
        if self.domain == Domain::Family {
            let _ = writeln!(s, "BANK {}", self.family_bank);
        }
        let is_test: Vec<bool> = {
            let mut v = vec![false; self.len()];
            for &i in &self.test_idx {
                v[i] = true;
            }
            v
        };
        for (i, rec) in self.records.iter().enumerate() {
            let _ = writeln!(s, "PAIR {} {}", i, if is_test[i] { "test" } else { "train" });
            match rec {
                PairRecord::Letter { role, shift, source, target } => {
                    let _ = writeln!(s, "ROLE {}", role.as_str());
                    let _ = writeln!(s, "SHIFT {shift}");
                    write_letter(&mut s, source);
                    write_letter(&mut s, target);
                }
                PairRecord::Geometric { source, figure, target, answer, hints } => {
                    write_scene(&mut s, source);
                    let _ = writeln!(s, "FIGURE {figure}");
                    if let Some(h) = hints {
                        let bits: String = h.iter().map(|&b| char::from(b'0' + b)).collect();
                        let _ = writeln!(s, "HINTS {bits}");
                    }
                    write_scene(&mut s, target);
                    let _ = writeln!(s, "ANSWER {answer}");
                }
                PairRecord::Family { src_figure, src_ground, tgt_figure, tgt_ground } => {
                    let _ = writeln!(s, "SRC {src_figure} {src_ground}");
                    let _ = writeln!(s, "TGT {tgt_figure} {tgt_ground}");
                }
            }
        }
        s
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), Error> {
        std::fs::write(path, self.to_text())
            .map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))
    }

    pub fn load(path: &std::path::Path) -> Result<Corpus, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
        Corpus::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Corpus, Error> {
        let mut p = Parser::new(text);
        let header = p.next_line()?.to_string();
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 6 || fields[0] != "CORPUS" {
            return Err(p.err("expected `CORPUS <domain> <seed> <n> <ntrain> <ntest>`"));
        }
        let domain = Domain::parse(fields[1]).ok_or_else(|| p.err("unknown corpus domain"))?;
        let seed: u64 = p.parse_field(fields[2])?;
        let n: usize = p.parse_field(fields[3])?;
        let ntrain: usize = p.parse_field(fields[4])?;
        let ntest: usize = p.parse_field(fields[5])?;
        let mut provenance = String::new();
        while let Some(line) = p.peek_line() {
            if let Some(rest) = line.strip_prefix("# ") {
                if !provenance.is_empty() {
                    provenance.push('\n');
                }
                provenance.push_str(rest);
                p.next_line()?;
            } else {
                break;
            }
        }
        let mut family_bank = 0;
        if domain == Domain::Family {
            let line = p.next_line()?.to_string();
            family_bank = p.parse_keyword_value(&line, "BANK")?;
        }
        let mut records = Vec::with_capacity(n);
        let mut train_idx = Vec::new();
        let mut test_idx = Vec::new();
        for i in 0..n {
            let line = p.next_line()?.to_string();
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "PAIR" {
                return Err(p.err("expected `PAIR <index> <train|test>`"));
            }
            let idx: usize = p.parse_field(fields[1])?;
            if idx != i {
                return Err(p.err("pair records out of order"));
            }
            match fields[2] {
                "train" => train_idx.push(i),
                "test" => test_idx.push(i),
                other => return Err(p.err(&format!("unknown pair set `{other}`"))),
            }
            records.push(parse_record(&mut p, domain)?);
        }
        if train_idx.len() != ntrain || test_idx.len() != ntest {
            return Err(Error::Data(format!(
                "header claims {ntrain}/{ntest} split, found {}/{}",
                train_idx.len(),
                test_idx.len()
            )));
        }
        Corpus::new(domain, seed, family_bank, records, train_idx, test_idx, provenance)
    }
}

fn write_letter(s: &mut String, letter: &GridLetter) {
    let _ = writeln!(s, "LETTER");
    s.push_str(&letter.pixels.to_text());
    let _ = writeln!(s, "BRIM");
    s.push_str(&letter.brim.to_text());
    let _ = writeln!(s, "BODY");
    s.push_str(&letter.body.to_text());
}

fn write_scene(s: &mut String, objects: &[SceneObject]) {
    let ab = Alphabet::rgb();
    let _ = writeln!(s, "SCENE {SCENE_SIDE} {SCENE_SIDE} {}", ab.channels());
    for o in objects {
        let bits: String = o.what.iter().map(|&b| char::from(b'0' + b)).collect();
        let _ = writeln!(s, "OBJ {} {} {bits}", o.row, o.col);
    }
}

struct Parser<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Parser<'a> {
        Parser {
            lines: text.lines().collect(),
            pos: 0,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            line: self.pos,
            msg: msg.to_string(),
        }
    }

    fn next_line(&mut self) -> Result<&'a str, Error> {
        let line = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| self.err("unexpected end of file"))?;
        self.pos += 1;
        Ok(line)
    }

    fn peek_line(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    fn parse_field<T: std::str::FromStr>(&self, s: &str) -> Result<T, Error>
    where
        T::Err: std::fmt::Display,
    {
        s.parse().map_err(|e| self.err(&format!("bad value `{s}`: {e}")))
    }

    fn parse_keyword_value<T: std::str::FromStr>(&self, line: &str, keyword: &str) -> Result<T, Error>
    where
        T::Err: std::fmt::Display,
    {
        let rest = line
            .strip_prefix(keyword)
            .ok_or_else(|| self.err(&format!("expected `{keyword} <value>`")))?;
        self.parse_field(rest.trim())
    }

    fn raster_block(&mut self, rows: usize) -> Result<Grid, Error> {
        let base = self.pos + 1;
        let mut block = Vec::with_capacity(rows);
        for _ in 0..rows {
            block.push(self.next_line()?);
        }
        Grid::from_text_lines(&block, base)
    }
}

fn parse_letter(p: &mut Parser) -> Result<GridLetter, Error> {
    let line = p.next_line()?;
    if line != "LETTER" {
        return Err(p.err("expected `LETTER`"));
    }
    let pixels = p.raster_block(LETTER_ROWS)?;
    let line = p.next_line()?;
    if line != "BRIM" {
        return Err(p.err("expected `BRIM`"));
    }
    let brim = p.raster_block(LETTER_ROWS)?;
    let line = p.next_line()?;
    if line != "BODY" {
        return Err(p.err("expected `BODY`"));
    }
    let body = p.raster_block(LETTER_ROWS)?;
    GridLetter::from_rasters(pixels, brim, body)
}

fn parse_scene(p: &mut Parser) -> Result<Vec<SceneObject>, Error> {
    let line = p.next_line()?.to_string();
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "SCENE" {
        return Err(p.err("expected `SCENE <w> <h> <k>`"));
    }
    let channels: usize = p.parse_field(fields[3])?;
    let mut objects = Vec::new();
    while let Some(line) = p.peek_line() {
        if !line.starts_with("OBJ ") {
            break;
        }
        let line = p.next_line()?.to_string();
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(p.err("expected `OBJ <row> <col> <bits>`"));
        }
        let row: usize = p.parse_field(fields[1])?;
        let col: usize = p.parse_field(fields[2])?;
        if fields[3].len() != channels {
            return Err(p.err("what-vector width does not match scene channels"));
        }
        let what: Vec<u8> = fields[3]
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(p.err("what bits must be 0/1")),
            })
            .collect::<Result<_, _>>()?;
        objects.push(SceneObject::new(row, col, what));
    }
    Ok(objects)
}

fn parse_record(p: &mut Parser, domain: Domain) -> Result<PairRecord, Error> {
    match domain {
        Domain::Letter => {
            let line = p.next_line()?.to_string();
            let role = match line.strip_prefix("ROLE ") {
                Some("brim") => LetterRole::Brim,
                Some("body") => LetterRole::Body,
                _ => return Err(p.err("expected `ROLE brim|body`")),
            };
            let line = p.next_line()?.to_string();
            let shift: i32 = p.parse_keyword_value(&line, "SHIFT")?;
            let source = parse_letter(p)?;
            let target = parse_letter(p)?;
            Ok(PairRecord::Letter { role, shift, source, target })
        }
        Domain::Geometric => {
            let source = parse_scene(p)?;
            let line = p.next_line()?.to_string();
            let figure: usize = p.parse_keyword_value(&line, "FIGURE")?;
            let mut hints = None;
            if let Some(line) = p.peek_line() {
                if let Some(bits) = line.strip_prefix("HINTS ") {
                    if bits.len() != HINT_UNITS {
                        return Err(p.err("hint vector must have 8 bits"));
                    }
                    let mut h = [0u8; HINT_UNITS];
                    for (i, c) in bits.chars().enumerate() {
                        h[i] = match c {
                            '0' => 0,
                            '1' => 1,
                            _ => return Err(p.err("hint bits must be 0/1")),
                        };
                    }
                    hints = Some(h);
                    p.next_line()?;
                }
            }
            let target = parse_scene(p)?;
            let line = p.next_line()?.to_string();
            let answer: usize = p.parse_keyword_value(&line, "ANSWER")?;
            if figure >= source.len() || answer >= target.len() {
                return Err(p.err("figure/answer index out of range"));
            }
            Ok(PairRecord::Geometric { source, figure, target, answer, hints })
        }
        Domain::Family => {
            let line = p.next_line()?.to_string();
            let src: Vec<&str> = line.split_whitespace().collect();
            if src.len() != 3 || src[0] != "SRC" {
                return Err(p.err("expected `SRC <figure> <ground>`"));
            }
            let line2 = p.next_line()?.to_string();
            let tgt: Vec<&str> = line2.split_whitespace().collect();
            if tgt.len() != 3 || tgt[0] != "TGT" {
                return Err(p.err("expected `TGT <figure> <ground>`"));
            }
            Ok(PairRecord::Family {
                src_figure: p.parse_field(src[1])?,
                src_ground: p.parse_field(src[2])?,
                tgt_figure: p.parse_field(tgt[1])?,
                tgt_ground: p.parse_field(tgt[2])?,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_record_compiles_to_localist_patterns() {
        let rec = PairRecord::Family {
            src_figure: 2,
            src_ground: 5,
            tgt_figure: 14,
            tgt_ground: 17,
        };
        let pair = compile_record(&rec, 24).unwrap();
        assert_eq!(pair.source.iter().filter(|&&x| x == 1.0).count(), 2);
        assert_eq!(pair.source_figure_mask[2], 1.0);
        assert_eq!(pair.target_figure[14], 1.0);
        assert_eq!(pair.target_ground[17], 1.0);
        assert_eq!(pair.source.len(), 24);
    }

    #[test]
    fn split_is_seed_reproducible_and_disjoint() {
        let records: Vec<PairRecord> = (0..20)
            .map(|i| PairRecord::Family {
                src_figure: i % 6,
                src_ground: (i + 1) % 6,
                tgt_figure: 6 + i % 6,
                tgt_ground: 6 + (i + 1) % 6,
            })
            .collect();
        let train: Vec<usize> = (0..20).collect();
        let mut c = Corpus::new(Domain::Family, 9, 12, records, train, vec![], String::new())
            .unwrap();
        c.split(5, 33).unwrap();
        let first = (c.train_idx.clone(), c.test_idx.clone());
        c.split(5, 33).unwrap();
        assert_eq!(first, (c.train_idx.clone(), c.test_idx.clone()));
        assert_eq!(c.test_idx.len(), 5);
        assert!(c.train_idx.iter().all(|i| !c.test_idx.contains(i)));
        c.split_fraction(0.0, 1).unwrap();
        assert!(c.test_idx.is_empty());
    }
}
