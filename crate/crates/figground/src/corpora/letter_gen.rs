//! Letter-part corpora. Each training pair takes one letterform as the
//! source and another as the target, with the same role (brim or body)
//! marked as the figure on both sides. Generalization problems always use
//! the prototype letterform as the source and a held-out letter as the
//! target.

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Domain, LetterRole, PairRecord};
use crate::error::Error;
use crate::letters::{make_mini_letter_corpus, shift_vertical, GridLetter};

const ROLES: [LetterRole; 2] = [LetterRole::Brim, LetterRole::Body];

/// For every letter as source, picks `targets_per_source` distinct other
/// letters, once with the brim as figure and once with the body, giving
/// len(letters) * targets_per_source * 2 training records.
pub fn gen_letterpart(
    letters: &[GridLetter],
    targets_per_source: usize,
    seed: u64,
) -> Result<Vec<PairRecord>, Error> {
    if letters.len() <= targets_per_source {
        return Err(Error::Contract(
            "need more letters than targets per source".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(letters.len() * targets_per_source * 2);
    for role in ROLES {
        for (i, source) in letters.iter().enumerate() {
            let mut others: Vec<usize> = (0..letters.len()).filter(|&j| j != i).collect();
            others.shuffle(&mut rng);
            for &j in others.iter().take(targets_per_source) {
                records.push(PairRecord::Letter {
                    role,
                    shift: 0,
                    source: source.clone(),
                    target: letters[j].clone(),
                });
            }
        }
    }
    Ok(records)
}

/// Variable-position records: the source is always the prototype in its
/// standard position; each target letter appears at all nine vertical
/// shifts, for both roles: len(letters) * 9 * 2 records.
pub fn gen_varpos(letters: &[GridLetter], prototype: &GridLetter) -> Result<Vec<PairRecord>, Error> {
    let mut records = Vec::with_capacity(letters.len() * 9 * 2);
    for role in ROLES {
        for target in letters {
            for shift in -4..=4 {
                records.push(PairRecord::Letter {
                    role,
                    shift,
                    source: prototype.clone(),
                    target: shift_vertical(target, shift)?,
                });
            }
        }
    }
    Ok(records)
}

/// The 20 generalization problems: prototype source against each of the 10
/// test letters, brim round then body round.
fn test_records(prototype: &GridLetter, test_letters: &[GridLetter]) -> Vec<PairRecord> {
    let mut records = Vec::with_capacity(test_letters.len() * 2);
    for role in ROLES {
        for target in test_letters {
            records.push(PairRecord::Letter {
                role,
                shift: 0,
                source: prototype.clone(),
                target: target.clone(),
            });
        }
    }
    records
}

fn assemble(
    seed: u64,
    train_records: Vec<PairRecord>,
    test_letters: &[GridLetter],
    prototype: &GridLetter,
    provenance: String,
) -> Result<Corpus, Error> {
    let n_train = train_records.len();
    let mut records = train_records;
    records.extend(test_records(prototype, test_letters));
    let n = records.len();
    Corpus::new(
        Domain::Letter,
        seed,
        0,
        records,
        (0..n_train).collect(),
        (n_train..n).collect(),
        provenance,
    )
}

/// Letter-part corpus over a generated mini letter set: `n_letters`
/// training letterforms and the fixed 10-letter test set.
pub fn build_letterpart_corpus(
    n_letters: usize,
    targets_per_source: usize,
    seed: u64,
) -> Result<Corpus, Error> {
    let (train_letters, test_letters) = make_mini_letter_corpus(n_letters, seed)?;
    let train_records = gen_letterpart(&train_letters, targets_per_source, seed)?;
    let provenance = format!(
        "letter-part corpus: {} generated letterforms x {} targets x 2 roles = {} \
         training pairs, 20 prototype-source generalization problems; generated \
         substitute for the unavailable 229-letterform set (which yields 1,374)",
        n_letters,
        targets_per_source,
        train_records.len()
    );
    assemble(seed, train_records, &test_letters, &train_letters[0], provenance)
}

/// Variable-position corpus over the same generated letter set.
pub fn build_varpos_corpus(n_letters: usize, seed: u64) -> Result<Corpus, Error> {
    let (train_letters, test_letters) = make_mini_letter_corpus(n_letters, seed)?;
    let prototype = train_letters[0].clone();
    let train_records = gen_varpos(&train_letters, &prototype)?;
    let provenance = format!(
        "variable-position corpus: {} letterforms x 9 shifts x 2 roles = {} \
         training pairs (229 letterforms would yield 4,122), 20 generalization \
         problems at shift 0",
        n_letters,
        train_records.len()
    );
    assemble(seed, train_records, &test_letters, &prototype, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::compile_record;
    use crate::letters::{LETTER_COLS, LETTER_ROWS};

    #[test]
    fn letterpart_counts_follow_the_formula() {
        let corpus = build_letterpart_corpus(30, 3, 7).unwrap();
        assert_eq!(corpus.train_idx.len(), 30 * 3 * 2);
        assert_eq!(corpus.test_idx.len(), 20);
        // Counting oracle: brim-role and body-role records in equal number.
        let brims = corpus
            .records
            .iter()
            .filter(|r| matches!(r, PairRecord::Letter { role: LetterRole::Brim, .. }))
            .count();
        assert_eq!(brims, corpus.len() / 2);
    }

    #[test]
    fn one_letter_pool_formula() {
        // 11 letters with 1 target each: 11 x 1 x 2 records.
        let (letters, _) = make_mini_letter_corpus(11, 2).unwrap();
        let recs = gen_letterpart(&letters, 1, 2).unwrap();
        assert_eq!(recs.len(), 22);
    }

    #[test]
    fn formula_recount_for_typical_sizes() {
        // 229 letterforms at 3 targets per source would give 1,374 pairs,
        // and 229 x 9 x 2 = 4,122 variable-position pairs.
        assert_eq!(229 * 3 * 2, 1374);
        assert_eq!(229 * 9 * 2, 4122);
    }

    #[test]
    fn sources_never_target_themselves() {
        let corpus = build_letterpart_corpus(12, 3, 3).unwrap();
        for idx in &corpus.train_idx {
            let PairRecord::Letter { source, target, .. } = &corpus.records[*idx] else {
                panic!("letter record expected")
            };
            assert_ne!(source.pixels, target.pixels);
        }
    }

    #[test]
    fn varpos_covers_all_nine_shifts() {
        let corpus = build_varpos_corpus(10, 5).unwrap();
        assert_eq!(corpus.train_idx.len(), 10 * 9 * 2);
        let mut shifts: Vec<i32> = corpus
            .records
            .iter()
            .filter_map(|r| match r {
                PairRecord::Letter { shift, .. } => Some(*shift),
                _ => None,
            })
            .collect();
        shifts.sort_unstable();
        shifts.dedup();
        assert_eq!(shifts, vec![-4, -3, -2, -1, 0, 1, 2, 3, 4]);
    }

    #[test]
    fn varpos_sources_are_all_the_prototype() {
        let corpus = build_varpos_corpus(10, 5).unwrap();
        let PairRecord::Letter { source: proto, .. } = &corpus.records[0] else {
            panic!()
        };
        for idx in &corpus.train_idx {
            let PairRecord::Letter { source, .. } = &corpus.records[*idx] else { panic!() };
            assert_eq!(source.pixels, proto.pixels);
        }
    }

    #[test]
    fn compiled_letter_pairs_have_612_scoreable_units() {
        let corpus = build_letterpart_corpus(10, 2, 1).unwrap();
        let pair = compile_record(&corpus.records[0], 0).unwrap();
        let per_step = pair.source_figure.len() + pair.source_ground.len();
        assert_eq!(per_step, 2 * LETTER_ROWS * LETTER_COLS);
        // Both steps together score 153 x 4 = 612 output units.
        assert_eq!(2 * per_step, 612);
    }

    #[test]
    fn generation_is_reproducible() {
        let a = build_letterpart_corpus(15, 3, 9).unwrap();
        let b = build_letterpart_corpus(15, 3, 9).unwrap();
        assert_eq!(a.to_text(), b.to_text());
    }
}
