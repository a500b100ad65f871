//! Family-tree corpora: facts are paired by relation, never by name, so
//! the relation itself stays implicit in the network patterns.

use crate::corpus::{Corpus, Domain, PairRecord};
use crate::error::Error;
use crate::family::{hinton_families, six_families, Family};

/// All ordered same-relation pairs with the source fact from `a` and the
/// target fact from `b`. Pairing a family with itself includes each fact
/// paired with itself.
pub fn gen_family_pairs(a: &Family, b: &Family) -> Vec<PairRecord> {
    let mut records = Vec::new();
    for fa in &a.facts {
        for fb in &b.facts {
            if fa.relation == fb.relation {
                records.push(PairRecord::Family {
                    src_figure: fa.figure,
                    src_ground: fa.ground,
                    tgt_figure: fb.figure,
                    tgt_ground: fb.ground,
                });
            }
        }
    }
    records
}

/// The two-tree corpus: every ordered same-relation pairing over the two
/// 12-person families (within-family, cross-family and self pairs), which
/// enumerates to exactly 1,008. `test_count` pairs are held out.
pub fn gen_hinton_corpus(seed: u64, test_count: usize) -> Result<Corpus, Error> {
    let fams = hinton_families();
    let mut records = Vec::new();
    for a in &fams {
        for b in &fams {
            records.extend(gen_family_pairs(a, b));
        }
    }
    let n = records.len();
    let provenance = format!(
        "two-tree family corpus: {n} ordered same-relation fact pairings over \
         104 facts (reference count 1,008); {test_count} held out"
    );
    let mut corpus = Corpus::new(
        Domain::Family,
        seed,
        24,
        records,
        (0..n).collect(),
        vec![],
        provenance,
    )?;
    corpus.split(test_count.min(n), seed)?;
    Ok(corpus)
}

/// Cross-domain corpus over the six 6-person families. Training pairs
/// cover every ordered cross-family arrow except the two linking families
/// 1 and 6 (zero-based 0 and 5); all 1<->6 pairs form the test set.
pub fn gen_crossdomain(seed: u64) -> Result<Corpus, Error> {
    let fams = six_families();
    build_crossdomain(seed, &fams, &full_topology(), "cross-domain")
}

/// Ablation topology: families 1 and 6 are each directly related only to
/// family 2, with families 2..5 still fully interconnected, so the only
/// route between the end families runs through one shared neighbor.
pub fn gen_crossdomain_ablation(seed: u64) -> Result<Corpus, Error> {
    let fams = six_families();
    let mut arrows = Vec::new();
    arrows.push((0, 1));
    arrows.push((1, 0));
    arrows.push((5, 1));
    arrows.push((1, 5));
    for i in 1..5 {
        for j in 1..5 {
            if i != j {
                arrows.push((i, j));
            }
        }
    }
    build_crossdomain(seed, &fams, &arrows, "cross-domain single-neighbor ablation")
}

/// Every ordered pair of distinct families except 0<->5.
fn full_topology() -> Vec<(usize, usize)> {
    let mut arrows = Vec::new();
    for i in 0..6 {
        for j in 0..6 {
            if i != j && !(i == 0 && j == 5) && !(i == 5 && j == 0) {
                arrows.push((i, j));
            }
        }
    }
    arrows
}

fn build_crossdomain(
    seed: u64,
    fams: &[Family],
    arrows: &[(usize, usize)],
    label: &str,
) -> Result<Corpus, Error> {
    let mut records = Vec::new();
    for &(i, j) in arrows {
        records.extend(gen_family_pairs(&fams[i], &fams[j]));
    }
    let n_train = records.len();
    let mut test_records = gen_family_pairs(&fams[0], &fams[5]);
    test_records.extend(gen_family_pairs(&fams[5], &fams[0]));
    let n_test = test_records.len();
    records.extend(test_records);
    let provenance = format!(
        "{label} corpus: {n_train} training pairings over {} arrows, {n_test} \
         held-out pairings between families 1 and 6 (reference counts \
         1,768 and 104); per-arrow pairing count 48; argmax chance level 1/36",
        arrows.len()
    );
    Corpus::new(
        Domain::Family,
        seed,
        36,
        records,
        (0..n_train).collect(),
        (n_train..n_train + n_test).collect(),
        provenance,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Relation;

    #[test]
    fn hinton_pairing_count_matches_the_reference() {
        // Counting oracle: sum over relations of (total facts with that
        // relation) squared.
        let fams = hinton_families();
        let mut by_rel: std::collections::HashMap<Relation, usize> = Default::default();
        for fam in &fams {
            for fact in &fam.facts {
                *by_rel.entry(fact.relation).or_insert(0) += 1;
            }
        }
        let expected: usize = by_rel.values().map(|&n| n * n).sum();
        assert_eq!(expected, 1008);
        let corpus = gen_hinton_corpus(1, 8).unwrap();
        assert_eq!(corpus.len(), 1008);
        assert_eq!(corpus.train_idx.len(), 1000);
        assert_eq!(corpus.test_idx.len(), 8);
    }

    #[test]
    fn self_pairing_reproduces_the_source_pattern() {
        let fams = hinton_families();
        let english = &fams[0];
        let pairs = gen_family_pairs(english, english);
        // Each fact paired with itself appears once.
        let selfies = pairs
            .iter()
            .filter(|r| {
                let PairRecord::Family { src_figure, src_ground, tgt_figure, tgt_ground } = r
                else {
                    return false;
                };
                src_figure == tgt_figure && src_ground == tgt_ground
            })
            .count();
        assert!(selfies >= english.facts.len());
    }

    #[test]
    fn cross_family_pairs_map_relation_to_relation() {
        let fams = hinton_families();
        let pairs = gen_family_pairs(&fams[0], &fams[1]);
        // 252 = sum over relations of (per-family count)^2.
        assert_eq!(pairs.len(), 252);
        for rec in &pairs {
            let PairRecord::Family { src_figure, tgt_figure, .. } = rec else { panic!() };
            assert!(fams[0].contains(*src_figure));
            assert!(fams[1].contains(*tgt_figure));
        }
    }

    #[test]
    fn son_fact_pairs_with_other_family_son_facts() {
        let fams = six_families();
        let african = &fams[5];
        let english = &fams[0];
        let pairs = gen_family_pairs(african, english);
        // The African son (role 2) must map onto the English son, never a
        // different role.
        let af_son = african.base + 2;
        let en_son = english.base + 2;
        for rec in &pairs {
            let PairRecord::Family { src_figure, src_ground, tgt_figure, .. } = rec else {
                panic!()
            };
            // Son facts are exactly (son, father) and (son, mother).
            if *src_figure == af_son && (*src_ground == african.base || *src_ground == african.base + 1)
            {
                assert_eq!(*tgt_figure, en_son);
            }
        }
        assert_eq!(pairs.len(), 48);
    }

    #[test]
    fn crossdomain_counts_and_exclusion() {
        let corpus = gen_crossdomain(3).unwrap();
        assert_eq!(corpus.train_idx.len(), 28 * 48);
        assert_eq!(corpus.test_idx.len(), 96);
        assert_eq!(corpus.family_bank, 36);
        // No training pair mixes family 1 (ids 0..6) and family 6 (30..36).
        for &i in &corpus.train_idx {
            let PairRecord::Family { src_figure, tgt_figure, .. } = &corpus.records[i] else {
                panic!()
            };
            let f1 = src_figure / 6;
            let f2 = tgt_figure / 6;
            assert!(
                !((f1 == 0 && f2 == 5) || (f1 == 5 && f2 == 0)),
                "training pair links the excluded families"
            );
        }
        // Every test pair links exactly those two families.
        for &i in &corpus.test_idx {
            let PairRecord::Family { src_figure, tgt_figure, .. } = &corpus.records[i] else {
                panic!()
            };
            let f1 = src_figure / 6;
            let f2 = tgt_figure / 6;
            assert!((f1 == 0 && f2 == 5) || (f1 == 5 && f2 == 0));
        }
    }

    #[test]
    fn ablation_leaves_one_route_between_end_families() {
        let corpus = gen_crossdomain_ablation(3).unwrap();
        // 1<->2, 6<->2 plus the 2..5 clique: (2 + 2 + 12) arrows x 48.
        assert_eq!(corpus.train_idx.len(), 16 * 48);
        assert_eq!(corpus.test_idx.len(), 96);
        for &i in &corpus.train_idx {
            let PairRecord::Family { src_figure, tgt_figure, .. } = &corpus.records[i] else {
                panic!()
            };
            let f1 = src_figure / 6;
            let f2 = tgt_figure / 6;
            if f1 == 0 || f2 == 0 {
                assert!(f1 + f2 == 1, "family 1 only pairs with family 2");
            }
            if f1 == 5 || f2 == 5 {
                assert!(f1 + f2 == 6, "family 6 only pairs with family 2");
            }
        }
    }

    #[test]
    fn corpora_are_reproducible() {
        assert_eq!(gen_hinton_corpus(5, 8).unwrap().to_text(), gen_hinton_corpus(5, 8).unwrap().to_text());
        assert_eq!(gen_crossdomain(5).unwrap().to_text(), gen_crossdomain(5).unwrap().to_text());
    }
}
