//! Deterministic corpus generators for the three analogy domains. Every
//! generator is a pure function of its parameters and seed; regeneration is
//! bit-identical and each generated pair agrees with its domain's answer
//! rule.

pub mod family_gen;
pub mod geometric;
pub mod letter_gen;

pub use family_gen::{gen_crossdomain, gen_crossdomain_ablation, gen_family_pairs, gen_hinton_corpus};
pub use geometric::{gen_oddity, gen_rotation, gen_twist, Flip, OddityPositions};
pub use letter_gen::{build_letterpart_corpus, build_varpos_corpus, gen_letterpart, gen_varpos};
