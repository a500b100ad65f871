//! A connectionist analogy-learning toolkit built on a from-scratch
//! backpropagation engine. A simple recurrent network is trained with a
//! two-step figure-ground procedure: first segregate a source scene into
//! figure and ground, then, with the hidden activations copied onto the
//! context bank, produce the analogous figure and ground for a target
//! scene. Letter-part, geometric-spatial and family-tree corpora are
//! generated deterministically, and runs are reproducible from a seed.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod corpora;
pub mod corpus;
pub mod error;
pub mod experiments;
pub mod family;
pub mod grid;
pub mod letters;
pub mod net;
pub mod pgm;
pub mod scene;
pub mod srn;
pub mod stats;

pub use error::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
