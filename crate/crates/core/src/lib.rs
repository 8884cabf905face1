//! Multiple alignment of protein sequences annotated with typed, weighted
//! segments, driven by segment neighbourhoods across sequences.

pub mod error;
pub mod evaluation;
pub mod exec;
pub mod guide_tree;
pub mod msa;
pub mod neighborhoods;
pub mod pairwise;
pub mod pipeline;
pub mod progressive;
pub mod residue_profile;
pub mod scoring;
pub mod segment_align;
pub mod seq;
pub mod synth;

pub use error::{Error, Result};
