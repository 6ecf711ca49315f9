//! Obstructions and decision procedures for smooth embeddings of lens space
//! sums, Seifert fibred spaces and pretzel link double covers in the 4-sphere.

pub mod classifier;
pub mod linalg;
pub mod lattice;
pub mod obstructions;
pub mod plumbing;
pub mod spin;
pub mod subsets;
