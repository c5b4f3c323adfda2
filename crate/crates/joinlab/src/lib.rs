//! Combinatorics of join trees, shift permutations, pathsets and
//! bounded-depth formulas for iterated sub-permutation matrix multiplication.

pub mod error;
pub mod formulas;
pub mod greedylab;
pub mod instances;
pub mod jointree;
pub mod pathgraph;
pub mod pathsets;
pub mod shiftperm;
pub mod suites;
pub mod witnesses;

pub use error::{LabError, Result};
pub use jointree::JoinTree;
pub use pathgraph::PathGraph;
