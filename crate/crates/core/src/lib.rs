//! Inhomogeneous random graphs: sampling, exact/bracketed clique and
//! chromatic-number solvers, finite-n evaluation of clique and chromatic
//! bounds, and Monte Carlo checks of those bounds.

mod bitset;
pub mod bounds;
pub mod density;
mod error;
pub mod graph;
pub mod model;
pub mod montecarlo;
pub mod rng;
mod serde_util;
pub mod solvers;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use graph::Graph;
pub use model::{EdgeProbabilityMatrix, Family, ModelSpec};
