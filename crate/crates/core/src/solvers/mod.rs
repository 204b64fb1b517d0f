//! Exact solvers for ω, α and χ with certified intervals when the node
//! budget runs out.

mod clique;
mod coloring;

pub use clique::{independence_number, max_clique};
pub use coloring::{
    chromatic_exact, chromatic_sandwich, degeneracy_order, greedy_coloring, ChromaticSandwich,
    EXACT_CHROMATIC_MAX_N,
};

use serde::{Deserialize, Serialize};

use crate::serde_util;

/// Deterministic search limit: the number of branch-and-bound nodes a
/// single solver call may expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Budget {
    pub const DEFAULT_NODES: u64 = 20_000_000;

    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes }
    }

    pub fn unlimited() -> Self {
        Budget { max_nodes: u64::MAX }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::nodes(Budget::DEFAULT_NODES)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Omega,
    Alpha,
    Chi,
}

/// Certificate attached to a [`SolveResult`]. Vertex and color labels are
/// 1-based in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Clique {
        #[serde(with = "serde_util::one_based")]
        vertices: Vec<usize>,
    },
    IndependentSet {
        #[serde(with = "serde_util::one_based")]
        vertices: Vec<usize>,
    },
    Coloring {
        #[serde(with = "serde_util::one_based")]
        colors: Vec<usize>,
    },
}

impl Witness {
    /// Set size, or number of distinct colors.
    pub fn size(&self) -> usize {
        match self {
            Witness::Clique { vertices } | Witness::IndependentSet { vertices } => vertices.len(),
            Witness::Coloring { colors } => colors.iter().max().map_or(0, |&c| c + 1),
        }
    }

    /// Checks the certificate by direct edge inspection.
    pub fn verify(&self, g: &crate::Graph) -> bool {
        match self {
            Witness::Clique { vertices } => {
                vertices.iter().all(|&v| v < g.n()) && g.is_clique(vertices)
            }
            Witness::IndependentSet { vertices } => {
                vertices.iter().all(|&v| v < g.n()) && g.is_independent(vertices)
            }
            Witness::Coloring { colors } => g.is_proper_coloring(colors),
        }
    }
}

/// Outcome of a solver call.
///
/// When `exact`, `value` is the quantity itself and `interval == [value, value]`.
/// Otherwise `interval` brackets it and `value` is the bound realized by the
/// witness (the lower end for ω and α, the upper end for χ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub quantity: Quantity,
    pub exact: bool,
    pub value: usize,
    pub interval: [usize; 2],
    pub witness: Witness,
    /// Search nodes expanded.
    pub nodes: u64,
}

impl SolveResult {
    pub fn lower(&self) -> usize {
        self.interval[0]
    }

    pub fn upper(&self) -> usize {
        self.interval[1]
    }
}
