//! Edge-probability models and reproducible sampling.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::rng::{CounterRng, Domain};

/// Declarative description of an edge-probability family.
///
/// JSON form: `{"n": 100, "family": "constant", "p": 0.5}`; the other
/// families carry `theta1` (`power-law-sparse`, `p_n = n^-theta1`),
/// `theta2` (`near-complete`, `p_n = 1 - n^-theta2`) or a full symmetric
/// `matrix` (`explicit`; the diagonal is ignored).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub n: usize,
    #[serde(flatten)]
    pub family: Family,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Constant { p: f64 },
    PowerLawSparse { theta1: f64 },
    NearComplete { theta2: f64 },
    Explicit { matrix: Vec<Vec<f64>> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Constant { .. } => "constant",
            Family::PowerLawSparse { .. } => "power-law-sparse",
            Family::NearComplete { .. } => "near-complete",
            Family::Explicit { .. } => "explicit",
        }
    }

    /// Short `key=value` rendering of the family parameter.
    pub fn params_label(&self) -> String {
        match self {
            Family::Constant { p } => format!("p={p}"),
            Family::PowerLawSparse { theta1 } => format!("theta1={theta1}"),
            Family::NearComplete { theta2 } => format!("theta2={theta2}"),
            Family::Explicit { .. } => "matrix".to_string(),
        }
    }
}

impl ModelSpec {
    pub fn constant(n: usize, p: f64) -> Self {
        ModelSpec {
            n,
            family: Family::Constant { p },
        }
    }

    pub fn power_law_sparse(n: usize, theta1: f64) -> Self {
        ModelSpec {
            n,
            family: Family::PowerLawSparse { theta1 },
        }
    }

    pub fn near_complete(n: usize, theta2: f64) -> Self {
        ModelSpec {
            n,
            family: Family::NearComplete { theta2 },
        }
    }

    pub fn explicit(matrix: Vec<Vec<f64>>) -> Self {
        ModelSpec {
            n: matrix.len(),
            family: Family::Explicit { matrix },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid(format!("n must be >= 2, got {}", self.n)));
        }
        match &self.family {
            Family::Constant { p } if !(*p > 0.0 && *p < 1.0) => {
                Err(invalid(format!("p must lie in (0,1), got {p}")))
            }
            Family::PowerLawSparse { theta1 } if !(theta1.is_finite() && *theta1 > 0.0) => {
                Err(invalid(format!("theta1 must be > 0, got {theta1}")))
            }
            Family::NearComplete { theta2 } if !(theta2.is_finite() && *theta2 > 0.0) => {
                Err(invalid(format!("theta2 must be > 0, got {theta2}")))
            }
            Family::Explicit { matrix } if matrix.len() != self.n => Err(Error::InvalidMatrix(
                format!("matrix has {} rows but n = {}", matrix.len(), self.n),
            )),
            _ => Ok(()),
        }
    }

    /// The common edge probability of a homogeneous family at this `n`.
    pub fn p_n(&self) -> Result<f64> {
        self.validate()?;
        let n = self.n as f64;
        let p = match &self.family {
            Family::Constant { p } => *p,
            Family::PowerLawSparse { theta1 } => n.powf(-theta1),
            Family::NearComplete { theta2 } => 1.0 - n.powf(-theta2),
            Family::Explicit { .. } => {
                return Err(invalid("explicit family has no homogeneous p_n"));
            }
        };
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid(format!("p_n = {p} falls outside (0,1) at n = {}", self.n)));
        }
        Ok(p)
    }
}

/// Canonical index of the unordered pair `{i, j}`, `i != j` (colex order, so
/// indices do not depend on `n`).
#[inline]
pub fn edge_index(i: usize, j: usize) -> usize {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    hi * (hi - 1) / 2 + lo
}

/// Symmetric per-pair edge probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeProbabilityMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl EdgeProbabilityMatrix {
    pub fn constant(n: usize, p: f64) -> Result<Self> {
        Self::from_fn(n, |_, _| p)
    }

    /// `f(i, j)` is evaluated once per pair with `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for j in 1..n {
            for i in 0..j {
                let p = f(i, j);
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({},{}) = {p} outside [0,1]",
                        i + 1,
                        j + 1
                    )));
                }
                entries.push(p);
            }
        }
        Ok(EdgeProbabilityMatrix { n, entries })
    }

    /// Full square input; must be exactly symmetric (no repair is attempted).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Asymmetric {
                        i: i + 1,
                        j: j + 1,
                        a: rows[i][j],
                        b: rows[j][i],
                    });
                }
            }
        }
        Self::from_fn(n, |i, j| rows[i][j])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i != j);
        self.entries[edge_index(i, j)]
    }

    /// Entries indexed by [`edge_index`].
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn set(&mut self, i: usize, j: usize, p: f64) {
        assert!((0.0..=1.0).contains(&p));
        self.entries[edge_index(i, j)] = p;
    }

    /// `p(i, j)` for every `j != i`, in increasing `j`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (0..self.n).filter(move |&j| j != i).map(move |j| (j, self.get(i, j)))
    }

    /// Expected edge count.
    pub fn expected_edges(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| if i == j { 0.0 } else { self.get(i, j) }).collect())
            .collect()
    }
}

pub fn build_matrix(spec: &ModelSpec) -> Result<EdgeProbabilityMatrix> {
    spec.validate()?;
    match &spec.family {
        Family::Explicit { matrix } => EdgeProbabilityMatrix::from_rows(matrix),
        _ => EdgeProbabilityMatrix::constant(spec.n, spec.p_n()?),
    }
}

/// Draws one realization. Edge `{i, j}` is present iff the counter-based
/// uniform for `(seed, trial, edge_index(i, j))` falls below `p(i, j)`.
pub fn sample_graph(matrix: &EdgeProbabilityMatrix, seed: u64, trial: u64) -> Graph {
    let rng = CounterRng::new(seed, Domain::Edges, trial);
    let mut g = Graph::empty(matrix.n);
    let mut idx = 0usize;
    for j in 1..matrix.n {
        for i in 0..j {
            if rng.bernoulli(idx as u64, matrix.entries[idx]) {
                g.add_edge(i, j);
            }
            idx += 1;
        }
    }
    g
}

/// Finite-n proxies for the sparse/dense decay exponents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaExponents {
    /// `log(1/p_n) / log n`
    pub alpha1: f64,
    /// `log(1/(1-p_n)) / log n`
    pub alpha2: f64,
}

/// The pointwise ratios at real `n > 1`.
pub fn alpha_exponents_at(p_n: f64, n: f64) -> Result<AlphaExponents> {
    if !(p_n > 0.0 && p_n < 1.0) {
        return Err(invalid(format!("p_n must lie in (0,1), got {p_n}")));
    }
    if !(n > 1.0) {
        return Err(invalid(format!("n must exceed 1, got {n}")));
    }
    let ln_n = n.ln();
    Ok(AlphaExponents {
        alpha1: -p_n.ln() / ln_n,
        alpha2: -(-p_n).ln_1p() / ln_n,
    })
}

/// For the power-law families the proxy reproduces the exponent exactly.
pub fn alpha_exponents(spec: &ModelSpec) -> Result<AlphaExponents> {
    let n = spec.n as f64;
    let mut a = alpha_exponents_at(spec.p_n()?, n)?;
    match spec.family {
        Family::PowerLawSparse { theta1 } => a.alpha1 = theta1,
        Family::NearComplete { theta2 } => a.alpha2 = theta2,
        _ => {}
    }
    Ok(a)
}
