//! Finite-n evaluation of the clique and chromatic-number bounds.
//!
//! Every statement is evaluated literally at the given `n`. Probability
//! guarantees are reported twice: the raw expression (which can be negative
//! when the bound says nothing at this `n`) and its clamp to `[0, 1]`.
//! Event semantics are fixed crate-wide: a lower threshold `L` is tested as
//! `omega >= ceil(L)` and an upper threshold `U` as `omega <= floor(U)`.
//!
//! The exponents `alpha1`, `alpha2` consumed by the case checks are the
//! finite-n ratios from [`crate::model::alpha_exponents_at`], not limits.

mod chromatic;
mod clique;
mod feasible;
mod recursion;

pub use chromatic::chromatic_window;
pub use clique::{
    chernoff_tail, clique_lower_main, clique_upper_hom, clique_upper_inhom, corollary_window,
    extreme_regimes, ExtremeRegime,
};
pub use feasible::{find_feasible_params, Feasibility, FeasibleCase};
pub use recursion::{log_bounds, recursion_chain, LogSandwich, RecursionChain};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::AlphaExponents;
use crate::serde_util;

/// Statement identifiers used in reports and result tables.
pub mod ids {
    pub const CLQ_UPPER_INHOM: &str = "clq-upper-inhom";
    pub const CLQ_UPPER_HOM: &str = "clq-upper-hom";
    pub const CLQ_MAIN_I: &str = "clq-main-i";
    pub const CLQ_MAIN_II: &str = "clq-main-ii";
    pub const CLQ_MAIN_III: &str = "clq-main-iii";
    pub const CLQ_EXTREM_1: &str = "clq-extrem-1";
    pub const CLQ_EXTREM_2: &str = "clq-extrem-2";
    pub const CLQ_EXTREM_3: &str = "clq-extrem-3";
    pub const COR_I: &str = "cor-i";
    pub const COR_II: &str = "cor-ii";
    pub const COR_III: &str = "cor-iii";
    pub const CHR_I: &str = "chr-i";
    pub const CHR_II: &str = "chr-ii";
    pub const CHR_III: &str = "chr-iii";
    pub const CHERNOFF: &str = "chernoff";
}

/// Which of the three regimes (sparse / constant / near-complete) a
/// statement is evaluated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    I,
    Ii,
    Iii,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::I => "i",
            Case::Ii => "ii",
            Case::Iii => "iii",
        }
    }
}

impl std::str::FromStr for Case {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Case> {
        match s {
            "i" => Ok(Case::I),
            "ii" => Ok(Case::Ii),
            "iii" => Ok(Case::Iii),
            _ => Err(invalid(format!("unknown case {s:?} (expected i, ii or iii)"))),
        }
    }
}

/// Free parameters of the statements; each operation reads the subset it needs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl BoundParams {
    pub fn with_eta_gamma(eta: f64, gamma: f64) -> Self {
        BoundParams {
            eta: Some(eta),
            gamma: Some(gamma),
            ..Default::default()
        }
    }

    pub fn xi(mut self, xi: f64) -> Self {
        self.xi = Some(xi);
        self
    }

    pub fn zeta(mut self, zeta: f64) -> Self {
        self.zeta = Some(zeta);
        self
    }

    pub(crate) fn require(&self, name: &str) -> Result<f64> {
        let v = match name {
            "eta" => self.eta,
            "gamma" => self.gamma,
            "xi" => self.xi,
            "zeta" => self.zeta,
            "epsilon" => self.epsilon,
            "delta" => self.delta,
            "a" => self.a,
            "beta" => self.beta,
            _ => unreachable!("unknown parameter {name}"),
        };
        match v {
            Some(x) if x.is_finite() => Ok(x),
            Some(x) => Err(invalid(format!("parameter {name} must be finite, got {x}"))),
            None => Err(invalid(format!("missing parameter {name}"))),
        }
    }

    pub(crate) fn require_positive(&self, name: &str) -> Result<f64> {
        let v = self.require(name)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(invalid(format!("parameter {name} must be > 0, got {v}")))
        }
    }
}

/// One evaluated probability statement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub statement_id: String,
    pub n: usize,
    /// Clique/chromatic size the event refers to.
    #[serde(with = "serde_util::float")]
    pub threshold: f64,
    /// Human-readable event, e.g. `omega <= threshold`.
    pub event: String,
    /// The failure-probability expression, evaluated literally.
    #[serde(with = "serde_util::float")]
    pub failure_raw: f64,
    /// `1 - failure_raw`; may lie outside `[0, 1]`.
    #[serde(with = "serde_util::float")]
    pub guarantee_raw: f64,
    pub guarantee_clamped: f64,
    pub constraints_ok: bool,
    pub vacuous: bool,
    pub alpha: Option<AlphaExponents>,
    pub notes: Vec<String>,
}

pub(crate) fn clamp01(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(0.0, 1.0)
    }
}

impl BoundReport {
    pub(crate) fn new(id: &str, n: usize, threshold: f64, event: &str, failure_raw: f64) -> Self {
        let guarantee_raw = 1.0 - failure_raw;
        BoundReport {
            statement_id: id.to_string(),
            n,
            threshold,
            event: event.to_string(),
            failure_raw,
            guarantee_raw,
            guarantee_clamped: clamp01(guarantee_raw),
            constraints_ok: true,
            vacuous: !(guarantee_raw > 0.0),
            alpha: None,
            notes: Vec::new(),
        }
    }

    pub(crate) fn with_alpha(mut self, alpha: AlphaExponents) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub(crate) fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Smallest integer size satisfying a lower-threshold event.
    pub fn ceil_threshold(&self) -> u64 {
        ceil_size(self.threshold)
    }

    /// Largest integer size satisfying an upper-threshold event.
    pub fn floor_threshold(&self) -> u64 {
        floor_size(self.threshold)
    }
}

pub(crate) fn ceil_size(x: f64) -> u64 {
    if x <= 0.0 {
        0
    } else {
        x.ceil() as u64
    }
}

pub(crate) fn floor_size(x: f64) -> u64 {
    if x <= 0.0 {
        0
    } else {
        x.floor() as u64
    }
}

/// Two-sided window: `lower` carries the lower edge and the failure term of
/// the lower-tail statement, `upper` likewise. The window-level guarantee
/// subtracts both failure terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundWindow {
    pub statement_id: String,
    pub n: usize,
    pub lower: BoundReport,
    pub upper: BoundReport,
    #[serde(with = "serde_util::float")]
    pub failure_raw: f64,
    #[serde(with = "serde_util::float")]
    pub guarantee_raw: f64,
    pub guarantee_clamped: f64,
    pub constraints_ok: bool,
    pub vacuous: bool,
    pub notes: Vec<String>,
}

impl BoundWindow {
    pub(crate) fn new(id: &str, lower: BoundReport, upper: BoundReport) -> Self {
        let failure_raw = lower.failure_raw + upper.failure_raw;
        let guarantee_raw = 1.0 - failure_raw;
        BoundWindow {
            statement_id: id.to_string(),
            n: lower.n,
            failure_raw,
            guarantee_raw,
            guarantee_clamped: clamp01(guarantee_raw),
            constraints_ok: true,
            vacuous: !(guarantee_raw > 0.0),
            notes: Vec::new(),
            lower,
            upper,
        }
    }

    /// `[ceil(lower), floor(upper)]`.
    pub fn integer_window(&self) -> (u64, u64) {
        (self.lower.ceil_threshold(), self.upper.floor_threshold())
    }
}
