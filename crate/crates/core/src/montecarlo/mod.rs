//! Seeded trial batches: estimate event frequencies on sampled graphs and
//! compare them with evaluated guarantees.
//!
//! Trial `t` always draws `sample_graph(matrix, seed, t)`, so adding trials
//! extends a run without changing earlier ones. Trials run on the rayon pool
//! of the caller; per-trial outcomes are collected in trial order and
//! reduced sequentially, so results do not depend on the schedule.

mod chernoff;

pub use chernoff::{chernoff_check, ChernoffCheck};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    self, chernoff_tail, chromatic_window, clique_lower_main, clique_upper_hom, clique_upper_inhom,
    corollary_window, BoundParams, Case,
};
use crate::density::log_average_tn;
use crate::error::{invalid, Error, Result};
use crate::model::{build_matrix, sample_graph, EdgeProbabilityMatrix, ModelSpec};
use crate::serde_util;
use crate::solvers::{chromatic_exact, max_clique, Budget};

/// Version stamped into every result for provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95% for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> [f64; 2] {
    if trials == 0 {
        return [0.0, 1.0];
    }
    let n = trials as f64;
    let f = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (f + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z / denom * (f * (1.0 - f) / n + z2 / (4.0 * n * n)).sqrt();
    // The ends are exactly 0 and 1 at the extremes; keep rounding from moving them.
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    [lo, hi]
}

/// Event evaluated on every sampled graph. Clique and chromatic thresholds
/// are real; a lower end `l` means `>= ceil(l)` and an upper end `u` means
/// `<= floor(u)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Event {
    OmegaAtLeast { t: f64 },
    OmegaAtMost { t: f64 },
    OmegaIn { lo: f64, hi: f64 },
    /// The certified interval for χ lies inside `[lo, hi]`.
    ChiWithin { lo: f64, hi: f64 },
    /// `|E - E[E]| < epsilon * E[E]` for the edge count `E`.
    EdgeCountWithin { epsilon: f64 },
}

impl Event {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Event::OmegaAtLeast { t } | Event::OmegaAtMost { t } => t.is_finite(),
            Event::OmegaIn { lo, hi } | Event::ChiWithin { lo, hi } => {
                lo.is_finite() && hi.is_finite() && lo <= hi
            }
            Event::EdgeCountWithin { epsilon } => epsilon > 0.0 && epsilon.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("inconsistent event thresholds: {self:?}")))
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Event::OmegaAtLeast { .. } => "omega >= lo".into(),
            Event::OmegaAtMost { .. } => "omega <= hi".into(),
            Event::OmegaIn { .. } => "lo <= omega <= hi".into(),
            Event::ChiWithin { .. } => "lo <= chi <= hi".into(),
            Event::EdgeCountWithin { epsilon } => format!("|E - ET| < {epsilon}*ET"),
        }
    }

    /// Thresholds as reported: integer-effective ends for ω and χ, the
    /// real edge-count window otherwise.
    fn thresholds(&self, mean_edges: f64) -> (Option<f64>, Option<f64>) {
        let lo = |x: f64| Some(bounds::ceil_size(x) as f64);
        let hi = |x: f64| Some(bounds::floor_size(x) as f64);
        match *self {
            Event::OmegaAtLeast { t } => (lo(t), None),
            Event::OmegaAtMost { t } => (None, hi(t)),
            Event::OmegaIn { lo: l, hi: h } | Event::ChiWithin { lo: l, hi: h } => (lo(l), hi(h)),
            Event::EdgeCountWithin { epsilon } => (
                Some(mean_edges * (1.0 - epsilon)),
                Some(mean_edges * (1.0 + epsilon)),
            ),
        }
    }

    fn needs_omega(&self) -> bool {
        matches!(self, Event::OmegaAtLeast { .. } | Event::OmegaAtMost { .. } | Event::OmegaIn { .. })
    }

    fn needs_chi(&self) -> bool {
        matches!(self, Event::ChiWithin { .. })
    }
}

/// A statement to evaluate against the configured model; each implies the
/// event it is checked on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "statement", rename_all = "kebab-case")]
pub enum BoundRef {
    /// `f_n` defaults to `log n`.
    ClqUpperHom {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f_n: Option<f64>,
    },
    ClqUpperInhom { u_n: f64 },
    /// `a` is read from `params.a` (default 0).
    ClqMain {
        case: Case,
        #[serde(default)]
        params: BoundParams,
    },
    Cor {
        case: Case,
        #[serde(default)]
        params: BoundParams,
    },
    Chr {
        case: Case,
        #[serde(default)]
        params: BoundParams,
    },
    Chernoff { epsilon: f64 },
}

struct Evaluated {
    statement_id: String,
    event: Event,
    guarantee: f64,
    vacuous: bool,
}

impl BoundRef {
    fn evaluate(&self, model: &ModelSpec, matrix: &EdgeProbabilityMatrix) -> Result<Evaluated> {
        let n = model.n;
        let single = |r: bounds::BoundReport, event: Event| Evaluated {
            statement_id: r.statement_id,
            event,
            guarantee: r.guarantee_clamped,
            vacuous: r.vacuous,
        };
        let window = |w: bounds::BoundWindow, event: Event| Evaluated {
            statement_id: w.statement_id,
            event,
            guarantee: w.guarantee_clamped,
            vacuous: w.vacuous,
        };
        Ok(match self {
            BoundRef::ClqUpperHom { f_n } => {
                let f_n = f_n.unwrap_or((n as f64).ln());
                let r = clique_upper_hom(n, model.p_n()?, f_n)?;
                let t = r.threshold;
                single(r, Event::OmegaAtMost { t })
            }
            BoundRef::ClqUpperInhom { u_n } => {
                let lat = log_average_tn(matrix, *u_n)?;
                let r = clique_upper_inhom(n, *u_n, lat.conservative())?;
                let t = r.threshold;
                single(r, Event::OmegaAtMost { t })
            }
            BoundRef::ClqMain { case, params } => {
                let a = params.a.unwrap_or(0.0);
                let r = clique_lower_main(*case, n, model.p_n()?, a, params)?;
                let t = r.threshold;
                single(r, Event::OmegaAtLeast { t })
            }
            BoundRef::Cor { case, params } => {
                let w = corollary_window(*case, model, params)?;
                let (lo, hi) = (w.lower.threshold, w.upper.threshold);
                window(w, Event::OmegaIn { lo, hi })
            }
            BoundRef::Chr { case, params } => {
                let w = chromatic_window(*case, model, params)?;
                let (lo, hi) = (w.lower.threshold, w.upper.threshold);
                window(w, Event::ChiWithin { lo, hi })
            }
            BoundRef::Chernoff { epsilon } => {
                let failure = chernoff_tail(*epsilon, matrix.expected_edges())?;
                let r = bounds::BoundReport::new(
                    bounds::ids::CHERNOFF,
                    n,
                    *epsilon,
                    "|E - ET| < epsilon*ET",
                    failure,
                );
                single(r, Event::EdgeCountWithin { epsilon: *epsilon })
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub events: Vec<Event>,
    #[serde(default)]
    pub bound_refs: Vec<BoundRef>,
    #[serde(default)]
    pub budget: Budget,
}

impl ExperimentConfig {
    pub fn new(model: ModelSpec, trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            model,
            trials,
            seed,
            events: Vec::new(),
            bound_refs: Vec::new(),
            budget: Budget::default(),
        }
    }

    pub fn event(mut self, e: Event) -> Self {
        self.events.push(e);
        self
    }

    pub fn bound(mut self, b: BoundRef) -> Self {
        self.bound_refs.push(b);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    /// The Wilson upper limit on the success rate is below the guarantee.
    Violated,
    /// The guarantee is 0 at this `n`; nothing to test.
    BoundVacuous,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Violated => "violated",
            Verdict::BoundVacuous => "bound-vacuous",
        }
    }
}

/// Undecided trials (solver interval straddles a threshold) count as
/// non-successes for `freq`, the Wilson interval and the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRow {
    pub statement_id: Option<String>,
    pub event: Event,
    #[serde(with = "serde_util::float_opt")]
    pub threshold_lo: Option<f64>,
    #[serde(with = "serde_util::float_opt")]
    pub threshold_hi: Option<f64>,
    pub trials: u64,
    pub successes: u64,
    pub undecided: u64,
    pub freq: f64,
    pub wilson: [f64; 2],
    pub guarantee: Option<f64>,
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub version: String,
    pub config: ExperimentConfig,
    pub rows: Vec<EventRow>,
}

fn verdict(guarantee: f64, vacuous: bool, wilson: [f64; 2]) -> Verdict {
    if vacuous || guarantee <= 0.0 {
        Verdict::BoundVacuous
    } else if wilson[1] < guarantee {
        Verdict::Violated
    } else {
        Verdict::Consistent
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Success,
    Failure,
    Undecided,
}

/// `[a, b]` certainly contains the quantity; the event asks for `[lo, hi]`.
fn decide(a: usize, b: usize, lo: u64, hi: u64) -> Outcome {
    let (a, b) = (a as u64, b as u64);
    if lo <= a && b <= hi {
        Outcome::Success
    } else if b < lo || a > hi {
        Outcome::Failure
    } else {
        Outcome::Undecided
    }
}

fn outcome(event: &Event, omega: Option<[usize; 2]>, chi: Option<[usize; 2]>, edges: usize, mean: f64) -> Outcome {
    let c = bounds::ceil_size;
    let f = bounds::floor_size;
    match *event {
        Event::OmegaAtLeast { t } => {
            let [a, b] = omega.expect("omega computed");
            decide(a, b, c(t), u64::MAX)
        }
        Event::OmegaAtMost { t } => {
            let [a, b] = omega.expect("omega computed");
            decide(a, b, 0, f(t))
        }
        Event::OmegaIn { lo, hi } => {
            let [a, b] = omega.expect("omega computed");
            decide(a, b, c(lo), f(hi))
        }
        Event::ChiWithin { lo, hi } => {
            let [a, b] = chi.expect("chi computed");
            decide(a, b, c(lo), f(hi))
        }
        Event::EdgeCountWithin { epsilon } => {
            if (edges as f64 - mean).abs() < epsilon * mean {
                Outcome::Success
            } else {
                Outcome::Failure
            }
        }
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    if config.trials < 1 {
        return Err(invalid("trials must be >= 1"));
    }
    let matrix = build_matrix(&config.model)?;
    let mean = matrix.expected_edges();

    let mut specs: Vec<(Option<String>, Event, Option<(f64, bool)>)> = Vec::new();
    for e in &config.events {
        e.validate()?;
        specs.push((None, e.clone(), None));
    }
    for b in &config.bound_refs {
        let ev = b.evaluate(&config.model, &matrix)?;
        ev.event.validate()?;
        specs.push((Some(ev.statement_id), ev.event, Some((ev.guarantee, ev.vacuous))));
    }
    let need_omega = specs.iter().any(|s| s.1.needs_omega());
    let need_chi = specs.iter().any(|s| s.1.needs_chi());

    let per_trial: Vec<Vec<Outcome>> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let g = sample_graph(&matrix, config.seed, t);
            let omega = need_omega.then(|| max_clique(&g, config.budget).interval);
            let chi = need_chi.then(|| chromatic_exact(&g, config.budget).interval);
            let edges = g.edge_count();
            specs.iter().map(|s| outcome(&s.1, omega, chi, edges, mean)).collect()
        })
        .collect();

    let rows = specs
        .into_iter()
        .enumerate()
        .map(|(k, (statement_id, event, bound))| {
            let (mut successes, mut undecided) = (0u64, 0u64);
            for trial in &per_trial {
                match trial[k] {
                    Outcome::Success => successes += 1,
                    Outcome::Undecided => undecided += 1,
                    Outcome::Failure => {}
                }
            }
            let trials = config.trials;
            let wilson = wilson_interval(successes, trials);
            let verdict = bound.map(|(g, vacuous)| verdict(g, vacuous, wilson));
            let (threshold_lo, threshold_hi) = event.thresholds(mean);
            EventRow {
                statement_id,
                threshold_lo,
                threshold_hi,
                event,
                trials,
                successes,
                undecided,
                freq: successes as f64 / trials as f64,
                wilson,
                guarantee: bound.map(|b| b.0),
                verdict,
            }
        })
        .collect();

    Ok(ExperimentResult {
        version: VERSION.to_string(),
        config: config.clone(),
        rows,
    })
}

pub const CSV_HEADER: [&str; 15] = [
    "statement_id",
    "n",
    "family",
    "params",
    "event",
    "threshold_lo",
    "threshold_hi",
    "trials",
    "successes",
    "undecided",
    "freq",
    "wilson_lo",
    "wilson_hi",
    "guarantee",
    "verdict",
];

/// One CSV row per (experiment, event), ordered by `n` ascending and
/// otherwise in input order.
pub fn summarize(results: &[ExperimentResult]) -> Result<String> {
    if let Some(first) = results.first() {
        if let Some(other) = results.iter().find(|r| r.version != first.version) {
            return Err(Error::MixedVersions(first.version.clone(), other.version.clone()));
        }
    }
    let mut order: Vec<&ExperimentResult> = results.iter().collect();
    order.sort_by_key(|r| r.config.model.n);

    let csv_err = |e: csv::Error| Error::Csv(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    let opt = |x: Option<f64>| x.map_or_else(String::new, |v| v.to_string());
    for r in order {
        let model = &r.config.model;
        for row in &r.rows {
            w.write_record([
                row.statement_id.clone().unwrap_or_default(),
                model.n.to_string(),
                model.family.name().to_string(),
                model.family.params_label(),
                row.event.label(),
                opt(row.threshold_lo),
                opt(row.threshold_hi),
                row.trials.to_string(),
                row.successes.to_string(),
                row.undecided.to_string(),
                row.freq.to_string(),
                row.wilson[0].to_string(),
                row.wilson[1].to_string(),
                opt(row.guarantee),
                row.verdict.map_or("", Verdict::label).to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Csv(e.to_string()))
}

/// The experiments behind the shipped result table: the homogeneous clique
/// upper bound at `n = 30`, the constant-`p` clique window at `n = 100, 300`,
/// the constant-`p` chromatic window at `n = 500`, and an edge-count
/// concentration check on a sparse inhomogeneous-exponent model.
pub fn reference_suite(seed: u64, trials: u64) -> Vec<ExperimentConfig> {
    let cor = BoundRef::Cor {
        case: Case::Ii,
        params: BoundParams::with_eta_gamma(0.3, 0.1).xi(0.5),
    };
    vec![
        ExperimentConfig::new(ModelSpec::constant(30, 0.5), trials, seed)
            .bound(BoundRef::ClqUpperHom { f_n: None }),
        ExperimentConfig::new(ModelSpec::constant(100, 0.5), trials, seed).bound(cor.clone()),
        ExperimentConfig::new(ModelSpec::constant(300, 0.5), trials, seed).bound(cor),
        ExperimentConfig::new(ModelSpec::constant(500, 0.5), (trials / 50).max(1), seed).bound(
            BoundRef::Chr {
                case: Case::Ii,
                params: BoundParams::default().xi(0.5).zeta(0.5),
            },
        ),
        ExperimentConfig::new(ModelSpec::power_law_sparse(200, 0.5), trials, seed)
            .bound(BoundRef::Chernoff { epsilon: 0.1 })
            .event(Event::OmegaAtMost { t: 4.0 }),
    ]
}
