use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::wilson_interval;
use crate::bounds::chernoff_tail;
use crate::error::{invalid, Result};
use crate::rng::{CounterRng, Domain};

/// Monte Carlo check of `P(|X - mp| >= epsilon*mp) <= exp(-epsilon^2 mp / 4)`
/// for `X ~ Binomial(m, p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffCheck {
    pub m: u64,
    pub p: f64,
    pub epsilon: f64,
    pub trials: u64,
    pub seed: u64,
    pub deviations: u64,
    pub freq: f64,
    pub wilson: [f64; 2],
    pub bound: f64,
    /// `sqrt(bound (1 - bound) / trials)`: the spread of `freq` if the
    /// deviation probability were exactly `bound`.
    pub std_err: f64,
    /// `freq <= bound + 4 std_err`.
    pub pass: bool,
}

/// Each trial draws `m` Bernoulli(`p`) variables, four per Philox block,
/// comparing each 32-bit lane against `p * 2^32` (exact for dyadic `p`).
pub fn chernoff_check(m: u64, p: f64, epsilon: f64, trials: u64, seed: u64) -> Result<ChernoffCheck> {
    if m == 0 || trials == 0 {
        return Err(invalid("m and trials must be >= 1"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("p must lie in (0,1), got {p}")));
    }
    let mean = m as f64 * p;
    let bound = chernoff_tail(epsilon, mean)?;
    let cut = (p * 4_294_967_296.0) as u64;

    let hits: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let rng = CounterRng::new(seed, Domain::Bernoulli, t);
            let mut x = 0u64;
            for b in 0..m.div_ceil(4) {
                let lanes = (m - 4 * b).min(4) as usize;
                let block = rng.block(b);
                x += block[..lanes].iter().filter(|&&w| u64::from(w) < cut).count() as u64;
            }
            (x as f64 - mean).abs() >= epsilon * mean
        })
        .collect();
    let deviations = hits.iter().filter(|&&h| h).count() as u64;
    let freq = deviations as f64 / trials as f64;
    let std_err = (bound * (1.0 - bound) / trials as f64).sqrt();
    Ok(ChernoffCheck {
        m,
        p,
        epsilon,
        trials,
        seed,
        deviations,
        freq,
        wilson: wilson_interval(deviations, trials),
        bound,
        std_err,
        pass: freq <= bound + 4.0 * std_err,
    })
}
