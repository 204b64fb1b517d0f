use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Materialized size recursion `q_i = floor((p - delta)(q_{i-1} - 1))`
/// together with its closed-form envelopes and the resulting bound on the
/// probability that `G(q, p)` has no `L`-clique.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionChain {
    pub q0: u64,
    pub p: f64,
    pub delta: f64,
    pub epsilon: f64,
    #[serde(rename = "L")]
    pub depth: usize,
    pub a_floor: f64,
    /// `q_0 ..= q_L`.
    pub q_seq: Vec<i64>,
    /// `v_i = (p - delta)^i q - 1/(1 - p + delta)` for `i = 0 ..= L`.
    pub v_seq: Vec<f64>,
    /// `(p - delta)^i q`, an upper envelope for `q_i`.
    pub upper_seq: Vec<f64>,
    /// `(p - delta)^i q - (1 + x)(1 - x^i)/(1 - x)` with `x = p - delta`.
    /// Strictly below `q_i` for every `i`, since `floor(y) > y - 1`.
    pub valid_lower_seq: Vec<f64>,
    /// Steps `i` where `v_i > q_i`, i.e. where `v_i` fails as a lower envelope.
    pub v_lower_violations: Vec<usize>,
    #[serde(rename = "A1")]
    pub a1: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
    /// `exp(-A1) + 2 exp(-A2)`.
    pub t_bound: f64,
    /// `v_L >= q^a_floor`.
    pub hypothesis_ok: bool,
    /// `t_bound >= 1`.
    pub vacuous: bool,
}

impl RecursionChain {
    /// The bound is usable only when the size hypothesis holds and it is not vacuous.
    pub fn applicable(&self) -> bool {
        self.hypothesis_ok && !self.vacuous
    }

    /// `v_i <= q_i <= (p - delta)^i q` for every `i` in `1 ..= L`.
    pub fn envelope_holds(&self) -> bool {
        (1..=self.depth).all(|i| {
            let q = self.q_seq[i] as f64;
            self.v_seq[i] <= q + 1e-9 && q <= self.upper_seq[i] + 1e-9 * self.upper_seq[i].abs().max(1.0)
        })
    }
}

pub fn recursion_chain(
    q: u64,
    p: f64,
    delta: f64,
    epsilon: f64,
    depth: usize,
    a_floor: f64,
) -> Result<RecursionChain> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("p must lie in (0,1), got {p}")));
    }
    if !(delta > 0.0 && delta < p) {
        return Err(invalid(format!(
            "delta must lie in (0, p) so that q_1 stays positive, got delta = {delta}, p = {p}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0 / 6.0) {
        return Err(invalid(format!("epsilon must lie in (0, 1/6), got {epsilon}")));
    }
    if depth < 2 {
        return Err(invalid(format!("L must be >= 2, got {depth}")));
    }
    if q < 1 {
        return Err(invalid("q must be >= 1"));
    }
    let x = p - delta;
    let qf = q as f64;
    let shift = 1.0 / (1.0 - p + delta);

    let mut q_seq = Vec::with_capacity(depth + 1);
    q_seq.push(q as i64);
    for i in 1..=depth {
        let prev = q_seq[i - 1] as f64;
        q_seq.push((x * (prev - 1.0)).floor() as i64);
    }
    let upper_seq: Vec<f64> = (0..=depth).map(|i| x.powi(i as i32) * qf).collect();
    let v_seq: Vec<f64> = upper_seq.iter().map(|u| u - shift).collect();
    let valid_lower_seq: Vec<f64> = (0..=depth)
        .map(|i| {
            let xi = x.powi(i as i32);
            xi * qf - (1.0 + x) * (1.0 - xi) / (1.0 - x)
        })
        .collect();
    let v_lower_violations = (1..=depth)
        .filter(|&i| v_seq[i] > q_seq[i] as f64)
        .collect();

    let v_l = v_seq[depth];
    let l_log_q = depth as f64 * qf.ln();
    let a1 = -l_log_q + (-(-p).ln_1p()) * v_l * v_l / 4.0;
    let a2 = epsilon * delta * v_l * v_l / 10.0 - l_log_q;
    let t_bound = (-a1).exp() + 2.0 * (-a2).exp();

    Ok(RecursionChain {
        q0: q,
        p,
        delta,
        epsilon,
        depth,
        a_floor,
        q_seq,
        v_seq,
        upper_seq,
        valid_lower_seq,
        v_lower_violations,
        a1,
        a2,
        t_bound,
        hypothesis_ok: v_l >= qf.powf(a_floor),
        vacuous: t_bound >= 1.0,
    })
}

/// `x < -log(1 - x) < x / (1 - x)` on `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogSandwich {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

pub fn log_bounds(x: f64) -> Result<LogSandwich> {
    if !(x > 0.0 && x < 1.0) {
        return Err(invalid(format!("x must lie in (0,1), got {x}")));
    }
    let s = LogSandwich {
        lower: x,
        value: -(-x).ln_1p(),
        upper: x / (1.0 - x),
    };
    if !(s.lower < s.value && s.value < s.upper) {
        return Err(Error::Numerical(format!(
            "ordering not strict in double precision at x = {x}: {s:?}"
        )));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_chain() {
        let c = recursion_chain(100, 0.5, 0.05, 0.1, 2, 0.0).unwrap();
        assert_eq!(c.q_seq, vec![100, 44, 19]);
        // v_2 = 0.45^2 * 100 - 1/0.55
        assert!((c.v_seq[2] - 18.431_818_181_818_18).abs() < 1e-12, "{}", c.v_seq[2]);
        assert!((c.a1 - 49.660_715_509_360_05).abs() < 1e-9, "{}", c.a1);
        assert!((c.a2 - -9.040_474_411_232_381).abs() < 1e-9, "{}", c.a2);
        assert!(c.vacuous);
        assert!(c.hypothesis_ok);
        assert!(!c.applicable());
        assert!(c.envelope_holds());
    }

    #[test]
    fn literal_envelope_can_fail() {
        // floor() can lose almost (1 + x) per step, more than 1/(1 - x) allows.
        let c = recursion_chain(17621, 0.555_363_099_857_769_8, 0.555_363_099_857_769_8 * 0.133_710_843_528_030_6, 0.133_710_843_528_030_6, 3, 0.0).unwrap();
        assert_eq!(c.q_seq[3], 1960);
        assert_eq!(c.v_lower_violations, vec![3]);
        assert!(!c.envelope_holds());
        assert!(c.valid_lower_seq[3] < 1960.0);
    }

    #[test]
    fn argument_checks() {
        assert!(recursion_chain(100, 0.5, 0.5, 0.1, 2, 0.0).is_err());
        assert!(recursion_chain(100, 0.5, 0.6, 0.1, 2, 0.0).is_err());
        assert!(recursion_chain(100, 0.5, 0.05, 0.2, 2, 0.0).is_err());
        assert!(recursion_chain(100, 0.5, 0.05, 0.1, 1, 0.0).is_err());
    }

    #[test]
    fn hypothesis_failure_is_reported_not_raised() {
        let c = recursion_chain(20, 0.5, 0.05, 0.1, 5, 0.9).unwrap();
        assert!(!c.hypothesis_ok);
        assert!(!c.applicable());
    }

    #[test]
    fn log_sandwich_examples() {
        let s = log_bounds(0.5).unwrap();
        assert_eq!(s.lower, 0.5);
        assert!((s.value - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(s.upper, 1.0);

        let s = log_bounds(1e-8).unwrap();
        assert!((s.upper - s.lower) / s.lower < 1e-7);
        assert!(log_bounds(0.999).is_ok());
        assert!(log_bounds(0.0).is_err());
        assert!(log_bounds(1.0).is_err());
    }
}
