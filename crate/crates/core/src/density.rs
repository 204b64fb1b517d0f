//! Per-vertex average density floors and the log-average edge weight over
//! vertex sets of a given size.

use std::cmp::Ordering;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::EdgeProbabilityMatrix;
use crate::serde_util;

/// Largest number of `k`-sets enumerated before falling back to a bracket.
pub const EXACT_ENUMERATION_LIMIT: u128 = 1_000_000;

/// Pointwise witness for the density floor at one `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityCertificate {
    pub a: f64,
    /// Minimum admissible set size `ceil(n^a)`.
    pub m: usize,
    pub p_floor: f64,
    #[serde(with = "one_based_index")]
    pub witness_vertex: usize,
    #[serde(with = "serde_util::one_based")]
    pub witness_set: Vec<usize>,
    pub scope: String,
}

mod one_based_index {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*v as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        usize::deserialize(d)?
            .checked_sub(1)
            .ok_or_else(|| serde::de::Error::custom("vertex labels are 1-based"))
    }
}

impl DensityCertificate {
    /// Whether the matrix meets the floor `p_n` at this `n`.
    pub fn satisfies(&self, p_n: f64) -> bool {
        self.p_floor >= p_n
    }
}

/// `ceil(n^a)`, with a relative slack so that exact powers such as
/// `5^(log 2 / log 5)` are not pushed up by rounding.
pub fn min_set_size(n: usize, a: f64) -> usize {
    let x = (n as f64).powf(a);
    let m = (x * (1.0 - 1e-12)).ceil() as usize;
    m.max(1)
}

/// Minimum over vertices `i` and sets `S` (`i` not in `S`, `|S| >= ceil(n^a)`)
/// of the mean of `p(i, j)` over `j` in `S`.
///
/// For a fixed `i` the minimum is the mean of the `m` smallest entries of row
/// `i`: any additional entry is at least as large as that mean, so enlarging
/// the set never lowers the average.
pub fn min_average_density(matrix: &EdgeProbabilityMatrix, a: f64) -> Result<DensityCertificate> {
    if !(0.0..1.0).contains(&a) {
        return Err(invalid(format!("a must lie in [0,1), got {a}")));
    }
    let n = matrix.n();
    let m = min_set_size(n, a);
    if n < 2 || m > n - 1 {
        return Err(invalid(format!(
            "no admissible set: ceil(n^a) = {m} exceeds n - 1 = {}",
            n.saturating_sub(1)
        )));
    }
    let mut best: Option<(f64, usize, Vec<usize>)> = None;
    let mut row: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for i in 0..n {
        row.clear();
        row.extend(matrix.row(i).map(|(j, p)| (p, j)));
        row.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let mean = row[..m].iter().map(|x| x.0).sum::<f64>() / m as f64;
        if best.as_ref().is_none_or(|b| mean < b.0) {
            let mut set: Vec<usize> = row[..m].iter().map(|x| x.1).collect();
            set.sort_unstable();
            best = Some((mean, i, set));
        }
    }
    let (p_floor, witness_vertex, witness_set) = best.expect("n >= 2");
    Ok(DensityCertificate {
        a,
        m,
        p_floor,
        witness_vertex,
        witness_set,
        scope: "pointwise certificate at this n".to_string(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogAverageMode {
    Exact,
    CertifiedBracket,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogAverageResult {
    pub u_n: f64,
    /// Set size `floor(u_n)`.
    pub k: usize,
    pub mode: LogAverageMode,
    /// `log(1/t_n)` in exact mode (may be infinite).
    #[serde(with = "serde_util::float_opt")]
    pub value: Option<f64>,
    /// `[lower, upper]` on `log(1/t_n)` in bracket mode.
    #[serde(with = "serde_util::float_pair_opt")]
    pub bracket: Option<[f64; 2]>,
    #[serde(with = "serde_util::one_based_opt")]
    pub witness_set: Option<Vec<usize>>,
}

impl LogAverageResult {
    /// A value never above the true `log(1/t_n)`: the exact value, or the
    /// bracket's lower end. Feeding this into the clique upper bound keeps
    /// the guarantee valid.
    pub fn conservative(&self) -> f64 {
        match (self.value, self.bracket) {
            (Some(v), _) => v,
            (None, Some([lo, _])) => lo,
            _ => unreachable!("result carries a value or a bracket"),
        }
    }
}

/// Sum of pair weights with infinite terms counted separately, so that sums
/// containing `log(1/0)` can still be compared and updated exactly.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct PairCost {
    infinite: i64,
    finite: f64,
}

impl PairCost {
    fn of(w: f64) -> Self {
        if w.is_infinite() {
            PairCost {
                infinite: 1,
                finite: 0.0,
            }
        } else {
            PairCost {
                infinite: 0,
                finite: w,
            }
        }
    }

    fn cmp(&self, other: &Self) -> Ordering {
        self.infinite
            .cmp(&other.infinite)
            .then(self.finite.total_cmp(&other.finite))
    }

    fn mean(&self, pairs: usize) -> f64 {
        if self.infinite > 0 {
            f64::INFINITY
        } else {
            self.finite / pairs as f64
        }
    }
}

impl Add for PairCost {
    type Output = PairCost;
    fn add(self, o: PairCost) -> PairCost {
        PairCost {
            infinite: self.infinite + o.infinite,
            finite: self.finite + o.finite,
        }
    }
}

impl Sub for PairCost {
    type Output = PairCost;
    fn sub(self, o: PairCost) -> PairCost {
        PairCost {
            infinite: self.infinite - o.infinite,
            finite: self.finite - o.finite,
        }
    }
}

struct Weights {
    n: usize,
    w: Vec<PairCost>,
}

impl Weights {
    fn new(matrix: &EdgeProbabilityMatrix) -> Self {
        let n = matrix.n();
        let mut w = vec![PairCost::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    w[i * n + j] = PairCost::of(-matrix.get(i, j).ln());
                }
            }
        }
        Weights { n, w }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> PairCost {
        self.w[i * self.n + j]
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if acc == u128::MAX {
            break;
        }
    }
    acc
}

/// `log(1/t_n)`: the minimum over vertex sets of size `floor(u_n)` of the mean
/// of `log(1/p(i,j))` over the pairs inside the set.
///
/// Enumerates every set when there are at most [`EXACT_ENUMERATION_LIMIT`] of
/// them; otherwise returns a bracket whose lower end is the mean of the
/// globally smallest `C(k,2)` pair weights and whose upper end comes from
/// greedy construction plus 1-swap local search.
pub fn log_average_tn(matrix: &EdgeProbabilityMatrix, u_n: f64) -> Result<LogAverageResult> {
    if !u_n.is_finite() || u_n < 2.0 {
        return Err(invalid(format!("u_n must be a finite real >= 2, got {u_n}")));
    }
    let n = matrix.n();
    let k = u_n.floor() as usize;
    if k > n {
        return Err(invalid(format!("set size {k} exceeds n = {n}")));
    }
    let weights = Weights::new(matrix);
    let pairs = k * (k - 1) / 2;
    if binomial(n, k) <= EXACT_ENUMERATION_LIMIT {
        let (cost, set) = enumerate_min(&weights, k);
        Ok(LogAverageResult {
            u_n,
            k,
            mode: LogAverageMode::Exact,
            value: Some(cost.mean(pairs)),
            bracket: None,
            witness_set: Some(set),
        })
    } else {
        Ok(LogAverageResult {
            u_n,
            k,
            mode: LogAverageMode::CertifiedBracket,
            value: None,
            bracket: Some(bracket(&weights, k)),
            witness_set: None,
        })
    }
}

fn bracket(weights: &Weights, k: usize) -> [f64; 2] {
    let pairs = k * (k - 1) / 2;
    let lower = smallest_pairs_mean(weights, pairs);
    let (cost, _) = local_search(weights, k);
    [lower, cost.mean(pairs)]
}

/// The bracket [`log_average_tn`] falls back to, computed regardless of
/// instance size.
pub fn log_average_bracket(matrix: &EdgeProbabilityMatrix, u_n: f64) -> Result<[f64; 2]> {
    if !u_n.is_finite() || u_n < 2.0 {
        return Err(invalid(format!("u_n must be a finite real >= 2, got {u_n}")));
    }
    let k = u_n.floor() as usize;
    if k > matrix.n() {
        return Err(invalid(format!("set size {k} exceeds n = {}", matrix.n())));
    }
    Ok(bracket(&Weights::new(matrix), k))
}

/// Exhaustive depth-first search over `k`-subsets in lexicographic order;
/// the first minimum found wins ties.
fn enumerate_min(w: &Weights, k: usize) -> (PairCost, Vec<usize>) {
    struct Search<'a> {
        w: &'a Weights,
        k: usize,
        stack: Vec<usize>,
        best: Option<(PairCost, Vec<usize>)>,
    }

    impl Search<'_> {
        fn go(&mut self, start: usize, cost: PairCost) {
            if self.stack.len() == self.k {
                if self.best.as_ref().is_none_or(|b| cost.cmp(&b.0) == Ordering::Less) {
                    self.best = Some((cost, self.stack.clone()));
                }
                return;
            }
            let need = self.k - self.stack.len();
            for v in start..=self.w.n - need {
                let add = self
                    .stack
                    .iter()
                    .fold(PairCost::default(), |acc, &u| acc + self.w.get(u, v));
                self.stack.push(v);
                self.go(v + 1, cost + add);
                self.stack.pop();
            }
        }
    }

    let mut s = Search {
        w,
        k,
        stack: Vec::with_capacity(k),
        best: None,
    };
    s.go(0, PairCost::default());
    s.best.expect("k <= n")
}

fn smallest_pairs_mean(w: &Weights, pairs: usize) -> f64 {
    let mut all: Vec<f64> = Vec::with_capacity(w.n * (w.n - 1) / 2);
    for i in 0..w.n {
        for j in i + 1..w.n {
            let c = w.get(i, j);
            all.push(if c.infinite > 0 { f64::INFINITY } else { c.finite });
        }
    }
    all.sort_by(f64::total_cmp);
    let s: f64 = all[..pairs].iter().sum();
    s / pairs as f64
}

/// Greedy growth from every start vertex, then best-improvement 1-swaps on the
/// best greedy set.
fn local_search(w: &Weights, k: usize) -> (PairCost, Vec<usize>) {
    let n = w.n;
    let mut best: Option<(PairCost, Vec<bool>)> = None;
    for s in 0..n {
        let mut inside = vec![false; n];
        inside[s] = true;
        let mut attach: Vec<PairCost> = (0..n).map(|v| if v == s { PairCost::default() } else { w.get(s, v) }).collect();
        let mut cost = PairCost::default();
        for _ in 1..k {
            let v = (0..n)
                .filter(|&v| !inside[v])
                .min_by(|&a, &b| attach[a].cmp(&attach[b]).then(a.cmp(&b)))
                .expect("k <= n");
            cost = cost + attach[v];
            inside[v] = true;
            for u in 0..n {
                if u != v {
                    attach[u] = attach[u] + w.get(u, v);
                }
            }
        }
        if best.as_ref().is_none_or(|b| cost.cmp(&b.0) == Ordering::Less) {
            best = Some((cost, inside));
        }
    }
    let (mut cost, mut inside) = best.expect("n >= 1");

    // attach[x] = sum of weights from x to the current set, excluding x itself.
    let mut attach: Vec<PairCost> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x && inside[y])
                .fold(PairCost::default(), |acc, y| acc + w.get(x, y))
        })
        .collect();
    for _ in 0..10_000 {
        let mut mv: Option<(PairCost, usize, usize)> = None;
        for u in (0..n).filter(|&u| inside[u]) {
            for v in (0..n).filter(|&v| !inside[v]) {
                let next = cost - attach[u] + attach[v] - w.get(u, v);
                let improves = match next.infinite.cmp(&cost.infinite) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => next.finite < cost.finite - 1e-12 * cost.finite.abs().max(1.0),
                };
                if improves && mv.as_ref().is_none_or(|m| next.cmp(&m.0) == Ordering::Less) {
                    mv = Some((next, u, v));
                }
            }
        }
        let Some((next, u, v)) = mv else { break };
        inside[u] = false;
        inside[v] = true;
        for x in 0..n {
            if x != u {
                attach[x] = attach[x] - w.get(x, u);
            }
            if x != v {
                attach[x] = attach[x] + w.get(x, v);
            }
        }
        cost = next;
    }
    // Recompute from scratch so the reported value carries no drift.
    let set: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
    let mut exact = PairCost::default();
    for (a, &x) in set.iter().enumerate() {
        for &y in &set[a + 1..] {
            exact = exact + w.get(x, y);
        }
    }
    (exact, set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_matrix() -> EdgeProbabilityMatrix {
        // Row 1 (0-based row 0) holds {0.1, 0.2, 0.9, 0.9}; everything else 0.9.
        let mut m = EdgeProbabilityMatrix::constant(5, 0.9).unwrap();
        m.set(0, 1, 0.1);
        m.set(0, 2, 0.2);
        m
    }

    #[test]
    fn constant_floor() {
        let m = EdgeProbabilityMatrix::constant(9, 0.3).unwrap();
        for a in [0.0, 0.3, 0.7] {
            let c = min_average_density(&m, a).unwrap();
            assert!((c.p_floor - 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn small_example_floor() {
        let a = 2f64.ln() / 5f64.ln();
        let c = min_average_density(&example_matrix(), a).unwrap();
        assert_eq!(c.m, 2);
        assert!((c.p_floor - 0.15).abs() < 1e-12);
        assert_eq!(c.witness_vertex, 0);
        assert_eq!(c.witness_set, vec![1, 2]);
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["witness_vertex"], 1);
        assert_eq!(json["witness_set"], serde_json::json!([2, 3]));
    }

    #[test]
    fn zero_exponent_is_min_entry() {
        let c = min_average_density(&example_matrix(), 0.0).unwrap();
        assert_eq!(c.m, 1);
        assert_eq!(c.p_floor, 0.1);
    }

    #[test]
    fn no_admissible_set() {
        let m = EdgeProbabilityMatrix::constant(4, 0.5).unwrap();
        assert!(min_average_density(&m, 0.99).is_err());
        assert!(min_average_density(&m, 1.0).is_err());
    }

    #[test]
    fn constant_log_average() {
        let m = EdgeProbabilityMatrix::constant(8, 0.25).unwrap();
        let r = log_average_tn(&m, 3.7).unwrap();
        assert_eq!(r.k, 3);
        assert_eq!(r.mode, LogAverageMode::Exact);
        let v = r.value.unwrap();
        assert!((v - 4f64.ln()).abs() < 1e-12 * 4f64.ln());
    }

    #[test]
    fn zero_entries_give_infinite_log_average() {
        let m = EdgeProbabilityMatrix::constant(5, 0.0).unwrap();
        let r = log_average_tn(&m, 3.0).unwrap();
        assert_eq!(r.value, Some(f64::INFINITY));
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains(r#""value":"inf""#), "{s}");
        let back: LogAverageResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back.value, Some(f64::INFINITY));
    }

    #[test]
    fn zero_entries_avoided_when_possible() {
        let mut m = EdgeProbabilityMatrix::constant(5, 0.5).unwrap();
        m.set(0, 1, 0.0);
        let r = log_average_tn(&m, 3.0).unwrap();
        assert!((r.value.unwrap() - 2f64.ln()).abs() < 1e-12);
        let ws = r.witness_set.unwrap();
        assert!(!(ws.contains(&0) && ws.contains(&1)));
    }

    #[test]
    fn bracket_mode_for_large_instances() {
        let m = EdgeProbabilityMatrix::from_fn(60, |i, j| 0.05 + 0.9 * (((i * 31 + j * 17) % 97) as f64 / 97.0)).unwrap();
        let r = log_average_tn(&m, 10.0).unwrap();
        assert_eq!(r.mode, LogAverageMode::CertifiedBracket);
        let [lo, hi] = r.bracket.unwrap();
        assert!(lo <= hi && lo.is_finite());
        assert_eq!(r.conservative(), lo);
    }

    #[test]
    fn bad_sizes() {
        let m = EdgeProbabilityMatrix::constant(4, 0.5).unwrap();
        assert!(log_average_tn(&m, 1.5).is_err());
        assert!(log_average_tn(&m, 5.0).is_err());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(60, 10), 75_394_027_566);
        assert_eq!(binomial(3, 5), 0);
    }
}
