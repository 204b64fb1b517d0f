//! Exhaustive reference implementations for small instances. They share no
//! code with the library beyond the `Graph` accessors.
#![allow(dead_code)]

use cliquebound::model::{sample_graph, EdgeProbabilityMatrix};
use cliquebound::Graph;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| (0..g.n()).filter(|&u| g.has_edge(v, u)).fold(0, |m, u| m | 1 << u))
        .collect()
}

fn is_clique(adj: &[u32], set: u32) -> bool {
    (0..adj.len()).all(|v| set >> v & 1 == 0 || set & !(1 << v) & !adj[v] == 0)
}

fn is_independent(adj: &[u32], set: u32) -> bool {
    (0..adj.len()).all(|v| set >> v & 1 == 0 || set & adj[v] == 0)
}

pub fn omega(g: &Graph) -> usize {
    let adj = masks(g);
    (0u32..1 << g.n())
        .filter(|&s| is_clique(&adj, s))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn alpha(g: &Graph) -> usize {
    let adj = masks(g);
    (0u32..1 << g.n())
        .filter(|&s| is_independent(&adj, s))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Minimum number of independent sets covering the vertices, by DP over subsets.
pub fn chi(g: &Graph) -> usize {
    let n = g.n();
    let adj = masks(g);
    let full = (1usize << n) - 1;
    let indep: Vec<bool> = (0..=full).map(|s| is_independent(&adj, s as u32)).collect();
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        // sub ranges over subsets of `rest`; each class contains the lowest vertex.
        let mut sub = rest;
        loop {
            let class = sub | low;
            if indep[class] && best[s ^ class] != usize::MAX {
                best[s] = best[s].min(best[s ^ class] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full]
}

/// Minimum over `i` and every set `S` with `i` not in `S`, `|S| >= m`, of the mean of `p(i, S)`.
pub fn min_average_density(rows: &[Vec<f64>], m: usize) -> f64 {
    let n = rows.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for s in 0u32..1 << n {
            if s >> i & 1 == 1 || (s.count_ones() as usize) < m {
                continue;
            }
            let sum: f64 = (0..n).filter(|&j| s >> j & 1 == 1).map(|j| rows[i][j]).sum();
            best = best.min(sum / s.count_ones() as f64);
        }
    }
    best
}

/// Minimum over `k`-sets of the mean of `-ln p` over the pairs inside.
pub fn log_average(rows: &[Vec<f64>], k: usize) -> f64 {
    let n = rows.len();
    let pairs = (k * (k - 1) / 2) as f64;
    let mut best = f64::INFINITY;
    for s in 0u32..1 << n {
        if s.count_ones() as usize != k {
            continue;
        }
        let mut sum = 0.0;
        for j in 0..n {
            for i in 0..j {
                if s >> i & 1 == 1 && s >> j & 1 == 1 {
                    sum += -rows[i][j].ln();
                }
            }
        }
        best = best.min(sum / pairs);
    }
    best
}

/// Symmetric matrix with entries uniform in `[lo, 1]`, zero diagonal.
pub fn random_rows(n: usize, seed: u64, lo: f64) -> Vec<Vec<f64>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rows = vec![vec![0.0; n]; n];
    for j in 1..n {
        for i in 0..j {
            let p = rng.random_range(lo..=1.0);
            rows[i][j] = p;
            rows[j][i] = p;
        }
    }
    rows
}

pub fn gnp(n: usize, p: f64, seed: u64, trial: u64) -> Graph {
    sample_graph(&EdgeProbabilityMatrix::constant(n, p).unwrap(), seed, trial)
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}
