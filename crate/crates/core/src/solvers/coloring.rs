use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::clique::clique_search;
use super::{Budget, Quantity, SolveResult, Witness};
use crate::error::{invalid, Result};
use crate::rng::{CounterStream, Domain};
use crate::{serde_util, BitSet, Graph};

/// Largest `n` for which [`chromatic_exact`] runs the exact search when the
/// sandwich is not already tight.
pub const EXACT_CHROMATIC_MAX_N: usize = 70;

const RANDOM_ORDERS: u64 = 10;

/// Smallest-last order, reversed: the last vertex peeled off comes first, so
/// first-fit along it uses at most degeneracy + 1 colors.
pub fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut removed = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("alive vertex");
        alive[v] = false;
        removed.push(v);
        for u in g.neighbors(v).iter() {
            if alive[u] {
                deg[u] -= 1;
            }
        }
    }
    removed.reverse();
    removed
}

fn first_fit(g: &Graph, order: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut colors = vec![usize::MAX; n];
    let mut taken = Vec::new();
    for &v in order {
        taken.clear();
        taken.extend(g.neighbors(v).iter().map(|u| colors[u]).filter(|&c| c != usize::MAX));
        taken.sort_unstable();
        taken.dedup();
        let c = taken.iter().enumerate().find(|&(i, &c)| i != c).map_or(taken.len(), |(i, _)| i);
        colors[v] = c;
    }
    colors
}

fn num_colors(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |&c| c + 1)
}

/// First-fit coloring along `order`, ties broken by lowest color.
pub fn greedy_coloring(g: &Graph, order: &[usize]) -> Result<SolveResult> {
    let n = g.n();
    let mut seen = vec![false; n];
    if order.len() != n || !order.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true)) {
        return Err(invalid("order must be a permutation of the vertices"));
    }
    let colors = first_fit(g, order);
    let k = num_colors(&colors);
    let trivial = usize::from(n > 0) + usize::from(g.edge_count() > 0);
    Ok(SolveResult {
        quantity: Quantity::Chi,
        exact: false,
        value: k,
        interval: [trivial, k],
        witness: Witness::Coloring { colors },
        nodes: 0,
    })
}

/// Certified bracket on χ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticSandwich {
    /// `max(omega_found, ceil(n / alpha_upper))`.
    pub lower: usize,
    /// Colors used by `coloring`.
    pub upper: usize,
    pub omega_found: usize,
    pub alpha_upper: usize,
    #[serde(with = "serde_util::one_based")]
    pub coloring: Vec<usize>,
    #[serde(skip)]
    pub(crate) clique: Vec<usize>,
    pub nodes: u64,
}

/// Lower end from the best clique found and `n / alpha_upper`; upper end from
/// the best first-fit over the degeneracy order and ten fixed random orders.
///
/// `alpha_upper` is the smaller of a greedy clique cover of `g` (a first-fit
/// coloring of the complement) and the search bound on ω of the complement.
pub fn chromatic_sandwich(g: &Graph, budget: Budget) -> ChromaticSandwich {
    let n = g.n();
    let omega = clique_search(g, budget);
    let comp = g.complement();
    let cover = num_colors(&first_fit(&comp, &degeneracy_order(&comp)));
    let alpha = clique_search(&comp, budget);
    let alpha_upper = cover.min(alpha.upper);
    let lower = if n == 0 {
        0
    } else {
        omega.best.len().max(n.div_ceil(alpha_upper))
    };

    let mut best = first_fit(g, &degeneracy_order(g));
    let mut order: Vec<usize> = (0..n).collect();
    for r in 0..RANDOM_ORDERS {
        let mut rng = CounterStream::new(0, Domain::Orders, r);
        order.shuffle(&mut rng);
        let c = first_fit(g, &order);
        if num_colors(&c) < num_colors(&best) {
            best = c;
        }
    }
    ChromaticSandwich {
        lower,
        upper: num_colors(&best),
        omega_found: omega.best.len(),
        alpha_upper,
        coloring: best,
        clique: omega.best,
        nodes: omega.nodes + alpha.nodes,
    }
}

/// DSATUR-style backtracking for a `k`-coloring.
struct KColoring<'a> {
    g: &'a Graph,
    k: usize,
    colors: Vec<usize>,
    forbidden: Vec<u128>,
    uncolored: BitSet,
    used: usize,
    nodes: u64,
    limit: u64,
    aborted: bool,
}

impl KColoring<'_> {
    fn assign(&mut self, v: usize, c: usize, changed: &mut Vec<usize>) {
        self.colors[v] = c;
        self.uncolored.remove(v);
        let bit = 1u128 << c;
        for u in self.g.neighbors(v).iter() {
            if self.forbidden[u] & bit == 0 {
                self.forbidden[u] |= bit;
                changed.push(u);
            }
        }
    }

    fn unassign(&mut self, v: usize, c: usize, changed: &[usize]) {
        let bit = 1u128 << c;
        for &u in changed {
            self.forbidden[u] &= !bit;
        }
        self.colors[v] = usize::MAX;
        self.uncolored.insert(v);
    }

    fn solve(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
            return false;
        }
        let mut pick = None;
        let mut key = (0u32, 0usize);
        for v in self.uncolored.iter() {
            let sat = self.forbidden[v].count_ones();
            if sat as usize >= self.k {
                return false;
            }
            let deg = self.g.neighbors(v).intersection_count(&self.uncolored);
            if pick.is_none() || (sat, deg) > key {
                pick = Some(v);
                key = (sat, deg);
            }
        }
        let Some(v) = pick else { return true };
        let top = (self.used + 1).min(self.k);
        let mut changed = Vec::new();
        for c in 0..top {
            if self.forbidden[v] & (1u128 << c) != 0 {
                continue;
            }
            let prev_used = self.used;
            self.used = self.used.max(c + 1);
            changed.clear();
            self.assign(v, c, &mut changed);
            if self.solve() {
                return true;
            }
            let undo = std::mem::take(&mut changed);
            self.unassign(v, c, &undo);
            changed = undo;
            self.used = prev_used;
            if self.aborted {
                return false;
            }
        }
        false
    }
}

enum Colorable {
    Yes(Vec<usize>),
    No,
    Unknown,
}

fn k_colorable(g: &Graph, k: usize, clique: &[usize], limit: u64, nodes: &mut u64) -> Colorable {
    debug_assert!(k <= 128);
    if clique.len() > k {
        return Colorable::No;
    }
    let n = g.n();
    let mut s = KColoring {
        g,
        k,
        colors: vec![usize::MAX; n],
        forbidden: vec![0; n],
        uncolored: BitSet::full(n),
        used: clique.len(),
        nodes: 0,
        limit,
        aborted: false,
    };
    let mut scratch = Vec::new();
    for (c, &v) in clique.iter().enumerate() {
        s.assign(v, c, &mut scratch);
    }
    let ok = s.solve();
    *nodes += s.nodes;
    if ok {
        Colorable::Yes(s.colors)
    } else if s.aborted {
        Colorable::Unknown
    } else {
        Colorable::No
    }
}

/// Chromatic number by iterative deepening from the sandwich's lower end,
/// with the found clique precolored. Searched only when `n <=`
/// [`EXACT_CHROMATIC_MAX_N`] or the sandwich is tight; otherwise, or when the
/// budget runs out, the result is the sandwich interval.
pub fn chromatic_exact(g: &Graph, budget: Budget) -> SolveResult {
    let sw = chromatic_sandwich(g, budget);
    let mut nodes = sw.nodes;
    let done = |lower: usize, colors: Vec<usize>, nodes: u64| {
        let k = num_colors(&colors);
        SolveResult {
            quantity: Quantity::Chi,
            exact: lower == k,
            value: k,
            interval: [lower, k],
            witness: Witness::Coloring { colors },
            nodes,
        }
    };
    if sw.lower >= sw.upper || g.n() > EXACT_CHROMATIC_MAX_N {
        return done(sw.lower, sw.coloring, nodes);
    }
    let limit = budget.max_nodes;
    for k in sw.lower..sw.upper {
        match k_colorable(g, k, &sw.clique, limit.saturating_sub(nodes), &mut nodes) {
            Colorable::Yes(colors) => return done(k, colors, nodes),
            Colorable::No => {}
            Colorable::Unknown => return done(k, sw.coloring, nodes),
        }
    }
    done(sw.upper, sw.coloring, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_graphs() {
        let b = Budget::default();
        for (g, chi) in [
            (Graph::cycle(5), 3),
            (Graph::cycle(6), 2),
            (Graph::complete(6), 6),
            (Graph::petersen(), 3),
            (Graph::complete_bipartite(3, 3), 2),
            (Graph::empty(4), 1),
            (Graph::empty(0), 0),
        ] {
            let r = chromatic_exact(&g, b);
            assert!(r.exact, "{r:?}");
            assert_eq!(r.value, chi);
            assert!(r.witness.verify(&g));
            assert_eq!(r.witness.size(), chi);
        }
    }

    #[test]
    fn sandwich_examples() {
        let s = chromatic_sandwich(&Graph::cycle(5), Budget::default());
        assert_eq!((s.lower, s.upper), (3, 3));
        assert_eq!(s.alpha_upper, 2);
        let s = chromatic_sandwich(&Graph::complete(6), Budget::default());
        assert_eq!((s.lower, s.upper), (6, 6));
    }

    #[test]
    fn greedy_examples() {
        let k = Graph::complete(5);
        let order = [4, 2, 0, 1, 3];
        assert_eq!(greedy_coloring(&k, &order).unwrap().value, 5);
        let b = Graph::complete_bipartite(3, 3);
        let r = greedy_coloring(&b, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(r.value, 2);
        assert!(!r.exact);
        assert!(greedy_coloring(&b, &[0, 1, 2, 3, 4]).is_err());
        assert!(greedy_coloring(&b, &[0, 1, 2, 3, 4, 4]).is_err());
        assert!(greedy_coloring(&b, &[0, 1, 2, 3, 4, 6]).is_err());
    }

    #[test]
    fn crown_graph_defeats_natural_order() {
        // K_{4,4} minus a perfect matching, interleaved: first-fit needs 4 colors.
        let mut g = Graph::empty(8);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    g.add_edge(2 * i, 2 * j + 1);
                }
            }
        }
        let natural: Vec<usize> = (0..8).collect();
        assert_eq!(greedy_coloring(&g, &natural).unwrap().value, 4);
        let r = chromatic_exact(&g, Budget::default());
        assert_eq!((r.value, r.exact), (2, true));
    }

    #[test]
    fn degeneracy_order_is_a_permutation() {
        let g = Graph::petersen();
        let mut o = degeneracy_order(&g);
        o.sort_unstable();
        assert_eq!(o, (0..10).collect::<Vec<_>>());
    }
}
