use super::coloring::degeneracy_order;
use super::{Budget, Quantity, SolveResult, Witness};
use crate::{BitSet, Graph};

pub(crate) struct CliqueSearch {
    /// Best clique found, original labels, sorted.
    pub best: Vec<usize>,
    /// Certified upper bound on ω.
    pub upper: usize,
    pub exact: bool,
    pub nodes: u64,
}

struct Search<'a> {
    adj: &'a [BitSet],
    current: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    limit: u64,
    aborted: bool,
}

impl Search<'_> {
    /// Sequential greedy coloring of `p` in index order. Returns the vertices
    /// whose color is at least `kmin`, paired with their color, in
    /// nondecreasing color order.
    fn color_sort(&self, p: &BitSet, kmin: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut uncolored = p.clone();
        let mut k = 0;
        while !uncolored.is_empty() {
            k += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                uncolored.remove(v);
                q.remove(v);
                q.difference_with(&self.adj[v]);
                if k >= kmin {
                    out.push((v, k));
                }
            }
        }
        out
    }

    fn expand(&mut self, mut p: BitSet) {
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
            return;
        }
        let kmin = (self.best.len() + 1).saturating_sub(self.current.len()).max(1);
        let order = self.color_sort(&p, kmin);
        for &(v, color) in order.iter().rev() {
            if self.current.len() + color <= self.best.len() {
                return;
            }
            self.current.push(v);
            let next = p.intersection(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            if self.aborted {
                return;
            }
            p.remove(v);
        }
    }
}

/// Branch and bound over bitsets with greedy-coloring bounds (BBMC style),
/// vertices renumbered so that high-core vertices come first.
pub(crate) fn clique_search(g: &Graph, budget: Budget) -> CliqueSearch {
    let n = g.n();
    if n == 0 {
        return CliqueSearch {
            best: Vec::new(),
            upper: 0,
            exact: true,
            nodes: 0,
        };
    }
    let order = degeneracy_order(g);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let adj: Vec<BitSet> = order
        .iter()
        .map(|&v| BitSet::from_iter_with_len(n, g.neighbors(v).iter().map(|u| pos[u])))
        .collect();

    // Greedy start: walk the order, keep every vertex adjacent to all kept so far.
    let mut seed = Vec::new();
    let mut cand = BitSet::full(n);
    while let Some(v) = cand.first() {
        seed.push(v);
        cand.intersect_with(&adj[v]);
    }

    let mut s = Search {
        adj: &adj,
        current: Vec::new(),
        best: seed,
        nodes: 1,
        limit: budget.max_nodes.max(1),
        aborted: false,
    };

    // Root level is unrolled so that an abort still yields a bound: once the
    // vertices above the current one are exhausted, every remaining vertex
    // has color <= the current color, so no unseen clique is larger.
    let root = BitSet::full(n);
    let order_root = s.color_sort(&root, 1);
    let mut upper = order_root.last().map_or(0, |&(_, k)| k);
    let mut p = root;
    for &(v, color) in order_root.iter().rev() {
        if color <= s.best.len() {
            break;
        }
        s.current.push(v);
        let next = p.intersection(&adj[v]);
        if next.is_empty() {
            if s.best.is_empty() {
                s.best = vec![v];
            }
        } else {
            s.expand(next);
        }
        s.current.pop();
        if s.aborted {
            upper = upper.min(color);
            break;
        }
        p.remove(v);
    }
    let exact = !s.aborted;
    let upper = if exact { s.best.len() } else { upper.max(s.best.len()) };
    let mut best: Vec<usize> = s.best.iter().map(|&i| order[i]).collect();
    best.sort_unstable();
    CliqueSearch {
        best,
        upper,
        exact,
        nodes: s.nodes,
    }
}

/// Clique number. Exact with a witness clique when the search finishes within
/// `budget`; otherwise `[best found, coloring bound]`.
pub fn max_clique(g: &Graph, budget: Budget) -> SolveResult {
    let r = clique_search(g, budget);
    SolveResult {
        quantity: Quantity::Omega,
        exact: r.exact,
        value: r.best.len(),
        interval: [r.best.len(), r.upper],
        witness: Witness::Clique { vertices: r.best },
        nodes: r.nodes,
    }
}

/// Independence number, as the clique number of the complement.
pub fn independence_number(g: &Graph, budget: Budget) -> SolveResult {
    let r = clique_search(&g.complement(), budget);
    SolveResult {
        quantity: Quantity::Alpha,
        exact: r.exact,
        value: r.best.len(),
        interval: [r.best.len(), r.upper],
        witness: Witness::IndependentSet { vertices: r.best },
        nodes: r.nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        let b = Budget::default();
        assert_eq!(max_clique(&Graph::cycle(5), b).value, 2);
        assert_eq!(max_clique(&Graph::complete(6), b).value, 6);
        assert_eq!(max_clique(&Graph::empty(4), b).value, 1);
        assert_eq!(max_clique(&Graph::empty(0), b).value, 0);
        assert_eq!(max_clique(&Graph::petersen(), b).value, 2);
        assert_eq!(independence_number(&Graph::empty(7), b).value, 7);
        assert_eq!(independence_number(&Graph::cycle(5), b).value, 2);
        assert_eq!(independence_number(&Graph::petersen(), b).value, 4);
    }

    #[test]
    fn witness_is_a_clique() {
        let g = Graph::complete_bipartite(3, 4).complement();
        let r = max_clique(&g, Budget::default());
        assert!(r.exact);
        assert_eq!(r.value, 4);
        assert!(r.witness.verify(&g));
    }

    #[test]
    fn tiny_budget_gives_valid_interval() {
        let m = crate::model::EdgeProbabilityMatrix::constant(120, 0.5).unwrap();
        let g = crate::model::sample_graph(&m, 3, 0);
        let full = max_clique(&g, Budget::default());
        assert!(full.exact);
        let cut = max_clique(&g, Budget::nodes(5));
        assert!(!cut.exact);
        assert!(cut.lower() <= full.value && full.value <= cut.upper());
        assert!(cut.witness.verify(&g));
    }
}
