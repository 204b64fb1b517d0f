//! Simple undirected graphs with bitset adjacency.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
///
/// Adjacency is stored as one bitset row per vertex; rows are kept symmetric
/// and irreflexive by every constructor.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    adj: Vec<BitSet>,
}

/// Wire form: 1-based `i < j` pairs in lexicographic order.
#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Graph> {
        let mut out = Graph::empty(g.n);
        for &[i, j] in &g.edges {
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop [{i},{j}]")));
            }
            if i > j {
                return Err(Error::InvalidGraph(format!(
                    "edge [{i},{j}] not in canonical form i < j"
                )));
            }
            if i == 0 || j > g.n {
                return Err(Error::InvalidGraph(format!(
                    "edge [{i},{j}] outside 1..={}",
                    g.n
                )));
            }
            if out.has_edge(i - 1, j - 1) {
                return Err(Error::InvalidGraph(format!("duplicate edge [{i},{j}]")));
            }
            out.add_edge(i - 1, j - 1);
        }
        Ok(out)
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> GraphJson {
        GraphJson {
            n: g.n,
            edges: g.edges().map(|(i, j)| [i + 1, j + 1]).collect(),
        }
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![BitSet::new(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 0..n {
            g.adj[v] = BitSet::full(n);
            g.adj[v].remove(v);
        }
        g
    }

    /// Builds a graph from 0-based edges, rejecting loops and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (i, j) in edges {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("bad edge ({i},{j}) for n={n}")));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for i in 0..n {
                g.add_edge(i, (i + 1) % n);
            }
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::empty(a + b);
        for i in 0..a {
            for j in a..a + b {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn petersen() -> Self {
        let mut g = Graph::empty(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn add_edge(&mut self, i: usize, j: usize) {
        debug_assert!(i != j);
        self.adj[i].insert(j);
        self.adj[j].insert(i);
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.adj[i].iter().filter(move |&j| j > i).map(move |j| (i, j)))
    }

    /// The graph on the same vertices whose edges are exactly the non-edges of `self`.
    pub fn complement(&self) -> Graph {
        let adj = (0..self.n)
            .map(|v| {
                let mut row = self.adj[v].complement();
                row.remove(v);
                row
            })
            .collect();
        Graph { n: self.n, adj }
    }

    /// Induced subgraph on `keep` (in the given order), relabelled `0..keep.len()`.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut g = Graph::empty(keep.len());
        for (a, &u) in keep.iter().enumerate() {
            for (b, &v) in keep.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn without_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    /// `colors[v]` is the color of `v`; proper when no edge is monochromatic.
    pub fn is_proper_coloring(&self, colors: &[usize]) -> bool {
        colors.len() == self.n && self.edges().all(|(i, j)| colors[i] != colors[j])
    }

    /// Structural check of the symmetric/irreflexive invariant.
    pub fn is_simple(&self) -> bool {
        (0..self.n).all(|v| {
            !self.adj[v].contains(v) && self.adj[v].iter().all(|u| u < self.n && self.adj[u].contains(v))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_of_complete_is_empty() {
        let g = Graph::complete(5).complement();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.n(), 5);
    }

    #[test]
    fn five_cycle_is_self_complementary() {
        // C5 complement is the pentagram 0-2-4-1-3-0, which is again a 5-cycle.
        let c = Graph::cycle(5).complement();
        assert!(c.is_simple());
        assert!((0..5).all(|v| c.degree(v) == 2));
        let pentagram = Graph::from_edges(5, [(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(c, pentagram);
    }

    #[test]
    fn complement_is_involution_and_partitions_pairs() {
        let g = Graph::petersen();
        let c = g.complement();
        assert_eq!(c.complement(), g);
        assert_eq!(g.edge_count() + c.edge_count(), 45);
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let g = Graph::cycle(4);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":4,"edges":[[1,2],[1,4],[2,3],[3,4]]}"#);
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);

        let err = serde_json::from_str::<Graph>(r#"{"n":4,"edges":[[3,3]]}"#).unwrap_err();
        assert!(err.to_string().contains("self-loop"), "{err}");
        let err = serde_json::from_str::<Graph>(r#"{"n":5,"edges":[[5,2]]}"#).unwrap_err();
        assert!(err.to_string().contains("canonical"), "{err}");
        let err = serde_json::from_str::<Graph>(r#"{"n":3,"edges":[[1,4]]}"#).unwrap_err();
        assert!(err.to_string().contains("outside"), "{err}");
    }

    #[test]
    fn petersen_shape() {
        let g = Graph::petersen();
        assert_eq!(g.edge_count(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
    }
}
