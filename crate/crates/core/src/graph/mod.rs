//! Weighted undirected graphs and the network families used in experiments.

mod components;
pub mod generate;
mod io;
mod laplacian;

pub use components::{bridges, connected_components, Components};
pub use generate::{generate, Family, GeneratorSpec};
pub use io::{load_edge_list, parse_edge_list, save_edge_list, write_edge_list};
pub use laplacian::{laplacian, Laplacian};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge with `u < v` and a strictly positive weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    /// The endpoint opposite `x`.
    #[inline]
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected weighted simple graph on vertices `0..n`.
///
/// Edges are stored with `u < v`, sorted by `(u, v)`, and indexed by their
/// position in that order. The graph is immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    // CSR adjacency: for vertex x, adj[offsets[x]..offsets[x + 1]] holds
    // (neighbor, edge index) pairs ordered by neighbor.
    offsets: Vec<usize>,
    adj: Vec<(usize, usize)>,
}

impl WeightedGraph {
    /// Builds a graph, canonicalizing endpoint order and sorting the edges.
    ///
    /// Rejects self-loops, duplicate pairs, out-of-range ids and weights that
    /// are not finite and strictly positive.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut list = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has non-positive or non-finite weight {w}"
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push(Edge { u, v, w });
        }
        list.sort_by_key(|e| (e.u, e.v));
        if let Some(pair) = list
            .windows(2)
            .find(|p| (p[0].u, p[0].v) == (p[1].u, p[1].v))
        {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                pair[0].u, pair[0].v
            )));
        }
        Ok(Self::from_sorted(n, list))
    }

    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, std::iter::empty())
    }

    fn from_sorted(n: usize, edges: Vec<Edge>) -> Self {
        let mut degree = vec![0usize; n];
        for e in &edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut adj = vec![(0, 0); offsets[n]];
        // Edges are sorted by (u, v), so each row receives neighbors in
        // increasing order: first all lower ids (as v), then higher (as u).
        for (idx, e) in edges.iter().enumerate() {
            adj[fill[e.v]] = (e.u, idx);
            fill[e.v] += 1;
        }
        for (idx, e) in edges.iter().enumerate() {
            adj[fill[e.u]] = (e.v, idx);
            fill[e.u] += 1;
        }
        let g = Self {
            n,
            edges,
            offsets,
            adj,
        };
        debug_assert!(g.check_invariants().is_ok());
        g
    }

    fn check_invariants(&self) -> Result<()> {
        for w in self.edges.windows(2) {
            if (w[0].u, w[0].v) >= (w[1].u, w[1].v) {
                return Err(Error::InvalidGraph("edges not strictly sorted".into()));
            }
        }
        for e in &self.edges {
            if e.u >= e.v || e.v >= self.n || !(e.w.is_finite() && e.w > 0.0) {
                return Err(Error::InvalidGraph(format!("bad edge {e:?}")));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, idx: usize) -> Edge {
        self.edges[idx]
    }

    /// `(neighbor, edge index)` pairs of `x`, ordered by neighbor id.
    #[inline]
    pub fn neighbors(&self, x: usize) -> &[(usize, usize)] {
        &self.adj[self.offsets[x]..self.offsets[x + 1]]
    }

    #[inline]
    pub fn degree(&self, x: usize) -> usize {
        self.offsets[x + 1] - self.offsets[x]
    }

    pub fn weighted_degree(&self, x: usize) -> f64 {
        self.neighbors(x)
            .iter()
            .map(|&(_, e)| self.edges[e].w)
            .sum()
    }

    /// Index of the edge joining `a` and `b`, if present.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        if a >= self.n || b >= self.n {
            return None;
        }
        let row = self.neighbors(a);
        row.binary_search_by_key(&b, |&(nb, _)| nb)
            .ok()
            .map(|i| row[i].1)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Same vertices, only the listed edges (by index) with new weights.
    ///
    /// `selection` must list distinct indices in increasing order; the result
    /// indexes its edges in that order.
    pub fn reweighted_subgraph(&self, selection: &[(usize, f64)]) -> Result<Self> {
        if selection.windows(2).any(|p| p[0].0 >= p[1].0) {
            return Err(Error::InvalidParameter(
                "edge selection must be strictly increasing".into(),
            ));
        }
        let mut edges = Vec::with_capacity(selection.len());
        for &(idx, w) in selection {
            let e = *self
                .edges
                .get(idx)
                .ok_or_else(|| Error::InvalidParameter(format!("edge index {idx} out of range")))?;
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) reweighted to {w}",
                    e.u, e.v
                )));
            }
            edges.push(Edge { w, ..e });
        }
        Ok(Self::from_sorted(self.n, edges))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalizes_and_sorts() {
        let g = WeightedGraph::new(4, [(3, 1, 2.0), (0, 2, 1.0), (1, 0, 0.5)]).unwrap();
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 3)]);
        assert_eq!(g.find_edge(3, 1), Some(2));
        assert_eq!(g.find_edge(2, 3), None);
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.neighbors(1), &[(0, 0), (3, 2)]);
        assert!((g.weighted_degree(1) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_edges() {
        assert!(WeightedGraph::new(2, [(0, 0, 1.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 1, 0.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 1, -1.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 1, f64::INFINITY)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 2, 1.0)]).is_err());
        assert!(WeightedGraph::new(0, []).is_err());
    }

    #[test]
    fn reweighted_subgraph_keeps_vertices() {
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let h = g.reweighted_subgraph(&[(0, 3.0), (2, 0.5)]).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(h.m(), 2);
        assert_eq!(h.edge(1), Edge { u: 2, v: 3, w: 0.5 });
        assert!(g.reweighted_subgraph(&[(2, 1.0), (0, 1.0)]).is_err());
    }
}
