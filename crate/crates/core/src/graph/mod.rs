//! Graph representation and the combinatorial metrics the spectral code
//! consumes: distances, components, vertex connectivity and cycles.

mod connectivity;
mod cycles;
mod io;
mod metrics;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use connectivity::{local_node_connectivity, vertex_connectivity};
pub use cycles::{
    chordless_cycles, longest_chordless_cycle, smallest_cycle, Cycle, CHORDLESS_NODE_LIMIT,
    CHORDLESS_STEP_BUDGET,
};
pub use io::{from_edge_list, parse_edge_list, to_edge_list, LabelMap};
pub use metrics::{
    bfs_hops, connected_components, density, distance_summary, is_connected, Components,
    DistanceSummary,
};

/// How a directed graph is turned into an undirected one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetrize {
    /// Keep only mutual ties; weight is the smaller of the two arcs.
    #[default]
    Intersection,
    /// Keep every tie; weight is the larger arc when both exist.
    Union,
}

/// Simple graph on nodes `0..n` with non-negative weights.
///
/// Undirected graphs store each edge in both endpoint maps, so
/// `weight(u, v) == weight(v, u)` always holds.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    directed: bool,
    adj: Vec<BTreeMap<usize, f64>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            directed: false,
            adj: vec![BTreeMap::new(); n],
        }
    }

    pub fn new_directed(n: usize) -> Self {
        Graph {
            directed: true,
            adj: vec![BTreeMap::new(); n],
        }
    }

    /// Unweighted undirected graph from an edge slice.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        let arcs: usize = self.adj.iter().map(BTreeMap::len).sum();
        if self.directed {
            arcs
        } else {
            arcs / 2
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.adj.iter().flat_map(|m| m.values()).any(|&w| w != 1.0)
    }

    /// Adds an edge of weight 1. See [`Graph::add_weighted_edge`].
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.add_weighted_edge(u, v, 1.0)
    }

    /// Inserts `u - v` (or `u -> v` when directed).
    ///
    /// Returns `Ok(false)` when the identical edge is already present.
    /// Self-loops, out-of-range nodes, non-positive or non-finite weights and
    /// conflicting duplicate weights are rejected.
    pub fn add_weighted_edge(&mut self, u: usize, v: usize, w: f64) -> Result<bool> {
        let n = self.node_count();
        if u >= n || v >= n {
            return Err(invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
        }
        if u == v {
            return Err(invalid(format!("self-loop on node {u}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(invalid(format!(
                "weight {w} on edge ({u}, {v}) must be positive"
            )));
        }
        if let Some(&old) = self.adj[u].get(&v) {
            if old == w {
                return Ok(false);
            }
            return Err(invalid(format!(
                "conflicting weights {old} and {w} for edge ({u}, {v})"
            )));
        }
        self.adj[u].insert(v, w);
        if !self.directed {
            self.adj[v].insert(u, w);
        }
        Ok(true)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.node_count() || v >= self.node_count() {
            return false;
        }
        let removed = self.adj[u].remove(&v).is_some();
        if removed && !self.directed {
            self.adj[v].remove(&u);
        }
        removed
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|m| m.contains_key(&v))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adj.get(u).and_then(|m| m.get(&v).copied())
    }

    /// Out-neighbors in ascending order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].keys().copied()
    }

    pub fn weighted_neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adj[u].iter().map(|(&v, &w)| (v, w))
    }

    /// Number of (out-)ties of `u`.
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Sum of (out-)tie weights of `u`.
    pub fn strength(&self, u: usize) -> f64 {
        self.adj[u].values().sum()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(BTreeMap::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(BTreeMap::len).max().unwrap_or(0)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.node_count();
        self.adj.iter().all(|m| m.len() + 1 == n)
    }

    /// Edges sorted by `(u, v)`; undirected edges are reported once with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, m) in self.adj.iter().enumerate() {
            for (&v, &w) in m {
                if self.directed || u < v {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    /// Undirected copy. Undirected graphs are returned unchanged.
    pub fn symmetrized(&self, mode: Symmetrize) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let n = self.node_count();
        let mut g = Graph::new(n);
        for u in 0..n {
            for (&v, &w) in &self.adj[u] {
                let back = self.adj[v].get(&u).copied();
                let merged = match (mode, back) {
                    (Symmetrize::Intersection, Some(b)) => Some(w.min(b)),
                    (Symmetrize::Intersection, None) => None,
                    (Symmetrize::Union, Some(b)) => Some(w.max(b)),
                    (Symmetrize::Union, None) => Some(w),
                };
                if let Some(w) = merged {
                    g.adj[u].insert(v, w);
                    g.adj[v].insert(u, w);
                }
            }
        }
        g
    }

    /// Hop-structure view used by the combinatorial metrics: directed graphs
    /// are read through their underlying undirected graph.
    pub(crate) fn undirected_view(&self) -> std::borrow::Cow<'_, Graph> {
        if self.directed {
            std::borrow::Cow::Owned(self.symmetrized(Symmetrize::Union))
        } else {
            std::borrow::Cow::Borrowed(self)
        }
    }

    /// Induced subgraph on the complement of `removed`, relabelled densely.
    pub fn without_nodes(&self, removed: &[usize]) -> Graph {
        let n = self.node_count();
        let mut keep = vec![true; n];
        for &r in removed {
            if r < n {
                keep[r] = false;
            }
        }
        let mut index = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if keep[v] {
                index[v] = next;
                next += 1;
            }
        }
        let mut g = Graph {
            directed: self.directed,
            adj: vec![BTreeMap::new(); next],
        };
        for u in 0..n {
            if !keep[u] {
                continue;
            }
            for (&v, &w) in &self.adj[u] {
                if keep[v] {
                    g.adj[index[u]].insert(index[v], w);
                }
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_edges() {
        let mut g = Graph::new(3);
        assert!(g.add_edge(0, 0).is_err());
        assert!(g.add_edge(0, 3).is_err());
        assert!(g.add_weighted_edge(0, 1, -1.0).is_err());
        assert!(g.add_weighted_edge(0, 1, 0.0).is_err());
        assert!(g.add_weighted_edge(0, 1, 2.0).unwrap());
        assert!(!g.add_weighted_edge(1, 0, 2.0).unwrap());
        assert!(g.add_weighted_edge(1, 0, 3.0).is_err());
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn undirected_edges_are_symmetric() {
        let mut g = Graph::from_edges(4, &[(0, 1), (2, 1), (3, 0)]).unwrap();
        for (u, v, w) in g.edges() {
            assert!(u < v);
            assert_eq!(g.weight(v, u), Some(w));
        }
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.min_degree(), 1);
        assert!(g.remove_edge(1, 0));
        assert!(!g.has_edge(0, 1));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn symmetrize_modes() {
        let mut g = Graph::new_directed(3);
        g.add_weighted_edge(0, 1, 2.0).unwrap();
        g.add_weighted_edge(1, 0, 3.0).unwrap();
        g.add_edge(1, 2).unwrap();
        let i = g.symmetrized(Symmetrize::Intersection);
        assert_eq!(i.edges(), vec![(0, 1, 2.0)]);
        let u = g.symmetrized(Symmetrize::Union);
        assert_eq!(u.edges(), vec![(0, 1, 3.0), (1, 2, 1.0)]);
    }

    #[test]
    fn node_removal_relabels() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = g.without_nodes(&[1]);
        assert_eq!(h.node_count(), 3);
        assert_eq!(h.edges(), vec![(1, 2, 1.0)]);
    }
}
