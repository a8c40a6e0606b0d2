use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{domain, Result};

/// Hop-distance summary over all unordered node pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceSummary {
    /// Mean shortest-path length over reachable unordered pairs.
    pub mean_distance: f64,
    /// Longest shortest path over reachable pairs.
    pub diameter: usize,
    /// `false` when some pair is unreachable; the two fields above then
    /// describe reachable pairs only.
    pub finite: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Component id per node, ids assigned in order of lowest member.
    pub labels: Vec<usize>,
    pub groups: Vec<Vec<usize>>,
}

/// Existing ties over possible ties, ignoring weights.
pub fn density(g: &Graph) -> Result<f64> {
    let n = g.node_count();
    if n < 2 {
        return Err(domain(format!("density needs at least 2 nodes, got {n}")));
    }
    let pairs = (n * (n - 1)) as f64;
    let possible = if g.is_directed() { pairs } else { pairs / 2.0 };
    Ok(g.edge_count() as f64 / possible)
}

/// Hop distances from `src`; `None` for unreachable nodes.
pub fn bfs_hops(g: &Graph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    let mut queue = VecDeque::new();
    dist[src] = Some(0);
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap_or(0);
        for v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Weakly connected components (directed ties are read as undirected).
pub fn connected_components(g: &Graph) -> Components {
    let g = g.undirected_view();
    let n = g.node_count();
    let mut labels = vec![usize::MAX; n];
    let mut groups = Vec::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = vec![start];
        labels[start] = id;
        let mut head = 0;
        while head < members.len() {
            let u = members[head];
            head += 1;
            for v in g.neighbors(u) {
                if labels[v] == usize::MAX {
                    labels[v] = id;
                    members.push(v);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    Components {
        count: groups.len(),
        labels,
        groups,
    }
}

pub fn is_connected(g: &Graph) -> bool {
    connected_components(g).count <= 1
}

/// All-pairs BFS over hop counts; weights are ignored.
pub fn distance_summary(g: &Graph) -> DistanceSummary {
    let g = g.undirected_view();
    let n = g.node_count();
    let mut total: u64 = 0;
    let mut pairs: u64 = 0;
    let mut diameter = 0;
    let mut finite = true;
    for s in 0..n {
        for d in bfs_hops(&g, s).into_iter().skip(s + 1) {
            match d {
                Some(d) => {
                    total += d as u64;
                    pairs += 1;
                    diameter = diameter.max(d);
                }
                None => finite = false,
            }
        }
    }
    let mean_distance = if pairs == 0 {
        0.0
    } else {
        total as f64 / pairs as f64
    };
    DistanceSummary {
        mean_distance,
        diameter,
        finite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{standard, StandardGraph};

    #[test]
    fn density_examples() {
        let k4 = standard(StandardGraph::Clique(4)).unwrap();
        assert_eq!(density(&k4).unwrap(), 1.0);
        let c6 = standard(StandardGraph::Cycle(6)).unwrap();
        assert!((density(&c6).unwrap() - 0.4).abs() < 1e-15);
        assert!(density(&Graph::new(1)).is_err());
    }

    #[test]
    fn components() {
        let k5 = standard(StandardGraph::Clique(5)).unwrap();
        assert_eq!(connected_components(&k5).count, 1);
        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let c = connected_components(&two);
        assert_eq!(c.count, 2);
        assert_eq!(c.groups, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn distance_examples() {
        let k7 = standard(StandardGraph::Clique(7)).unwrap();
        let d = distance_summary(&k7);
        assert_eq!((d.mean_distance, d.diameter, d.finite), (1.0, 1, true));

        // C6: each node sees distances 1,1,2,2,3 -> 27/15 over pairs
        let c6 = standard(StandardGraph::Cycle(6)).unwrap();
        let d = distance_summary(&c6);
        assert!((d.mean_distance - 1.8).abs() < 1e-15);
        assert_eq!(d.diameter, 3);

        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let d = distance_summary(&split);
        assert!(!d.finite);
        assert_eq!(d.mean_distance, 1.0);
    }
}
