//! Vertex connectivity through node-split unit-capacity max flow.

use std::collections::VecDeque;

use super::{metrics::is_connected, Graph};
use crate::error::{domain, Result};

struct FlowNet {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl FlowNet {
    fn with_nodes(n: usize) -> Self {
        FlowNet {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn arc(&mut self, u: usize, v: usize, c: u32) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    /// Edmonds-Karp, stopping once `limit` units have been pushed.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut flow = 0;
        let mut via = vec![usize::MAX; self.head.len()];
        while flow < limit {
            via.fill(usize::MAX);
            let mut queue = VecDeque::from([s]);
            let mut reached = false;
            'bfs: while let Some(u) = queue.pop_front() {
                for &e in &self.head[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && v != s && via[v] == usize::MAX {
                        via[v] = e;
                        if v == t {
                            reached = true;
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if !reached {
                break;
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                v = self.to[e ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

/// Maximum number of internally node-disjoint paths between non-adjacent
/// `s` and `t` (Menger), capped at `limit`.
pub fn local_node_connectivity(g: &Graph, s: usize, t: usize, limit: usize) -> usize {
    let g = g.undirected_view();
    let n = g.node_count();
    let big = n as u32 + 1;
    // node v splits into v_in = 2v and v_out = 2v + 1
    let mut net = FlowNet::with_nodes(2 * n);
    for v in 0..n {
        let c = if v == s || v == t { big } else { 1 };
        net.arc(2 * v, 2 * v + 1, c);
    }
    for (u, v, _) in g.edges() {
        net.arc(2 * u + 1, 2 * v, big);
        net.arc(2 * v + 1, 2 * u, big);
    }
    net.max_flow(2 * s + 1, 2 * t, limit)
}

/// Minimum number of nodes whose removal disconnects the graph.
///
/// Complete graphs report `n - 1`; disconnected graphs report 0. Uses Even's
/// scheme: some node among the first `κ + 1` lies outside a minimum
/// separator, so only pairs `(v_i, v_j)` with `i ≤ κ < j` need a flow.
pub fn vertex_connectivity(g: &Graph) -> Result<usize> {
    let n = g.node_count();
    if n < 2 {
        return Err(domain(format!(
            "vertex connectivity needs at least 2 nodes, got {n}"
        )));
    }
    let g = g.undirected_view();
    if !is_connected(&g) {
        return Ok(0);
    }
    let mut best = n - 1;
    best = best.min(g.min_degree());
    let mut i = 0;
    while i <= best && i < n {
        for j in (i + 1)..n {
            if g.has_edge(i, j) {
                continue;
            }
            let k = local_node_connectivity(&g, i, j, best);
            best = best.min(k);
        }
        i += 1;
    }
    Ok(best)
}
