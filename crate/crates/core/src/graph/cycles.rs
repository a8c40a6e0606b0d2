//! Chordless (induced) cycle search.
//!
//! Cycles are enumerated from their smallest node `s`, growing induced paths
//! over nodes larger than `s`. A cycle is emitted once, in canonical form:
//! it starts at `s` and walks toward the smaller of `s`'s two cycle
//! neighbors. Comparing canonical sequences lexicographically gives the
//! tie-break among equally long cycles.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Largest graph accepted by the exhaustive chordless-cycle search.
pub const CHORDLESS_NODE_LIMIT: usize = 40;
/// Path extensions allowed before the search gives up.
pub const CHORDLESS_STEP_BUDGET: u64 = 200_000_000;

/// A simple cycle stored as its canonical node sequence (closure implicit).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cycle {
    pub nodes: Vec<usize>,
}

impl Cycle {
    /// Canonicalizes an arbitrary rotation/orientation of a cycle.
    pub fn new(nodes: Vec<usize>) -> Self {
        let l = nodes.len();
        if l == 0 {
            return Cycle { nodes };
        }
        let start = (0..l).min_by_key(|&i| nodes[i]).unwrap_or(0);
        let fwd = nodes[(start + 1) % l];
        let back = nodes[(start + l - 1) % l];
        let seq = if fwd <= back {
            (0..l).map(|k| nodes[(start + k) % l]).collect()
        } else {
            (0..l).map(|k| nodes[(start + l - k) % l]).collect()
        };
        Cycle { nodes: seq }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Consecutive pairs including the closing one.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let l = self.nodes.len();
        (0..l)
            .map(|i| (self.nodes[i], self.nodes[(i + 1) % l]))
            .collect()
    }

    /// Whether every consecutive pair is adjacent in `g`.
    pub fn is_cycle_of(&self, g: &Graph) -> bool {
        self.len() >= 3 && self.edges().iter().all(|&(u, v)| g.has_edge(u, v))
    }

    /// Whether no non-consecutive pair is adjacent in `g`.
    pub fn is_chordless_in(&self, g: &Graph) -> bool {
        let l = self.len();
        for i in 0..l {
            for j in (i + 2)..l {
                if i == 0 && j == l - 1 {
                    continue;
                }
                if g.has_edge(self.nodes[i], self.nodes[j]) {
                    return false;
                }
            }
        }
        true
    }
}

struct Search<'a> {
    g: &'a Graph,
    max_len: usize,
    budget: u64,
    steps: u64,
    pos: Vec<usize>,
    path: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, emit: &mut dyn FnMut(&[usize])) -> Result<()> {
        for s in 0..self.g.node_count() {
            self.path.clear();
            self.path.push(s);
            self.pos[s] = 0;
            self.extend(s, emit)?;
            self.pos[s] = usize::MAX;
        }
        Ok(())
    }

    fn extend(&mut self, s: usize, emit: &mut dyn FnMut(&[usize])) -> Result<()> {
        let last = *self.path.last().unwrap_or(&s);
        let len = self.path.len();
        let candidates: Vec<usize> = self.g.neighbors(last).filter(|&v| v > s).collect();
        for v in candidates {
            if self.pos[v] != usize::MAX {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return Err(Error::Resource(format!(
                    "chordless-cycle search exceeded its budget of {} path extensions",
                    self.budget
                )));
            }
            // v may touch only `last` and, to close a cycle, `s`
            let touches_inner = self
                .g
                .neighbors(v)
                .any(|w| w != last && w != s && self.pos[w] != usize::MAX);
            if touches_inner {
                continue;
            }
            if len >= 2 && self.g.has_edge(v, s) {
                if self.path[1] < v && len < self.max_len {
                    self.path.push(v);
                    emit(&self.path);
                    self.path.pop();
                }
                continue;
            }
            if len + 1 >= self.max_len {
                continue;
            }
            self.pos[v] = len;
            self.path.push(v);
            self.extend(s, emit)?;
            self.path.pop();
            self.pos[v] = usize::MAX;
        }
        Ok(())
    }
}

fn search(g: &Graph, max_len: usize, budget: u64, emit: &mut dyn FnMut(&[usize])) -> Result<()> {
    let n = g.node_count();
    let mut s = Search {
        g,
        max_len,
        budget,
        steps: 0,
        pos: vec![usize::MAX; n],
        path: Vec::new(),
    };
    s.run(emit)
}

/// Every chordless cycle of length ≥ 3 in canonical form, sorted.
pub fn chordless_cycles(g: &Graph) -> Result<Vec<Cycle>> {
    let g = g.undirected_view();
    check_size(&g)?;
    let mut out = Vec::new();
    search(&g, usize::MAX, CHORDLESS_STEP_BUDGET, &mut |p| {
        out.push(Cycle { nodes: p.to_vec() })
    })?;
    out.sort();
    Ok(out)
}

fn check_size(g: &Graph) -> Result<()> {
    if g.node_count() > CHORDLESS_NODE_LIMIT {
        return Err(Error::Resource(format!(
            "chordless-cycle search is limited to {CHORDLESS_NODE_LIMIT} nodes, graph has {}",
            g.node_count()
        )));
    }
    Ok(())
}

/// Longest chordless cycle of length at least `min_len`, lexicographically
/// smallest among ties.
pub fn longest_chordless_cycle(g: &Graph, min_len: usize) -> Result<Option<Cycle>> {
    if min_len < 3 {
        return Err(Error::Domain(format!(
            "min_len must be at least 3, got {min_len}"
        )));
    }
    let g = g.undirected_view();
    check_size(&g)?;
    let mut best: Option<Vec<usize>> = None;
    search(&g, usize::MAX, CHORDLESS_STEP_BUDGET, &mut |p| {
        if p.len() < min_len {
            return;
        }
        let better = match &best {
            None => true,
            Some(b) => p.len() > b.len() || (p.len() == b.len() && p < b.as_slice()),
        };
        if better {
            best = Some(p.to_vec());
        }
    })?;
    Ok(best.map(|nodes| Cycle { nodes }))
}

fn girth(g: &Graph) -> Option<usize> {
    let n = g.node_count();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[u] >= b) {
                break;
            }
            for v in g.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let l = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(l, |b| b.min(l)));
                }
            }
        }
    }
    best
}

/// A shortest cycle (lexicographically smallest among ties), or `None` for
/// forests.
pub fn smallest_cycle(g: &Graph) -> Option<Cycle> {
    let g = g.undirected_view();
    let l = girth(&g)?;
    let mut best: Option<Vec<usize>> = None;
    // shortest cycles are induced, so the bounded induced search finds them
    let found = search(&g, l, u64::MAX, &mut |p| {
        if p.len() == l && best.as_ref().is_none_or(|b| p < b.as_slice()) {
            best = Some(p.to_vec());
        }
    });
    debug_assert!(found.is_ok());
    best.map(|nodes| Cycle { nodes })
}
