//! Seeded network families.
//!
//! Every stochastic generator takes an explicit `seed` and draws from a
//! ChaCha8 stream, so identical arguments give identical graphs on every
//! platform.

mod chords;
mod cliques;
mod kearns;
mod random;
mod spec;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use chords::{
    chord_midway, chord_suite_graph, misplace_chord, relocate_chord, ChordMove, CHORD_MIN_CYCLE,
};
pub use cliques::two_cliques_bridged;
pub use kearns::{
    kearns_base, kearns_network, rewire, KearnsLayout, RewireConfig, RewireConstraint, RewireMode,
    KEARNS_CLUSTERS, KEARNS_CLUSTER_SIZE,
};
pub use random::{random_poisson, random_skewed, MAX_CONNECT_ATTEMPTS, SKEWED_EXPONENT};
pub use spec::GraphSpec;

use crate::error::{domain, Error, Result};
use crate::graph::Graph;

/// Deterministic textbook graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardGraph {
    Clique(usize),
    Cycle(usize),
    Path(usize),
    /// `n` nodes: one hub and `n - 1` leaves.
    Star(usize),
    /// `n` nodes on a ring, each tied to its `k / 2` nearest nodes per side.
    RingLattice(usize, usize),
    /// `side × side` grid with 4-neighborhoods.
    SquareLattice(usize),
}

pub fn standard(kind: StandardGraph) -> Result<Graph> {
    let edges: Vec<(usize, usize)> = match kind {
        StandardGraph::Clique(n) => {
            need(n >= 1, "clique needs n >= 1")?;
            return Ok(clique_on(n));
        }
        StandardGraph::Cycle(n) => {
            need(n >= 3, "cycle needs n >= 3")?;
            (0..n).map(|i| (i, (i + 1) % n)).collect()
        }
        StandardGraph::Path(n) => {
            need(n >= 1, "path needs n >= 1")?;
            (1..n).map(|i| (i - 1, i)).collect()
        }
        StandardGraph::Star(n) => {
            need(n >= 2, "star needs n >= 2")?;
            (1..n).map(|i| (0, i)).collect()
        }
        StandardGraph::RingLattice(n, k) => {
            need(k >= 2 && k % 2 == 0, "ring lattice needs an even k >= 2")?;
            need(k < n, "ring lattice needs k < n")?;
            (0..n)
                .flat_map(|i| (1..=k / 2).map(move |d| (i, (i + d) % n)))
                .collect()
        }
        StandardGraph::SquareLattice(side) => {
            need(side >= 1, "square lattice needs side >= 1")?;
            let id = |r: usize, c: usize| r * side + c;
            let mut e = Vec::with_capacity(2 * side * (side - 1));
            for r in 0..side {
                for c in 0..side {
                    if c + 1 < side {
                        e.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < side {
                        e.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            e
        }
    };
    let n = match kind {
        StandardGraph::SquareLattice(side) => side * side,
        StandardGraph::Cycle(n)
        | StandardGraph::Path(n)
        | StandardGraph::Star(n)
        | StandardGraph::RingLattice(n, _)
        | StandardGraph::Clique(n) => n,
    };
    Graph::from_edges(n, &edges)
}

fn need(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(domain(msg))
    }
}

pub(crate) fn clique_on(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            g.add_edge(u, v).expect("valid clique edge");
        }
    }
    g
}

/// Copy of `g` with node `i` renamed `perm[i]`.
pub(crate) fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let mut h = Graph::new(g.node_count());
    for (u, v, w) in g.edges() {
        h.add_weighted_edge(perm[u], perm[v], w)
            .expect("relabeling preserves validity");
    }
    h
}

pub(crate) fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

impl fmt::Display for StandardGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StandardGraph::Clique(n) => write!(f, "clique:{n}"),
            StandardGraph::Cycle(n) => write!(f, "cycle:{n}"),
            StandardGraph::Path(n) => write!(f, "path:{n}"),
            StandardGraph::Star(n) => write!(f, "star:{n}"),
            StandardGraph::RingLattice(n, k) => write!(f, "ring_lattice:{n},{k}"),
            StandardGraph::SquareLattice(s) => write!(f, "square_lattice:{s}"),
        }
    }
}

/// Parses `name:arg[,arg]`, e.g. `clique:24` or `ring_lattice:24,4`.
impl FromStr for StandardGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<usize> = args
            .split(',')
            .filter(|a| !a.is_empty())
            .map(|a| {
                a.trim()
                    .parse()
                    .map_err(|_| Error::Validation(format!("bad integer {a:?} in {s:?}")))
            })
            .collect::<Result<_>>()?;
        let arity = |k: usize| -> Result<()> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::Validation(format!(
                    "{name} takes {k} argument(s), got {}",
                    nums.len()
                )))
            }
        };
        match name {
            "clique" => arity(1).map(|_| StandardGraph::Clique(nums[0])),
            "cycle" => arity(1).map(|_| StandardGraph::Cycle(nums[0])),
            "path" => arity(1).map(|_| StandardGraph::Path(nums[0])),
            "star" => arity(1).map(|_| StandardGraph::Star(nums[0])),
            "ring_lattice" => arity(2).map(|_| StandardGraph::RingLattice(nums[0], nums[1])),
            "square_lattice" => arity(1).map(|_| StandardGraph::SquareLattice(nums[0])),
            _ => Err(Error::Validation(format!(
                "unknown standard graph {name:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{density, is_connected};

    #[test]
    fn ring_lattice_degrees() {
        let g = standard(StandardGraph::RingLattice(24, 4)).unwrap();
        assert!((0..24).all(|i| g.degree(i) == 4));
        assert!(is_connected(&g));
        assert_eq!(g.edge_count(), 48);
    }

    #[test]
    fn square_lattice_edge_count() {
        let g = standard(StandardGraph::SquareLattice(5)).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (25, 40));
        assert_eq!(
            standard(StandardGraph::SquareLattice(1))
                .unwrap()
                .edge_count(),
            0
        );
    }

    #[test]
    fn clique_is_dense() {
        let g = standard(StandardGraph::Clique(24)).unwrap();
        assert_eq!(density(&g).unwrap(), 1.0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(standard(StandardGraph::RingLattice(24, 3)).is_err());
        assert!(standard(StandardGraph::RingLattice(4, 4)).is_err());
        assert!(standard(StandardGraph::Cycle(2)).is_err());
        assert!(standard(StandardGraph::Star(1)).is_err());
    }

    #[test]
    fn parse_specs() {
        for spec in [
            "clique:24",
            "cycle:6",
            "path:3",
            "star:5",
            "ring_lattice:24,4",
            "square_lattice:7",
        ] {
            let g: StandardGraph = spec.parse().unwrap();
            assert_eq!(g.to_string(), spec);
        }
        assert!("ring_lattice:24".parse::<StandardGraph>().is_err());
        assert!("blob:3".parse::<StandardGraph>().is_err());
    }
}
