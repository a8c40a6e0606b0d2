//! Clustered base network of the graph-coloring experiment and its rewired
//! variants.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::clique_on;
use crate::error::{domain, Error, Result};
use crate::graph::{connected_components, is_connected, Graph};
use crate::rng::seeded;

pub const KEARNS_CLUSTERS: usize = 6;
pub const KEARNS_CLUSTER_SIZE: usize = 6;

/// How the six 6-cliques are tied together.
///
/// `ChainShared` reproduces the published base statistics (95 ties, mean
/// distance 3.5714, one-node cut). The other layouts are kept for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KearnsLayout {
    /// Clusters 0..5 in a line; the middle clusters use one node for both
    /// of their bridges.
    #[default]
    ChainShared,
    /// Line of clusters with distinct bridge endpoints inside each cluster.
    ChainDistinct,
    /// Closed ring, shared bridge endpoints.
    RingShared,
    /// Closed ring, distinct bridge endpoints (96 ties).
    RingDistinct,
}

pub fn kearns_base() -> Graph {
    kearns_network(KearnsLayout::default())
}

/// Cluster `c` holds nodes `6c..6c+6`.
pub fn kearns_network(layout: KearnsLayout) -> Graph {
    let s = KEARNS_CLUSTER_SIZE;
    let k = KEARNS_CLUSTERS;
    let mut g = Graph::new(s * k);
    let block = clique_on(s);
    for c in 0..k {
        for (u, v, _) in block.edges() {
            g.add_edge(s * c + u, s * c + v)
                .expect("valid cluster edge");
        }
    }
    let (ring, shared) = match layout {
        KearnsLayout::ChainShared => (false, true),
        KearnsLayout::ChainDistinct => (false, false),
        KearnsLayout::RingShared => (true, true),
        KearnsLayout::RingDistinct => (true, false),
    };
    let bridges = if ring { k } else { k - 1 };
    for c in 0..bridges {
        let d = (c + 1) % k;
        let from = s * c + if shared { 0 } else { s - 1 };
        g.add_edge(from, s * d).expect("valid bridge");
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewireMode {
    /// Each tie is picked with probability `p` and moved to a uniformly
    /// random non-adjacent pair.
    Edge,
    /// Each end of each tie is independently moved with probability `p` to a
    /// uniformly random node, so a tie can keep one of its original ends.
    #[default]
    Endpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewireConstraint {
    #[default]
    KeepConnected,
    /// Consecutive blocks of `cluster_size` nodes (the original clusters)
    /// must all end up in a single component; trailing nodes are free.
    KeepClustersLinked { cluster_size: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewireConfig {
    pub p: f64,
    #[serde(default)]
    pub constraint: RewireConstraint,
    #[serde(default = "default_retries")]
    pub max_retries: usize,
    #[serde(default)]
    pub mode: RewireMode,
}

fn default_retries() -> usize {
    1000
}

impl RewireConfig {
    pub fn new(p: f64) -> Self {
        RewireConfig {
            p,
            constraint: RewireConstraint::KeepConnected,
            max_retries: default_retries(),
            mode: RewireMode::Endpoint,
        }
    }
}

/// Rewires an undirected connected graph, preserving its tie count.
///
/// Ties are visited in sorted order. A whole rewired graph that breaks the
/// constraint is discarded and drawn again, at most `max_retries` times.
pub fn rewire(g: &Graph, cfg: RewireConfig, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&cfg.p) {
        return Err(domain(format!(
            "rewiring probability {} outside [0, 1]",
            cfg.p
        )));
    }
    if g.is_directed() {
        return Err(domain("rewiring is defined for undirected graphs"));
    }
    if !is_connected(g) {
        return Err(domain("rewiring needs a connected input graph"));
    }
    let n = g.node_count();
    if n < 2 {
        return Ok(g.clone());
    }
    let m = g.edge_count();
    let mut rng = seeded(seed);
    for _ in 0..cfg.max_retries.max(1) {
        let h = match cfg.mode {
            RewireMode::Edge => edge_pass(g, cfg.p, &mut rng),
            RewireMode::Endpoint => endpoint_pass(g, cfg.p, &mut rng),
        };
        debug_assert_eq!(h.edge_count(), m);
        if satisfies(&h, cfg.constraint) {
            return Ok(h);
        }
    }
    Err(Error::Resource(format!(
        "no rewired graph met the constraint within {} attempts",
        cfg.max_retries.max(1)
    )))
}

fn satisfies(h: &Graph, constraint: RewireConstraint) -> bool {
    match constraint {
        RewireConstraint::KeepConnected => is_connected(h),
        RewireConstraint::KeepClustersLinked { cluster_size } => {
            let covered = if cluster_size == 0 {
                0
            } else {
                h.node_count() / cluster_size * cluster_size
            };
            let labels = connected_components(h).labels;
            labels[..covered].windows(2).all(|w| w[0] == w[1])
        }
    }
}

fn edge_pass<R: Rng>(g: &Graph, p: f64, rng: &mut R) -> Graph {
    let n = g.node_count();
    let mut h = g.clone();
    for (u, v, _) in g.edges() {
        if rng.gen::<f64>() >= p {
            continue;
        }
        h.remove_edge(u, v);
        loop {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b && !h.has_edge(a, b) {
                h.add_edge(a, b).expect("checked pair");
                break;
            }
        }
    }
    h
}

const ENDPOINT_DRAWS: usize = 100_000;

fn endpoint_pass<R: Rng>(g: &Graph, p: f64, rng: &mut R) -> Graph {
    let n = g.node_count();
    let mut h = g.clone();
    for (u, v, _) in g.edges() {
        let move_u = rng.gen::<f64>() < p;
        let move_v = rng.gen::<f64>() < p;
        if !(move_u || move_v) {
            continue;
        }
        h.remove_edge(u, v);
        let mut placed = false;
        for _ in 0..ENDPOINT_DRAWS {
            let a = if move_u { rng.gen_range(0..n) } else { u };
            let b = if move_v { rng.gen_range(0..n) } else { v };
            if a != b && !h.has_edge(a, b) {
                h.add_edge(a, b).expect("checked pair");
                placed = true;
                break;
            }
        }
        if !placed {
            h.add_edge(u, v).expect("restoring removed tie");
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{density, distance_summary, vertex_connectivity};
    use crate::spectra::{algebraic_connectivity, LaplacianKind};

    #[test]
    fn base_network_statistics() {
        let g = kearns_base();
        assert_eq!((g.node_count(), g.edge_count()), (36, 95));
        let d = distance_summary(&g);
        assert_eq!(format!("{:.4}", d.mean_distance), "3.5714");
        let l2 = algebraic_connectivity(&g, LaplacianKind::RowNormalized).unwrap();
        assert_eq!(format!("{l2:.4}"), "0.0083");
        assert_eq!(vertex_connectivity(&g).unwrap(), 1);
    }

    #[test]
    fn ring_layout_differs() {
        let g = kearns_network(KearnsLayout::RingDistinct);
        assert_eq!(g.edge_count(), 96);
        assert_eq!(vertex_connectivity(&g).unwrap(), 2);
    }

    #[test]
    fn zero_probability_is_identity() {
        let g = kearns_base();
        for mode in [RewireMode::Edge, RewireMode::Endpoint] {
            let cfg = RewireConfig {
                mode,
                ..RewireConfig::new(0.0)
            };
            assert_eq!(rewire(&g, cfg, 3).unwrap(), g);
        }
    }

    #[test]
    fn rewiring_preserves_size_and_connectivity() {
        let g = kearns_base();
        for (i, p) in [0.1, 0.4, 1.0].into_iter().enumerate() {
            for mode in [RewireMode::Edge, RewireMode::Endpoint] {
                let cfg = RewireConfig {
                    mode,
                    ..RewireConfig::new(p)
                };
                let h = rewire(&g, cfg, i as u64).unwrap();
                assert_eq!(h.node_count(), 36);
                assert_eq!(density(&h).unwrap(), density(&g).unwrap());
                assert!(is_connected(&h));
                assert_eq!(h, rewire(&g, cfg, i as u64).unwrap());
            }
        }
    }

    #[test]
    fn cluster_constraint_matches_connectivity_for_full_blocks() {
        let g = kearns_base();
        let cfg = RewireConfig {
            constraint: RewireConstraint::KeepClustersLinked { cluster_size: 6 },
            ..RewireConfig::new(0.6)
        };
        assert!(is_connected(&rewire(&g, cfg, 11).unwrap()));
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(rewire(&kearns_base(), RewireConfig::new(1.5), 0).is_err());
    }
}
