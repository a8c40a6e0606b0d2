use serde::{Deserialize, Serialize};

use super::{algebraic_connectivity, LaplacianKind};
use crate::error::{domain, Result};
use crate::graph::{distance_summary, is_connected, vertex_connectivity, Graph};

/// Slack allowed when comparing λ₂ against integer or rational bounds.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundChecks {
    /// `λ₂ >= 2 / ((n-1)·D̄ - (n-2)/2)`
    pub mean_distance: bool,
    /// `λ₂ >= 4 / (n·D_max)`
    pub diameter: bool,
    /// `λ₂ <= K`; `None` for complete graphs.
    pub kappa: Option<bool>,
    /// `K <= k_min`; `None` for complete graphs.
    pub k_min: Option<bool>,
}

impl BoundChecks {
    pub fn all(&self) -> bool {
        self.mean_distance
            && self.diameter
            && self.kappa.unwrap_or(true)
            && self.k_min.unwrap_or(true)
    }
}

/// λ₂ of the binary Laplacian next to its distance and connectivity bounds.
///
/// The mean-distance inequality is a lower bound on λ₂ (read the other way,
/// an upper bound on mean distance for a given λ₂).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub lambda2: f64,
    pub mean_distance: f64,
    pub diameter: usize,
    pub eq5_bound: f64,
    pub diameter_bound: f64,
    pub kappa: usize,
    pub k_min: usize,
    pub complete: bool,
    pub satisfied: BoundChecks,
}

pub fn bound_report(g: &Graph) -> Result<BoundReport> {
    let g = super::prepare(g, crate::graph::Symmetrize::Intersection);
    let n = g.node_count();
    if n < 2 || !is_connected(&g) {
        return Err(domain(
            "bounds are defined for connected graphs with at least 2 nodes",
        ));
    }
    let lambda2 = algebraic_connectivity(&g, LaplacianKind::Binary)?;
    let d = distance_summary(&g);
    let nf = n as f64;
    let eq5_bound = 2.0 / ((nf - 1.0) * d.mean_distance - 0.5 * (nf - 2.0));
    let diameter_bound = 4.0 / (nf * d.diameter as f64);
    let kappa = vertex_connectivity(&g)?;
    let k_min = g.min_degree();
    let complete = g.is_complete();
    let tol = BOUND_SLACK * lambda2.max(1.0);
    let satisfied = BoundChecks {
        mean_distance: lambda2 >= eq5_bound - tol,
        diameter: lambda2 >= diameter_bound - tol,
        kappa: (!complete).then_some(lambda2 <= kappa as f64 + tol),
        k_min: (!complete).then_some(kappa <= k_min),
    };
    Ok(BoundReport {
        n,
        lambda2,
        mean_distance: d.mean_distance,
        diameter: d.diameter,
        eq5_bound,
        diameter_bound,
        kappa,
        k_min,
        complete,
        satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{standard, StandardGraph};

    #[test]
    fn c6_hand_values() {
        let r = bound_report(&standard(StandardGraph::Cycle(6)).unwrap()).unwrap();
        assert!((r.lambda2 - 1.0).abs() < 1e-12);
        assert!((r.eq5_bound - 2.0 / 7.0).abs() < 1e-12);
        assert!((r.diameter_bound - 4.0 / 18.0).abs() < 1e-12);
        assert_eq!((r.kappa, r.k_min), (2, 2));
        assert!(r.satisfied.all());
    }

    #[test]
    fn complete_graph_skips_connectivity_checks() {
        let r = bound_report(&standard(StandardGraph::Clique(5)).unwrap()).unwrap();
        assert!(r.complete);
        assert_eq!(r.satisfied.kappa, None);
        assert!(r.satisfied.mean_distance && r.satisfied.diameter);
    }

    #[test]
    fn disconnected_is_refused() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(bound_report(&g).is_err());
    }
}
