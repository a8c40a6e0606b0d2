//! Density-matrix metrics of the diffusion propagator `U_t = exp(-tL)`.
//!
//! With `S = Tr U_t` and `p_k = exp(-t λ_k) / S`:
//!
//! * `Z = S / n` (taken positive),
//! * `δ = -Σ p_k ln p_k`,
//! * `F = -ln Z / t`,
//! * `Q = dδ/dt = -t Var_p(λ)`,
//! * `V = dF/dt = (t⟨λ⟩_p + ln Z) / t²`,
//! * `η = 1 - |Q| / V`.

use serde::{Deserialize, Serialize};

use super::{spectrum, LaplacianKind};
use crate::error::{domain, Result};
use crate::graph::{is_connected, Graph};

/// |V| below this makes η undefined.
pub const V_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffMetrics {
    pub t: f64,
    pub kind: LaplacianKind,
    pub z: f64,
    pub entropy: f64,
    pub f: f64,
    pub q: f64,
    pub v: f64,
    pub eta: f64,
    /// Eigenvalues of `ρ_t`, aligned with the ascending Laplacian spectrum.
    pub probabilities: Vec<f64>,
}

pub fn tradeoff_metrics(g: &Graph, kind: LaplacianKind, t: f64) -> Result<TradeoffMetrics> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("t must be positive and finite, got {t}")));
    }
    if g.node_count() == 0 || !is_connected(g) {
        return Err(domain("trade-off metrics need a connected graph"));
    }
    let s = spectrum(g, kind)?;
    from_eigenvalues(&s.values, kind, t)
}

pub(crate) fn from_eigenvalues(
    lambda: &[f64],
    kind: LaplacianKind,
    t: f64,
) -> Result<TradeoffMetrics> {
    let n = lambda.len() as f64;
    let shift = lambda.iter().copied().fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = lambda.iter().map(|l| (-t * (l - shift)).exp()).collect();
    let sum: f64 = raw.iter().sum();
    let probabilities: Vec<f64> = raw.iter().map(|r| r / sum).collect();
    let ln_trace = sum.ln() - t * shift;
    let ln_z = ln_trace - n.ln();

    let mean: f64 = probabilities.iter().zip(lambda).map(|(p, l)| p * l).sum();
    let var: f64 = probabilities
        .iter()
        .zip(lambda)
        .map(|(p, l)| p * (l - mean).powi(2))
        .sum();
    let entropy: f64 = -probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>();
    let q = -t * var;
    let v = (t * mean + ln_z) / (t * t);
    if v.abs() < V_EPSILON {
        return Err(domain(format!(
            "dF/dt = {v:e} is zero at t = {t}; η is undefined"
        )));
    }
    Ok(TradeoffMetrics {
        t,
        kind,
        z: ln_z.exp(),
        entropy,
        f: -ln_z / t,
        q,
        v,
        eta: 1.0 - q.abs() / v,
        probabilities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{standard, StandardGraph};

    #[test]
    fn limits() {
        let g = standard(StandardGraph::Cycle(8)).unwrap();
        let early = tradeoff_metrics(&g, LaplacianKind::Binary, 1e-9).unwrap();
        assert!((early.entropy - 8f64.ln()).abs() < 1e-6);
        let late = tradeoff_metrics(&g, LaplacianKind::Binary, 200.0).unwrap();
        assert!(late.entropy < 1e-6);
        assert!((late.probabilities[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let g = standard(StandardGraph::RingLattice(10, 4)).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let h = 1e-5 * t;
            let at = |t| tradeoff_metrics(&g, LaplacianKind::Binary, t).unwrap();
            let m = at(t);
            let dq = (at(t + h).entropy - at(t - h).entropy) / (2.0 * h);
            let dv = (at(t + h).f - at(t - h).f) / (2.0 * h);
            assert!((m.q - dq).abs() < 1e-6, "t={t}: {} vs {dq}", m.q);
            assert!((m.v - dv).abs() < 1e-6, "t={t}: {} vs {dv}", m.v);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = standard(StandardGraph::Cycle(5)).unwrap();
        assert!(tradeoff_metrics(&g, LaplacianKind::Binary, 0.0).is_err());
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(tradeoff_metrics(&split, LaplacianKind::Binary, 1.0).is_err());
    }
}
