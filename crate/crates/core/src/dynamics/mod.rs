//! Diffusion of positions over a network: `dy/dt = -S L y`.
//!
//! The closed form expands `y0` in Laplacian eigenvectors and decays each
//! component at its own rate. The stepped integrator handles
//! heterogeneous susceptibilities `S` with classic fourth-order Runge-Kutta.

mod rounds;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use rounds::{
    four_cluster_protocol, memory_experiment, population_sd, run_rounds, sd_difference,
    MemoryProtocol, MemoryResult, Round, RoundRule, RoundSchedule,
};

use crate::error::{domain, invalid, Error, Result};
use crate::graph::{is_connected, Graph};
use crate::spectra::{laplacian, spectrum, LaplacianKind};

/// Positions (opinions, memories) of the `n` nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PositionVector(Vec<f64>);

impl PositionVector {
    pub fn new(y: Vec<f64>) -> Result<Self> {
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("position {i} is not finite")));
        }
        Ok(PositionVector(y))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn spread(&self) -> f64 {
        spread(&self.0)
    }
}

/// Per-node susceptibility to influence (the diagonal of `S`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Susceptibility(Vec<f64>);

impl Susceptibility {
    pub fn new(s: Vec<f64>) -> Result<Self> {
        if let Some(i) = s.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(invalid(format!(
                "susceptibility {i} must be positive and finite"
            )));
        }
        Ok(Susceptibility(s))
    }

    pub fn uniform(n: usize) -> Self {
        Susceptibility(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

/// `max(y) - min(y)`; 0 for an empty vector.
pub fn spread(y: &[f64]) -> f64 {
    if y.is_empty() {
        return 0.0;
    }
    let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Spectral,
    Stepped,
    Rounds,
}

/// Sampled positions over time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub samples: Vec<Vec<f64>>,
    pub method: Method,
    /// Expansion coefficients `b_k` of `y0` (spectral runs only).
    pub coefficients: Option<Vec<f64>>,
    /// Set when the graph has several components, each settling on its own
    /// equilibrium.
    pub disconnected: bool,
}

impl Trajectory {
    pub fn spread(&self) -> Vec<f64> {
        self.samples.iter().map(|y| spread(y)).collect()
    }

    pub fn last(&self) -> Option<&[f64]> {
        self.samples.last().map(Vec::as_slice)
    }

    /// `t,y_0,...,y_{n-1},spread`
    pub fn to_csv(&self) -> String {
        let n = self.samples.first().map_or(0, Vec::len);
        let mut out = String::from("t");
        for i in 0..n {
            let _ = write!(out, ",y_{i}");
        }
        out.push_str(",spread\n");
        for (t, y) in self.times.iter().zip(&self.samples) {
            let _ = write!(out, "{t}");
            for v in y {
                let _ = write!(out, ",{v}");
            }
            let _ = writeln!(out, ",{}", spread(y));
        }
        out
    }
}

fn check_len(g: &Graph, y0: &PositionVector) -> Result<()> {
    if y0.len() != g.node_count() {
        return Err(invalid(format!(
            "position vector has {} entries for {} nodes",
            y0.len(),
            g.node_count()
        )));
    }
    Ok(())
}

/// Eigen-expansion of the linear dynamics for one Laplacian kind.
struct Modes {
    values: Vec<f64>,
    /// Unit eigenvectors of a symmetric matrix.
    basis: Vec<Vec<f64>>,
    /// `D^1/2` for the row-normalized kind (similarity transform), else 1.
    scale: Vec<f64>,
    coefficients: Vec<f64>,
}

impl Modes {
    fn new(g: &Graph, kind: LaplacianKind, y0: &[f64]) -> Result<Self> {
        let n = g.node_count();
        let sym_kind = match kind {
            LaplacianKind::RowNormalized => LaplacianKind::SymNormalized,
            k => k,
        };
        let s = spectrum(g, sym_kind)?;
        let scale: Vec<f64> = if kind == LaplacianKind::RowNormalized {
            let sym = crate::spectra::prepare(g, crate::graph::Symmetrize::Intersection);
            (0..n).map(|i| sym.strength(i).sqrt()).collect()
        } else {
            vec![1.0; n]
        };
        let basis: Vec<Vec<f64>> = (0..n).map(|k| s.vector(k)).collect();
        let z: Vec<f64> = y0.iter().zip(&scale).map(|(y, d)| y * d).collect();
        let coefficients = basis
            .iter()
            .map(|u| u.iter().zip(&z).map(|(a, b)| a * b).sum())
            .collect();
        Ok(Modes {
            values: s.values,
            basis,
            scale,
            coefficients,
        })
    }

    fn at(&self, t: f64) -> Vec<f64> {
        let n = self.scale.len();
        let mut z = vec![0.0; n];
        for (k, u) in self.basis.iter().enumerate() {
            let c = self.coefficients[k] * (-self.values[k] * t).exp();
            if c == 0.0 {
                continue;
            }
            for (zi, ui) in z.iter_mut().zip(u) {
                *zi += c * ui;
            }
        }
        z.iter().zip(&self.scale).map(|(v, d)| v / d).collect()
    }
}

/// Exact solution `y_t = Σ b_k e^(-λ_k t) v_k` at the requested times.
///
/// For the row-normalized kind the expansion runs in the symmetric
/// similarity basis: `v_k = D^-1/2 u_k` and `b_k = u_k · D^1/2 y0`.
pub fn diffuse_spectral(
    g: &Graph,
    kind: LaplacianKind,
    y0: &PositionVector,
    times: &[f64],
) -> Result<Trajectory> {
    check_len(g, y0)?;
    check_times(times)?;
    let modes = Modes::new(g, kind, y0.as_slice())?;
    let samples = times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                y0.as_slice().to_vec()
            } else {
                modes.at(t)
            }
        })
        .collect();
    Ok(Trajectory {
        times: times.to_vec(),
        samples,
        method: Method::Spectral,
        coefficients: Some(modes.coefficients),
        disconnected: g.node_count() > 0 && !is_connected(g),
    })
}

fn check_times(times: &[f64]) -> Result<()> {
    for w in times.windows(2) {
        if w[1] < w[0] {
            return Err(invalid("sample times must be non-decreasing"));
        }
    }
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(invalid("sample times must be finite and non-negative"));
    }
    Ok(())
}

/// Fourth-order Runge-Kutta integration of `dy/dt = -S L y` from 0 to
/// `t_end`, sampled at every step.
///
/// The step is shrunk slightly so that the last sample lands on `t_end`.
/// Steps at or above `2 / (max s · λ_max)` are rejected.
pub fn diffuse_stepped(
    g: &Graph,
    kind: LaplacianKind,
    s: &Susceptibility,
    y0: &PositionVector,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    check_len(g, y0)?;
    let n = g.node_count();
    if s.as_slice().len() != n {
        return Err(invalid(format!(
            "susceptibility has {} entries for {n} nodes",
            s.as_slice().len()
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(domain("dt must be positive and t_end non-negative"));
    }
    let lambda_max = spectrum(g, kind)?.lambda_max();
    let bound = 2.0 / (s.max() * lambda_max);
    if dt >= bound {
        return Err(domain(format!(
            "dt = {dt} violates the stability bound dt < 2/(max s · λ_max) = {bound}"
        )));
    }
    let l = laplacian(g, kind)?;
    let sv = s.as_slice();
    let rhs =
        |y: &[f64]| -> Vec<f64> { l.mul_vec(y).iter().zip(sv).map(|(v, si)| -si * v).collect() };
    let steps = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 {
        0.0
    } else {
        t_end / steps as f64
    };
    let mut y = y0.as_slice().to_vec();
    let mut times = Vec::with_capacity(steps + 1);
    let mut samples = Vec::with_capacity(steps + 1);
    times.push(0.0);
    samples.push(y.clone());
    let axpy = |y: &[f64], k: &[f64], a: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(yi, ki)| yi + a * ki).collect()
    };
    for step in 1..=steps {
        let k1 = rhs(&y);
        let k2 = rhs(&axpy(&y, &k1, h / 2.0));
        let k3 = rhs(&axpy(&y, &k2, h / 2.0));
        let k4 = rhs(&axpy(&y, &k3, h));
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        times.push(if step == steps {
            t_end
        } else {
            step as f64 * h
        });
        samples.push(y.clone());
    }
    Ok(Trajectory {
        times,
        samples,
        method: Method::Stepped,
        coefficients: None,
        disconnected: n > 0 && !is_connected(g),
    })
}

/// Bisection tolerance of [`convergence_time`].
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;
const CONVERGENCE_HORIZON: f64 = 1e12;

/// Earliest time at which the spread of the closed-form solution drops
/// below `epsilon`, located by bisection to within
/// [`CONVERGENCE_TOLERANCE`].
///
/// Only the binary and row-normalized kinds qualify: their propagators are
/// stochastic, so the spread never grows and bisection is valid. The
/// symmetric-normalized flow does not preserve consensus on irregular
/// graphs.
pub fn convergence_time(
    g: &Graph,
    kind: LaplacianKind,
    y0: &PositionVector,
    epsilon: f64,
) -> Result<f64> {
    check_len(g, y0)?;
    if kind == LaplacianKind::SymNormalized {
        return Err(domain(
            "the symmetric-normalized flow has no consensus state; use binary or rownorm",
        ));
    }
    if g.node_count() == 0 || !is_connected(g) {
        return Err(domain("a disconnected graph never reaches consensus"));
    }
    if !(epsilon > 0.0) || y0.spread() <= epsilon {
        return Err(domain(format!(
            "epsilon {epsilon} must be positive and below the initial spread {}",
            y0.spread()
        )));
    }
    let modes = Modes::new(g, kind, y0.as_slice())?;
    let below = |t: f64| spread(&modes.at(t)) < epsilon;
    let mut lo = 0.0;
    let mut hi = 1.0;
    while !below(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > CONVERGENCE_HORIZON {
            return Err(Error::Convergence {
                iterations: 0,
                last: vec![hi, spread(&modes.at(hi))],
            });
        }
    }
    while hi - lo > CONVERGENCE_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
