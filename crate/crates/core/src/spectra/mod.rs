//! Laplacian construction and spectra.
//!
//! Three Laplacians are supported:
//!
//! | kind      | matrix                          |
//! |-----------|---------------------------------|
//! | `binary`  | `L = D - A`                     |
//! | `rownorm` | `D - W`, `w_ij = a_ij / s_i`    |
//! | `symnorm` | `D^-1/2 (D - A) D^-1/2`         |
//!
//! The row-normalized matrix is not symmetric. Its spectrum is obtained from
//! the symmetric-normalized one, which is similar to it, and its right
//! eigenvectors are recovered as `v = D^-1/2 u`.

mod bounds;
mod tradeoff;

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bounds::{bound_report, BoundChecks, BoundReport};
pub use tradeoff::{tradeoff_metrics, TradeoffMetrics};

use crate::error::{domain, Error, Result};
use crate::graph::{is_connected, Graph, Symmetrize};
use crate::linalg::{eigen_sym, Matrix};

/// Eigenvalues at or below this fraction of the largest eigenvalue count as zero.
pub const ZERO_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum LaplacianKind {
    #[default]
    #[serde(rename = "binary")]
    Binary,
    #[serde(rename = "rownorm")]
    RowNormalized,
    #[serde(rename = "symnorm")]
    SymNormalized,
}

impl LaplacianKind {
    pub const ALL: [LaplacianKind; 3] = [
        LaplacianKind::Binary,
        LaplacianKind::RowNormalized,
        LaplacianKind::SymNormalized,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LaplacianKind::Binary => "binary",
            LaplacianKind::RowNormalized => "rownorm",
            LaplacianKind::SymNormalized => "symnorm",
        }
    }

    fn is_normalized(self) -> bool {
        self != LaplacianKind::Binary
    }
}

impl fmt::Display for LaplacianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LaplacianKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(LaplacianKind::Binary),
            "rownorm" | "row_normalized" => Ok(LaplacianKind::RowNormalized),
            "symnorm" | "sym_normalized" => Ok(LaplacianKind::SymNormalized),
            other => Err(Error::Validation(format!(
                "unknown Laplacian kind {other:?} (expected binary, rownorm or symnorm)"
            ))),
        }
    }
}

/// Ascending eigenvalues with matching unit-length eigenvectors (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Matrix,
    pub kind: LaplacianKind,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// Second-smallest eigenvalue, or 0 for fewer than two nodes.
    pub fn lambda2(&self) -> f64 {
        self.values.get(1).copied().unwrap_or(0.0)
    }

    pub fn lambda_max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Number of eigenvalues within [`ZERO_TOLERANCE`] (relative) of zero.
    pub fn zero_multiplicity(&self) -> usize {
        let cutoff = ZERO_TOLERANCE * self.lambda_max().abs().max(f64::MIN_POSITIVE);
        self.values.iter().filter(|v| v.abs() <= cutoff).count()
    }
}

/// Undirected graph the Laplacians are built from.
pub(crate) fn prepare(g: &Graph, mode: Symmetrize) -> std::borrow::Cow<'_, Graph> {
    if g.is_directed() {
        std::borrow::Cow::Owned(g.symmetrized(mode))
    } else {
        std::borrow::Cow::Borrowed(g)
    }
}

fn strengths(g: &Graph, kind: LaplacianKind) -> Result<Vec<f64>> {
    let s: Vec<f64> = (0..g.node_count()).map(|i| g.strength(i)).collect();
    if kind.is_normalized() {
        if let Some(i) = s.iter().position(|&x| x <= 0.0) {
            return Err(domain(format!(
                "node {i} is isolated; the {kind} Laplacian needs every degree >= 1"
            )));
        }
    }
    Ok(s)
}

/// Laplacian of `g`; directed input keeps mutual ties only.
pub fn laplacian(g: &Graph, kind: LaplacianKind) -> Result<Matrix> {
    laplacian_with(g, kind, Symmetrize::Intersection)
}

pub fn laplacian_with(g: &Graph, kind: LaplacianKind, mode: Symmetrize) -> Result<Matrix> {
    let g = prepare(g, mode);
    let n = g.node_count();
    let s = strengths(&g, kind)?;
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for (j, w) in g.weighted_neighbors(i) {
            m[(i, j)] = match kind {
                LaplacianKind::Binary => -w,
                LaplacianKind::RowNormalized => -w / s[i],
                LaplacianKind::SymNormalized => -w / (s[i] * s[j]).sqrt(),
            };
        }
        m[(i, i)] = match kind {
            LaplacianKind::Binary => s[i],
            _ => 1.0,
        };
    }
    Ok(m)
}

/// Full spectrum of the chosen Laplacian.
pub fn spectrum(g: &Graph, kind: LaplacianKind) -> Result<Spectrum> {
    spectrum_with(g, kind, Symmetrize::Intersection)
}

pub fn spectrum_with(g: &Graph, kind: LaplacianKind, mode: Symmetrize) -> Result<Spectrum> {
    let g = prepare(g, mode);
    let sym_kind = if kind == LaplacianKind::RowNormalized {
        LaplacianKind::SymNormalized
    } else {
        kind
    };
    let eig = eigen_sym(&laplacian_with(&g, sym_kind, mode)?)?;
    let mut vectors = eig.vectors;
    if kind == LaplacianKind::RowNormalized {
        let s = strengths(&g, kind)?;
        let n = s.len();
        for k in 0..n {
            let mut norm = 0.0;
            for i in 0..n {
                vectors[(i, k)] /= s[i].sqrt();
                norm += vectors[(i, k)] * vectors[(i, k)];
            }
            let norm = norm.sqrt();
            let mut pivot = 0;
            for i in 0..n {
                if vectors[(i, k)].abs() > vectors[(pivot, k)].abs() {
                    pivot = i;
                }
            }
            let scale = if vectors[(pivot, k)] < 0.0 {
                -norm
            } else {
                norm
            };
            for i in 0..n {
                vectors[(i, k)] /= scale;
            }
        }
    }
    Ok(Spectrum {
        values: eig.values,
        vectors,
        kind,
    })
}

/// Second-smallest Laplacian eigenvalue; exactly 0 for disconnected graphs.
pub fn algebraic_connectivity(g: &Graph, kind: LaplacianKind) -> Result<f64> {
    let n = g.node_count();
    if n < 2 {
        return Err(domain(format!(
            "algebraic connectivity needs at least 2 nodes, got {n}"
        )));
    }
    let g = prepare(g, Symmetrize::Intersection);
    strengths(&g, kind)?;
    if !is_connected(&g) {
        return Ok(0.0);
    }
    Ok(spectrum(&g, kind)?.lambda2())
}

/// Row-major CSV with a `# kind=.. n=..` header line.
pub fn matrix_to_csv(m: &Matrix, kind: LaplacianKind) -> String {
    let mut out = format!("# kind={kind} n={}\n", m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(f64::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// One line per eigenpair: `k,lambda,v_0,...,v_{n-1}`.
pub fn spectrum_to_csv(s: &Spectrum) -> String {
    let n = s.len();
    let mut out = format!("# kind={} n={n}\nk,lambda", s.kind);
    for i in 0..n {
        let _ = write!(out, ",v_{i}");
    }
    out.push('\n');
    for k in 0..n {
        let _ = write!(out, "{},{}", k + 1, s.values[k]);
        for i in 0..n {
            let _ = write!(out, ",{}", s.vectors[(i, k)]);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{standard, StandardGraph};

    #[test]
    fn k2_binary_matrix() {
        let k2 = standard(StandardGraph::Clique(2)).unwrap();
        let l = laplacian(&k2, LaplacianKind::Binary).unwrap();
        assert_eq!(
            l,
            Matrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap()
        );
    }

    #[test]
    fn c4_row_normalized_entries() {
        let c4 = standard(StandardGraph::Cycle(4)).unwrap();
        let l = laplacian(&c4, LaplacianKind::RowNormalized).unwrap();
        for i in 0..4 {
            assert_eq!(l[(i, i)], 1.0);
            assert_eq!(l[(i, (i + 1) % 4)], -0.5);
            assert_eq!(l[(i, (i + 2) % 4)], 0.0);
        }
    }

    #[test]
    fn rows_sum_to_zero() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        for kind in [LaplacianKind::Binary, LaplacianKind::RowNormalized] {
            let l = laplacian(&g, kind).unwrap();
            assert!(l.row_sums().iter().all(|s| s.abs() < 1e-15));
        }
    }

    #[test]
    fn isolated_node_rejected_for_normalized_kinds() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(laplacian(&g, LaplacianKind::Binary).is_ok());
        assert!(matches!(
            laplacian(&g, LaplacianKind::RowNormalized),
            Err(Error::Domain(_))
        ));
        assert!(algebraic_connectivity(&g, LaplacianKind::SymNormalized).is_err());
    }

    #[test]
    fn known_spectra() {
        let k4 = standard(StandardGraph::Clique(4)).unwrap();
        let s = spectrum(&k4, LaplacianKind::Binary).unwrap();
        for (got, want) in s.values.iter().zip([0.0, 4.0, 4.0, 4.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let c6 = standard(StandardGraph::Cycle(6)).unwrap();
        assert!((algebraic_connectivity(&c6, LaplacianKind::Binary).unwrap() - 1.0).abs() < 1e-12);
        let star = standard(StandardGraph::Star(5)).unwrap();
        assert!(
            (algebraic_connectivity(&star, LaplacianKind::Binary).unwrap() - 1.0).abs() < 1e-12
        );
    }

    #[test]
    fn anchors_from_the_convention_networks() {
        let k24 = standard(StandardGraph::Clique(24)).unwrap();
        let l = algebraic_connectivity(&k24, LaplacianKind::RowNormalized).unwrap();
        assert!((l - 24.0 / 23.0).abs() < 1e-12);
        let ring = standard(StandardGraph::RingLattice(24, 4)).unwrap();
        let l = algebraic_connectivity(&ring, LaplacianKind::RowNormalized).unwrap();
        let pi = std::f64::consts::PI;
        let want = 1.0 - ((2.0 * pi / 24.0).cos() + (4.0 * pi / 24.0).cos()) / 2.0;
        assert!((l - want).abs() < 1e-12);
        assert!((l - 0.0842).abs() < 1e-3);
    }

    #[test]
    fn disconnected_is_zero() {
        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        for kind in LaplacianKind::ALL {
            assert_eq!(algebraic_connectivity(&two, kind).unwrap(), 0.0);
        }
        let s = spectrum(&two, LaplacianKind::Binary).unwrap();
        assert_eq!(s.zero_multiplicity(), 2);
    }

    #[test]
    fn row_normalized_vectors_are_right_eigenvectors() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 1)]).unwrap();
        let s = spectrum(&g, LaplacianKind::RowNormalized).unwrap();
        let l = laplacian(&g, LaplacianKind::RowNormalized).unwrap();
        for k in 0..5 {
            let v = s.vector(k);
            let lv = l.mul_vec(&v);
            let r: f64 = lv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - s.values[k] * b).powi(2))
                .sum();
            assert!(r.sqrt() < 1e-12, "k={k} residual {r}");
        }
    }

    #[test]
    fn directed_input_keeps_mutual_ties_by_default() {
        let mut g = Graph::new_directed(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 0).unwrap();
        g.add_edge(1, 2).unwrap();
        let l = laplacian(&g, LaplacianKind::Binary).unwrap();
        assert_eq!(l[(1, 2)], 0.0);
        let u = laplacian_with(&g, LaplacianKind::Binary, Symmetrize::Union).unwrap();
        assert_eq!(u[(1, 2)], -1.0);
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in LaplacianKind::ALL {
            assert_eq!(kind.as_str().parse::<LaplacianKind>().unwrap(), kind);
        }
        assert!("laplace".parse::<LaplacianKind>().is_err());
    }

    #[test]
    fn csv_headers() {
        let k2 = standard(StandardGraph::Clique(2)).unwrap();
        let m = laplacian(&k2, LaplacianKind::Binary).unwrap();
        assert_eq!(
            matrix_to_csv(&m, LaplacianKind::Binary),
            "# kind=binary n=2\n1,-1\n-1,1\n"
        );
        let s = spectrum(&k2, LaplacianKind::Binary).unwrap();
        assert!(spectrum_to_csv(&s).starts_with("# kind=binary n=2\nk,lambda,v_0,v_1\n"));
    }
}
