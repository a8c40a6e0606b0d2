//! Spectral network cohesion.
//!
//! Builds the three graph Laplacians used in cohesion studies (binary
//! `L = D - A`, row-normalized `D - W`, symmetric-normalized
//! `D^-1/2 (D - A) D^-1/2`), computes algebraic connectivity together with
//! its combinatorial bounds, runs diffusion/consensus dynamics on static and
//! switching topologies, and reproduces a set of seeded experiments
//! (coloring-network table, cohesion figures, memory-convergence rounds).
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`graph`] | [`Graph`], edge-list I/O, distances, vertex connectivity, cycles |
//! | [`linalg`] | dense [`Matrix`] and the in-repo symmetric eigensolver |
//! | [`spectra`] | Laplacians, spectra, λ₂, bound reports, density-matrix metrics |
//! | [`dynamics`] | spectral and stepped diffusion, round protocols, memory experiment |
//! | [`generators`] | standard families, clustered rewiring, random graphs, chord procedures |
//! | [`fitting`] | power-law and hyperbola least-squares fits |
//! | [`experiments`] | seeded experiment runners and JSON/CSV reports |

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod fitting;
pub mod generators;
pub mod graph;
pub mod linalg;
pub mod rng;
pub mod spectra;

pub use error::{Error, Result};
pub use graph::Graph;
pub use linalg::Matrix;
pub use spectra::{LaplacianKind, Spectrum};
