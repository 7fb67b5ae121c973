//! Streaming Quantum Max-Cut estimation and the desk-scale machinery needed to
//! check it.
//!
//! The crate is organised by subsystem:
//!
//! - [`graph`]: weighted graphs, edge streams, the edge-list text format and the
//!   structural decompositions (the `W` parameter, DFS levels, heaviest-edge
//!   matching/forest).
//! - [`linalg`]: a small dense complex linear-algebra substrate (Jacobi
//!   eigensolver, Schatten norms, Pauli decompositions, density matrices and
//!   superoperators).
//! - [`oracles`]: brute-force and reduction-based Max-Cut, exact Quantum
//!   Max-Cut via Lanczos, the closed-form bounds and the constructive
//!   assignments behind them.
//! - [`relaxation`]: the shifted Goemans-Williamson vector program solved by
//!   low-rank ascent on a product of spheres.
//! - [`streaming`]: the one-pass reservoir estimator for `W`, its median-of-means
//!   amplification and the final QMC estimate.
//! - [`dihp`]: hidden-partition instances, their reduction to edge streams and the
//!   streaming-algorithm-as-protocol harness.
//! - [`fourier`]: Boolean Fourier transforms of scalar-, matrix- and
//!   channel-valued tables, with a randomized lemma verification suite.

pub mod dihp;
pub mod error;
pub mod fourier;
pub mod graph;
pub mod linalg;
pub mod oracles;
pub mod relaxation;
pub mod rng;
pub mod streaming;
pub mod tolerance;

pub use error::{Error, Result};
pub use graph::{EdgeStream, Weight, WeightedEdge, WeightedGraph};
pub use linalg::{ComplexMatrix, DensityMatrix, Superoperator};
pub use streaming::{EstimatorBank, QmcEstimate};
