//! Numerical tolerances shared by every module.

/// Structural invariants: Hermiticity, trace, reconstruction identities.
pub const STRUCTURAL: f64 = 1e-12;

/// Results of iterative procedures (eigensolvers, norms built on them).
pub const ITERATIVE: f64 = 1e-9;

/// Positive semidefiniteness slack for density matrices and Choi matrices.
pub const PSD: f64 = 1e-10;

/// Pauli reconstruction / Fourier round trips.
pub const RECONSTRUCTION: f64 = 1e-10;
