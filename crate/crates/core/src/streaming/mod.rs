//! One-pass estimation of `W` and of the Quantum Max-Cut value.
//!
//! [`ReservoirState`] is the literal single-sampler algorithm with exact
//! arithmetic; [`EstimatorBank`] runs `K × B` copies of it in the same
//! distribution but with skip-ahead replacement and shared sample records, so
//! per-edge work does not scale with `K·B`.

mod bank;
mod estimate;
mod reservoir;

pub use bank::{amplification_shape, EstimatorBank};
pub use estimate::{
    estimate_qmc, estimate_qmc_online, estimate_qmc_value, estimate_w, EstimateMode, QmcEstimate,
};
pub use reservoir::{
    expectation_oracle, finalize_sample, sample_value, Candidate, ReservoirState, MAX_ORACLE_EDGES,
};
