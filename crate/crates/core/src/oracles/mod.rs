//! Ground truth at desk scale: Max-Cut, exact Quantum Max-Cut, the
//! closed-form bounds and the constructive assignments behind them.

mod bounds;
mod maxcut;
mod qmc;
mod strip;

pub use bounds::{
    certified_lower_bound, constructive_energies, qmc_bounds, ConstructiveEnergies, QmcBounds,
};
pub use maxcut::{
    cut_value, max_cut_bruteforce, max_cut_exact, CutAssignment, MAX_BRUTEFORCE_VERTICES,
};
pub use qmc::{
    dense_qmc_matrix, qmc_apply, qmc_energy, qmc_exact, qmc_exact_with, star_optimal_state,
    LanczosOptions, QmcSolution, StateVector, MAX_QMC_QUBITS,
};
pub use strip::{edge_energy, negate_odd_local, strip_odd_local};
