//! Dense complex linear algebra for states and channels on a handful of
//! qubits.

mod eigen;
mod matrix;
mod pauli;
pub mod random;

pub use eigen::{
    hermitian_eigendecomposition, hermitian_eigenvalues, schatten_norm, singular_values,
    symmetric_tridiagonal_eigen, trace_norm, Eigen, MAX_DENSE_DIM,
};
pub use matrix::{pauli as paulis, ComplexMatrix};
pub use pauli::{
    locality, pauli_decompose, pauli_operator, pauli_reconstruct, PauliDecomposition,
    MAX_PAULI_QUBITS,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance;

/// A positive semidefinite, unit-trace operator on `log2(dim)` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let d = matrix.rows();
        if !matrix.is_square() || d == 0 || !d.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "density matrix must be 2^k square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > tolerance::STRUCTURAL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tolerance::STRUCTURAL || tr.im.abs() > tolerance::STRUCTURAL {
            return Err(Error::InvalidInput(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < -tolerance::PSD {
            return Err(Error::InvalidInput(format!(
                "minimum eigenvalue {min:.3e} < 0"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        DensityMatrix { matrix }
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("state norm² {norm} is not 1")));
        }
        Self::new(ComplexMatrix::outer(psi).hermitian_part())
    }

    /// `|index⟩⟨index|` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(index, index)] = Complex64::new(1.0, 0.0);
        DensityMatrix { matrix: m }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// `tr(O ρ)` for Hermitian `O`.
    pub fn expectation(&self, observable: &ComplexMatrix) -> f64 {
        observable.adjoint().hs_inner(&self.matrix).re
    }
}

/// A linear map on `dim × dim` matrices stored as a `dim² × dim²` matrix
/// acting on row-major vectorisations: `vec(ρ)[i·dim + j] = ρ[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(Error::Dimension(format!(
                "superoperator on dimension {dim} must be {0}x{0}",
                dim * dim
            )));
        }
        Ok(Superoperator { dim, matrix })
    }

    /// `ρ ↦ Σ_k K_k ρ K_k†`, stored as `Σ_k K_k ⊗ conj(K_k)`.
    pub fn from_kraus(ops: &[ComplexMatrix]) -> Result<Self> {
        let dim = ops
            .first()
            .map(|k| k.rows())
            .ok_or_else(|| Error::InvalidInput("no Kraus operators".into()))?;
        let mut m = ComplexMatrix::zeros(dim * dim, dim * dim);
        for k in ops {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::Dimension("Kraus operators differ in shape".into()));
            }
            m.add_scaled(&k.kron(&k.conj()), Complex64::new(1.0, 0.0));
        }
        Ok(Superoperator { dim, matrix: m })
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator {
            dim,
            matrix: ComplexMatrix::identity(dim * dim),
        }
    }

    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::from_kraus(std::slice::from_ref(u))
    }

    /// `ρ ↦ tr(ρ) I/dim`.
    pub fn fully_depolarizing(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            for a in 0..dim {
                m[(i * dim + i, a * dim + a)] = Complex64::new(1.0 / dim as f64, 0.0);
            }
        }
        Superoperator { dim, matrix: m }
    }

    /// Computational-basis measurement with the outcome forgotten.
    pub fn dephasing(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            m[(i * dim + i, i * dim + i)] = Complex64::new(1.0, 0.0);
        }
        Superoperator { dim, matrix: m }
    }

    /// `ρ ↦ tr(ρ) σ`.
    pub fn replacement(sigma: &DensityMatrix) -> Self {
        let dim = sigma.dim();
        let mut m = ComplexMatrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for a in 0..dim {
                    m[(i * dim + j, a * dim + a)] = sigma.matrix()[(i, j)];
                }
            }
        }
        Superoperator { dim, matrix: m }
    }

    pub fn zero(dim: usize) -> Self {
        Superoperator {
            dim,
            matrix: ComplexMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut ComplexMatrix {
        &mut self.matrix
    }

    /// Applies the map to an arbitrary matrix.
    pub fn apply_matrix(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(Error::Dimension(format!(
                "superoperator on dimension {} applied to {}x{}",
                self.dim,
                a.rows(),
                a.cols()
            )));
        }
        let out = self.matrix.matvec(a.data())?;
        ComplexMatrix::from_vec(self.dim, self.dim, out)
    }

    /// Applies the map to a state. The result is only re-validated when the
    /// map is a channel; callers applying general maps should use
    /// [`Superoperator::apply_matrix`].
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_matrix(rho.matrix())?;
        Ok(DensityMatrix::from_matrix_unchecked(out.hermitian_part()))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Superoperator) -> Result<Superoperator> {
        if self.dim != other.dim {
            return Err(Error::Dimension(
                "composing maps on different dimensions".into(),
            ));
        }
        Ok(Superoperator {
            dim: self.dim,
            matrix: other.matrix.matmul(&self.matrix)?,
        })
    }

    /// Choi matrix `Σ_{ab} |a⟩⟨b| ⊗ S(|a⟩⟨b|)`.
    pub fn choi(&self) -> ComplexMatrix {
        let d = self.dim;
        ComplexMatrix::from_fn(d * d, d * d, |r, c| {
            let (a, i) = (r / d, r % d);
            let (b, j) = (c / d, c % d);
            self.matrix[(i * d + j, a * d + b)]
        })
    }

    /// Largest violation of `Σ_i S(|a⟩⟨b|)_{ii} = δ_ab`.
    pub fn trace_preservation_error(&self) -> f64 {
        let d = self.dim;
        let mut err: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let tr: Complex64 = (0..d).map(|i| self.matrix[(i * d + i, a * d + b)]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                err = err.max((tr - want).norm());
            }
        }
        err
    }

    /// Checks complete positivity (Choi PSD) and trace preservation.
    pub fn validate_channel(&self) -> Result<()> {
        let tp = self.trace_preservation_error();
        if tp > tolerance::STRUCTURAL {
            return Err(Error::InvalidChannel(format!(
                "trace preservation error {tp:.3e}"
            )));
        }
        let choi = self.choi();
        let dev = choi.hermitian_deviation();
        if dev > tolerance::PSD {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix not Hermitian ({dev:.3e})"
            )));
        }
        let min = hermitian_eigenvalues(&choi.hermitian_part())?[0];
        if min < -tolerance::PSD {
            return Err(Error::InvalidChannel(format!(
                "Choi eigenvalue {min:.3e} < 0"
            )));
        }
        Ok(())
    }

    pub fn is_channel(&self) -> bool {
        self.validate_channel().is_ok()
    }

    pub fn add_scaled(&mut self, other: &Superoperator, s: f64) {
        self.matrix
            .add_scaled(&other.matrix, Complex64::new(s, 0.0));
    }
}

/// Convenience wrapper matching the state-level contract.
pub fn apply_superoperator(s: &Superoperator, rho: &DensityMatrix) -> Result<DensityMatrix> {
    s.apply(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use random::*;

    fn plus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[Complex64::new(s, 0.0), Complex64::new(s, 0.0)]).unwrap()
    }

    #[test]
    fn identity_channel_keeps_state() {
        let mut rng = substream(1, 0);
        let rho = random_density(4, 2, &mut rng);
        let out = Superoperator::identity(4).apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn depolarizing_gives_maximally_mixed() {
        let out = Superoperator::fully_depolarizing(2).apply(&plus()).unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(2).matrix())
                < 1e-15
        );
    }

    #[test]
    fn z_measurement_on_plus() {
        let p0 = ComplexMatrix::diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diagonal(&[0.0, 1.0]);
        let meas = Superoperator::from_kraus(&[p0, p1]).unwrap();
        assert_eq!(meas, Superoperator::dephasing(2));
        let out = meas.apply(&plus()).unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(2).matrix())
                < 1e-15
        );
        assert!(meas.is_channel());
    }

    #[test]
    fn dimension_mismatch() {
        let err = Superoperator::identity(2).apply(&DensityMatrix::maximally_mixed(4));
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn channel_validation() {
        let mut rng = substream(2, 0);
        for dim in [2, 4] {
            for k in 1..4 {
                let c = random_channel(dim, k, &mut rng);
                c.validate_channel().unwrap();
                let rho = random_density(dim, dim, &mut rng);
                DensityMatrix::new(c.apply(&rho).unwrap().into_matrix()).unwrap();
            }
        }
        // transpose is positive but not completely positive
        let mut t = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                t[(i * 2 + j, j * 2 + i)] = Complex64::new(1.0, 0.0);
            }
        }
        let transpose = Superoperator::from_matrix(2, t).unwrap();
        assert!(transpose.trace_preservation_error() < 1e-15);
        assert!(!transpose.is_channel());
        assert!(!Superoperator::zero(2).is_channel());
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diagonal(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diagonal(&[0.5, 0.5])).is_ok());
        assert!(DensityMatrix::new(ComplexMatrix::identity(3).scale_real(1.0 / 3.0)).is_err());
    }

    #[test]
    fn trace_norm_of_states_is_one() {
        let mut rng = substream(3, 0);
        for dim in [2, 4, 8] {
            let rho = random_density(dim, 3, &mut rng);
            assert!((trace_norm(rho.matrix()).unwrap() - 1.0).abs() < 1e-10);
        }
    }
}
