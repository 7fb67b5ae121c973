use crate::error::{Error, Result};
use crate::linalg::{
    pauli_decompose, pauli_operator, pauli_reconstruct, ComplexMatrix, DensityMatrix,
    MAX_PAULI_QUBITS,
};

fn check_size(rho: &DensityMatrix) -> Result<()> {
    if rho.qubits() > MAX_PAULI_QUBITS {
        return Err(Error::Infeasible(format!(
            "{} qubits exceed the {MAX_PAULI_QUBITS}-qubit Pauli limit",
            rho.qubits()
        )));
    }
    Ok(())
}

fn map_odd(rho: &DensityMatrix, factor: f64) -> Result<ComplexMatrix> {
    check_size(rho)?;
    let mut p = pauli_decompose(rho.matrix())?;
    let n = p.qubits();
    for (i, c) in p.coeffs_mut().iter_mut().enumerate() {
        if crate::linalg::locality(n, i) % 2 == 1 {
            *c *= factor;
        }
    }
    Ok(pauli_reconstruct(&p))
}

/// `ρ⁻`: every odd-local Pauli coefficient negated.
pub fn negate_odd_local(rho: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(map_odd(rho, -1.0)?)
}

/// `(ρ + ρ⁻)/2`: only the even-local part of `ρ` survives.
pub fn strip_odd_local(rho: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(map_odd(rho, 0.0)?)
}

/// `tr(Q_uv ρ)` for the singlet projector on qubits `u`, `v`.
pub fn edge_energy(rho: &DensityMatrix, u: usize, v: usize) -> Result<f64> {
    check_size(rho)?;
    let n = rho.qubits();
    if u == v || u >= n || v >= n {
        return Err(Error::InvalidInput(format!(
            "bad qubit pair ({u}, {v}) on {n} qubits"
        )));
    }
    let mut energy = 1.0;
    for p in ['X', 'Y', 'Z'] {
        let label: String = (0..n)
            .map(|i| if i == u || i == v { p } else { 'I' })
            .collect();
        energy -= rho.expectation(&pauli_operator(&label)?);
    }
    Ok(energy / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn single_qubit_examples() {
        let zero = DensityMatrix::basis(2, 0);
        let s = strip_odd_local(&zero).unwrap();
        assert!(
            s.matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(2).matrix())
                < 1e-12
        );
        let h = 0.5f64.sqrt();
        let plus = DensityMatrix::pure(&[Complex64::new(h, 0.0), Complex64::new(h, 0.0)]).unwrap();
        let s = strip_odd_local(&plus).unwrap();
        assert!(
            s.matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(2).matrix())
                < 1e-12
        );
    }

    #[test]
    fn singlet_is_fixed() {
        let h = 0.5f64.sqrt();
        let z = Complex64::new(0.0, 0.0);
        let singlet =
            DensityMatrix::pure(&[z, Complex64::new(h, 0.0), Complex64::new(-h, 0.0), z]).unwrap();
        let s = strip_odd_local(&singlet).unwrap();
        assert!(s.matrix().max_abs_diff(singlet.matrix()) < 1e-12);
        assert!((edge_energy(&singlet, 0, 1).unwrap() - 1.0).abs() < 1e-12);
        let neg = negate_odd_local(&singlet).unwrap();
        assert!(neg.matrix().max_abs_diff(singlet.matrix()) < 1e-12);
    }

    #[test]
    fn product_state_crossing_energy() {
        // |0><0| ⊗ |0><0| stripped on each side, then tensored: 1/4 across
        let a = strip_odd_local(&DensityMatrix::basis(2, 0)).unwrap();
        let b = strip_odd_local(&DensityMatrix::basis(2, 1)).unwrap();
        let ab = a.kron(&b);
        assert!((edge_energy(&ab, 0, 1).unwrap() - 0.25).abs() < 1e-12);
    }
}
