//! Random matrices, states and channels for property tests and experiments.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;
use super::{DensityMatrix, Superoperator};

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Entries i.i.d. standard complex Gaussian.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    random_matrix(dim, dim, rng).hermitian_part()
}

/// Columns orthonormalised by modified Gram-Schmidt; `rows >= cols`.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rows >= cols);
    let mut m = random_matrix(rows, cols, rng);
    for j in 0..cols {
        for k in 0..j {
            let dot: Complex64 = (0..rows).map(|i| m[(i, k)].conj() * m[(i, j)]).sum();
            for i in 0..rows {
                let mk = m[(i, k)];
                m[(i, j)] -= dot * mk;
            }
        }
        let norm = (0..rows).map(|i| m[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..rows {
            m[(i, j)] /= norm;
        }
    }
    m
}

pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    random_isometry(dim, dim, rng)
}

/// Random unit vector.
pub fn random_state_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random density matrix `G G† / tr(G G†)` with `G` a `dim × rank` Gaussian.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = random_matrix(dim, rank.max(1), rng);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::from_matrix_unchecked(gg.scale_real(1.0 / tr).hermitian_part())
}

/// Random channel with `kraus` Kraus operators, from a random Stinespring
/// isometry.
pub fn random_channel<R: Rng + ?Sized>(dim: usize, kraus: usize, rng: &mut R) -> Superoperator {
    let iso = random_isometry(dim * kraus, dim, rng);
    let ops: Vec<ComplexMatrix> = (0..kraus)
        .map(|k| ComplexMatrix::from_fn(dim, dim, |i, j| iso[(k * dim + i, j)]))
        .collect();
    Superoperator::from_kraus(&ops).expect("isometry blocks form a channel")
}
