//! Hermitian eigensolving (cyclic Jacobi) and the norms built on it.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Largest dimension accepted by the dense Jacobi path.
pub const MAX_DENSE_DIM: usize = 1024;

/// Eigenvalues ascending, with the matching eigenvectors as columns of
/// `vectors`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eigendecomposition(a: &ComplexMatrix) -> Result<Eigen> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} is not square",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n > MAX_DENSE_DIM {
        return Err(Error::Infeasible(format!(
            "dense eigensolver limited to dimension {MAX_DENSE_DIM}, got {n}"
        )));
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let dev = a.hermitian_deviation();
    if dev > 1e-10 * scale.max(1.0) {
        return Err(Error::NotHermitian(dev));
    }

    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let frob = m.frobenius_norm();

    for sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob || off == 0.0 {
            break;
        }
        // Early sweeps skip small entries; later sweeps rotate everything.
        let threshold = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 || r <= threshold {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                if sweep >= 4 && r < 1e-18 * (app.abs() + aqq.abs()) {
                    m[(p, q)] = ZERO;
                    m[(q, p)] = ZERO;
                    continue;
                }
                rotate(&mut m, &mut v, p, q, apq, r, app, aqq);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Eigen { values, vectors })
}

#[allow(clippy::too_many_arguments)]
fn rotate(
    m: &mut ComplexMatrix,
    v: &mut ComplexMatrix,
    p: usize,
    q: usize,
    apq: Complex64,
    r: f64,
    app: f64,
    aqq: f64,
) {
    let n = m.rows();
    // Phase e^{-i phi} on column q makes the (p, q) entry real, then a real
    // Jacobi rotation zeroes it.
    let phase = (apq / r).conj();
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // G = [[c, s], [-s e, c e]] with e = phase.
    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = -phase * s;
    let gqq = phase * c;

    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * gpp + akq * gqp;
        m[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        m[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Eigenvalues ascending (convenience wrapper).
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigendecomposition(a)?.values)
}

/// Singular values, descending, via the Hermitian dilation
/// `[[0, A], [A†, 0]]` whose spectrum is `±σ_i` padded with zeros.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let (r, c) = (a.rows(), a.cols());
    let mut dil = ComplexMatrix::zeros(r + c, r + c);
    for i in 0..r {
        for j in 0..c {
            dil[(i, r + j)] = a[(i, j)];
            dil[(r + j, i)] = a[(i, j)].conj();
        }
    }
    let mut vals = hermitian_eigenvalues(&dil)?;
    vals.reverse();
    vals.truncate(r.min(c));
    Ok(vals.into_iter().map(|s| s.max(0.0)).collect())
}

/// Schatten 1-norm: the sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} is not square",
            a.rows(),
            a.cols()
        )));
    }
    if a.max_abs() == 0.0 {
        return Ok(0.0);
    }
    if a.hermitian_deviation() <= 1e-14 * a.max_abs() {
        return Ok(hermitian_eigenvalues(a)?.iter().map(|l| l.abs()).sum());
    }
    Ok(singular_values(a)?.iter().sum())
}

/// Schatten p-norm for `p >= 1`.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(Error::InvalidInput(format!(
            "Schatten p-norm needs p >= 1, got {p}"
        )));
    }
    if a.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let sv = if a.is_square() && a.hermitian_deviation() <= 1e-14 * a.max_abs() {
        hermitian_eigenvalues(a)?.iter().map(|l| l.abs()).collect()
    } else {
        singular_values(a)?
    };
    Ok(sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Eigenpairs of the real symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (implicit QL). Returns eigenvalues ascending and the
/// eigenvectors as rows of the second component.
pub fn symmetric_tridiagonal_eigen(d: &[f64], e: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = d.len();
    assert!(e.len() + 1 == n || (n == 0 && e.is_empty()));
    let mut d = d.to_vec();
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).collect();
    e.truncate(n);
    // z[k] is the k-th eigenvector being accumulated (stored as rows).
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 200 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let zf = row[i + 1];
                    row[i + 1] = s * row[i] + c * zf;
                    row[i] = c * row[i] - s * zf;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // z rows index the original basis; columns are eigenvectors.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| z[i][k]).collect())
        .collect();
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::pauli;
    use crate::linalg::random::random_hermitian;
    use crate::rng::substream;

    fn check_decomposition(a: &ComplexMatrix) {
        let eig = hermitian_eigendecomposition(a).unwrap();
        let n = a.rows();
        let lam = ComplexMatrix::diagonal(&eig.values);
        let rebuilt = &(&eig.vectors * &lam) * &eig.vectors.adjoint();
        let scale = a.max_abs().max(1.0);
        assert!(rebuilt.max_abs_diff(a) <= 1e-9 * scale);
        let gram = &eig.vectors.adjoint() * &eig.vectors;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-10);
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - a.trace().re).abs() <= 1e-9 * scale);
        for w in eig.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn pauli_z_spectrum() {
        let v = hermitian_eigenvalues(&pauli::z()).unwrap();
        assert_eq!(v, vec![-1.0, 1.0]);
        let v = hermitian_eigenvalues(&ComplexMatrix::zeros(2, 2)).unwrap();
        assert_eq!(v, vec![0.0, 0.0]);
    }

    #[test]
    fn singlet_projector_spectrum() {
        let paulis = [pauli::x(), pauli::y(), pauli::z()];
        let mut q = ComplexMatrix::identity(4);
        for p in &paulis {
            q = &q - &p.kron(p);
        }
        let q = q.scale_real(0.25);
        let v = hermitian_eigenvalues(&q).unwrap();
        let want = [0.0, 0.0, 0.0, 1.0];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{v:?}");
        }
    }

    #[test]
    fn random_hermitian_decompositions() {
        let mut rng = substream(11, 0);
        for dim in [1, 2, 3, 5, 8, 16, 33] {
            for _ in 0..5 {
                check_decomposition(&random_hermitian(dim, &mut rng));
            }
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let a = ComplexMatrix::identity(6).scale_real(3.0);
        check_decomposition(&a);
        let paulis = [pauli::x(), pauli::y(), pauli::z()];
        let mut h = ComplexMatrix::zeros(4, 4);
        for p in &paulis {
            h = &h + &p.kron(p);
        }
        check_decomposition(&h);
    }

    #[test]
    fn rejects_bad_input() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            hermitian_eigendecomposition(&m),
            Err(Error::NotHermitian(_))
        ));
        assert!(hermitian_eigendecomposition(&ComplexMatrix::zeros(2, 3)).is_err());
        assert!(matches!(
            hermitian_eigendecomposition(&ComplexMatrix::zeros(1025, 1025)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::identity(2)).unwrap() - 2.0).abs() < 1e-12);
        assert!((trace_norm(&pauli::x()).unwrap() - 2.0).abs() < 1e-12);
        // non-Hermitian: [[0,1],[0,0]] has singular values {1, 0}
        let nil = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((trace_norm(&nil).unwrap() - 1.0).abs() < 1e-12);
        assert!(trace_norm(&ComplexMatrix::zeros(2, 3)).is_err());
        let sv = singular_values(
            &ComplexMatrix::from_real(2, 3, &[3.0, 0.0, 0.0, 0.0, 4.0, 0.0]).unwrap(),
        )
        .unwrap();
        assert!((sv[0] - 4.0).abs() < 1e-12 && (sv[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let d = [2.0, -1.0, 0.5, 3.0, 1.0];
        let e = [1.0, 0.3, -2.0, 0.7];
        let (vals, vecs) = symmetric_tridiagonal_eigen(&d, &e);
        let mut dense = vec![0.0; 25];
        for i in 0..5 {
            dense[i * 5 + i] = d[i];
            if i < 4 {
                dense[i * 5 + i + 1] = e[i];
                dense[(i + 1) * 5 + i] = e[i];
            }
        }
        let a = ComplexMatrix::from_real(5, 5, &dense).unwrap();
        let want = hermitian_eigenvalues(&a).unwrap();
        for (x, y) in vals.iter().zip(&want) {
            assert!((x - y).abs() < 1e-12);
        }
        for (k, vec) in vecs.iter().enumerate() {
            for i in 0..5 {
                let mut av = d[i] * vec[i];
                if i > 0 {
                    av += e[i - 1] * vec[i - 1];
                }
                if i < 4 {
                    av += e[i] * vec[i + 1];
                }
                assert!((av - vals[k] * vec[i]).abs() < 1e-12);
            }
        }
    }
}
