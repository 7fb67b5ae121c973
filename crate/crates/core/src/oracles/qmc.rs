use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{families, weight_to_f64, WeightedGraph};
use crate::linalg::{hermitian_eigendecomposition, symmetric_tridiagonal_eigen, ComplexMatrix};
use crate::rng::substream;

/// Qubit budget for matrix-free work (Hilbert dimension `2^14`).
pub const MAX_QMC_QUBITS: usize = 14;

/// Amplitudes over `2^q` basis states; qubit 0 is the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Requires a power-of-two length and unit norm (to 1e-12).
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let s = Self::unnormalized(amps)?;
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "state has norm {norm}, expected 1"
            )));
        }
        Ok(s)
    }

    /// Rescales to unit norm; rejects the zero vector.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let s = Self::unnormalized(amps)?;
        let norm = s.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidInput(
                "cannot normalise a zero or non-finite vector".into(),
            ));
        }
        Ok(Self {
            amps: s.amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Any power-of-two length vector, e.g. the image `Q·ψ`.
    pub fn unnormalized(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::Dimension(format!(
                "state length {} is not a power of two",
                amps.len()
            )));
        }
        Ok(Self { amps })
    }

    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Edges of `g` as qubit bit masks over its non-isolated vertices.
struct QubitEdges {
    qubits: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl QubitEdges {
    fn new(g: &WeightedGraph) -> Result<Self> {
        let active = g.non_isolated();
        let q = active.len();
        if q > MAX_QMC_QUBITS {
            return Err(Error::Infeasible(format!(
                "{q} non-isolated vertices exceed the {MAX_QMC_QUBITS}-qubit limit"
            )));
        }
        let mut index = vec![usize::MAX; g.n()];
        for (i, &v) in active.iter().enumerate() {
            index[v] = i;
        }
        let bit = |v: usize| 1usize << (q - 1 - index[v]);
        let edges = g
            .edges()
            .iter()
            .map(|e| (bit(e.u), bit(e.v), weight_to_f64(&e.w)))
            .collect();
        Ok(Self { qubits: q, edges })
    }

    fn dim(&self) -> usize {
        1 << self.qubits
    }

    fn apply<T>(&self, x: &[T], out: &mut [T])
    where
        T: Copy + std::ops::Sub<Output = T> + std::ops::AddAssign + std::ops::Mul<f64, Output = T>,
    {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = x[i] * 0.0;
            for &(mu, mv, w) in &self.edges {
                if (i & mu == 0) != (i & mv == 0) {
                    acc += (x[i] - x[i ^ mu ^ mv]) * (0.5 * w);
                }
            }
            *o = acc;
        }
    }
}

/// Image `Q·ψ` of the Quantum Max-Cut Hamiltonian, computed without forming
/// the matrix. Qubits are the non-isolated vertices in increasing order.
pub fn qmc_apply(g: &WeightedGraph, psi: &StateVector) -> Result<StateVector> {
    let h = QubitEdges::new(g)?;
    if psi.dim() != h.dim() {
        return Err(Error::Dimension(format!(
            "state dimension {} does not match 2^{} qubits",
            psi.dim(),
            h.qubits
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); h.dim()];
    h.apply(&psi.amps, &mut out);
    StateVector::unnormalized(out)
}

/// Rayleigh quotient `⟨ψ|Q|ψ⟩ / ⟨ψ|ψ⟩`.
pub fn qmc_energy(g: &WeightedGraph, psi: &StateVector) -> Result<f64> {
    let image = qmc_apply(g, psi)?;
    Ok(psi.inner(&image).re / psi.inner(psi).re)
}

/// Dense Hamiltonian for cross-checks (at most 10 qubits).
pub fn dense_qmc_matrix(g: &WeightedGraph) -> Result<ComplexMatrix> {
    let h = QubitEdges::new(g)?;
    if h.qubits > 10 {
        return Err(Error::Infeasible(format!(
            "dense Hamiltonian on {} qubits",
            h.qubits
        )));
    }
    let d = h.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    let mut col = vec![0.0; d];
    let mut e = vec![0.0; d];
    for j in 0..d {
        e[j] = 1.0;
        h.apply(&e, &mut col);
        e[j] = 0.0;
        for (i, &c) in col.iter().enumerate() {
            m[(i, j)] = Complex64::new(c, 0.0);
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    pub krylov_dim: usize,
    /// Independent random starting vectors; the best result wins.
    pub random_starts: usize,
    /// Thick-free restarts (from the current Ritz vector) per start.
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            krylov_dim: 200,
            random_starts: 3,
            max_restarts: 50,
            seed: 0x51ce,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QmcSolution {
    pub value: f64,
    pub state: StateVector,
    /// `‖Qv − λv‖₂` of the returned witness.
    pub residual: f64,
    pub restarts: usize,
}

/// Largest eigenvalue of the QMC Hamiltonian with residual at most
/// `tol·max(m, 1)`.
pub fn qmc_exact(g: &WeightedGraph, tol: f64) -> Result<QmcSolution> {
    qmc_exact_with(g, tol, LanczosOptions::default())
}

pub fn qmc_exact_with(g: &WeightedGraph, tol: f64, opts: LanczosOptions) -> Result<QmcSolution> {
    let h = QubitEdges::new(g)?;
    let m: f64 = h.edges.iter().map(|e| e.2).sum();
    let target = tol * m.max(1.0);
    let dim = h.dim();
    if h.edges.is_empty() {
        return Ok(QmcSolution {
            value: 0.0,
            state: StateVector::basis(h.qubits, 0),
            residual: 0.0,
            restarts: 0,
        });
    }

    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    let mut restarts = 0;
    for s in 0..opts.random_starts.max(1) {
        let mut rng = substream(opts.seed, s as u64);
        let mut start: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
        let mut outcome = None;
        for _ in 0..=opts.max_restarts {
            restarts += 1;
            let (theta, v) = lanczos_pass(&h, &start, opts.krylov_dim.max(2), target);
            let res = residual(&h, &v, theta);
            let done = res <= target;
            outcome = Some((theta, v.clone(), res));
            if done {
                break;
            }
            start = v;
        }
        let cand = outcome.expect("at least one pass");
        let better = match &best {
            None => true,
            Some(b) => {
                let (bc, bb) = (cand.2 <= target, b.2 <= target);
                (bc && !bb) || (bc == bb && cand.0 > b.0)
            }
        };
        if better {
            best = Some(cand);
        }
    }
    let (value, v, res) = best.expect("at least one start");
    if res > target {
        return Err(Error::NoConvergence(format!(
            "Lanczos residual {res:.3e} above target {target:.3e} (value {value})"
        )));
    }
    let state = StateVector::normalized(v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())?;
    Ok(QmcSolution {
        value,
        state,
        residual: res,
        restarts,
    })
}

fn residual(h: &QubitEdges, v: &[f64], theta: f64) -> f64 {
    let mut av = vec![0.0; v.len()];
    h.apply(v, &mut av);
    av.iter()
        .zip(v)
        .map(|(a, x)| (a - theta * x).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One Lanczos run with full reorthogonalisation; returns the top Ritz pair.
fn lanczos_pass(h: &QubitEdges, start: &[f64], kmax: usize, target: f64) -> (f64, Vec<f64>) {
    let dim = start.len();
    let kmax = kmax.min(dim);
    let n0 = dot(start, start).sqrt();
    let mut basis: Vec<Vec<f64>> = vec![start.iter().map(|x| x / n0).collect()];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    loop {
        let j = basis.len() - 1;
        h.apply(&basis[j], &mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = dot(&w, &w).sqrt();
        let k = alpha.len();
        let check = k == kmax || k % 10 == 0 || b <= 1e-10 * a.abs().max(1.0);
        if check {
            let (vals, vecs) = symmetric_tridiagonal_eigen(&alpha, &beta);
            let top = vals.len() - 1;
            let y = &vecs[top];
            let est = b * y[k - 1].abs();
            if k == kmax || est <= 0.1 * target || b <= 1e-10 * a.abs().max(1.0) {
                let mut v = vec![0.0; dim];
                for (coef, q) in y.iter().zip(&basis) {
                    v.iter_mut().zip(q).for_each(|(x, qi)| *x += coef * qi);
                }
                let nv = dot(&v, &v).sqrt();
                v.iter_mut().for_each(|x| *x /= nv);
                return (vals[top], v);
            }
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
}

/// The optimal star state: single-excitation amplitudes given by the top
/// Laplacian eigenvector. Returns the state and its energy.
pub fn star_optimal_state(d: usize) -> Result<(StateVector, f64)> {
    if d == 0 || d + 1 > MAX_QMC_QUBITS {
        return Err(Error::InvalidInput(format!(
            "star degree {d} outside 1..={}",
            MAX_QMC_QUBITS - 1
        )));
    }
    let k = d + 1;
    let lap = ComplexMatrix::from_fn(k, k, |i, j| {
        let x = match (i, j) {
            (0, 0) => d as f64,
            (i, j) if i == j => 1.0,
            (0, _) | (_, 0) => -1.0,
            _ => 0.0,
        };
        Complex64::new(x, 0.0)
    });
    let eig = hermitian_eigendecomposition(&lap)?;
    let top = eig.vector(k - 1);
    let pivot = top
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("non-empty");
    let phase = pivot.conj() / pivot.norm();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << k];
    for (i, c) in top.iter().enumerate() {
        amps[1 << (k - 1 - i)] = c * phase;
    }
    let state = StateVector::normalized(amps)?;
    let energy = qmc_energy(&families::star(d), &state)?;
    Ok((state, energy))
}
