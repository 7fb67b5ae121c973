//! Fourier analysis on `{0,1}^n` for scalar-, matrix- and superoperator-valued
//! tables.
//!
//! Points and subsets are both `u32` bit masks: bit `j` of `x` is `x_j`, and
//! `S·x` is the parity of `S & x`.

mod gf2;
mod protocol;
mod verify;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{schatten_norm, trace_norm, ComplexMatrix, Superoperator};

pub use gf2::{constraint_indicator_coeffs, Gf2Matrix};
pub use protocol::{
    mass_transfer_residual, phi_states, phibound_experiment, protocol_states, PhiBound, ToyProtocol,
};
pub use verify::{run_suite, LemmaReport, SuiteConfig, SuiteReport};

/// Values a Boolean table may hold.
pub trait FourierValue: Clone {
    /// Largest `n` accepted for tables of this kind.
    const MAX_N: usize;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn scale(&self, s: f64) -> Self;
    /// Entrywise maximum absolute difference; `∞` on shape mismatch.
    fn distance(&self, other: &Self) -> f64;
}

impl FourierValue for f64 {
    const MAX_N: usize = 12;
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
    fn distance(&self, o: &Self) -> f64 {
        (self - o).abs()
    }
}

impl FourierValue for Complex64 {
    const MAX_N: usize = 12;
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
    fn distance(&self, o: &Self) -> f64 {
        (self - o).norm()
    }
}

impl FourierValue for ComplexMatrix {
    const MAX_N: usize = 8;
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn scale(&self, s: f64) -> Self {
        self.scale_real(s)
    }
    fn distance(&self, o: &Self) -> f64 {
        if self.rows() != o.rows() || self.cols() != o.cols() {
            return f64::INFINITY;
        }
        self.max_abs_diff(o)
    }
}

impl FourierValue for Superoperator {
    const MAX_N: usize = 6;
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, 1.0);
        out
    }
    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, -1.0);
        out
    }
    fn scale(&self, s: f64) -> Self {
        let mut out = Superoperator::zero(self.dim());
        out.add_scaled(self, s);
        out
    }
    fn distance(&self, o: &Self) -> f64 {
        self.matrix().distance(o.matrix())
    }
}

fn check_n<V: FourierValue>(n: usize, len: usize) -> Result<()> {
    if n > V::MAX_N {
        return Err(Error::Infeasible(format!(
            "table on {n} bits exceeds the limit of {} for this value kind",
            V::MAX_N
        )));
    }
    if len != 1 << n {
        return Err(Error::Dimension(format!("{len} entries for n = {n}")));
    }
    Ok(())
}

/// `f(x)` for every `x ∈ {0,1}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BooleanTable<V> {
    n: usize,
    values: Vec<V>,
}

/// `f̂(S)` for every `S ⊆ [n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable<V> {
    n: usize,
    coeffs: Vec<V>,
}

impl<V: FourierValue> BooleanTable<V> {
    pub fn new(n: usize, values: Vec<V>) -> Result<Self> {
        check_n::<V>(n, values.len())?;
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(u32) -> V) -> Result<Self> {
        if n > V::MAX_N {
            return check_n::<V>(n, 0).map(|_| unreachable!());
        }
        Self::new(n, (0..1u32 << n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn get(&self, x: u32) -> &V {
        &self.values[x as usize]
    }

    /// Pointwise combination with another table on the same cube.
    pub fn zip<W: FourierValue, U: FourierValue>(
        &self,
        other: &BooleanTable<W>,
        f: impl Fn(&V, &W) -> U,
    ) -> Result<BooleanTable<U>> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "tables on {} and {} bits",
                self.n, other.n
            )));
        }
        BooleanTable::new(
            self.n,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        )
    }

    /// `2^{-n} Σ_x f(x)`.
    pub fn mean(&self) -> V {
        let mut acc = self.values[0].clone();
        for v in &self.values[1..] {
            acc = acc.add(v);
        }
        acc.scale(1.0 / self.values.len() as f64)
    }
}

impl<V: FourierValue> FourierTable<V> {
    pub fn new(n: usize, coeffs: Vec<V>) -> Result<Self> {
        check_n::<V>(n, coeffs.len())?;
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[V] {
        &self.coeffs
    }

    pub fn coeff(&self, s: u32) -> &V {
        &self.coeffs[s as usize]
    }

    pub fn max_distance(&self, other: &FourierTable<V>) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

/// In-place unnormalised Walsh–Hadamard butterflies.
fn butterflies<V: FourierValue>(v: &mut [V]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i].clone(), v[i + h].clone());
                v[i] = a.add(&b);
                v[i + h] = a.sub(&b);
            }
        }
        h *= 2;
    }
}

/// `f̂(S) = 2^{-n} Σ_x f(x)(−1)^{S·x}`.
pub fn transform<V: FourierValue>(f: &BooleanTable<V>) -> FourierTable<V> {
    let mut c = f.values.clone();
    butterflies(&mut c);
    let scale = 1.0 / c.len() as f64;
    FourierTable {
        n: f.n,
        coeffs: c.iter().map(|v| v.scale(scale)).collect(),
    }
}

/// `f(x) = Σ_S f̂(S)(−1)^{S·x}`.
pub fn inverse_transform<V: FourierValue>(f: &FourierTable<V>) -> BooleanTable<V> {
    let mut v = f.coeffs.clone();
    butterflies(&mut v);
    BooleanTable { n: f.n, values: v }
}

/// `Σ_T f̂(T)·ĝ(T⊕S)` for every `S`, with `mul` supplying the product.
pub fn convolve<A, B, C>(
    f: &FourierTable<A>,
    g: &FourierTable<B>,
    mul: impl Fn(&A, &B) -> C,
) -> Result<FourierTable<C>>
where
    A: FourierValue,
    B: FourierValue,
    C: FourierValue,
{
    if f.n != g.n {
        return Err(Error::Dimension(
            "convolving tables on different cubes".into(),
        ));
    }
    let size = 1u32 << f.n;
    let coeffs = (0..size)
        .map(|s| {
            let mut acc = mul(&f.coeffs[0], &g.coeffs[s as usize]);
            for t in 1..size {
                acc = acc.add(&mul(&f.coeffs[t as usize], &g.coeffs[(t ^ s) as usize]));
            }
            acc
        })
        .collect();
    FourierTable::new(f.n, coeffs)
}

pub fn parity(s: u32, x: u32) -> bool {
    (s & x).count_ones() % 2 == 1
}

/// `Â_S` of a family of linear maps `x ↦ A_x`.
pub fn channel_fourier(
    n: usize,
    family: impl FnMut(u32) -> Superoperator,
) -> Result<FourierTable<Superoperator>> {
    Ok(transform(&BooleanTable::from_fn(n, family)?))
}

/// Result of the matrix hypercontractivity check.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HypercontractivitySums {
    /// `Σ_S δ^{|S|} ‖f̂(S)‖₁²`.
    pub lhs: f64,
    /// `2^{2δβ}`.
    pub bound: f64,
    /// `Σ_{|S|=k} ‖f̂(S)‖₁` for `k = 0..=n`.
    pub level_l1: Vec<f64>,
    /// `Σ_{|S|=k} ‖f̂(S)‖₁²` for `k = 0..=n`.
    pub level_l1_sq: Vec<f64>,
}

/// Requires `‖f(x)‖₁ ≤ 1` (to 1e-9) and square `2^β`-dimensional values.
pub fn hypercontractivity_sums(
    f: &BooleanTable<ComplexMatrix>,
    delta: f64,
) -> Result<HypercontractivitySums> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidInput(format!(
            "delta must lie in [0, 1], got {delta}"
        )));
    }
    let d = f.values[0].rows();
    if !d.is_power_of_two() || f.values.iter().any(|m| m.rows() != d || m.cols() != d) {
        return Err(Error::Dimension(
            "values must be 2^beta-square matrices".into(),
        ));
    }
    for (x, m) in f.values.iter().enumerate() {
        let t = trace_norm(m)?;
        if t > 1.0 + 1e-9 {
            return Err(Error::InvalidInput(format!("‖f({x})‖₁ = {t} exceeds 1")));
        }
    }
    let beta = d.trailing_zeros() as f64;
    let fh = transform(f);
    let mut level_l1 = vec![0.0; f.n + 1];
    let mut level_l1_sq = vec![0.0; f.n + 1];
    let mut lhs = 0.0;
    for (s, c) in fh.coeffs.iter().enumerate() {
        let k = (s as u32).count_ones() as usize;
        let t = trace_norm(c)?;
        level_l1[k] += t;
        level_l1_sq[k] += t * t;
        lhs += delta.powi(k as i32) * t * t;
    }
    Ok(HypercontractivitySums {
        lhs,
        bound: 2f64.powf(2.0 * delta * beta),
        level_l1,
        level_l1_sq,
    })
}

/// Both sides of the matrix hypercontractive inequality in its squared form
/// `Σ_S (p−1)^{|S|} ‖f̂(S)‖_p² ≤ (2^{-n} Σ_x ‖f(x)‖_p^p)^{2/p}`.
pub fn matrix_hypercontractivity(f: &BooleanTable<ComplexMatrix>, p: f64) -> Result<(f64, f64)> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "p must lie in [1, 2], got {p}"
        )));
    }
    let fh = transform(f);
    let mut lhs = 0.0;
    for (s, c) in fh.coeffs.iter().enumerate() {
        let k = (s as u32).count_ones() as i32;
        lhs += (p - 1.0).powi(k) * schatten_norm(c, p)?.powi(2);
    }
    let mut avg = 0.0;
    for m in &f.values {
        avg += schatten_norm(m, p)?.powf(p);
    }
    avg /= f.values.len() as f64;
    Ok((lhs, avg.powf(2.0 / p)))
}
