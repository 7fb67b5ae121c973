use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::random::{random_channel, random_density, random_matrix};
use crate::linalg::ComplexMatrix;
use crate::rng::substream;

use super::{
    constraint_indicator_coeffs, convolve, hypercontractivity_sums, inverse_transform,
    mass_transfer_residual, matrix_hypercontractivity, phibound_experiment, transform,
    BooleanTable, FourierTable, FourierValue, Gf2Matrix, ToyProtocol,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Multiplies every trial count (at least one trial each).
    pub scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub checks: usize,
    pub violations: usize,
    /// Largest residual for identities, largest `lhs − rhs` for inequalities.
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub scale: f64,
    pub lemmas: Vec<LemmaReport>,
    pub passed: bool,
}

struct Tally {
    lemma: String,
    tolerance: f64,
    checks: usize,
    violations: usize,
    max_violation: f64,
}

impl Tally {
    fn new(lemma: impl Into<String>, tolerance: f64) -> Self {
        Self {
            lemma: lemma.into(),
            tolerance,
            checks: 0,
            violations: 0,
            max_violation: f64::NEG_INFINITY,
        }
    }

    fn record(&mut self, violation: f64) {
        self.checks += 1;
        if violation.is_nan() || violation > self.tolerance {
            self.violations += 1;
        }
        self.max_violation = self.max_violation.max(violation);
    }

    fn finish(self) -> LemmaReport {
        LemmaReport {
            passed: self.violations == 0 && self.checks > 0,
            lemma: self.lemma,
            checks: self.checks,
            violations: self.violations,
            max_violation: self.max_violation,
            tolerance: self.tolerance,
        }
    }
}

fn random_table(
    n: usize,
    rows: usize,
    cols: usize,
    rng: &mut ChaCha8Rng,
) -> BooleanTable<ComplexMatrix> {
    BooleanTable::from_fn(n, |_| random_matrix(rows, cols, rng)).expect("within limits")
}

fn random_gf2(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Gf2Matrix {
    let rows = (0..k).map(|_| rng.random_range(0..1u32 << n)).collect();
    Gf2Matrix::new(n, rows).expect("within limits")
}

fn off_support_max<V: FourierValue>(f: &FourierTable<V>, m: &Gf2Matrix, zero: &V) -> f64 {
    let support = m.row_space();
    (0..1u32 << f.n())
        .filter(|s| !support.contains(s))
        .map(|s| f.coeff(s).distance(zero))
        .fold(0.0, f64::max)
}

fn round_trip(trials: usize, rng: &mut ChaCha8Rng) -> Result<LemmaReport> {
    let mut t = Tally::new("inverse", 1e-10);
    for _ in 0..trials {
        let n = rng.random_range(1..=6);
        let d = rng.random_range(1..=4);
        let f = random_table(n, d, d, rng);
        let back = inverse_transform(&transform(&f));
        let err = f
            .values()
            .iter()
            .zip(back.values())
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max);
        t.record(err);
    }
    Ok(t.finish())
}

fn matconv(trials: usize, rng: &mut ChaCha8Rng) -> Result<LemmaReport> {
    let mut t = Tally::new("matconv", 1e-9);
    for i in 0..trials {
        let n = rng.random_range(1..=4);
        let err = if i % 4 == 0 {
            let f = BooleanTable::from_fn(n, |_| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })?;
            let g = BooleanTable::from_fn(n, |_| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })?;
            let prod = transform(&f.zip(&g, |a, b| a * b)?);
            prod.max_distance(&convolve(&transform(&f), &transform(&g), |a, b| a * b)?)
        } else {
            let (a, b, c) = (
                rng.random_range(1..=3),
                rng.random_range(1..=3),
                rng.random_range(1..=3),
            );
            let f = random_table(n, a, b, rng);
            let g = random_table(n, b, c, rng);
            let prod = transform(&f.zip(&g, |x, y| x * y)?);
            prod.max_distance(&convolve(&transform(&f), &transform(&g), |x, y| x * y)?)
        };
        t.record(err);
    }
    Ok(t.finish())
}

fn lopconv(trials: usize, rng: &mut ChaCha8Rng) -> Result<LemmaReport> {
    let mut t = Tally::new("lopconv", 1e-9);
    for _ in 0..trials {
        let n = rng.random_range(1..=4);
        let d = rng.random_range(1..=2) * 2;
        let family = BooleanTable::from_fn(n, |_| {
            let k = rng.random_range(1..=3);
            random_channel(d, k, rng)
        })?;
        let f = random_table(n, d, d, rng);
        let applied = family.zip(&f, |a, x| a.apply_matrix(x).expect("shapes agree"))?;
        let lhs = transform(&applied);
        let rhs = convolve(&transform(&family), &transform(&f), |a, x| {
            a.apply_matrix(x).expect("shapes agree")
        })?;
        t.record(lhs.max_distance(&rhs));
    }
    Ok(t.finish())
}

fn parseval(trials: usize, rng: &mut ChaCha8Rng) -> Result<LemmaReport> {
    let mut t = Tally::new("parseval", 1e-10);
    for _ in 0..trials {
        let n = rng.random_range(1..=10);
        let f = BooleanTable::from_fn(n, |_| rng.sample::<f64, _>(StandardNormal))?;
        let mean_sq = f.values().iter().map(|v| v * v).sum::<f64>() / f.values().len() as f64;
        let coeff_sq: f64 = transform(&f).coeffs().iter().map(|c| c * c).sum();
        t.record((mean_sq - coeff_sq).abs());
    }
    Ok(t.finish())
}

fn linearcon(trials: usize, rng: &mut ChaCha8Rng) -> Result<LemmaReport> {
    let mut t = Tally::new("linearcon", 1e-10);
    for _ in 0..trials {
        let n = rng.random_range(1..=10);
        let k = rng.random_range(1..=6);
        let m = random_gf2(n, k, rng);
        let y = rng.random_range(0..1u32 << k);
        let direct = transform(&BooleanTable::from_fn(n, |x| {
            if m.apply(x) == y {
                1.0
            } else {
                0.0
            }
        })?);
        t.record(direct.max_distance(&constraint_indicator_coeffs(&m, y)?));
    }
    Ok(t.finish())
}

fn zerocoeffs(trials: usize, rng: &mut ChaCha8Rng) -> Result<LemmaReport> {
    let mut t = Tally::new("zerocoeffs", 1e-10);
    for _ in 0..trials {
        let n = rng.random_range(1..=6);
        let k = rng.random_range(1..=n);
        let m = random_gf2(n, k, rng);
        let g: Vec<ComplexMatrix> = (0..1 << k).map(|_| random_matrix(2, 2, rng)).collect();
        let f = BooleanTable::from_fn(n, |x| g[m.apply(x) as usize].clone())?;
        t.record(off_support_max(
            &transform(&f),
            &m,
            &ComplexMatrix::zeros(2, 2),
        ));
    }
    Ok(t.finish())
}

fn channel_support(trials: usize, rng: &mut ChaCha8Rng) -> Result<LemmaReport> {
    use crate::linalg::Superoperator;
    let mut t = Tally::new("channel_support", 1e-10);
    for _ in 0..trials {
        let n = rng.random_range(1..=5);
        let k = rng.random_range(1..=n.min(3));
        let m = random_gf2(n, k, rng);
        let b: Vec<Superoperator> = (0..1 << k).map(|_| random_channel(2, 2, rng)).collect();
        let fh = super::channel_fourier(n, |x| b[m.apply(x) as usize].clone())?;
        t.record(off_support_max(&fh, &m, &Superoperator::zero(2)));
    }
    Ok(t.finish())
}

fn mathc(p: f64, trials: usize, rng: &mut ChaCha8Rng) -> Result<LemmaReport> {
    let mut t = Tally::new(format!("mathc(p={p})"), 1e-9);
    for _ in 0..trials {
        let n = rng.random_range(1..=4);
        let d = rng.random_range(1..=4);
        let scale = rng.random_range(0.1..3.0);
        let f = BooleanTable::from_fn(n, |_| random_matrix(d, d, rng).scale_real(scale))?;
        let (lhs, rhs) = matrix_hypercontractivity(&f, p)?;
        t.record(lhs - rhs);
    }
    Ok(t.finish())
}

fn matkklcor(delta: f64, trials: usize, rng: &mut ChaCha8Rng) -> Result<LemmaReport> {
    let mut t = Tally::new(format!("matkklcor(delta={delta})"), 1e-9);
    for _ in 0..trials {
        let f = BooleanTable::from_fn(4, |_| {
            let rank = rng.random_range(1..=4);
            random_density(4, rank, rng).into_matrix()
        })?;
        let r = hypercontractivity_sums(&f, delta)?;
        t.record(r.lhs - r.bound);
    }
    Ok(t.finish())
}

fn random_protocol(i: usize, rng: &mut ChaCha8Rng) -> Result<ToyProtocol> {
    let n = [2, 4, 6][i % 3];
    let alpha_n = rng.random_range(1..=(n / 2).min(2));
    let beta = rng.random_range(1..=2);
    let players = rng.random_range(1..=3);
    ToyProtocol::random(n, alpha_n, beta, players, rng)
}

fn mass_transfer(trials: usize, rng: &mut ChaCha8Rng) -> Result<LemmaReport> {
    let mut t = Tally::new("mass_transfer", 1e-9);
    for i in 0..trials {
        t.record(mass_transfer_residual(&random_protocol(i, rng)?)?);
    }
    Ok(t.finish())
}

fn phibound(trials: usize, rng: &mut ChaCha8Rng) -> Result<LemmaReport> {
    let mut t = Tally::new("phibound", 1e-9);
    let r = phibound_experiment(&ToyProtocol::parity_forwarding())?;
    t.record(r.lhs - r.rhs);
    for i in 0..trials {
        let r = phibound_experiment(&random_protocol(i, rng)?)?;
        t.record(r.lhs - r.rhs);
    }
    Ok(t.finish())
}

/// Runs every numerical lemma check with independent per-lemma streams.
pub fn run_suite(config: SuiteConfig) -> Result<SuiteReport> {
    let n = |base: usize| ((base as f64 * config.scale).ceil() as usize).max(1);
    let mut stream = 0;
    let mut next = || {
        stream += 1;
        substream(config.seed, stream)
    };
    let mut lemmas = vec![
        round_trip(n(100), &mut next())?,
        matconv(n(200), &mut next())?,
        lopconv(n(100), &mut next())?,
        parseval(n(200), &mut next())?,
        linearcon(n(200), &mut next())?,
        zerocoeffs(n(100), &mut next())?,
        channel_support(n(100), &mut next())?,
    ];
    for p in [1.25, 1.5, 2.0] {
        lemmas.push(mathc(p, n(200), &mut next())?);
    }
    for (delta, base) in [(0.0, 200), (0.5, 1000), (1.0, 200)] {
        lemmas.push(matkklcor(delta, n(base), &mut next())?);
    }
    lemmas.push(mass_transfer(n(60), &mut next())?);
    lemmas.push(phibound(n(60), &mut next())?);
    Ok(SuiteReport {
        seed: config.seed,
        scale: config.scale,
        passed: lemmas.iter().all(|l| l.passed),
        lemmas,
    })
}
