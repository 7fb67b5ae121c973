use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::random::random_channel;
use crate::linalg::{paulis, trace_norm, ComplexMatrix, DensityMatrix, Superoperator};

use super::{channel_fourier, transform, BooleanTable, FourierTable, FourierValue, Gf2Matrix};

pub const MAX_TOY_N: usize = 6;
pub const MAX_TOY_BETA: usize = 2;
pub const MAX_TOY_PLAYERS: usize = 3;

/// One-way protocol on `β` qubits: player `t` sees the labels `y = M_t x`
/// and applies `B^t_y` to the message it received.
#[derive(Debug, Clone)]
pub struct ToyProtocol {
    n: usize,
    beta: usize,
    matchings: Vec<Gf2Matrix>,
    channels: Vec<Vec<Superoperator>>,
}

impl ToyProtocol {
    /// `channels[t][y]` is indexed by the label vector `y` of player `t`.
    pub fn new(
        n: usize,
        beta: usize,
        matchings: Vec<Gf2Matrix>,
        channels: Vec<Vec<Superoperator>>,
    ) -> Result<Self> {
        if n > MAX_TOY_N || beta > MAX_TOY_BETA || matchings.len() > MAX_TOY_PLAYERS {
            return Err(Error::Infeasible(format!(
                "toy protocol with n = {n}, beta = {beta}, T = {}",
                matchings.len()
            )));
        }
        if matchings.len() != channels.len() {
            return Err(Error::InvalidInput("one channel family per player".into()));
        }
        let dim = 1 << beta;
        for (t, (m, family)) in matchings.iter().zip(&channels).enumerate() {
            if m.col_count() != n {
                return Err(Error::Dimension(format!(
                    "player {} matrix has {} columns",
                    t + 1,
                    m.col_count()
                )));
            }
            if family.len() != 1 << m.row_count() {
                return Err(Error::Dimension(format!(
                    "player {} needs {} channels, got {}",
                    t + 1,
                    1 << m.row_count(),
                    family.len()
                )));
            }
            for (y, b) in family.iter().enumerate() {
                if b.dim() != dim {
                    return Err(Error::Dimension(format!(
                        "B^{}_{y} acts on dimension {}",
                        t + 1,
                        b.dim()
                    )));
                }
                b.validate_channel()
                    .map_err(|e| Error::InvalidChannel(format!("B^{}_{y}: {e}", t + 1)))?;
            }
        }
        Ok(Self {
            n,
            beta,
            matchings,
            channels,
        })
    }

    /// Matchings of `alpha_n` pairs and channels drawn at random.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        alpha_n: usize,
        beta: usize,
        players: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if 2 * alpha_n > n {
            return Err(Error::InvalidInput(format!(
                "{alpha_n} pairs on {n} vertices"
            )));
        }
        let dim = 1 << beta;
        let mut matchings = Vec::with_capacity(players);
        let mut channels = Vec::with_capacity(players);
        for _ in 0..players {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let edges: Vec<_> = perm.chunks(2).take(alpha_n).map(|p| (p[0], p[1])).collect();
            matchings.push(Gf2Matrix::from_matching(n, &edges)?);
            channels.push(
                (0..1 << alpha_n)
                    .map(|_| {
                        let kraus = rng.random_range(1..=dim * dim);
                        random_channel(dim, kraus, rng)
                    })
                    .collect(),
            );
        }
        Self::new(n, beta, matchings, channels)
    }

    /// Every player applies the identity channel.
    pub fn identity(n: usize, beta: usize, matchings: Vec<Gf2Matrix>) -> Result<Self> {
        let channels = matchings
            .iter()
            .map(|m| vec![Superoperator::identity(1 << beta); 1 << m.row_count()])
            .collect();
        Self::new(n, beta, matchings, channels)
    }

    /// `n = 2`, one pair, two players: player 1 writes its bit `y` into
    /// `|y⟩⟨y|`, player 2 conjugates by `X^y`.
    pub fn parity_forwarding() -> Self {
        let m = Gf2Matrix::from_matching(2, &[(0, 1)]).expect("valid matching");
        let write = |b| Superoperator::replacement(&DensityMatrix::basis(2, b));
        let flip = Superoperator::unitary(&paulis::x()).expect("unitary");
        Self::new(
            2,
            1,
            vec![m.clone(), m],
            vec![
                vec![write(0), write(1)],
                vec![Superoperator::identity(2), flip],
            ],
        )
        .expect("valid protocol")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn players(&self) -> usize {
        self.matchings.len()
    }

    pub fn matchings(&self) -> &[Gf2Matrix] {
        &self.matchings
    }

    pub fn channel(&self, player: usize, labels: u32) -> &Superoperator {
        &self.channels[player][labels as usize]
    }

    /// `x ↦ B^t_{M_t x}` for player index `t` (0-based).
    pub fn channel_family(&self, t: usize) -> Result<BooleanTable<Superoperator>> {
        BooleanTable::from_fn(self.n, |x| {
            self.channel(t, self.matchings[t].apply(x)).clone()
        })
    }

    /// `E_y B^t_y`.
    pub fn average_channel(&self, t: usize) -> Superoperator {
        let family = &self.channels[t];
        let mut avg = Superoperator::zero(1 << self.beta);
        for b in family {
            avg.add_scaled(b, 1.0 / family.len() as f64);
        }
        avg
    }

    pub fn initial_state(&self) -> ComplexMatrix {
        DensityMatrix::basis(1 << self.beta, 0).into_matrix()
    }
}

/// `f_0, …, f_T` with `f_t(x)` the message after player `t`.
pub fn protocol_states(p: &ToyProtocol) -> Result<Vec<BooleanTable<ComplexMatrix>>> {
    let mut tables = vec![BooleanTable::from_fn(p.n, |_| p.initial_state())?];
    for t in 0..p.players() {
        let prev = &tables[t];
        let next = (0..1u32 << p.n)
            .map(|x| {
                p.channel(t, p.matchings[t].apply(x))
                    .apply_matrix(prev.get(x))
            })
            .collect::<Result<Vec<_>>>()?;
        tables.push(BooleanTable::new(p.n, next)?);
    }
    Ok(tables)
}

/// Both sides of the distinguishability bound.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PhiBound {
    /// `‖φ_T − φ_0‖₁`.
    pub lhs: f64,
    /// `Σ_{t<T} Σ_{s≠0} ‖f̂_t(M_{t+1}ᵀ s)‖₁`.
    pub rhs: f64,
    /// `‖φ_{t+1} − φ_t‖₁` for each `t`.
    pub steps: Vec<f64>,
}

/// `φ_t`: labels of players `≤ t` come from a uniform `x`, later labels are
/// uniform and independent, so the later players act through their average
/// channels.
pub fn phi_states(
    p: &ToyProtocol,
    states: &[BooleanTable<ComplexMatrix>],
) -> Result<Vec<ComplexMatrix>> {
    let players = p.players();
    (0..=players)
        .map(|t| {
            let mut rho = states[t].mean();
            for s in t..players {
                rho = p.average_channel(s).apply_matrix(&rho)?;
            }
            Ok(rho)
        })
        .collect()
}

pub fn phibound_experiment(p: &ToyProtocol) -> Result<PhiBound> {
    let states = protocol_states(p)?;
    let phi = phi_states(p, &states)?;
    let players = p.players();
    let lhs = trace_norm(&(&phi[players] - &phi[0]))?;
    let steps = phi
        .windows(2)
        .map(|w| trace_norm(&(&w[1] - &w[0])))
        .collect::<Result<Vec<_>>>()?;
    let mut rhs = 0.0;
    for (state, matching) in states.iter().zip(&p.matchings) {
        let fh = transform(state);
        for s in matching.row_space() {
            if s != 0 {
                rhs += trace_norm(fh.coeff(s))?;
            }
        }
    }
    Ok(PhiBound { lhs, rhs, steps })
}

/// Largest entrywise gap in `f̂_t(S) = Σ_{T ∈ {M_tᵀs}} Â^t_T f̂_{t−1}(T ⊕ S)`
/// over all players and `S`.
pub fn mass_transfer_residual(p: &ToyProtocol) -> Result<f64> {
    let states = protocol_states(p)?;
    let mut worst: f64 = 0.0;
    for t in 0..p.players() {
        let a_hat = channel_fourier(p.n, |x| p.channel(t, p.matchings[t].apply(x)).clone())?;
        let prev: FourierTable<ComplexMatrix> = transform(&states[t]);
        let next = transform(&states[t + 1]);
        let support = p.matchings[t].row_space();
        for s in 0..1u32 << p.n {
            let dim = 1 << p.beta;
            let mut acc = ComplexMatrix::zeros(dim, dim);
            for &r in &support {
                let term = a_hat.coeff(r).apply_matrix(prev.coeff(r ^ s))?;
                acc.add_scaled(&term, Complex64::new(1.0, 0.0));
            }
            worst = worst.max(acc.distance(next.coeff(s)));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use crate::rng::substream;

    /// `φ_t` by enumerating `x` and every label suffix.
    fn phi_enumerated(p: &ToyProtocol, t: usize) -> ComplexMatrix {
        let players = p.players();
        let dim = 1 << p.beta();
        let suffix_bits: Vec<usize> = (t..players).map(|s| p.matchings()[s].row_count()).collect();
        let total: usize = suffix_bits.iter().sum();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        let mut count = 0.0;
        for x in 0..1u32 << p.n() {
            for ys in 0..1u32 << total {
                let mut rho = p.initial_state();
                let mut shift = 0;
                for s in 0..players {
                    let y = if s < t {
                        p.matchings()[s].apply(x)
                    } else {
                        let k = suffix_bits[s - t];
                        let y = ys >> shift & ((1 << k) - 1);
                        shift += k;
                        y
                    };
                    rho = p.channel(s, y).apply_matrix(&rho).unwrap();
                }
                acc.add_scaled(&rho, Complex64::new(1.0, 0.0));
                count += 1.0;
            }
        }
        acc.scale_real(1.0 / count)
    }

    #[test]
    fn identity_protocol() {
        let m = Gf2Matrix::from_matching(4, &[(0, 1), (2, 3)]).unwrap();
        let p = ToyProtocol::identity(4, 2, vec![m.clone(), m.clone(), m]).unwrap();
        let states = protocol_states(&p).unwrap();
        assert_eq!(states.len(), 4);
        for x in 0..16 {
            assert!(states[3].get(x).max_abs_diff(&p.initial_state()) < 1e-15);
        }
        let r = phibound_experiment(&p).unwrap();
        assert!(r.lhs < 1e-15 && r.rhs < 1e-15);
    }

    #[test]
    fn no_players() {
        let p = ToyProtocol::identity(3, 1, vec![]).unwrap();
        let states = protocol_states(&p).unwrap();
        assert_eq!(states.len(), 1);
        assert_eq!(states[0].values().len(), 8);
        assert!(states[0].get(5).max_abs_diff(&p.initial_state()) == 0.0);
    }

    #[test]
    fn parity_writer_coefficients() {
        let p = ToyProtocol::parity_forwarding();
        let f1 = transform(&protocol_states(&p).unwrap()[1]);
        let support: Vec<u32> = (0..4).filter(|&s| f1.coeff(s).max_abs() > 1e-12).collect();
        assert_eq!(support, vec![0, 0b11]);
        for s in support {
            assert!((trace_norm(f1.coeff(s)).unwrap() - 1.0).abs() < 1e-12);
            let op = hermitian_eigenvalues(f1.coeff(s))
                .unwrap()
                .iter()
                .fold(0.0f64, |a, l| a.max(l.abs()));
            assert!((op - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_forwarding_bound_is_tight() {
        let r = phibound_experiment(&ToyProtocol::parity_forwarding()).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12, "{r:?}");
        assert!((r.rhs - 1.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn label_blind_final_player() {
        let m = Gf2Matrix::from_matching(2, &[(0, 1)]).unwrap();
        let write = |b| Superoperator::replacement(&DensityMatrix::basis(2, b));
        let reset = Superoperator::replacement(&DensityMatrix::maximally_mixed(2));
        let p = ToyProtocol::new(
            2,
            1,
            vec![m.clone(), m],
            vec![vec![write(0), write(1)], vec![reset.clone(), reset]],
        )
        .unwrap();
        let r = phibound_experiment(&p).unwrap();
        assert!(r.lhs < 1e-14 && r.rhs >= 0.0);
    }

    #[test]
    fn enumeration_agrees_with_average_channels() {
        let mut rng = substream(21, 0);
        for _ in 0..10 {
            let p = ToyProtocol::random(4, 2, 1, 3, &mut rng).unwrap();
            let states = protocol_states(&p).unwrap();
            let phi = phi_states(&p, &states).unwrap();
            for (t, f) in phi.iter().enumerate() {
                assert!(f.max_abs_diff(&phi_enumerated(&p, t)) < 1e-12);
            }
        }
    }

    #[test]
    fn random_protocols_respect_bound() {
        let mut rng = substream(22, 0);
        for i in 0..40 {
            let n = [2, 4, 6][i % 3];
            let alpha_n = if n >= 4 && i % 2 == 1 { 2 } else { 1 };
            let p = ToyProtocol::random(n, alpha_n, 1 + i % 2, 1 + i % 3, &mut rng).unwrap();
            for table in protocol_states(&p).unwrap() {
                for rho in table.values() {
                    assert!(DensityMatrix::new(rho.clone()).is_ok());
                }
            }
            let r = phibound_experiment(&p).unwrap();
            assert!(r.lhs <= r.rhs + 1e-9, "{r:?}");
            assert!(mass_transfer_residual(&p).unwrap() < 1e-9);
        }
    }

    #[test]
    fn rejects_invalid_channels() {
        let m = Gf2Matrix::from_matching(2, &[(0, 1)]).unwrap();
        let mut bad = Superoperator::identity(2);
        bad.add_scaled(&Superoperator::identity(2), 0.5);
        let err = ToyProtocol::new(2, 1, vec![m], vec![vec![bad, Superoperator::identity(2)]]);
        assert!(matches!(err, Err(Error::InvalidChannel(_))));
        assert!(ToyProtocol::identity(7, 1, vec![]).is_err());
    }
}
