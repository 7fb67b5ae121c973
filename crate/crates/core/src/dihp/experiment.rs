use serde::Serialize;

use super::{reduce_to_stream, sample_instance, Truth};
use crate::error::{Error, Result};
use crate::graph::{is_bipartite, weight_to_f64};
use crate::oracles::{max_cut_exact, qmc_exact, MAX_QMC_QUBITS};
use crate::relaxation::{solve_vector_program, RelaxationOptions};
use crate::rng::child_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Compute {
    pub maxcut: bool,
    pub sdp: bool,
    pub qmc: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeparationParams {
    pub n: usize,
    pub alpha_n: usize,
    pub players: usize,
    /// Trials per truth value.
    pub trials: usize,
    pub seed: u64,
    pub compute: Compute,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub truth: Truth,
    pub trial: usize,
    pub m: usize,
    pub bipartite: bool,
    pub maxcut: Option<f64>,
    pub sdp: Option<f64>,
    pub qmc: Option<f64>,
}

impl TrialRecord {
    fn ratio(&self, v: Option<f64>) -> Option<f64> {
        v.filter(|_| self.m > 0).map(|x| x / self.m as f64)
    }
}

/// Summary over one truth value. Ratios are over trials with `m > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruthStats {
    pub trials: usize,
    pub empty_graphs: usize,
    pub bipartite_rate: f64,
    pub m_mean: f64,
    pub m_min: usize,
    pub m_max: usize,
    pub maxcut_ratio: Option<Summary>,
    pub sdp_over_m: Option<Summary>,
    pub qmc_ratio: Option<Summary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Standard error of the mean.
    pub se: f64,
    pub count: usize,
}

impl Summary {
    fn of(xs: &[f64]) -> Option<Summary> {
        if xs.is_empty() {
            return None;
        }
        let k = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / k;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        Some(Summary {
            mean,
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            se: (var / k).sqrt(),
            count: xs.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub params: SeparationParams,
    pub yes: TruthStats,
    pub no: TruthStats,
    /// `(mean_yes − mean_no) / sqrt(se_yes² + se_no²)` for the Max-Cut
    /// ratio; infinite when both standard errors vanish.
    pub maxcut_gap_in_se: Option<f64>,
    pub records: Vec<TrialRecord>,
}

impl SeparationReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("truth,trial,m,bipartite,maxcut,sdp,qmc\n");
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.truth,
                r.trial,
                r.m,
                r.bipartite,
                opt(r.maxcut),
                opt(r.sdp),
                opt(r.qmc)
            ));
        }
        out
    }
}

fn stats(records: &[&TrialRecord]) -> TruthStats {
    let pick = |f: &dyn Fn(&TrialRecord) -> Option<f64>| -> Option<Summary> {
        Summary::of(&records.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
    };
    let ms: Vec<usize> = records.iter().map(|r| r.m).collect();
    TruthStats {
        trials: records.len(),
        empty_graphs: ms.iter().filter(|&&m| m == 0).count(),
        bipartite_rate: records.iter().filter(|r| r.bipartite).count() as f64
            / records.len().max(1) as f64,
        m_mean: ms.iter().sum::<usize>() as f64 / ms.len().max(1) as f64,
        m_min: ms.iter().copied().min().unwrap_or(0),
        m_max: ms.iter().copied().max().unwrap_or(0),
        maxcut_ratio: pick(&|r| r.ratio(r.maxcut)),
        sdp_over_m: pick(&|r| r.ratio(r.sdp)),
        qmc_ratio: pick(&|r| r.ratio(r.qmc)),
    }
}

/// YES and NO trials side by side, each reduced to a graph and measured.
pub fn separation_experiment(params: SeparationParams) -> Result<SeparationReport> {
    let SeparationParams {
        n,
        alpha_n,
        players,
        trials,
        seed,
        compute,
    } = params;
    if compute.qmc && n > MAX_QMC_QUBITS {
        return Err(Error::Infeasible(format!(
            "exact QMC requested on n = {n} > {MAX_QMC_QUBITS} vertices"
        )));
    }
    let mut records = Vec::with_capacity(2 * trials);
    for trial in 0..trials {
        for (k, truth) in [Truth::Yes, Truth::No].into_iter().enumerate() {
            let s = child_seed(seed, 2 * trial as u64 + k as u64);
            let inst = sample_instance(n, alpha_n, players, truth, s)?;
            let g = reduce_to_stream(&inst).to_graph();
            let bipartite = is_bipartite(&g).is_bipartite();
            let maxcut = if compute.maxcut {
                Some(weight_to_f64(&max_cut_exact(&g)?.value))
            } else {
                None
            };
            let sdp = if compute.sdp {
                let mut o = RelaxationOptions::new(n.max(2));
                o.seed = s;
                Some(solve_vector_program(&g, o)?.best_value)
            } else {
                None
            };
            let qmc = if compute.qmc {
                Some(qmc_exact(&g, 1e-9)?.value)
            } else {
                None
            };
            records.push(TrialRecord {
                truth,
                trial,
                m: g.edge_count(),
                bipartite,
                maxcut,
                sdp,
                qmc,
            });
        }
    }
    let by = |t: Truth| records.iter().filter(|r| r.truth == t).collect::<Vec<_>>();
    let yes = stats(&by(Truth::Yes));
    let no = stats(&by(Truth::No));
    let maxcut_gap_in_se = match (&yes.maxcut_ratio, &no.maxcut_ratio) {
        (Some(y), Some(n)) => {
            let se = (y.se.powi(2) + n.se.powi(2)).sqrt();
            let gap = y.mean - n.mean;
            Some(if se > 0.0 {
                gap / se
            } else if gap > 0.0 {
                f64::INFINITY
            } else {
                0.0
            })
        }
        _ => None,
    };
    Ok(SeparationReport {
        params,
        yes,
        no,
        maxcut_gap_in_se,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn yes_side_is_perfect() {
        let p = SeparationParams {
            n: 16,
            alpha_n: 4,
            players: 6,
            trials: 20,
            seed: 1,
            compute: Compute {
                maxcut: true,
                sdp: false,
                qmc: false,
            },
        };
        let r = separation_experiment(p).unwrap();
        assert_eq!(r.yes.bipartite_rate, 1.0);
        let y = r.yes.maxcut_ratio.unwrap();
        assert_eq!((y.min, y.max), (1.0, 1.0));
        assert!(r.to_csv().lines().count() == 41);
    }

    #[test]
    fn qmc_needs_small_n() {
        let p = SeparationParams {
            n: 20,
            alpha_n: 4,
            players: 2,
            trials: 1,
            seed: 1,
            compute: Compute {
                maxcut: false,
                sdp: false,
                qmc: true,
            },
        };
        assert!(matches!(
            separation_experiment(p),
            Err(Error::Infeasible(_))
        ));
    }
}
