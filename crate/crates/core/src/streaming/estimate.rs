use std::io::BufRead;

use serde::Serialize;

use super::bank::{amplification_shape, EstimatorBank};
use crate::error::{Error, Result};
use crate::graph::{weight_to_f64, EdgeReader, EdgeStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateMode {
    Unweighted,
    Weighted,
}

impl EstimateMode {
    pub fn guaranteed_ratio(self, epsilon: f64) -> f64 {
        match self {
            EstimateMode::Unweighted => 2.0 + epsilon,
            EstimateMode::Weighted => 2.5 + epsilon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QmcEstimate {
    pub value: f64,
    pub m: f64,
    #[serde(rename = "W_hat")]
    pub w_hat: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub mode: EstimateMode,
    pub guaranteed_ratio: f64,
    pub words_used: usize,
    /// Ceiling on `words_used` for this `(ε, δ)`, independent of the stream.
    pub word_bound: usize,
    pub edges: u64,
}

/// `W_hat` with `Pr[|W_hat − W| > εm] ≤ δ`.
pub fn estimate_w(stream: &EdgeStream, epsilon: f64, delta: f64, seed: u64) -> Result<f64> {
    let mut bank = EstimatorBank::new(epsilon, delta, seed)?;
    for e in &stream.edges {
        bank.process_edge(e)?;
    }
    Ok(bank.w_hat())
}

/// Internal accuracy used for `W` so that the shifted report stays above the
/// optimum.
fn inner_epsilon(epsilon: f64) -> f64 {
    epsilon / 4.0
}

fn check_params(epsilon: f64, delta: f64) -> Result<()> {
    amplification_shape(epsilon, delta).map(|_| ())
}

/// `m/2 + (W_hat + ε'm)/4` clamped to `[m/2, m + εm/4]`, for a bank built
/// with accuracy `ε' = ε/4`.
pub fn estimate_qmc_value(bank: &EstimatorBank, epsilon: f64) -> f64 {
    let m = weight_to_f64(&bank.m());
    let eps_w = inner_epsilon(epsilon);
    (m / 2.0 + (bank.w_hat() + eps_w * m) / 4.0).clamp(m / 2.0, m + epsilon * m / 4.0)
}

fn finish(bank: &EstimatorBank, epsilon: f64, delta: f64) -> QmcEstimate {
    let m = weight_to_f64(&bank.m());
    let w_hat = bank.w_hat();
    let value = estimate_qmc_value(bank, epsilon);
    let mode = if bank.all_unit_weights() {
        EstimateMode::Unweighted
    } else {
        EstimateMode::Weighted
    };
    QmcEstimate {
        value,
        m,
        w_hat,
        epsilon,
        delta,
        mode,
        guaranteed_ratio: mode.guaranteed_ratio(epsilon),
        words_used: bank.word_count(),
        word_bound: EstimatorBank::word_bound(bank.groups(), bank.per_group()),
        edges: bank.edges_seen(),
    }
}

/// One pass over `stream`: a QMC estimate within `2+ε` (unit weights) or
/// `5/2+ε` (general weights) of the optimum with probability `1 − δ`.
pub fn estimate_qmc(
    stream: &EdgeStream,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<QmcEstimate> {
    check_params(epsilon, delta)?;
    let mut bank = EstimatorBank::new(inner_epsilon(epsilon), delta, seed)?;
    for e in &stream.edges {
        bank.process_edge(e)?;
    }
    Ok(finish(&bank, epsilon, delta))
}

/// As [`estimate_qmc`], consuming edges as they are read.
pub fn estimate_qmc_online<R: BufRead>(
    reader: EdgeReader<R>,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<QmcEstimate> {
    check_params(epsilon, delta)?;
    let mut bank = EstimatorBank::new(inner_epsilon(epsilon), delta, seed)?;
    for e in reader {
        let e = e?;
        bank.process_edge(&e)?;
    }
    if bank.edges_seen() == 0 && bank.m() != crate::graph::Weight::from_integer(0) {
        return Err(Error::InvalidInput("inconsistent empty stream".into()));
    }
    Ok(finish(&bank, epsilon, delta))
}
