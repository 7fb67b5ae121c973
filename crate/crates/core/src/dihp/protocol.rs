use serde::Serialize;

use super::{reduce_to_stream, DihpInstance, Truth};
use crate::error::Result;
use crate::graph::{weight_to_f64, WeightedEdge, WeightedGraph};
use crate::oracles::{max_cut_exact, qmc_exact};
use crate::streaming::{estimate_qmc_value, EstimatorBank};

/// Anything that consumes an edge stream once and reports a value.
pub trait StreamingAlgorithm {
    fn process_edge(&mut self, e: &WeightedEdge) -> Result<()>;
    fn report(&mut self) -> Result<f64>;
    /// Words of state currently held.
    fn state_words(&self) -> usize;
}

/// The one-pass QMC estimator.
#[derive(Debug, Clone)]
pub struct StreamingQmc {
    bank: EstimatorBank,
    epsilon: f64,
}

impl StreamingQmc {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Result<Self> {
        Ok(Self {
            bank: EstimatorBank::new(epsilon / 4.0, delta, seed)?,
            epsilon,
        })
    }
}

impl StreamingAlgorithm for StreamingQmc {
    fn process_edge(&mut self, e: &WeightedEdge) -> Result<()> {
        self.bank.process_edge(e)
    }

    fn report(&mut self) -> Result<f64> {
        Ok(estimate_qmc_value(&self.bank, self.epsilon))
    }

    fn state_words(&self) -> usize {
        self.bank.word_count()
    }
}

/// Buffers the whole stream and solves Max-Cut exactly (a reference
/// "algorithm" with linear state).
#[derive(Debug, Clone)]
pub struct ExactMaxCut {
    graph: WeightedGraph,
}

impl ExactMaxCut {
    pub fn new(n: usize) -> Self {
        Self {
            graph: WeightedGraph::new(n),
        }
    }
}

impl StreamingAlgorithm for ExactMaxCut {
    fn process_edge(&mut self, e: &WeightedEdge) -> Result<()> {
        self.graph.add_edge(e.clone()).map(|_| ())
    }

    fn report(&mut self) -> Result<f64> {
        Ok(weight_to_f64(&max_cut_exact(&self.graph)?.value))
    }

    fn state_words(&self) -> usize {
        3 * self.graph.edge_count()
    }
}

/// Buffers the stream and computes the QMC value exactly.
#[derive(Debug, Clone)]
pub struct ExactQmc {
    graph: WeightedGraph,
    tol: f64,
}

impl ExactQmc {
    pub fn new(n: usize) -> Self {
        Self {
            graph: WeightedGraph::new(n),
            tol: 1e-9,
        }
    }
}

impl StreamingAlgorithm for ExactQmc {
    fn process_edge(&mut self, e: &WeightedEdge) -> Result<()> {
        self.graph.add_edge(e.clone()).map(|_| ())
    }

    fn report(&mut self) -> Result<f64> {
        Ok(qmc_exact(&self.graph, self.tol)?.value)
    }

    fn state_words(&self) -> usize {
        3 * self.graph.edge_count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolMode {
    MaxCut,
    Qmc,
}

impl ProtocolMode {
    /// `m/(2−ε)` for Max-Cut, `m/(4−ε)` for QMC.
    pub fn threshold(self, m: f64, epsilon: f64) -> f64 {
        match self {
            ProtocolMode::MaxCut => m / (2.0 - epsilon),
            ProtocolMode::Qmc => m / (4.0 - epsilon),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transcript {
    pub m: usize,
    pub reported_value: f64,
    pub threshold: f64,
    /// Words passed from player `t` to `t+1`: algorithm state plus the
    /// `2·log n`-bit edge counter.
    pub handoff_words: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolOutcome {
    pub decision: Truth,
    pub correct: bool,
    pub transcript: Transcript,
}

fn counter_words(n: usize) -> usize {
    let bits = 2 * (usize::BITS - n.max(2).saturating_sub(1).leading_zeros()) as usize;
    bits.div_ceil(64)
}

/// Players feed their share of the reduced stream in turn; the last player
/// answers YES iff the reported value reaches the mode's threshold.
pub fn run_protocol(
    inst: &DihpInstance,
    algorithm: &mut dyn StreamingAlgorithm,
    mode: ProtocolMode,
    epsilon: f64,
) -> Result<ProtocolOutcome> {
    let stream = reduce_to_stream(inst);
    let mut per_player = vec![0usize; inst.players];
    {
        let mut earlier = std::collections::HashSet::new();
        for (t, (m, l)) in inst.matchings.iter().zip(&inst.labels).enumerate() {
            per_player[t] = m
                .iter()
                .zip(l)
                .filter(|(e, &b)| b && !earlier.contains(*e))
                .count();
            earlier.extend(m.iter().copied());
        }
    }
    let mut edges = stream.edges.iter();
    let mut handoff_words = Vec::with_capacity(inst.players);
    for &count in &per_player {
        for e in edges.by_ref().take(count) {
            algorithm.process_edge(e)?;
        }
        handoff_words.push(algorithm.state_words() + counter_words(inst.n));
    }
    let m = stream.len();
    let reported_value = algorithm.report()?;
    let threshold = mode.threshold(m as f64, epsilon);
    let decision = if reported_value >= threshold {
        Truth::Yes
    } else {
        Truth::No
    };
    Ok(ProtocolOutcome {
        decision,
        correct: decision == inst.truth,
        transcript: Transcript {
            m,
            reported_value,
            threshold,
            handoff_words,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dihp::sample_instance;

    #[test]
    fn exact_oracle_accepts_yes() {
        for seed in 0..30 {
            let inst = sample_instance(32, 4, 8, Truth::Yes, seed).unwrap();
            let out =
                run_protocol(&inst, &mut ExactMaxCut::new(32), ProtocolMode::MaxCut, 0.5).unwrap();
            assert_eq!(out.decision, Truth::Yes);
            assert_eq!(out.transcript.handoff_words.len(), 8);
        }
    }

    #[test]
    fn empty_stream_is_yes() {
        let mut inst = sample_instance(8, 2, 2, Truth::No, 1).unwrap();
        inst.labels
            .iter_mut()
            .for_each(|l| l.iter_mut().for_each(|b| *b = false));
        let out = run_protocol(&inst, &mut ExactMaxCut::new(8), ProtocolMode::MaxCut, 0.5).unwrap();
        assert_eq!(out.transcript.m, 0);
        assert_eq!(out.decision, Truth::Yes);
    }

    #[test]
    fn handoffs_are_constant_for_the_estimator() {
        let inst = sample_instance(64, 8, 8, Truth::No, 3).unwrap();
        let mut alg = StreamingQmc::new(0.6, 0.2, 5).unwrap();
        let out = run_protocol(&inst, &mut alg, ProtocolMode::Qmc, 0.6).unwrap();
        let w = &out.transcript.handoff_words;
        assert!(w.iter().all(|&x| x == w[0]));
        assert_eq!(counter_words(64), 1);
    }
}
