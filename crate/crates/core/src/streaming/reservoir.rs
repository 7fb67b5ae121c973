use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{weight_to_f64, EdgeStream, Weight, WeightedEdge};

/// Longest stream [`expectation_oracle`] enumerates.
pub const MAX_ORACLE_EDGES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub edge: WeightedEdge,
    /// The endpoint whose later edges are tracked.
    pub endpoint: usize,
}

/// One weighted reservoir sampler with exact weights.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReservoirState {
    pub weight_seen: Weight,
    pub candidate: Option<Candidate>,
    /// Heaviest later edge at the candidate's endpoint (0 if none).
    pub best_after: Weight,
    pub superseded: bool,
}

impl ReservoirState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn process_edge<R: Rng + ?Sized>(&mut self, e: &WeightedEdge, rng: &mut R) -> Result<()> {
        if e.w <= Weight::zero() {
            return Err(Error::InvalidInput(format!("nonpositive weight {}", e.w)));
        }
        let replace =
            rng.random::<f64>() * weight_to_f64(&(self.weight_seen + e.w)) < e.weight_f64();
        let endpoint = if rng.random::<bool>() { e.v } else { e.u };
        self.observe(e, replace.then_some(endpoint))
    }

    /// Deterministic transition: `replace_at` names the chosen endpoint when
    /// the reservoir takes `e`.
    pub fn observe(&mut self, e: &WeightedEdge, replace_at: Option<usize>) -> Result<()> {
        if e.w <= Weight::zero() {
            return Err(Error::InvalidInput(format!("nonpositive weight {}", e.w)));
        }
        self.weight_seen += e.w;
        if self.candidate.is_none() || replace_at.is_some() {
            let endpoint = replace_at.unwrap_or(e.u);
            if !e.is_incident(endpoint) {
                return Err(Error::InvalidInput(format!(
                    "{endpoint} is not an endpoint"
                )));
            }
            self.candidate = Some(Candidate {
                edge: e.clone(),
                endpoint,
            });
            self.best_after = Weight::zero();
            self.superseded = false;
        } else if let Some(c) = &self.candidate {
            if e.is_incident(c.endpoint) {
                if e.w > self.best_after {
                    self.best_after = e.w;
                }
                if e.w > c.edge.w {
                    self.superseded = true;
                }
            }
        }
        Ok(())
    }

    /// Constant: weight sum, edge (3 words), endpoint, best_after, flag.
    pub fn word_count(&self) -> usize {
        7
    }
}

/// `X ∈ [0, 1]` for a finished reservoir; an empty stream gives 0.
pub fn finalize_sample(r: &ReservoirState) -> Weight {
    match &r.candidate {
        None => Weight::zero(),
        Some(_) if r.superseded => Weight::zero(),
        Some(c) => Weight::one() - r.best_after / c.edge.w,
    }
}

/// `X` when edge `index` is sampled with the given endpoint.
pub fn sample_value(stream: &EdgeStream, index: usize, endpoint: usize) -> Result<Weight> {
    let mut r = ReservoirState::new();
    for (i, e) in stream.edges.iter().enumerate() {
        if i < index {
            continue;
        }
        r.observe(e, (i == index).then_some(endpoint))?;
    }
    Ok(finalize_sample(&r))
}

/// Exact `E[X]` over every (edge, endpoint) outcome.
pub fn expectation_oracle(stream: &EdgeStream) -> Result<Weight> {
    if stream.len() > MAX_ORACLE_EDGES {
        return Err(Error::Infeasible(format!(
            "expectation oracle limited to {MAX_ORACLE_EDGES} edges, got {}",
            stream.len()
        )));
    }
    let m = stream.edges.iter().fold(Weight::zero(), |a, e| a + e.w);
    if m.is_zero() {
        return Ok(Weight::zero());
    }
    let half = Weight::new(1, 2);
    let mut total = Weight::zero();
    for (i, e) in stream.edges.iter().enumerate() {
        let x = sample_value(stream, i, e.u)? + sample_value(stream, i, e.v)?;
        total += e.w / m * half * x;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{int_weight, max_incident_sum, total_weight};
    use crate::rng::substream;

    fn stream(n: usize, edges: &[(usize, usize, i64)]) -> EdgeStream {
        EdgeStream::new(
            n,
            edges
                .iter()
                .map(|&(u, v, w)| WeightedEdge::new(u, v, int_weight(w)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn first_edge_always_taken() {
        let mut rng = substream(1, 0);
        for _ in 0..50 {
            let mut r = ReservoirState::new();
            r.process_edge(&WeightedEdge::unit(0, 1), &mut rng).unwrap();
            assert_eq!(r.candidate.as_ref().unwrap().edge.key(), (0, 1));
        }
    }

    #[test]
    fn second_unit_edge_replaces_half_the_time() {
        let mut rng = substream(2, 0);
        let trials = 20_000;
        let mut replaced = 0;
        for _ in 0..trials {
            let mut r = ReservoirState::new();
            r.process_edge(&WeightedEdge::unit(0, 1), &mut rng).unwrap();
            r.process_edge(&WeightedEdge::unit(2, 3), &mut rng).unwrap();
            if r.candidate.unwrap().edge.key() == (2, 3) {
                replaced += 1;
            }
        }
        let frac = replaced as f64 / trials as f64;
        assert!((frac - 0.5).abs() < 0.02, "{frac}");
    }

    #[test]
    fn supersede_and_formula() {
        let mut r = ReservoirState::new();
        r.observe(&WeightedEdge::new(0, 1, int_weight(3)), Some(0))
            .unwrap();
        r.observe(&WeightedEdge::new(0, 2, int_weight(5)), None)
            .unwrap();
        assert!(r.superseded);
        assert_eq!(finalize_sample(&r), Weight::zero());

        let mut r = ReservoirState::new();
        r.observe(&WeightedEdge::new(0, 1, int_weight(4)), Some(1))
            .unwrap();
        r.observe(&WeightedEdge::new(1, 2, int_weight(3)), None)
            .unwrap();
        r.observe(&WeightedEdge::new(0, 2, int_weight(9)), None)
            .unwrap();
        assert!(!r.superseded);
        assert_eq!(finalize_sample(&r), Weight::new(1, 4));

        // equal weight is not strictly heavier: X = 1 - 1 = 0 without supersede
        let mut r = ReservoirState::new();
        r.observe(&WeightedEdge::unit(0, 1), Some(0)).unwrap();
        r.observe(&WeightedEdge::unit(0, 2), None).unwrap();
        assert!(!r.superseded);
        assert_eq!(finalize_sample(&r), Weight::zero());

        assert_eq!(finalize_sample(&ReservoirState::new()), Weight::zero());
        assert!(r
            .observe(&WeightedEdge::new(0, 1, int_weight(0)), None)
            .is_err());
    }

    #[test]
    fn oracle_examples() {
        let s = stream(2, &[(0, 1, 7)]);
        assert_eq!(expectation_oracle(&s).unwrap(), Weight::one());
        let p = stream(3, &[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(expectation_oracle(&p).unwrap(), Weight::new(3, 4));
        // outcome values 1, 0, 1, 1
        assert_eq!(sample_value(&p, 0, 0).unwrap(), Weight::one());
        assert_eq!(sample_value(&p, 0, 1).unwrap(), Weight::zero());
        assert_eq!(sample_value(&p, 1, 1).unwrap(), Weight::one());
        assert_eq!(sample_value(&p, 1, 2).unwrap(), Weight::one());
        let g = stream(4, &[(0, 1, 2), (1, 2, 5), (2, 3, 1), (0, 2, 3)]).to_graph();
        let m = total_weight(&g);
        assert_eq!(
            expectation_oracle(&g.to_stream()).unwrap(),
            max_incident_sum(&g) / (m * int_weight(2))
        );
        assert_eq!(
            expectation_oracle(&EdgeStream::new(3, vec![]).unwrap()).unwrap(),
            Weight::zero()
        );
    }
}
