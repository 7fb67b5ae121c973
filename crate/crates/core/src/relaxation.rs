//! Low-rank ascent for `max Σ w_uv·(−⟨f(u), f(v)⟩)` over unit vectors.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::{weight_to_f64, WeightedGraph};
use crate::oracles::max_cut_exact;
use crate::rng::substream;

/// One unit vector in `R^rank` per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorAssignment {
    rank: usize,
    vectors: Vec<Vec<f64>>,
}

impl VectorAssignment {
    pub fn new(rank: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        for (v, x) in vectors.iter().enumerate() {
            if x.len() != rank {
                return Err(Error::Dimension(format!(
                    "vector {v} has length {}, expected {rank}",
                    x.len()
                )));
            }
            let norm = norm(x);
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidInput(format!("vector {v} has norm {norm}")));
            }
        }
        Ok(Self { rank, vectors })
    }

    /// `±e_1` according to the cut side.
    pub fn from_cut(side: &[bool], rank: usize) -> Self {
        let vectors = side
            .iter()
            .map(|&s| {
                let mut x = vec![0.0; rank];
                x[0] = if s { -1.0 } else { 1.0 };
                x
            })
            .collect();
        Self { rank, vectors }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sdp_objective(g: &WeightedGraph, a: &VectorAssignment) -> Result<f64> {
    if a.vectors.len() != g.n() {
        return Err(Error::Dimension(format!(
            "{} vectors for {} vertices",
            a.vectors.len(),
            g.n()
        )));
    }
    VectorAssignment::new(a.rank, a.vectors.clone())?;
    Ok(objective(&edges_f64(g), &a.vectors))
}

fn edges_f64(g: &WeightedGraph) -> Vec<(usize, usize, f64)> {
    g.edges()
        .iter()
        .map(|e| (e.u, e.v, weight_to_f64(&e.w)))
        .collect()
}

fn objective(edges: &[(usize, usize, f64)], f: &[Vec<f64>]) -> f64 {
    edges.iter().map(|&(u, v, w)| -w * dot(&f[u], &f[v])).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationOptions {
    pub rank: usize,
    pub restarts: usize,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl RelaxationOptions {
    pub fn new(rank: usize) -> Self {
        Self {
            rank,
            restarts: 8,
            tol: 1e-9,
            max_iters: 5000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RelaxationResult {
    pub best_value: f64,
    pub assignment: VectorAssignment,
    pub restarts_used: usize,
    /// Projected-gradient norm of the best restart fell below `tol`.
    pub converged: bool,
    /// Whether restart 0 was seeded from an optimal cut.
    pub cut_seeded: bool,
}

/// Multi-restart projected-gradient ascent on the product of spheres.
///
/// Restart 0 starts from a slightly perturbed optimal cut whenever the exact
/// Max-Cut oracle succeeds, so `best_value ≥ 2·MaxCut − m`.
pub fn solve_vector_program(
    g: &WeightedGraph,
    opts: RelaxationOptions,
) -> Result<RelaxationResult> {
    if opts.rank < 2 {
        return Err(Error::InvalidInput(format!(
            "rank must be at least 2, got {}",
            opts.rank
        )));
    }
    let edges = edges_f64(g);
    let n = g.n();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(u, v, w) in &edges {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    let max_deg = adj
        .iter()
        .map(|l| l.iter().map(|x| x.1).sum::<f64>())
        .fold(0.0, f64::max);

    let seed_cut = max_cut_exact(g).ok();
    let restarts = opts.restarts.max(1);
    let mut best: Option<(f64, Vec<Vec<f64>>, bool)> = None;
    for r in 0..restarts {
        let mut rng = substream(opts.seed, r as u64);
        let mut random_unit = |scale: f64, base: Option<&[f64]>| -> Vec<f64> {
            let mut x: Vec<f64> = (0..opts.rank)
                .map(|i| base.map_or(0.0, |b| b[i]) + scale * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let nx = norm(&x);
            x.iter_mut().for_each(|a| *a /= nx);
            x
        };
        let (start, anchor) = match (&seed_cut, r) {
            (Some(cut), 0) => {
                let exact = VectorAssignment::from_cut(&cut.side, opts.rank).vectors;
                let perturbed = exact.iter().map(|b| random_unit(1e-3, Some(b))).collect();
                (perturbed, Some(exact))
            }
            _ => ((0..n).map(|_| random_unit(1.0, None)).collect(), None),
        };
        let mut outcome = ascend(&edges, &adj, start, max_deg, opts);
        if let Some(exact) = anchor {
            let v = objective(&edges, &exact);
            if v > outcome.0 {
                outcome = (v, exact, outcome.2);
            }
        }
        if best.as_ref().is_none_or(|b| outcome.0 > b.0) {
            best = Some(outcome);
        }
    }
    let (best_value, vectors, converged) = best.expect("at least one restart");
    Ok(RelaxationResult {
        best_value,
        assignment: VectorAssignment {
            rank: opts.rank,
            vectors,
        },
        restarts_used: restarts,
        converged,
        cut_seeded: seed_cut.is_some(),
    })
}

fn ascend(
    edges: &[(usize, usize, f64)],
    adj: &[Vec<(usize, f64)>],
    mut f: Vec<Vec<f64>>,
    max_deg: f64,
    opts: RelaxationOptions,
) -> (f64, Vec<Vec<f64>>, bool) {
    if edges.is_empty() {
        return (0.0, f, true);
    }
    let eta0 = 1.0 / (2.0 * max_deg);
    let mut eta = eta0;
    let mut value = objective(edges, &f);
    let mut converged = false;
    let mut grad = vec![vec![0.0; opts.rank]; f.len()];
    for _ in 0..opts.max_iters {
        let mut gnorm2 = 0.0;
        for (u, gu) in grad.iter_mut().enumerate() {
            gu.iter_mut().for_each(|x| *x = 0.0);
            for &(v, w) in &adj[u] {
                gu.iter_mut().zip(&f[v]).for_each(|(x, y)| *x -= w * y);
            }
            let radial = dot(gu, &f[u]);
            gu.iter_mut().zip(&f[u]).for_each(|(x, y)| *x -= radial * y);
            gnorm2 += dot(gu, gu);
        }
        if gnorm2.sqrt() <= opts.tol {
            converged = true;
            break;
        }
        loop {
            let cand: Vec<Vec<f64>> = f
                .iter()
                .zip(&grad)
                .map(|(x, gx)| {
                    let mut y: Vec<f64> = x.iter().zip(gx).map(|(a, b)| a + eta * b).collect();
                    let ny = norm(&y);
                    y.iter_mut().for_each(|a| *a /= ny);
                    y
                })
                .collect();
            let cv = objective(edges, &cand);
            if cv > value {
                f = cand;
                value = cv;
                eta = (eta * 2.0).min(eta0);
                break;
            }
            eta *= 0.5;
            if eta < 1e-18 * eta0 {
                break;
            }
        }
        if eta < 1e-18 * eta0 {
            // no ascent direction resolvable in floating point
            converged = gnorm2.sqrt() <= opts.tol.max(1e-7);
            break;
        }
    }
    (value, f, converged)
}
