//! Weighted graphs and edge streams.

pub mod random;
mod structure;
mod text;

pub use structure::{
    dfs_decomposition, heaviest_edge_decomposition, is_bipartite, max_incident_sum, total_weight,
    Bipartiteness, DfsDecomposition, HeaviestEdgeDecomposition, Star, TreeEdge,
};
pub use text::{
    parse_edge_list, parse_edge_list_with, serialize_edge_list, EdgeReader, ParseOptions,
};

use std::collections::HashSet;
use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact edge weight.
pub type Weight = Ratio<i128>;

pub fn weight_to_f64(w: &Weight) -> f64 {
    w.to_f64().unwrap_or(f64::NAN)
}

pub fn int_weight(w: i64) -> Weight {
    Weight::from_integer(i128::from(w))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedEdge {
    pub u: usize,
    pub v: usize,
    pub w: Weight,
}

impl WeightedEdge {
    pub fn new(u: usize, v: usize, w: Weight) -> Self {
        WeightedEdge { u, v, w }
    }

    pub fn unit(u: usize, v: usize) -> Self {
        WeightedEdge::new(u, v, Weight::from_integer(1))
    }

    /// Canonical unordered pair `(min, max)`.
    pub fn key(&self) -> (usize, usize) {
        if self.u < self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }

    pub fn is_incident(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    pub fn weight_f64(&self) -> f64 {
        weight_to_f64(&self.w)
    }

    pub(crate) fn validate(&self, n: usize) -> std::result::Result<(), String> {
        if self.u == self.v {
            return Err(format!("self-loop at vertex {}", self.u));
        }
        if self.u >= n || self.v >= n {
            return Err(format!(
                "vertex out of range in edge ({}, {}) for n = {n}",
                self.u, self.v
            ));
        }
        if self.w <= Weight::zero() {
            return Err(format!("non-positive weight {}", self.w));
        }
        Ok(())
    }
}

impl fmt::Display for WeightedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.u, self.v, self.w)
    }
}

/// A graph presented as an ordered sequence of edge arrivals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeStream {
    pub n: usize,
    pub edges: Vec<WeightedEdge>,
}

impl EdgeStream {
    /// Validates every edge and rejects repeated unordered pairs.
    pub fn new(n: usize, edges: Vec<WeightedEdge>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            e.validate(n).map_err(Error::InvalidInput)?;
            if !seen.insert(e.key()) {
                return Err(Error::InvalidInput(format!(
                    "duplicate pair {:?} at position {i}",
                    e.key()
                )));
            }
        }
        Ok(EdgeStream { n, edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn to_graph(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.n);
        for e in &self.edges {
            g.push_unchecked(e.clone());
        }
        g
    }
}

/// Simple undirected weighted graph. Edge ids are insertion indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<WeightedEdge>,
    adjacency: Vec<Vec<(usize, usize)>>,
    pairs: HashSet<(usize, usize)>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
            pairs: HashSet::new(),
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = WeightedEdge>) -> Result<Self> {
        let mut g = WeightedGraph::new(n);
        for e in edges {
            g.add_edge(e)?;
        }
        Ok(g)
    }

    /// Unit-weight graph from vertex pairs.
    pub fn unweighted(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges(n, pairs.iter().map(|&(u, v)| WeightedEdge::unit(u, v)))
    }

    pub fn add_edge(&mut self, e: WeightedEdge) -> Result<usize> {
        e.validate(self.n).map_err(Error::InvalidInput)?;
        if self.pairs.contains(&e.key()) {
            return Err(Error::InvalidInput(format!("duplicate pair {:?}", e.key())));
        }
        Ok(self.push_unchecked(e))
    }

    fn push_unchecked(&mut self, e: WeightedEdge) -> usize {
        let id = self.edges.len();
        self.pairs.insert(e.key());
        self.adjacency[e.u].push((e.v, id));
        self.adjacency[e.v].push((e.u, id));
        self.edges.push(e);
        id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &WeightedEdge {
        &self.edges[id]
    }

    /// `(neighbor, edge id)` pairs in insertion order.
    pub fn neighbors(&self, u: usize) -> &[(usize, usize)] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.pairs.contains(&(u.min(v), u.max(v)))
    }

    pub fn weighted_degree(&self, u: usize) -> Weight {
        self.adjacency[u]
            .iter()
            .fold(Weight::zero(), |acc, &(_, id)| acc + self.edges[id].w)
    }

    /// True when every edge has weight exactly 1.
    pub fn is_unweighted(&self) -> bool {
        let one = Weight::from_integer(1);
        self.edges.iter().all(|e| e.w == one)
    }

    /// Vertices with at least one incident edge, ascending.
    pub fn non_isolated(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&u| !self.adjacency[u].is_empty())
            .collect()
    }

    /// Connected components as ascending vertex lists, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &(v, _) in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The edges as an arrival stream in insertion order.
    pub fn to_stream(&self) -> EdgeStream {
        EdgeStream {
            n: self.n,
            edges: self.edges.clone(),
        }
    }

    /// Induced subgraph on `vertices`, relabelled to `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> WeightedGraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = WeightedGraph::new(vertices.len());
        for e in &self.edges {
            let (a, b) = (index[e.u], index[e.v]);
            if a != usize::MAX && b != usize::MAX {
                g.push_unchecked(WeightedEdge::new(a, b, e.w));
            }
        }
        g
    }

    /// Weights as `f64`, in edge-id order.
    pub fn weights_f64(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight_f64()).collect()
    }
}

/// Standard small graphs used throughout the tests and benches.
pub mod families {
    use super::*;

    pub fn path(n: usize) -> WeightedGraph {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        WeightedGraph::unweighted(n, &pairs).expect("valid path")
    }

    pub fn cycle(n: usize) -> WeightedGraph {
        let mut pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        pairs.push((n - 1, 0));
        WeightedGraph::unweighted(n, &pairs).expect("valid cycle")
    }

    pub fn complete(n: usize) -> WeightedGraph {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        WeightedGraph::unweighted(n, &pairs).expect("valid clique")
    }

    /// `K_{1,d}` with centre 0.
    pub fn star(d: usize) -> WeightedGraph {
        let pairs: Vec<_> = (1..=d).map(|i| (0, i)).collect();
        WeightedGraph::unweighted(d + 1, &pairs).expect("valid star")
    }

    /// Star with centre 0 and the given leaf weights.
    pub fn weighted_star(weights: &[i64]) -> WeightedGraph {
        WeightedGraph::from_edges(
            weights.len() + 1,
            weights
                .iter()
                .enumerate()
                .map(|(i, &w)| WeightedEdge::new(0, i + 1, int_weight(w))),
        )
        .expect("valid star")
    }

    /// The eight-vertex, eleven-edge example whose heavier DFS levels are two
    /// degree-2 stars.
    pub fn dfs_levels_example() -> WeightedGraph {
        WeightedGraph::unweighted(
            8,
            &[
                (0, 1),
                (0, 6),
                (1, 2),
                (1, 5),
                (2, 3),
                (3, 4),
                (3, 7),
                (0, 5),
                (1, 3),
                (1, 7),
                (0, 2),
            ],
        )
        .expect("valid example")
    }
}
