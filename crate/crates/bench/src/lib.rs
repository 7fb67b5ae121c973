//! Shared fixtures for the criterion benches.

use qmc_core::graph::random::{connected, random_edges};
use qmc_core::rng::substream;
use qmc_core::{EdgeStream, WeightedGraph};

/// `edges` distinct unit edges over `n` vertices.
pub fn unit_stream(n: usize, edges: usize, seed: u64) -> EdgeStream {
    let mut rng = substream(seed, 0);
    EdgeStream::new(n, random_edges(n, edges, &mut rng)).expect("valid stream")
}

pub fn connected_graph(n: usize, p: f64, max_weight: i64, seed: u64) -> WeightedGraph {
    connected(n, p, max_weight, &mut substream(seed, 0))
}
