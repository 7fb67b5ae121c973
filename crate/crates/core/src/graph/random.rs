//! Seeded graph generators for tests, benches and experiments.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{int_weight, WeightedEdge, WeightedGraph};

/// `G(n, p)` with weights uniform in `1..=max_weight`.
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, max_weight: i64, rng: &mut R) -> WeightedGraph {
    let mut g = WeightedGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                let w = rng.random_range(1..=max_weight.max(1));
                g.add_edge(WeightedEdge::new(u, v, int_weight(w)))
                    .expect("fresh pair");
            }
        }
    }
    g
}

/// A uniform random recursive spanning tree plus independent extra edges
/// with probability `p`; always connected.
pub fn connected<R: Rng + ?Sized>(n: usize, p: f64, max_weight: i64, rng: &mut R) -> WeightedGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = WeightedGraph::new(n);
    let weight = |rng: &mut R| int_weight(rng.random_range(1..=max_weight.max(1)));
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        let w = weight(rng);
        g.add_edge(WeightedEdge::new(parent, order[i], w))
            .expect("tree edge");
    }
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.random::<f64>() < p {
                let w = weight(rng);
                g.add_edge(WeightedEdge::new(u, v, w)).expect("fresh pair");
            }
        }
    }
    g
}

/// Every labelled graph on `n` vertices with unit weights, by edge bitmask.
pub fn all_graphs(n: usize) -> impl Iterator<Item = WeightedGraph> {
    assert!(n <= 7, "2^21 graphs is the enumeration limit");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u32..1 << pairs.len()).map(move |mask| {
        let chosen: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        WeightedGraph::unweighted(n, &chosen).expect("distinct pairs")
    })
}

/// `count` distinct unit edges on `n` vertices, in random arrival order.
/// Draws by rejection, so `count` should be well below `n(n−1)/2`.
pub fn random_edges<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Vec<WeightedEdge> {
    assert!(n >= 2 && count <= n * (n - 1) / 2);
    let mut seen = std::collections::HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v && seen.insert((u.min(v), u.max(v))) {
            out.push(WeightedEdge::unit(u, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn connected_is_connected() {
        let mut rng = substream(1, 0);
        for n in 1..30 {
            let g = connected(n, 0.1, 3, &mut rng);
            assert!(g.is_connected());
            assert!(g.edge_count() >= n.saturating_sub(1));
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_graphs(4).count(), 64);
        // connected labelled graphs on 4 vertices
        assert_eq!(all_graphs(4).filter(|g| g.is_connected()).count(), 38);
    }

    #[test]
    fn distinct_edges() {
        let mut rng = substream(2, 0);
        let e = random_edges(20, 100, &mut rng);
        let keys: std::collections::HashSet<_> = e.iter().map(|e| e.key()).collect();
        assert_eq!(keys.len(), 100);
    }
}
