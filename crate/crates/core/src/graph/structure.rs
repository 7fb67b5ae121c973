//! Structural quantities consumed by the bound constructions.

use std::collections::VecDeque;

use num_traits::Zero;

use super::{Weight, WeightedGraph};

/// `m`: total edge weight.
pub fn total_weight(g: &WeightedGraph) -> Weight {
    g.edges().iter().fold(Weight::zero(), |acc, e| acc + e.w)
}

/// `W`: sum over vertices of the heaviest incident edge weight. Isolated
/// vertices contribute nothing.
pub fn max_incident_sum(g: &WeightedGraph) -> Weight {
    (0..g.n())
        .filter_map(|u| g.neighbors(u).iter().map(|&(_, id)| g.edge(id).w).max())
        .fold(Weight::zero(), |acc, w| acc + w)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEdge {
    pub parent: usize,
    pub child: usize,
    pub edge_id: usize,
    /// Depth of `parent`; the edge belongs to level `depth`.
    pub depth: usize,
}

/// A star inside one DFS level: a parent and the children it reaches at the
/// next depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub center: usize,
    pub leaves: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfsDecomposition {
    /// Tree edges in discovery order.
    pub tree_edges: Vec<TreeEdge>,
    /// `depth[v]`, or `None` for isolated vertices.
    pub depth: Vec<Option<usize>>,
    /// Component index of every vertex (isolated vertices get their own).
    pub component: Vec<usize>,
    pub roots: Vec<usize>,
    /// `levels[i]` holds the ids (into `tree_edges`) of edges from depth `i`
    /// to depth `i + 1`, over all components.
    pub levels: Vec<Vec<usize>>,
    /// Star partition of every level.
    pub stars: Vec<Vec<Star>>,
}

impl DfsDecomposition {
    pub fn is_tree_edge(&self, edge_id: usize) -> bool {
        self.tree_edges.iter().any(|t| t.edge_id == edge_id)
    }

    /// Stars in the heavier parity class of levels, chosen per component.
    ///
    /// Ties go to the even levels.
    pub fn heavier_half_stars(&self) -> Vec<Star> {
        let comps = self.roots.len();
        let mut even = vec![0usize; comps];
        let mut odd = vec![0usize; comps];
        for t in &self.tree_edges {
            let c = self.component[t.parent];
            if t.depth % 2 == 0 {
                even[c] += 1;
            } else {
                odd[c] += 1;
            }
        }
        let mut out = Vec::new();
        for (depth, stars) in self.stars.iter().enumerate() {
            for star in stars {
                let c = self.component[star.center];
                let take_even = even[c] >= odd[c];
                if (depth % 2 == 0) == take_even {
                    out.push(star.clone());
                }
            }
        }
        out
    }
}

/// DFS forest with children visited in ascending vertex order, one tree per
/// component rooted at its lowest vertex.
pub fn dfs_decomposition(g: &WeightedGraph) -> DfsDecomposition {
    let n = g.n();
    let sorted: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|u| {
            let mut nb = g.neighbors(u).to_vec();
            nb.sort_unstable();
            nb
        })
        .collect();
    let mut depth = vec![None; n];
    let mut component = vec![usize::MAX; n];
    let mut roots = Vec::new();
    let mut tree_edges = Vec::new();

    for root in 0..n {
        if depth[root].is_some() || component[root] != usize::MAX {
            continue;
        }
        let comp = roots.len();
        roots.push(root);
        component[root] = comp;
        if sorted[root].is_empty() {
            continue;
        }
        depth[root] = Some(0);
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next == sorted[u].len() {
                stack.pop();
                continue;
            }
            let (v, id) = sorted[u][*next];
            *next += 1;
            if depth[v].is_none() {
                let du = depth[u].expect("visited");
                depth[v] = Some(du + 1);
                component[v] = comp;
                tree_edges.push(TreeEdge {
                    parent: u,
                    child: v,
                    edge_id: id,
                    depth: du,
                });
                stack.push((v, 0));
            }
        }
    }

    let max_depth = tree_edges.iter().map(|t| t.depth + 1).max().unwrap_or(0);
    let mut levels = vec![Vec::new(); max_depth];
    for (i, t) in tree_edges.iter().enumerate() {
        levels[t.depth].push(i);
    }
    let stars = levels
        .iter()
        .map(|level| {
            let mut stars: Vec<Star> = Vec::new();
            for &i in level {
                let t = &tree_edges[i];
                match stars.iter_mut().find(|s| s.center == t.parent) {
                    Some(s) => s.leaves.push(t.child),
                    None => stars.push(Star {
                        center: t.parent,
                        leaves: vec![t.child],
                    }),
                }
            }
            stars
        })
        .collect();

    DfsDecomposition {
        tree_edges,
        depth,
        component,
        roots,
        levels,
        stars,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeaviestEdgeDecomposition {
    /// Edge ids chosen by both endpoints.
    pub matching: Vec<usize>,
    /// Edge ids chosen by exactly one endpoint.
    pub forest: Vec<usize>,
    pub matching_weight: Weight,
    pub forest_weight: Weight,
}

/// Every non-isolated vertex chooses its heaviest incident edge, ties going to
/// the lexicographically smallest `(min, max)` endpoint pair.
pub fn heaviest_edge_decomposition(g: &WeightedGraph) -> HeaviestEdgeDecomposition {
    let mut votes = vec![0u8; g.edge_count()];
    for u in 0..g.n() {
        let chosen = g.neighbors(u).iter().map(|&(_, id)| id).max_by(|&a, &b| {
            let (ea, eb) = (g.edge(a), g.edge(b));
            ea.w.cmp(&eb.w).then_with(|| eb.key().cmp(&ea.key()))
        });
        if let Some(id) = chosen {
            votes[id] += 1;
        }
    }
    let mut out = HeaviestEdgeDecomposition {
        matching: Vec::new(),
        forest: Vec::new(),
        matching_weight: Weight::zero(),
        forest_weight: Weight::zero(),
    };
    for (id, &v) in votes.iter().enumerate() {
        match v {
            2 => {
                out.matching.push(id);
                out.matching_weight += g.edge(id).w;
            }
            1 => {
                out.forest.push(id);
                out.forest_weight += g.edge(id).w;
            }
            _ => {}
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartiteness {
    /// `side[v]` for every vertex.
    Bipartite(Vec<bool>),
    /// Vertices of an odd cycle in traversal order.
    OddCycle(Vec<usize>),
}

impl Bipartiteness {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartiteness::Bipartite(_))
    }

    /// Linear-time check that the witness is what it claims to be.
    pub fn verify(&self, g: &WeightedGraph) -> bool {
        match self {
            Bipartiteness::Bipartite(side) => {
                side.len() == g.n() && g.edges().iter().all(|e| side[e.u] != side[e.v])
            }
            Bipartiteness::OddCycle(cycle) => {
                cycle.len() % 2 == 1
                    && cycle.len() >= 3
                    && (0..cycle.len()).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]))
            }
        }
    }
}

pub fn is_bipartite(g: &WeightedGraph) -> Bipartiteness {
    let n = g.n();
    let mut side: Vec<Option<bool>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![0usize; n];
    for s in 0..n {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in g.neighbors(u) {
                match side[v] {
                    None => {
                        side[v] = Some(!side[u].unwrap());
                        parent[v] = u;
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                    Some(sv) if sv == side[u].unwrap() => {
                        return Bipartiteness::OddCycle(odd_cycle(u, v, &parent, &dist));
                    }
                    _ => {}
                }
            }
        }
    }
    Bipartiteness::Bipartite(side.into_iter().map(|s| s.unwrap_or(false)).collect())
}

fn odd_cycle(u: usize, v: usize, parent: &[usize], dist: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while dist[a] > dist[b] {
        a = parent[a];
        left.push(a);
    }
    while dist[b] > dist[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}
