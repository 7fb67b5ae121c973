use num_traits::Zero;

use crate::graph::{
    dfs_decomposition, heaviest_edge_decomposition, max_incident_sum, total_weight, Weight,
    WeightedGraph,
};

/// Closed-form QMC bounds from `m` and `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QmcBounds {
    pub upper: Weight,
    pub lower_weighted: Weight,
    /// Present only when every weight is 1.
    pub lower_unweighted: Option<Weight>,
}

pub fn qmc_bounds(g: &WeightedGraph) -> QmcBounds {
    let m = total_weight(g);
    let w = max_incident_sum(g);
    let q = |a: i128, b: i128| Weight::new(a, b);
    QmcBounds {
        upper: m * q(1, 2) + w * q(1, 4),
        lower_weighted: m * q(1, 5) + w * q(1, 10),
        lower_unweighted: g.is_unweighted().then(|| m * q(1, 4) + w * q(1, 8)),
    }
}

/// Energies achieved by explicit product-of-pieces states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructiveEnergies {
    /// Singlets on the heaviest-edge matching, 1/4 on every other edge.
    pub matching_value: Weight,
    /// Half the weight of the heaviest-edge forest (matching plus forest).
    pub forest_cut_value: Weight,
    /// Optimal star states on the heavier parity of DFS levels, 1/4 on every
    /// other edge. Unweighted graphs only.
    pub dfs_level_value: Option<Weight>,
}

pub fn constructive_energies(g: &WeightedGraph) -> ConstructiveEnergies {
    let m = total_weight(g);
    let hd = heaviest_edge_decomposition(g);
    let quarter = Weight::new(1, 4);
    let matching_value = hd.matching_weight + (m - hd.matching_weight) * quarter;
    let forest_cut_value = (hd.matching_weight + hd.forest_weight) * Weight::new(1, 2);
    let dfs_level_value = g.is_unweighted().then(|| {
        let stars = dfs_decomposition(g).heavier_half_stars();
        let covered: usize = stars.iter().map(|s| s.leaves.len()).sum();
        let star_energy = stars.iter().fold(Weight::zero(), |acc, s| {
            acc + Weight::new(s.leaves.len() as i128 + 1, 2)
        });
        star_energy + (m - Weight::from_integer(covered as i128)) * quarter
    });
    ConstructiveEnergies {
        matching_value,
        forest_cut_value,
        dfs_level_value,
    }
}

/// Best certified lower bound: every applicable construction, floored at the
/// random-assignment value `m/4`.
pub fn certified_lower_bound(g: &WeightedGraph) -> Weight {
    let c = constructive_energies(g);
    let floor = total_weight(g) * Weight::new(1, 4);
    [
        Some(c.matching_value),
        Some(c.forest_cut_value),
        c.dfs_level_value,
        Some(floor),
    ]
    .into_iter()
    .flatten()
    .max()
    .expect("non-empty")
}
