use std::collections::HashMap;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Weight, WeightedGraph};

/// Largest vertex count the brute-force search accepts, and the largest
/// irreducible core [`max_cut_exact`] will brute-force.
pub const MAX_BRUTEFORCE_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutAssignment {
    pub side: Vec<bool>,
    pub value: Weight,
}

pub fn cut_value(g: &WeightedGraph, side: &[bool]) -> Weight {
    g.edges()
        .iter()
        .filter(|e| side[e.u] != side[e.v])
        .fold(Weight::zero(), |acc, e| acc + e.w)
}

/// Weights rescaled to integers by their common denominator.
fn integer_weights(g: &WeightedGraph) -> (Vec<i128>, i128) {
    let denom = g.edges().iter().fold(1i128, |acc, e| acc.lcm(e.w.denom()));
    let ints = g
        .edges()
        .iter()
        .map(|e| e.w.numer() * (denom / e.w.denom()))
        .collect();
    (ints, denom)
}

/// Exhaustive search over the `2^(n-1)` cuts with vertex 0 on side `false`.
/// Among optimal cuts the lexicographically smallest side string wins.
pub fn max_cut_bruteforce(g: &WeightedGraph) -> Result<CutAssignment> {
    let n = g.n();
    if n > MAX_BRUTEFORCE_VERTICES {
        return Err(Error::Infeasible(format!(
            "brute-force Max-Cut limited to {MAX_BRUTEFORCE_VERTICES} vertices, got {n}"
        )));
    }
    if n <= 1 {
        return Ok(CutAssignment {
            side: vec![false; n],
            value: Weight::zero(),
        });
    }
    let (w, _) = integer_weights(g);
    // Bit p of the key holds vertex n-1-p, so numeric order on keys is
    // lexicographic order on side strings.
    let bits = n - 1;
    let mut side = vec![false; n];
    let mut value: i128 = 0;
    let mut best = (0i128, 0u32);
    let mut key: u32 = 0;
    for i in 1u32..(1u32 << bits) {
        let p = i.trailing_zeros() as usize;
        let v = n - 1 - p;
        for &(u, id) in g.neighbors(v) {
            if side[u] == side[v] {
                value += w[id];
            } else {
                value -= w[id];
            }
        }
        side[v] = !side[v];
        key ^= 1 << p;
        if value > best.0 || (value == best.0 && key < best.1) {
            best = (value, key);
        }
    }
    let side: Vec<bool> = (0..n)
        .map(|v| v != 0 && (best.1 >> (n - 1 - v)) & 1 == 1)
        .collect();
    let value = cut_value(g, &side);
    Ok(CutAssignment { side, value })
}

/// Edge of the reduced graph: value earned when its endpoints share a side
/// and when they do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Gain {
    same: i128,
    diff: i128,
}

impl Gain {
    fn add(self, o: Gain) -> Gain {
        Gain {
            same: self.same + o.same,
            diff: self.diff + o.diff,
        }
    }

    fn value(self, same: bool) -> i128 {
        if same {
            self.same
        } else {
            self.diff
        }
    }
}

enum Elimination {
    Leaf {
        x: usize,
        a: usize,
        gain: Gain,
    },
    Series {
        x: usize,
        a: usize,
        ga: Gain,
        b: usize,
        gb: Gain,
    },
    Isolated {
        x: usize,
    },
}

/// Exact Max-Cut for graphs whose irreducible cores are small.
///
/// Leaves and degree-2 vertices are eliminated exactly (a leaf edge is always
/// cut optimally; a degree-2 vertex folds its two edges into one edge with a
/// same-side and a different-side gain). Each remaining core component, whose
/// vertices all have degree at least 3, is searched exhaustively.
pub fn max_cut_exact(g: &WeightedGraph) -> Result<CutAssignment> {
    let n = g.n();
    let (w, _) = integer_weights(g);
    let mut adj: Vec<HashMap<usize, Gain>> = vec![HashMap::new(); n];
    for (id, e) in g.edges().iter().enumerate() {
        let gain = Gain {
            same: 0,
            diff: w[id],
        };
        adj[e.u].insert(e.v, gain);
        adj[e.v].insert(e.u, gain);
    }
    let mut alive = vec![true; n];
    let mut stack: Vec<Elimination> = Vec::new();
    let mut queue: Vec<usize> = (0..n).filter(|&v| adj[v].len() <= 2).collect();

    while let Some(x) = queue.pop() {
        if !alive[x] || adj[x].len() > 2 {
            continue;
        }
        alive[x] = false;
        let nbrs: Vec<(usize, Gain)> = adj[x].drain().collect();
        match nbrs.as_slice() {
            [] => stack.push(Elimination::Isolated { x }),
            &[(a, gain)] => {
                adj[a].remove(&x);
                stack.push(Elimination::Leaf { x, a, gain });
                if adj[a].len() <= 2 {
                    queue.push(a);
                }
            }
            &[(a, ga), (b, gb)] => {
                adj[a].remove(&x);
                adj[b].remove(&x);
                let folded = Gain {
                    same: (ga.same + gb.same).max(ga.diff + gb.diff),
                    diff: (ga.same + gb.diff).max(ga.diff + gb.same),
                };
                let merged = adj[a].get(&b).map_or(folded, |&old| old.add(folded));
                adj[a].insert(b, merged);
                adj[b].insert(a, merged);
                stack.push(Elimination::Series { x, a, ga, b, gb });
                for y in [a, b] {
                    if adj[y].len() <= 2 {
                        queue.push(y);
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    let mut side = vec![false; n];
    let core: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let mut seen = vec![false; n];
    for &s in &core {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &v in adj[u].keys() {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        comp.sort_unstable();
        if comp.len() > MAX_BRUTEFORCE_VERTICES {
            return Err(Error::Infeasible(format!(
                "irreducible Max-Cut core has {} vertices (limit {MAX_BRUTEFORCE_VERTICES})",
                comp.len()
            )));
        }
        solve_core(&comp, &adj, &mut side);
    }

    for step in stack.iter().rev() {
        match *step {
            Elimination::Isolated { x } => side[x] = false,
            Elimination::Leaf { x, a, gain } => {
                side[x] = if gain.same >= gain.diff {
                    side[a]
                } else {
                    !side[a]
                };
            }
            Elimination::Series { x, a, ga, b, gb } => {
                let with = |sx: bool| ga.value(side[a] == sx) + gb.value(side[b] == sx);
                side[x] = with(true) > with(false);
            }
        }
    }
    let value = cut_value(g, &side);
    Ok(CutAssignment { side, value })
}

fn solve_core(comp: &[usize], adj: &[HashMap<usize, Gain>], side: &mut [bool]) {
    let k = comp.len();
    if k == 1 {
        return;
    }
    let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nbrs: Vec<Vec<(usize, Gain)>> = comp
        .iter()
        .map(|&v| adj[v].iter().map(|(&u, &g)| (local[&u], g)).collect())
        .collect();
    let mut cur = vec![false; k];
    let mut value: i128 = nbrs
        .iter()
        .enumerate()
        .flat_map(|(i, l)| l.iter().filter(move |(j, _)| *j > i).map(|(_, g)| g.same))
        .sum();
    let mut best = (value, cur.clone());
    for i in 1u32..(1u32 << (k - 1)) {
        let v = 1 + i.trailing_zeros() as usize;
        for &(u, g) in &nbrs[v] {
            let same_now = cur[u] == cur[v];
            value += g.value(!same_now) - g.value(same_now);
        }
        cur[v] = !cur[v];
        if value > best.0 {
            best = (value, cur.clone());
        }
    }
    for (i, &v) in comp.iter().enumerate() {
        side[v] = best.1[i];
    }
}
