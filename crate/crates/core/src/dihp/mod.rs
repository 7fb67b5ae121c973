//! Hidden-partition instances, their reduction to edge streams, and the
//! harness that runs a streaming algorithm as a one-way protocol.

mod experiment;
mod protocol;

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeStream, WeightedEdge};
use crate::rng::substream;

pub use experiment::{
    separation_experiment, Compute, SeparationParams, SeparationReport, TrialRecord, TruthStats,
};
pub use protocol::{
    run_protocol, ExactMaxCut, ExactQmc, ProtocolMode, ProtocolOutcome, StreamingAlgorithm,
    StreamingQmc, Transcript,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Truth {
    Yes,
    No,
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::Yes => "YES",
            Truth::No => "NO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DihpInstance {
    pub n: usize,
    pub alpha_n: usize,
    pub players: usize,
    /// `matchings[t][i]` is edge `i` of player `t`, stored as `(min, max)`.
    pub matchings: Vec<Vec<(usize, usize)>>,
    pub labels: Vec<Vec<bool>>,
    pub truth: Truth,
    /// A partition explaining every label (YES only).
    pub hidden_partition: Option<Vec<bool>>,
}

fn check_params(n: usize, alpha_n: usize, players: usize) -> Result<()> {
    if players == 0 || alpha_n == 0 || 2 * alpha_n > n {
        return Err(Error::Infeasible(format!(
            "need T >= 1 and 1 <= alpha_n <= n/2, got n={n} alpha_n={alpha_n} T={players}"
        )));
    }
    Ok(())
}

/// Each matching is built edge by edge, every edge uniform over the pairs of
/// still-unmatched vertices. YES labels are the parities of a uniform hidden
/// partition; NO labels are uniform bits.
pub fn sample_instance(
    n: usize,
    alpha_n: usize,
    players: usize,
    truth: Truth,
    seed: u64,
) -> Result<DihpInstance> {
    check_params(n, alpha_n, players)?;
    let mut rng = substream(seed, 0);
    let hidden: Option<Vec<bool>> =
        (truth == Truth::Yes).then(|| (0..n).map(|_| rng.random()).collect());
    let mut matchings = Vec::with_capacity(players);
    let mut labels = Vec::with_capacity(players);
    let mut free: Vec<usize> = Vec::with_capacity(n);
    for _ in 0..players {
        free.clear();
        free.extend(0..n);
        let mut m = Vec::with_capacity(alpha_n);
        for _ in 0..alpha_n {
            let a = free.swap_remove(rng.random_range(0..free.len()));
            let b = free.swap_remove(rng.random_range(0..free.len()));
            m.push((a.min(b), a.max(b)));
        }
        let l = match &hidden {
            Some(x) => m.iter().map(|&(u, v)| x[u] != x[v]).collect(),
            None => (0..alpha_n).map(|_| rng.random()).collect(),
        };
        matchings.push(m);
        labels.push(l);
    }
    Ok(DihpInstance {
        n,
        alpha_n,
        players,
        matchings,
        labels,
        truth,
        hidden_partition: hidden,
    })
}

impl DihpInstance {
    /// Checks matching sizes, disjointness and (for YES) label consistency.
    pub fn validate(&self) -> Result<()> {
        check_params(self.n, self.alpha_n, self.players)?;
        if self.matchings.len() != self.players || self.labels.len() != self.players {
            return Err(Error::InvalidInput("player count mismatch".into()));
        }
        for (t, (m, l)) in self.matchings.iter().zip(&self.labels).enumerate() {
            if m.len() != self.alpha_n || l.len() != self.alpha_n {
                return Err(Error::InvalidInput(format!(
                    "player {t} does not hold alpha_n edges"
                )));
            }
            let mut used = HashSet::new();
            for &(u, v) in m {
                if u >= v || v >= self.n || !used.insert(u) || !used.insert(v) {
                    return Err(Error::InvalidInput(format!(
                        "player {t}: ({u}, {v}) breaks the matching"
                    )));
                }
            }
        }
        if self.truth == Truth::Yes {
            let x = match &self.hidden_partition {
                Some(x) => x.clone(),
                None => self.consistent_partition().ok_or_else(|| {
                    Error::InvalidInput("YES labels admit no hidden partition".into())
                })?,
            };
            for (m, l) in self.matchings.iter().zip(&self.labels) {
                if m.iter().zip(l).any(|(&(u, v), &b)| (x[u] != x[v]) != b) {
                    return Err(Error::InvalidInput(
                        "label disagrees with hidden partition".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Some partition matching every label, if one exists (parity
    /// constraints solved by BFS 2-colouring).
    pub fn consistent_partition(&self) -> Option<Vec<bool>> {
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); self.n];
        for (m, l) in self.matchings.iter().zip(&self.labels) {
            for (&(u, v), &b) in m.iter().zip(l) {
                adj[u].push((v, b));
                adj[v].push((u, b));
            }
        }
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = color[u].expect("coloured");
                for &(v, b) in &adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(cu ^ b);
                            stack.push(v);
                        }
                        Some(cv) if cv != cu ^ b => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
    }

    /// Header `dihp n alpha_n T truth`, then per player a line of `u:v` edges
    /// and a line of label bits.
    pub fn serialize(&self) -> String {
        let mut out = format!(
            "dihp {} {} {} {}\n",
            self.n, self.alpha_n, self.players, self.truth
        );
        for (m, l) in self.matchings.iter().zip(&self.labels) {
            let edges: Vec<String> = m.iter().map(|(u, v)| format!("{u}:{v}")).collect();
            out.push_str(&edges.join(" "));
            out.push('\n');
            out.extend(l.iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing dihp header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 5 || parts[0] != "dihp" {
            return Err(Error::parse(hl, "expected `dihp n alpha_n T truth`"));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(hl, format!("bad count `{s}`")))
        };
        let (n, alpha_n, players) = (num(parts[1])?, num(parts[2])?, num(parts[3])?);
        let truth = match parts[4] {
            "YES" => Truth::Yes,
            "NO" => Truth::No,
            other => {
                return Err(Error::parse(
                    hl,
                    format!("truth must be YES or NO, got `{other}`"),
                ))
            }
        };
        let mut matchings = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..players {
            let (el, edges) = lines
                .next()
                .ok_or_else(|| Error::parse(hl, "missing matching line"))?;
            let m = edges
                .split_whitespace()
                .map(|tok| {
                    let (a, b) = tok
                        .split_once(':')
                        .ok_or_else(|| Error::parse(el, format!("bad edge `{tok}`")))?;
                    let a: usize = a
                        .parse()
                        .map_err(|_| Error::parse(el, format!("bad edge `{tok}`")))?;
                    let b: usize = b
                        .parse()
                        .map_err(|_| Error::parse(el, format!("bad edge `{tok}`")))?;
                    Ok((a.min(b), a.max(b)))
                })
                .collect::<Result<Vec<_>>>()?;
            let (ll, bits) = lines
                .next()
                .ok_or_else(|| Error::parse(el, "missing label line"))?;
            let l = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::parse(ll, format!("bad label bit `{c}`"))),
                })
                .collect::<Result<Vec<_>>>()?;
            matchings.push(m);
            labels.push(l);
        }
        if let Some((l, _)) = lines.next() {
            return Err(Error::parse(l, "trailing content after last player"));
        }
        let mut inst = DihpInstance {
            n,
            alpha_n,
            players,
            matchings,
            labels,
            truth,
            hidden_partition: None,
        };
        inst.validate()?;
        if truth == Truth::Yes {
            inst.hidden_partition = inst.consistent_partition();
        }
        Ok(inst)
    }
}

/// Label-1 edges in player order, skipping any pair already held by an
/// earlier player (whatever its label there).
pub fn reduce_to_stream(inst: &DihpInstance) -> EdgeStream {
    let mut earlier: HashSet<(usize, usize)> = HashSet::new();
    let mut edges = Vec::new();
    for (m, l) in inst.matchings.iter().zip(&inst.labels) {
        for (&(u, v), &b) in m.iter().zip(l) {
            if b && !earlier.contains(&(u, v)) {
                edges.push(WeightedEdge::unit(u, v));
            }
        }
        earlier.extend(m.iter().copied());
    }
    EdgeStream::new(inst.n, edges).expect("dedup leaves a simple stream")
}
