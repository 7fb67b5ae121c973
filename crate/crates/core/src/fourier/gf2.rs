use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::{parity, FourierTable};

/// Bit matrix over GF(2) with rows stored as masks over `cols` columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<u32>,
}

impl Gf2Matrix {
    pub fn new(cols: usize, rows: Vec<u32>) -> Result<Self> {
        if cols > 31 || rows.len() > 31 {
            return Err(Error::Infeasible(format!(
                "{}x{cols} bit matrix",
                rows.len()
            )));
        }
        if let Some(r) = rows.iter().find(|&&r| r >> cols != 0) {
            return Err(Error::InvalidInput(format!(
                "row {r:#b} exceeds {cols} columns"
            )));
        }
        Ok(Self { cols, rows })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| 1 << i).collect())
    }

    /// One row `e_u + e_v` per matched pair.
    pub fn from_matching(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut used = 0u64;
        let mut rows = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v || u >= n || v >= n || used >> u & 1 == 1 || used >> v & 1 == 1 {
                return Err(Error::InvalidInput(format!(
                    "({u}, {v}) breaks the matching"
                )));
            }
            used |= 1 << u | 1 << v;
            rows.push(1 << u | 1 << v);
        }
        Self::new(n, rows)
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    /// `Mx`, with bit `i` equal to row `i` dotted with `x`.
    pub fn apply(&self, x: u32) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (parity(r, x) as u32) << i)
    }

    /// `Mᵀs`: the XOR of the rows selected by `s`.
    pub fn transpose_apply(&self, s: u32) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, _)| s >> i & 1 == 1)
            .fold(0, |acc, (_, &r)| acc ^ r)
    }

    pub fn rank(&self) -> usize {
        let mut basis: Vec<u32> = Vec::new();
        for &r in &self.rows {
            let mut v = r;
            for &b in &basis {
                v = v.min(v ^ b);
            }
            if v != 0 {
                basis.push(v);
            }
        }
        basis.len()
    }

    /// Some `x` with `Mx = y`, if one exists.
    pub fn solve(&self, y: u32) -> Option<u32> {
        // each pivot row keeps its augmented bit in position 31
        let mut pivots: Vec<(u32, u32)> = Vec::new();
        for (i, &r) in self.rows.iter().enumerate() {
            let mut v = r | (y >> i & 1) << 31;
            for &(bit, p) in &pivots {
                if v & bit != 0 {
                    v ^= p;
                }
            }
            let lhs = v & !(1 << 31);
            if lhs == 0 {
                if v != 0 {
                    return None;
                }
                continue;
            }
            let bit = 1 << lhs.trailing_zeros();
            for (_, p) in pivots.iter_mut() {
                if *p & bit != 0 {
                    *p ^= v;
                }
            }
            pivots.push((bit, v));
        }
        Some(
            pivots
                .iter()
                .filter(|(_, p)| p >> 31 == 1)
                .fold(0, |x, (bit, _)| x | bit),
        )
    }

    /// Distinct members of `{Mᵀs}`.
    pub fn row_space(&self) -> BTreeSet<u32> {
        (0..1u32 << self.rows.len())
            .map(|s| self.transpose_apply(s))
            .collect()
    }
}

/// Fourier coefficients of `q(x) = [Mx = y]`, computed from the solution count.
pub fn constraint_indicator_coeffs(m: &Gf2Matrix, y: u32) -> Result<FourierTable<f64>> {
    let (k, n) = (m.row_count(), m.col_count());
    if k > 12 || n > 12 {
        return Err(Error::Infeasible(format!("{k}x{n} constraint system")));
    }
    if y >> k != 0 {
        return Err(Error::InvalidInput(format!(
            "target {y:#b} has more than {k} bits"
        )));
    }
    let mut coeffs = vec![0.0; 1 << n];
    if m.solve(y).is_some() {
        let density = 2f64.powi(-(m.rank() as i32));
        for s in 0..1u32 << k {
            let sign = if parity(s, y) { -1.0 } else { 1.0 };
            coeffs[m.transpose_apply(s) as usize] = density * sign;
        }
    }
    FourierTable::new(n, coeffs)
}
