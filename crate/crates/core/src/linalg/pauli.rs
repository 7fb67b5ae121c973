//! Pauli-basis decomposition of operators on `n` qubits.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
//! basis index.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

pub const MAX_PAULI_QUBITS: usize = 7;

const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// Coefficients `tr(P A) / 2^n` for every Pauli string `P`, indexed in base 4
/// with qubit 0 as the most significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl PauliDecomposition {
    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn label(&self, index: usize) -> String {
        term_letters(self.n, index)
            .into_iter()
            .map(|l| LETTERS[l as usize])
            .collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        if label.chars().count() != self.n {
            return None;
        }
        label.chars().try_fold(0usize, |acc, c| {
            LETTERS.iter().position(|&l| l == c).map(|d| acc * 4 + d)
        })
    }

    pub fn get(&self, label: &str) -> Option<Complex64> {
        self.index_of(label).map(|i| self.coeffs[i])
    }

    /// Number of non-identity factors of term `index`.
    pub fn locality(&self, index: usize) -> usize {
        locality(self.n, index)
    }

    /// Largest imaginary part over all coefficients.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Non-negligible terms as `(label, coefficient)`.
    pub fn terms(&self, eps: f64) -> Vec<(String, Complex64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > eps)
            .map(|(i, &c)| (self.label(i), c))
            .collect()
    }
}

pub fn locality(n: usize, index: usize) -> usize {
    term_letters(n, index).iter().filter(|&&l| l != 0).count()
}

fn term_letters(n: usize, mut index: usize) -> Vec<u8> {
    let mut letters = vec![0u8; n];
    for k in (0..n).rev() {
        letters[k] = (index % 4) as u8;
        index /= 4;
    }
    letters
}

/// Bit flip mask and phase function of a Pauli string: `P|x⟩ = phase(x)|x ⊕ flip⟩`.
fn action(n: usize, index: usize) -> (usize, usize, usize) {
    // returns (flip mask, y mask, z-or-y mask)
    let letters = term_letters(n, index);
    let (mut flip, mut ymask, mut zmask) = (0, 0, 0);
    for (k, &l) in letters.iter().enumerate() {
        let bit = 1 << (n - 1 - k);
        match l {
            1 => flip |= bit,
            2 => {
                flip |= bit;
                ymask |= bit;
                zmask |= bit;
            }
            3 => zmask |= bit,
            _ => {}
        }
    }
    (flip, ymask, zmask)
}

fn phase(x: usize, ymask: usize, zmask: usize) -> Complex64 {
    // Y|b⟩ = i(-1)^b |1-b⟩, Z|b⟩ = (-1)^b |b⟩
    let sign = if (x & zmask).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let i_pow = ymask.count_ones() % 4;
    let base = match i_pow {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    base * sign
}

fn qubits_of(a: &ComplexMatrix) -> Result<usize> {
    let d = a.rows();
    if !a.is_square() || d == 0 || !d.is_power_of_two() {
        return Err(Error::Dimension(format!(
            "{}x{} is not a square power-of-two operator",
            a.rows(),
            a.cols()
        )));
    }
    let n = d.trailing_zeros() as usize;
    if n > MAX_PAULI_QUBITS {
        return Err(Error::Infeasible(format!(
            "Pauli decomposition limited to {MAX_PAULI_QUBITS} qubits, got {n}"
        )));
    }
    Ok(n)
}

pub fn pauli_decompose(a: &ComplexMatrix) -> Result<PauliDecomposition> {
    let n = qubits_of(a)?;
    let d = 1usize << n;
    let coeffs = (0..1usize << (2 * n))
        .map(|idx| {
            let (flip, ymask, zmask) = action(n, idx);
            // tr(P A) = Σ_y phase(y) A[y, y ⊕ flip]
            let tr: Complex64 = (0..d)
                .map(|y| phase(y, ymask, zmask) * a[(y, y ^ flip)])
                .sum();
            tr / d as f64
        })
        .collect();
    Ok(PauliDecomposition { n, coeffs })
}

pub fn pauli_reconstruct(p: &PauliDecomposition) -> ComplexMatrix {
    let n = p.n;
    let d = 1usize << n;
    let mut out = ComplexMatrix::zeros(d, d);
    for (idx, &c) in p.coeffs.iter().enumerate() {
        if c == ZERO {
            continue;
        }
        let (flip, ymask, zmask) = action(n, idx);
        for x in 0..d {
            // P = Σ_x phase(x) |x ⊕ flip⟩⟨x|
            out[(x ^ flip, x)] += c * phase(x, ymask, zmask);
        }
    }
    out
}

/// The Pauli string operator for `label`.
pub fn pauli_operator(label: &str) -> Result<ComplexMatrix> {
    let n = label.chars().count();
    let mut p = PauliDecomposition {
        n,
        coeffs: vec![ZERO; 1 << (2 * n)],
    };
    let idx = p
        .index_of(label)
        .ok_or_else(|| Error::InvalidInput(format!("bad Pauli label `{label}`")))?;
    p.coeffs[idx] = Complex64::new(1.0, 0.0);
    Ok(pauli_reconstruct(&p))
}
