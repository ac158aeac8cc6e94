//! Exact integer combinatorics on bit indices.
//!
//! Everything here is plain integer arithmetic: binomial coefficients as
//! arbitrary-precision integers, the 2-adic partial order `m ⪯ n` (every
//! binary digit of `m` is at most the matching digit of `n`), the parity of
//! `C(n, m)` by Lucas' theorem, the bitwise join, and residue-class binomial
//! sums `A_n^L(i) = Σ_{j ≡ i (mod L)} C(n, j)`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("residue {residue} is not a valid class modulo {modulus}")]
    InvalidResidue { modulus: u64, residue: u64 },
}

/// One full row `C(n, 0..=n)` of Pascal's triangle, kept exact.
///
/// A row is the unit of caching for sweeps: all weights and residue-class
/// sums for the same `n` share one row, so workers hold one `PascalRow` at a
/// time instead of a factorial table.
#[derive(Debug, Clone)]
pub struct PascalRow {
    n: u64,
    coeffs: Vec<BigUint>,
}

impl PascalRow {
    /// Computes the row with the multiplicative recurrence
    /// `C(n, k+1) = C(n, k) * (n - k) / (k + 1)`; every division is exact.
    /// The upper half is mirrored from the lower half.
    pub fn new(n: u64) -> Self {
        let len = n as usize + 1;
        let mut coeffs = Vec::with_capacity(len);
        coeffs.push(BigUint::one());
        let half = n / 2;
        for k in 0..half {
            let next = &coeffs[k as usize] * (n - k) / (k + 1);
            coeffs.push(next);
        }
        for k in half as usize + 1..len {
            coeffs.push(coeffs[n as usize - k].clone());
        }
        PascalRow { n, coeffs }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `C(n, k)`, which is zero when `k > n`.
    pub fn get(&self, k: u64) -> BigUint {
        usize::try_from(k)
            .ok()
            .and_then(|k| self.coeffs.get(k).cloned())
            .unwrap_or_else(BigUint::zero)
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }
}

/// Exact binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The 2-adic partial order: `m ⪯ n` iff every binary digit of `m` is at
/// most the matching digit of `n`, i.e. `m AND n == m`.
pub fn preceq(m: u64, n: u64) -> bool {
    m & n == m
}

/// Parity of `C(n, m)` by Lucas' theorem: the product over binary digits of
/// `C(n_i, m_i) mod 2`, which vanishes exactly when some `m_i > n_i`.
pub fn lucas_parity(n: u64, m: u64) -> u8 {
    let (mut n, mut m) = (n, m);
    while m != 0 {
        if (m & 1) > (n & 1) {
            return 0;
        }
        m >>= 1;
        n >>= 1;
    }
    1
}

/// The join of the 2-adic order: bitwise OR of the binary expansions.
pub fn or_join(i: u64, j: u64) -> u64 {
    i | j
}

/// Residue-class binomial sum `A_n^L(i) = Σ_{0 ≤ j ≤ n, j ≡ i (mod L)} C(n, j)`.
pub fn residue_class_sum(
    n: u64,
    modulus: u64,
    residue: u64,
) -> Result<BigUint, CombinatoricsError> {
    residue_class_sum_with_row(&PascalRow::new(n), modulus, residue)
}

/// Same as [`residue_class_sum`] but reuses an already computed row.
pub fn residue_class_sum_with_row(
    row: &PascalRow,
    modulus: u64,
    residue: u64,
) -> Result<BigUint, CombinatoricsError> {
    if modulus == 0 || residue >= modulus {
        return Err(CombinatoricsError::InvalidResidue { modulus, residue });
    }
    let mut acc = BigUint::zero();
    let mut j = residue;
    while j <= row.n() {
        acc += row.get(j);
        match j.checked_add(modulus) {
            Some(next) => j = next,
            None => break,
        }
    }
    Ok(acc)
}
