//! Exact weights and balancedness of elementary symmetric Boolean functions.
//!
//! The value of `sigma_{n,d}` on an input of Hamming weight `i` is 1 exactly
//! when `d ⪯ i` in the 2-adic order, so its weight is the sum of `C(n, i)`
//! over those levels. The sum is taken by enumerating the completions of the
//! bits of `d` inside the free bit positions, which visits only the levels in
//! the support instead of scanning all of `0..=n`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{preceq, PascalRow};

/// Relation of a weight to the balanced count `2^(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Trichotomy {
    Less,
    Equal,
    Greater,
}

impl Trichotomy {
    fn from_ordering(ord: Ordering) -> Self {
        match ord {
            Ordering::Less => Trichotomy::Less,
            Ordering::Equal => Trichotomy::Equal,
            Ordering::Greater => Trichotomy::Greater,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Trichotomy::Less => "Less",
            Trichotomy::Equal => "Equal",
            Trichotomy::Greater => "Greater",
        }
    }
}

impl fmt::Display for Trichotomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error(
    "sigma_({n},{d}) is not a valid elementary symmetric function (need n >= 1 and 1 <= d <= n)"
)]
pub struct InvalidEsbf {
    pub n: u64,
    pub d: u64,
}

/// The elementary symmetric Boolean function `sigma_{n,d}`: the XOR of all
/// degree-`d` monomials in `n` variables. Valid for `n >= 1`, `1 <= d <= n`;
/// `d = 0` (the constant 1) is rejected at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Esbf {
    n: u64,
    d: u64,
}

impl Esbf {
    pub fn new(n: u64, d: u64) -> Result<Self, InvalidEsbf> {
        if n == 0 || d == 0 || d > n {
            return Err(InvalidEsbf { n, d });
        }
        Ok(Esbf { n, d })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// The simplified value vector: bit `i` is 1 exactly when `d ⪯ i`.
    pub fn value_vector(&self) -> SimplifiedVector {
        let bits = (0..=self.n).map(|i| preceq(self.d, i)).collect();
        SimplifiedVector::from_bits(bits)
    }

    /// Exact weight and its trichotomy against `2^(n-1)`.
    pub fn weight_report(&self) -> WeightReport {
        self.weight_report_with_row(&PascalRow::new(self.n))
    }

    /// Same as [`Esbf::weight_report`], reusing a caller-held Pascal row.
    ///
    /// Panics if the row was built for a different `n`.
    pub fn weight_report_with_row(&self, row: &PascalRow) -> WeightReport {
        assert_eq!(row.n(), self.n, "Pascal row is for a different n");
        let bits = 64 - self.n.leading_zeros();
        let full = if bits >= 64 {
            u64::MAX
        } else {
            (1u64 << bits) - 1
        };
        let free = full & !self.d;
        let mut weight = BigUint::zero();
        let mut sub = free;
        loop {
            let level = self.d | sub;
            if level <= self.n {
                weight += row.get(level);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        let half = BigUint::one() << (self.n - 1) as usize;
        let trichotomy = Trichotomy::from_ordering(weight.cmp(&half));
        WeightReport {
            esbf: *self,
            weight,
            trichotomy,
        }
    }

    pub fn is_balanced(&self) -> bool {
        self.weight_report().trichotomy == Trichotomy::Equal
    }
}

impl fmt::Display for Esbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma_({},{})", self.n, self.d)
    }
}

/// Exact weight of one function together with its trichotomy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightReport {
    esbf: Esbf,
    weight: BigUint,
    trichotomy: Trichotomy,
}

impl WeightReport {
    pub fn esbf(&self) -> Esbf {
        self.esbf
    }

    pub fn weight(&self) -> &BigUint {
        &self.weight
    }

    pub fn trichotomy(&self) -> Trichotomy {
        self.trichotomy
    }

    pub fn balanced(&self) -> bool {
        self.trichotomy == Trichotomy::Equal
    }
}

/// Per-level bit vector of an `n`-variable symmetric function: bit `i` is the
/// value taken on every input of Hamming weight `i`. Length is always `n + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplifiedVector {
    bits: Vec<bool>,
}

impl SimplifiedVector {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        assert!(!bits.is_empty(), "a simplified vector has n + 1 >= 2 bits");
        SimplifiedVector { bits }
    }

    pub fn zero(n: u64) -> Self {
        SimplifiedVector {
            bits: vec![false; n as usize + 1],
        }
    }

    /// The indicator of `{d}`, i.e. the simplified ANF vector of `sigma_{n,d}`.
    pub fn indicator(n: u64, d: u64) -> Self {
        assert!(d <= n);
        let mut v = Self::zero(n);
        v.bits[d as usize] = true;
        v
    }

    pub fn n(&self) -> u64 {
        self.bits.len() as u64 - 1
    }

    pub fn bit(&self, i: u64) -> bool {
        self.bits[i as usize]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Value vector from a simplified ANF vector: `v(i) = XOR_{k ⪯ i} λ(k)`.
    pub fn to_value_vector(&self) -> Self {
        self.subset_xor()
    }

    /// Simplified ANF vector from a value vector: `λ(i) = XOR_{k ⪯ i} v(k)`.
    /// This is the same subset-lattice transform, which is an involution
    /// over F2, so the two directions share one kernel.
    pub fn to_anf_vector(&self) -> Self {
        self.subset_xor()
    }

    /// In-place butterfly for the XOR-over-submasks transform. The array is
    /// padded to a power of two; indices above `n` only ever receive
    /// contributions, so the result on `0..=n` is unaffected by the padding.
    fn subset_xor(&self) -> Self {
        let len = self.bits.len();
        let padded = len.next_power_of_two();
        let mut v = self.bits.clone();
        v.resize(padded, false);
        let mut e = 1;
        while e < padded {
            for i in 0..padded {
                if i & e != 0 {
                    v[i] ^= v[i ^ e];
                }
            }
            e <<= 1;
        }
        v.truncate(len);
        SimplifiedVector { bits: v }
    }
}

/// The exponents `d_1 < d_2 < ... < d_s` with `d = Σ 2^{d_i}`.
///
/// `sigma_{n,d}` is the product of the `sigma_{n,2^{d_i}}`, so its support is
/// the intersection of the power-of-two supports.
pub fn power_decomposition(d: u64) -> Vec<u32> {
    assert!(d >= 1, "power decomposition needs d >= 1");
    (0..64).filter(|&k| d >> k & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;
    use proptest::prelude::*;

    fn weight(n: u64, d: u64) -> BigUint {
        Esbf::new(n, d).unwrap().weight_report().weight().clone()
    }

    #[test]
    fn value_vector_examples() {
        let v = Esbf::new(3, 2).unwrap().value_vector();
        assert_eq!(v.bits(), &[false, false, true, true]);
        let v = Esbf::new(4, 1).unwrap().value_vector();
        assert_eq!(v.bits(), &[false, true, false, true, false]);
        let v = Esbf::new(6, 6).unwrap().value_vector();
        let expected: Vec<bool> = (0..=6).map(|i| i == 6).collect();
        assert_eq!(v.bits(), &expected[..]);
    }

    #[test]
    fn esbf_construction_guards() {
        assert!(Esbf::new(0, 1).is_err());
        assert!(Esbf::new(3, 0).is_err());
        assert!(Esbf::new(3, 4).is_err());
        assert!(Esbf::new(1, 1).is_ok());
    }

    /// Direct XOR-over-submasks oracle for the transform.
    fn subset_xor_direct(v: &SimplifiedVector) -> SimplifiedVector {
        let n = v.n();
        let bits = (0..=n)
            .map(|i| {
                let mut acc = false;
                for k in 0..=i {
                    if preceq(k, i) {
                        acc ^= v.bit(k);
                    }
                }
                acc
            })
            .collect();
        SimplifiedVector::from_bits(bits)
    }

    #[test]
    fn transform_examples() {
        let lambda = SimplifiedVector::from_bits(vec![true, true, false, false]);
        let v = lambda.to_value_vector();
        assert_eq!(v.bits(), &[true, false, true, false]);
        assert_eq!(v.to_anf_vector(), lambda);

        for n in [3u64, 5, 9] {
            for d in 1..=n {
                let lambda = SimplifiedVector::indicator(n, d);
                assert_eq!(
                    lambda.to_value_vector(),
                    Esbf::new(n, d).unwrap().value_vector()
                );
            }
        }

        let zero = SimplifiedVector::zero(7);
        assert_eq!(zero.to_value_vector(), zero);
        assert_eq!(zero.to_anf_vector(), zero);

        let v = Esbf::new(5, 2).unwrap().value_vector();
        assert_eq!(v.to_anf_vector(), SimplifiedVector::indicator(5, 2));
    }

    proptest! {
        #[test]
        fn transform_is_an_involution(bits in proptest::collection::vec(any::<bool>(), 1..=65)) {
            let v = SimplifiedVector::from_bits(bits);
            prop_assert_eq!(v.to_value_vector().to_anf_vector(), v.clone());
            prop_assert_eq!(v.to_anf_vector().to_value_vector(), v.clone());
            prop_assert_eq!(v.to_value_vector(), subset_xor_direct(&v));
        }
    }

    #[test]
    fn weight_examples() {
        let report = Esbf::new(7, 2).unwrap().weight_report();
        assert_eq!(report.weight(), &BigUint::from(64u32));
        assert_eq!(report.trichotomy(), Trichotomy::Equal);
        assert!(report.balanced());

        let report = Esbf::new(8, 2).unwrap().weight_report();
        assert_eq!(report.weight(), &BigUint::from(120u32));
        assert_eq!(report.trichotomy(), Trichotomy::Less);

        let report = Esbf::new(12, 2).unwrap().weight_report();
        assert_eq!(report.weight(), &BigUint::from(2080u32));
        assert_eq!(report.trichotomy(), Trichotomy::Greater);

        for n in [1u64, 2, 9, 33] {
            let report = Esbf::new(n, 1).unwrap().weight_report();
            assert_eq!(report.weight(), &(BigUint::one() << (n - 1) as usize));
            assert_eq!(report.trichotomy(), Trichotomy::Equal);
        }
    }

    #[test]
    fn is_balanced_examples() {
        assert!(Esbf::new(7, 2).unwrap().is_balanced());
        assert!(!Esbf::new(8, 2).unwrap().is_balanced());
        assert!(Esbf::new(15, 4).unwrap().is_balanced());
    }

    #[test]
    fn weight_is_fine_at_large_n() {
        // No overflow anywhere up to n = 4096; cross-check the trichotomy
        // against the residue table for d = 2.
        let report = Esbf::new(4096, 2).unwrap().weight_report();
        assert_eq!(report.trichotomy(), Trichotomy::Less);
        let report = Esbf::new(4095, 2).unwrap().weight_report();
        assert_eq!(report.trichotomy(), Trichotomy::Equal);
    }

    #[test]
    fn power_decomposition_examples() {
        assert_eq!(power_decomposition(12), vec![2, 3]);
        assert_eq!(power_decomposition(6), vec![1, 2]);
        for t in 0..20u32 {
            assert_eq!(power_decomposition(1 << t), vec![t]);
        }
    }

    #[test]
    fn support_is_the_intersection_of_power_supports() {
        for n in 1..=64u64 {
            for d in 1..=n {
                let parts = power_decomposition(d);
                if parts.len() < 2 {
                    continue;
                }
                let e = Esbf::new(n, d).unwrap();
                let v = e.value_vector();
                let mut meet = vec![true; n as usize + 1];
                let mut min_weight: Option<BigUint> = None;
                for &p in &parts {
                    let part = Esbf::new(n, 1 << p).unwrap();
                    for (bit, with) in meet.iter_mut().zip(part.value_vector().bits()) {
                        *bit &= *with;
                    }
                    let w = part.weight_report().weight().clone();
                    min_weight = Some(match min_weight {
                        Some(m) => m.min(w),
                        None => w,
                    });
                }
                assert_eq!(v.bits(), &meet[..], "support of sigma_({n},{d})");
                let w = e.weight_report();
                assert!(
                    w.weight() < &min_weight.unwrap(),
                    "strict containment fails for sigma_({n},{d})"
                );
            }
        }
    }

    #[test]
    fn weight_matches_parity_filtered_binomial_sum() {
        // Lucas-free route: sum C(n,i) over levels where C(i,d) is odd,
        // with the parity taken from the exact binomial value.
        for n in 1..=64u64 {
            let row = PascalRow::new(n);
            for d in 1..=n {
                let mut expect = BigUint::zero();
                for i in 0..=n {
                    if binomial(i, d).bit(0) {
                        expect += row.get(i);
                    }
                }
                let e = Esbf::new(n, d).unwrap();
                assert_eq!(e.weight_report_with_row(&row).weight(), &expect);
            }
        }
    }

    #[test]
    fn odd_degrees_above_one_fall_below_half() {
        for n in 1..=64u64 {
            for d in (3..=n).step_by(2) {
                let report = Esbf::new(n, d).unwrap().weight_report();
                assert_eq!(report.trichotomy(), Trichotomy::Less, "sigma_({n},{d})");
            }
        }
    }

    #[test]
    fn even_composite_degrees_below_half_when_criterion_applies() {
        // If 2d is not below n, or 2^(d_1 + 2) - 1 is below n, the weight is
        // strictly less than 2^(n-1).
        for n in 1..=64u64 {
            for d in (2..=n).step_by(2) {
                let parts = power_decomposition(d);
                if parts.len() < 2 {
                    continue;
                }
                let d1 = parts[0];
                let applies = !preceq(2 * d, n) || preceq((1 << (d1 + 2)) - 1, n);
                if applies {
                    let report = Esbf::new(n, d).unwrap().weight_report();
                    assert_eq!(report.trichotomy(), Trichotomy::Less, "sigma_({n},{d})");
                }
            }
        }
    }

    #[test]
    fn weight_agrees_between_row_reuse_and_fresh_rows() {
        let n = 50;
        let row = PascalRow::new(n);
        for d in 1..=n {
            assert_eq!(
                weight(n, d),
                *Esbf::new(n, d)
                    .unwrap()
                    .weight_report_with_row(&row)
                    .weight()
            );
        }
    }
}
