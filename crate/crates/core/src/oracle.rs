//! Independent brute-force ground truth for small `n`.
//!
//! Nothing here touches the 2-adic order, Lucas parity, or the weight
//! engine: binomial values come from a row-by-row additive Pascal triangle
//! and parities from the same triangle reduced mod 2, so a shared bug with
//! the production path would show up as a disagreement.

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::weight::Esbf;

/// Default cap for the level-counting oracle; cost is O(n^2) bignum ops.
pub const LEVEL_ORACLE_CAP: u64 = 40;
/// Cap for the literal truth-table enumeration; cost is O(2^n).
pub const LITERAL_ORACLE_CAP: u64 = 20;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("oracle cap exceeded: n = {n} is above the configured cap {cap}")]
pub struct CapExceeded {
    pub n: u64,
    pub cap: u64,
}

/// Level-by-level summary of a truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTableSummary {
    n: u64,
    d: u64,
    weight: BigUint,
    per_level_counts: Vec<BigUint>,
}

impl TruthTableSummary {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn weight(&self) -> &BigUint {
        &self.weight
    }

    /// Entry `i` is the number of weight-`i` inputs mapped to 1; by symmetry
    /// it is either `0` or `C(n, i)`.
    pub fn per_level_counts(&self) -> &[BigUint] {
        &self.per_level_counts
    }
}

/// Additive Pascal triangle rows `0..=n`, exact values.
fn additive_triangle(n: u64) -> Vec<Vec<BigUint>> {
    let mut tri: Vec<Vec<BigUint>> = vec![vec![BigUint::from(1u32)]];
    for r in 1..=n as usize {
        let prev = &tri[r - 1];
        let mut row = Vec::with_capacity(r + 1);
        row.push(BigUint::from(1u32));
        for k in 1..r {
            row.push(&prev[k - 1] + &prev[k]);
        }
        row.push(BigUint::from(1u32));
        tri.push(row);
    }
    tri
}

/// Additive Pascal triangle mod 2: `parity[w][k] = C(w, k) mod 2`.
fn parity_triangle(n: u64) -> Vec<Vec<bool>> {
    let mut tri: Vec<Vec<bool>> = vec![vec![true]];
    for r in 1..=n as usize {
        let prev = &tri[r - 1];
        let mut row = Vec::with_capacity(r + 1);
        row.push(true);
        for k in 1..r {
            row.push(prev[k - 1] ^ prev[k]);
        }
        row.push(true);
        tri.push(row);
    }
    tri
}

fn parity_on_level(parity: &[Vec<bool>], w: u64, d: u64) -> bool {
    let w = w as usize;
    let d = d as usize;
    d <= w && parity[w][d]
}

/// Weight of `sigma_{n,d}` by level counting: an input of weight `w` maps to
/// 1 exactly when it contains an odd number of `d`-subsets, i.e. when
/// `C(w, d)` is odd.
pub fn brute_force_weight(e: &Esbf) -> Result<TruthTableSummary, CapExceeded> {
    brute_force_weight_capped(e, LEVEL_ORACLE_CAP)
}

/// Same as [`brute_force_weight`] with an explicit cap.
pub fn brute_force_weight_capped(e: &Esbf, cap: u64) -> Result<TruthTableSummary, CapExceeded> {
    let (n, d) = (e.n(), e.d());
    if n > cap {
        return Err(CapExceeded { n, cap });
    }
    let tri = additive_triangle(n);
    let parity = parity_triangle(n);
    let mut weight = BigUint::zero();
    let mut per_level_counts = Vec::with_capacity(n as usize + 1);
    for w in 0..=n {
        let count = if parity_on_level(&parity, w, d) {
            tri[n as usize][w as usize].clone()
        } else {
            BigUint::zero()
        };
        weight += &count;
        per_level_counts.push(count);
    }
    Ok(TruthTableSummary {
        n,
        d,
        weight,
        per_level_counts,
    })
}

/// Weight by literal enumeration of all `2^n` inputs. Each input's output is
/// the parity of the number of `d`-subsets of its support, looked up from a
/// Pascal-mod-2 table by the input's population count.
pub fn literal_enumeration_weight(e: &Esbf) -> Result<BigUint, CapExceeded> {
    let (n, d) = (e.n(), e.d());
    if n > LITERAL_ORACLE_CAP {
        return Err(CapExceeded {
            n,
            cap: LITERAL_ORACLE_CAP,
        });
    }
    let parity = parity_triangle(n);
    let mut ones: u64 = 0;
    for x in 0u64..1 << n {
        if parity_on_level(&parity, u64::from(x.count_ones()), d) {
            ones += 1;
        }
    }
    Ok(BigUint::from(ones))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_counting_examples() {
        let s = brute_force_weight(&Esbf::new(4, 2).unwrap()).unwrap();
        assert_eq!(s.weight(), &BigUint::from(10u32));
        let s = brute_force_weight(&Esbf::new(7, 2).unwrap()).unwrap();
        assert_eq!(s.weight(), &BigUint::from(64u32));
        for n in [1u64, 4, 11] {
            let s = brute_force_weight(&Esbf::new(n, n).unwrap()).unwrap();
            assert_eq!(s.weight(), &BigUint::from(1u32));
        }
    }

    #[test]
    fn per_level_counts_are_all_or_nothing() {
        for n in 1..=16u64 {
            let tri = additive_triangle(n);
            for d in 1..=n {
                let s = brute_force_weight(&Esbf::new(n, d).unwrap()).unwrap();
                let mut total = BigUint::zero();
                for (i, count) in s.per_level_counts().iter().enumerate() {
                    assert!(
                        count.is_zero() || *count == tri[n as usize][i],
                        "level {i} of sigma_({n},{d})"
                    );
                    total += count;
                }
                assert_eq!(&total, s.weight());
            }
        }
    }

    #[test]
    fn literal_enumeration_examples() {
        assert_eq!(
            literal_enumeration_weight(&Esbf::new(4, 2).unwrap()).unwrap(),
            BigUint::from(10u32)
        );
        assert_eq!(
            literal_enumeration_weight(&Esbf::new(5, 1).unwrap()).unwrap(),
            BigUint::from(16u32)
        );
        assert_eq!(
            literal_enumeration_weight(&Esbf::new(6, 6).unwrap()).unwrap(),
            BigUint::from(1u32)
        );
    }

    #[test]
    fn caps_are_enforced() {
        assert!(brute_force_weight(&Esbf::new(41, 2).unwrap()).is_err());
        assert!(brute_force_weight_capped(&Esbf::new(41, 2).unwrap(), 64).is_ok());
        assert!(literal_enumeration_weight(&Esbf::new(21, 2).unwrap()).is_err());
    }

    #[test]
    fn the_two_oracle_paths_agree() {
        for n in 1..=16u64 {
            for d in 1..=n {
                let e = Esbf::new(n, d).unwrap();
                assert_eq!(
                    literal_enumeration_weight(&e).unwrap(),
                    *brute_force_weight(&e).unwrap().weight(),
                    "sigma_({n},{d})"
                );
            }
        }
    }

    /// Truth table built straight from the definition: XOR of all degree-d
    /// monomials, accumulated monomial by monomial over its supersets.
    fn truth_table_from_monomials(n: u64, d: u64) -> Vec<bool> {
        let size = 1usize << n;
        let mut table = vec![false; size];
        let full = (size - 1) as u64;
        // Enumerate all d-subsets of the n variables.
        let mut mask = (1u64 << d) - 1;
        while mask <= full {
            // Flip every superset of this monomial.
            let free = full & !mask;
            let mut sub = free;
            loop {
                table[(mask | sub) as usize] ^= true;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
            // Next d-subset in colex order (Gosper's hack).
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            if r > full || c == 0 {
                break;
            }
            mask = (((r ^ mask) >> 2) / c) | r;
        }
        table
    }

    #[test]
    fn literal_enumeration_matches_monomial_truth_table() {
        for n in 1..=10u64 {
            for d in 1..=n {
                let ones = truth_table_from_monomials(n, d)
                    .iter()
                    .filter(|&&b| b)
                    .count();
                assert_eq!(
                    literal_enumeration_weight(&Esbf::new(n, d).unwrap()).unwrap(),
                    BigUint::from(ones),
                    "sigma_({n},{d})"
                );
            }
        }
    }

    #[test]
    fn sigma_is_invariant_under_coordinate_permutations() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in 2..=12u64 {
            for d in 1..=n {
                let table = truth_table_from_monomials(n, d);
                for _ in 0..100 {
                    // Fisher-Yates over the n coordinate positions.
                    let mut perm: Vec<u32> = (0..n as u32).collect();
                    for i in (1..perm.len()).rev() {
                        let j = (next() % (i as u64 + 1)) as usize;
                        perm.swap(i, j);
                    }
                    for x in 0..1u64 << n {
                        let mut y = 0u64;
                        for (from, &to) in perm.iter().enumerate() {
                            if x >> from & 1 == 1 {
                                y |= 1 << to;
                            }
                        }
                        assert_eq!(
                            table[x as usize], table[y as usize],
                            "sigma_({n},{d}) not symmetric at x={x}"
                        );
                    }
                }
            }
        }
    }
}
