//! Certified evaluation of the trigonometric closed forms for the weights,
//! and the exact residue-class trichotomy for `d = 2^t`.
//!
//! Every evaluator returns an enclosure: a midpoint plus a rigorous error
//! bound. An evaluation is accepted only when the bound is below 1/2, which
//! certifies its nearest integer; otherwise the precision is doubled a fixed
//! number of times before giving up. Equality against `2^(n-1)` is never
//! asserted from a numeric value: balancedness claims stay with the exact
//! integer paths.

mod interval;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::weight::Trichotomy;
use interval::{Ival, TrigCtx};

/// Extra working bits carried on top of the requested precision.
const GUARD_BITS: u32 = 64;
/// How many times the precision is doubled before giving up.
const MAX_DOUBLINGS: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosedFormError {
    #[error("error bound still at least 1/2 after escalating to {last_precision_bits} bits")]
    PrecisionInsufficient { last_precision_bits: u32 },
}

/// A dyadic rational `mantissa * 2^exp2`, the output format of the
/// high-precision evaluations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mantissa: BigInt,
    exp2: i64,
}

impl Dyadic {
    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    /// Nearest integer (ties round up, which certified callers never hit).
    pub fn round(&self) -> BigInt {
        if self.exp2 >= 0 {
            return &self.mantissa << self.exp2 as u64;
        }
        let shift = (-self.exp2) as u64;
        (&self.mantissa + (BigInt::one() << (shift - 1))) >> shift
    }

    /// Approximate log2 of the magnitude; `None` for zero.
    pub fn log2_abs(&self) -> Option<i64> {
        if self.mantissa.is_zero() {
            return None;
        }
        Some(self.mantissa.bits() as i64 + self.exp2)
    }

    /// Best-effort conversion; very small magnitudes flush to zero.
    pub fn to_f64(&self) -> f64 {
        let mut x = 0.0f64;
        for (i, digit) in self.mantissa.to_u32_digits().1.iter().enumerate() {
            x += (*digit as f64) * 2f64.powi(32 * i as i32);
        }
        let x = if self.mantissa.is_negative() { -x } else { x };
        x * 2f64.powf(self.exp2 as f64)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * 2^{}", self.mantissa, self.exp2)
    }
}

/// A certified high-precision evaluation: the true value is within
/// `error_bound` of `value`, and `error_bound < 1/2`, so [`ClosedFormEval::rounded`]
/// is the exact integer the formula represents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormEval {
    value: Dyadic,
    error_bound: Dyadic,
    precision_bits: u32,
    escalations: u32,
}

impl ClosedFormEval {
    pub fn value(&self) -> &Dyadic {
        &self.value
    }

    pub fn error_bound(&self) -> &Dyadic {
        &self.error_bound
    }

    /// The precision (in bits) at which the evaluation was accepted.
    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// How many precision doublings were needed before acceptance.
    pub fn escalations(&self) -> u32 {
        self.escalations
    }

    pub fn rounded(&self) -> BigInt {
        self.value.round()
    }
}

/// The default precision policy: terms scale like `2^n`, so the working
/// precision grows with `n`.
pub fn default_precision_bits(n: u64) -> u32 {
    n as u32 + 64
}

/// Packages an enclosure as an accepted evaluation when its half-width is
/// certifiably below 1/2.
fn certify(
    enclosure: &Ival,
    prec: u32,
    precision_bits: u32,
    escalations: u32,
) -> Option<ClosedFormEval> {
    let width = enclosure.width();
    if width >= BigInt::one() << prec {
        return None;
    }
    let exp2 = -(prec as i64) - 1;
    Some(ClosedFormEval {
        value: Dyadic {
            mantissa: &enclosure.lo + &enclosure.hi,
            exp2,
        },
        error_bound: Dyadic {
            mantissa: width,
            exp2,
        },
        precision_bits,
        escalations,
    })
}

/// Runs an attempt at doubling precisions until it certifies.
fn with_escalation<T>(
    precision_bits: u32,
    mut attempt: impl FnMut(u32, u32, u32) -> Option<T>,
) -> Result<T, ClosedFormError> {
    let mut bits = precision_bits.max(8);
    for escalation in 0..=MAX_DOUBLINGS {
        if let Some(out) = attempt(bits + GUARD_BITS, bits, escalation) {
            return Ok(out);
        }
        bits *= 2;
    }
    Err(ClosedFormError::PrecisionInsufficient {
        last_precision_bits: bits / 2,
    })
}

/// Closed form of the residue-class binomial sum
/// `A_n^{2^p}(i) = 2^(n-p) + 2^(1-p) Σ_{j=1}^{2^(p-1)-1} (2 cos(jπ/2^p))^n cos(j(n-2i)π/2^p)`.
///
/// When accepted, the result rounds to the exact `residue_class_sum(n, 2^p, i)`.
pub fn residue_class_sum_closed(
    n: u64,
    p: u32,
    i: u64,
    precision_bits: u32,
) -> Result<ClosedFormEval, ClosedFormError> {
    assert!(p >= 1, "need p >= 1");
    assert!(i < 1u64 << p, "residue {i} out of range for modulus 2^{p}");
    residue_class_sums_closed_for(n, p, &[i], precision_bits).map(|mut v| v.pop().unwrap())
}

/// Batched form of [`residue_class_sum_closed`]: evaluates every residue
/// `0 <= i < 2^p` at once, sharing the power table across residues.
pub fn residue_class_sums_closed(
    n: u64,
    p: u32,
    precision_bits: u32,
) -> Result<Vec<ClosedFormEval>, ClosedFormError> {
    assert!(p >= 1, "need p >= 1");
    let residues: Vec<u64> = (0..1u64 << p).collect();
    residue_class_sums_closed_for(n, p, &residues, precision_bits)
}

fn residue_class_sums_closed_for(
    n: u64,
    p: u32,
    residues: &[u64],
    precision_bits: u32,
) -> Result<Vec<ClosedFormEval>, ClosedFormError> {
    with_escalation(precision_bits, |prec, bits, escalation| {
        let mut ctx = TrigCtx::new(prec);
        let top = (1u64 << (p - 1)) - 1;
        let powers: Vec<Ival> = (1..=top)
            .map(|j| ctx.cos_pi_frac(j as i128, p).shl(1).powi(n, prec))
            .collect();
        let lead = Ival::pow2(n as i64 - p as i64, prec);
        let mut out = Vec::with_capacity(residues.len());
        for &i in residues {
            let mut sum = Ival::zero();
            for (idx, power) in powers.iter().enumerate() {
                let j = idx as i128 + 1;
                let c = ctx.cos_pi_frac(j * (n as i128 - 2 * i as i128), p);
                sum = sum.add(&power.mul(&c, prec));
            }
            let total = lead.add(&sum.shr_outward(p - 1));
            match certify(&total, prec, bits, escalation) {
                Some(eval) => out.push(eval),
                None => return None,
            }
        }
        Some(out)
    })
}

/// Residue-table trichotomy of `wt(sigma_{n,2^t})` against `2^(n-1)`:
/// with `r = n mod 2^(t+2)`, the weight is below for `0 <= r <= 2^(t+1)-2`,
/// equal for `r = 2^(t+1)-1` or `2^(t+2)-1`, and above otherwise. Pure
/// integer arithmetic, no trigonometry.
pub fn trichotomy_weight_pow2(n: u64, t: u32) -> Trichotomy {
    assert!(t >= 1 && 1u64 << t <= n, "need t >= 1 and 2^t <= n");
    let modulus = 1u64 << (t + 2);
    let r = n % modulus;
    let boundary = (1u64 << (t + 1)) - 1;
    if r == boundary || r == modulus - 1 {
        Trichotomy::Equal
    } else if r < boundary {
        Trichotomy::Less
    } else {
        Trichotomy::Greater
    }
}

/// Closed form of `wt(sigma_{n,2^t})`:
/// `2^(n-1) - 2^(n-t) Σ_{j odd} (cos(jπ/2^(t+1)))^n csc(jπ/2^(t+1)) sin(j(r+1)π/2^(t+1))`
/// with `r = n mod 2^(t+2)` and `j` ranging over odd `1..=2^t-1`.
pub fn weight_pow2_closed(
    n: u64,
    t: u32,
    precision_bits: u32,
) -> Result<ClosedFormEval, ClosedFormError> {
    assert!(t >= 1 && 1u64 << t <= n, "need t >= 1 and 2^t <= n");
    let r = n % (1u64 << (t + 2));
    with_escalation(precision_bits, |prec, bits, escalation| {
        let mut ctx = TrigCtx::new(prec);
        let m = t + 1;
        let mut total = Ival::zero();
        for j in (1..1u64 << t).step_by(2) {
            let power = ctx.cos_pi_frac(j as i128, m).powi(n, prec);
            let csc = ctx.sin_pi_frac(j as i128, m).recip(prec)?;
            let s = ctx.sin_pi_frac((j * (r + 1)) as i128, m);
            total = total.add(&power.mul(&csc, prec).mul(&s, prec));
        }
        let wt = Ival::pow2(n as i64 - 1, prec).sub(&total.shl(n - t as u64));
        certify(&wt, prec, bits, escalation)
    })
}

/// Closed form of `wt(sigma_{n,2^t+1})` with `n = 2^(t+1) l' + r`,
/// `0 <= r < 2^(t+1)`:
/// `2^(n-2) + 2^(n-t-1) (-1)^(l'+1) Σ_{j odd} (cos(jπ/2^(t+1)))^(n-1) sin(jrπ/2^(t+1)) / sin(jπ/2^(t+1))`.
pub fn weight_pow2_plus1_closed(
    n: u64,
    t: u32,
    precision_bits: u32,
) -> Result<ClosedFormEval, ClosedFormError> {
    assert!(t >= 1 && (1u64 << t) < n, "need t >= 1 and 2^t + 1 <= n");
    let l = n >> (t + 1);
    let r = n & ((1u64 << (t + 1)) - 1);
    with_escalation(precision_bits, |prec, bits, escalation| {
        let mut ctx = TrigCtx::new(prec);
        let m = t + 1;
        let mut total = Ival::zero();
        for j in (1..1u64 << t).step_by(2) {
            let power = ctx.cos_pi_frac(j as i128, m).powi(n - 1, prec);
            let num = ctx.sin_pi_frac((j * r) as i128, m);
            let inv = ctx.sin_pi_frac(j as i128, m).recip(prec)?;
            total = total.add(&power.mul(&num, prec).mul(&inv, prec));
        }
        let signed = if l & 1 == 1 { total } else { total.neg() };
        let wt = Ival::pow2(n as i64 - 2, prec).add(&signed.shl(n - t as u64 - 1));
        certify(&wt, prec, bits, escalation)
    })
}

/// Closed form of `wt(sigma_{n,d})` for `d = 2^t + 2^s`, `1 <= t < s`:
///
/// `2^(n-2) - 2^(n-s) Σ_{j odd, 1<=j<=2^s-1} (cos a_j)^n sin(2^t a_j) sin((n-2^t+1) a_j) / (sin a_j sin(2^(t+1) a_j))`
/// `        - 2^(n-t-1) Σ_{k odd, 1<=k<=2^t-1} (-1)^((k-1)/2) (cos b_k)^n cos((n-2^t+1) b_k) / sin b_k`
///
/// with `a_j = jπ/2^(s+1)` and `b_k = kπ/2^(t+1)`. The first sum runs over
/// odd `j` only, which keeps `sin(2^(t+1) a_j)` away from its zeros; the
/// second sum carries the contributions of the degenerate indices
/// `j = 2^(s-t) k`, where the inner cosine sum collapses to a constant
/// instead of telescoping and therefore does not vanish.
pub fn weight_two_powers_closed(
    n: u64,
    t: u32,
    s: u32,
    precision_bits: u32,
) -> Result<ClosedFormEval, ClosedFormError> {
    assert!(
        1 <= t && t < s && (1u64 << s) <= n && (1u64 << t) + (1u64 << s) <= n,
        "need 1 <= t < s <= log2(n) and 2^t + 2^s <= n"
    );
    with_escalation(precision_bits, |prec, bits, escalation| {
        let mut ctx = TrigCtx::new(prec);
        let ms = s + 1;
        let mt = t + 1;
        let shift = n as i128 - (1i128 << t) + 1;

        let mut main = Ival::zero();
        for j in (1..1u64 << s).step_by(2) {
            let power = ctx.cos_pi_frac(j as i128, ms).powi(n, prec);
            let num1 = ctx.sin_pi_frac((j as i128) << t, ms);
            let num2 = ctx.sin_pi_frac(j as i128 * shift, ms);
            let den1 = ctx.sin_pi_frac(j as i128, ms);
            let den2 = ctx.sin_pi_frac((j as i128) << (t + 1), ms);
            let inv = den1.mul(&den2, prec).recip(prec)?;
            main = main.add(&power.mul(&num1, prec).mul(&num2, prec).mul(&inv, prec));
        }

        let mut degenerate = Ival::zero();
        for k in (1..1u64 << t).step_by(2) {
            let power = ctx.cos_pi_frac(k as i128, mt).powi(n, prec);
            let c = ctx.cos_pi_frac(k as i128 * shift, mt);
            let inv = ctx.sin_pi_frac(k as i128, mt).recip(prec)?;
            let term = power.mul(&c, prec).mul(&inv, prec);
            degenerate = if ((k - 1) / 2) & 1 == 0 {
                degenerate.add(&term)
            } else {
                degenerate.sub(&term)
            };
        }

        let wt = Ival::pow2(n as i64 - 2, prec)
            .sub(&main.shl(n - s as u64))
            .sub(&degenerate.shl(n - t as u64 - 1));
        certify(&wt, prec, bits, escalation)
    })
}

/// Checks the monotone-coefficient premise behind the sign analysis of the
/// power-of-two weight formula: `a_j = (cos(jπ/2^(t+1)))^n csc(jπ/2^(t+1))`
/// is strictly decreasing over odd `j` in `1..=2^t-1`, and positive.
/// Returns a certified answer or escalates precision until it can tell.
pub fn monotone_premise_decreasing(
    n: u64,
    t: u32,
    precision_bits: u32,
) -> Result<bool, ClosedFormError> {
    assert!(t >= 1 && 1u64 << t <= n);
    with_escalation(precision_bits, |prec, _bits, _escalation| {
        let mut ctx = TrigCtx::new(prec);
        let m = t + 1;
        let coeffs: Vec<Ival> = (1..1u64 << t)
            .step_by(2)
            .map(|j| {
                let power = ctx.cos_pi_frac(j as i128, m).powi(n, prec);
                ctx.sin_pi_frac(j as i128, m)
                    .recip(prec)
                    .map(|csc| power.mul(&csc, prec))
            })
            .collect::<Option<Vec<_>>>()?;
        if let Some(last) = coeffs.last() {
            if !last.is_strictly_positive() {
                // Positive in truth; an overlap with zero means more bits.
                return None;
            }
        }
        for pair in coeffs.windows(2) {
            if pair[1].strictly_below(&pair[0]) {
                continue;
            }
            if pair[0].strictly_below(&pair[1]) {
                return Some(false);
            }
            return None;
        }
        Some(true)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::residue_class_sum;
    use crate::weight::Esbf;
    use num_bigint::BigUint;

    fn exact_weight(n: u64, d: u64) -> BigInt {
        BigInt::from(Esbf::new(n, d).unwrap().weight_report().weight().clone())
    }

    #[test]
    fn residue_sum_examples() {
        let eval = residue_class_sum_closed(4, 1, 0, default_precision_bits(4)).unwrap();
        assert_eq!(eval.rounded(), BigInt::from(8));
        let eval = residue_class_sum_closed(5, 2, 1, default_precision_bits(5)).unwrap();
        assert_eq!(eval.rounded(), BigInt::from(6));
        let eval = residue_class_sum_closed(7, 2, 3, default_precision_bits(7)).unwrap();
        let expect = BigInt::from(residue_class_sum(7, 4, 3).unwrap());
        assert_eq!(eval.rounded(), expect);
    }

    #[test]
    fn residue_sums_batched_match_exact_values() {
        for n in [4u64, 9, 30, 63] {
            for p in 1..=6u32 {
                let evals = residue_class_sums_closed(n, p, default_precision_bits(n)).unwrap();
                for (i, eval) in evals.iter().enumerate() {
                    let expect = BigInt::from(residue_class_sum(n, 1 << p, i as u64).unwrap());
                    assert_eq!(eval.rounded(), expect, "A_{n}^(2^{p})({i})");
                }
            }
        }
    }

    #[test]
    fn trichotomy_examples() {
        assert_eq!(trichotomy_weight_pow2(8, 1), Trichotomy::Less);
        assert_eq!(trichotomy_weight_pow2(7, 1), Trichotomy::Equal);
        assert_eq!(trichotomy_weight_pow2(12, 1), Trichotomy::Greater);
    }

    #[test]
    fn trichotomy_table_matches_exact_weights_to_256() {
        for n in 2..=256u64 {
            for t in 1..=63u32 {
                if 1u64 << t > n {
                    break;
                }
                let exact = Esbf::new(n, 1 << t).unwrap().weight_report().trichotomy();
                assert_eq!(trichotomy_weight_pow2(n, t), exact, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn balanced_iff_residue_class_hits_boundary() {
        for n in 2..=512u64 {
            for t in 1..=63u32 {
                if 1u64 << t > n {
                    break;
                }
                let balanced = trichotomy_weight_pow2(n, t) == Trichotomy::Equal;
                assert_eq!(balanced, (n + 1) % (1 << (t + 1)) == 0, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn pow2_weight_closed_examples() {
        let eval = weight_pow2_closed(7, 1, default_precision_bits(7)).unwrap();
        assert_eq!(eval.rounded(), BigInt::from(64));
        let eval = weight_pow2_closed(8, 1, default_precision_bits(8)).unwrap();
        assert_eq!(eval.rounded(), BigInt::from(120));
        let eval = weight_pow2_closed(15, 2, default_precision_bits(15)).unwrap();
        assert_eq!(eval.rounded(), BigInt::from(BigUint::from(1u32) << 14));
        let eval = weight_pow2_closed(12, 1, default_precision_bits(12)).unwrap();
        assert_eq!(eval.rounded(), BigInt::from(2080));
    }

    #[test]
    fn pow2_plus1_weight_closed_examples() {
        let eval = weight_pow2_plus1_closed(8, 1, default_precision_bits(8)).unwrap();
        assert_eq!(eval.rounded(), exact_weight(8, 3));
        let eval = weight_pow2_plus1_closed(16, 2, default_precision_bits(16)).unwrap();
        assert_eq!(eval.rounded(), exact_weight(16, 5));
        for (n, t) in [(9u64, 1u32), (13, 1), (11, 1), (30, 2), (37, 3), (64, 2)] {
            let eval = weight_pow2_plus1_closed(n, t, default_precision_bits(n)).unwrap();
            assert_eq!(eval.rounded(), exact_weight(n, (1 << t) + 1), "n={n} t={t}");
        }
    }

    #[test]
    fn two_powers_weight_closed_examples() {
        let eval = weight_two_powers_closed(12, 1, 2, default_precision_bits(12)).unwrap();
        assert_eq!(eval.rounded(), BigInt::from(1716));

        let half = BigInt::from(1) << 23;
        let eval = weight_two_powers_closed(24, 2, 3, default_precision_bits(24)).unwrap();
        assert_eq!(eval.rounded(), exact_weight(24, 12));
        assert!(eval.rounded() > half);
        let eval = weight_two_powers_closed(24, 2, 4, default_precision_bits(24)).unwrap();
        assert_eq!(eval.rounded(), exact_weight(24, 20));
        assert!(eval.rounded() < half);
    }

    #[test]
    fn two_powers_weight_closed_sweep_to_64() {
        for n in 6..=64u64 {
            for t in 1..=6u32 {
                for s in t + 1..=6 {
                    let d = (1u64 << t) + (1u64 << s);
                    if d > n || 1u64 << s > n {
                        continue;
                    }
                    let eval =
                        weight_two_powers_closed(n, t, s, default_precision_bits(n)).unwrap();
                    assert_eq!(eval.rounded(), exact_weight(n, d), "n={n} t={t} s={s}");
                }
            }
        }
    }

    #[test]
    fn certified_error_bounds_are_small() {
        let eval = weight_pow2_closed(100, 3, default_precision_bits(100)).unwrap();
        assert_eq!(eval.rounded(), exact_weight(100, 8));
        assert_eq!(eval.escalations(), 0);
        assert_eq!(eval.precision_bits(), default_precision_bits(100));
        // The bound certifies the integer: strictly below 1/2.
        let log2 = eval.error_bound().log2_abs().unwrap_or(i64::MIN);
        assert!(log2 < -1, "error bound too large: 2^{log2}");
    }

    #[test]
    fn starving_the_precision_reports_failure() {
        // 8 bits even after four doublings is far below the 2^n term scale.
        let err = weight_pow2_closed(400, 1, 1).unwrap_err();
        assert!(matches!(err, ClosedFormError::PrecisionInsufficient { .. }));
    }

    #[test]
    fn monotone_premise_holds_for_small_cases() {
        for t in 1..=6u32 {
            for n in (1u64 << t).max(2)..=96 {
                assert!(
                    monotone_premise_decreasing(n, t, default_precision_bits(n)).unwrap(),
                    "n={n} t={t}"
                );
            }
        }
    }

    /// Full-range variant; slow, so not part of the default run:
    /// `cargo test -p esbf -- --ignored monotone_premise_holds_to_512`.
    #[test]
    #[ignore]
    fn monotone_premise_holds_to_512() {
        for t in 1..=8u32 {
            for n in 1u64 << t..=512 {
                // The smallest coefficient is near 2^(-n t), so size the
                // starting precision to it instead of escalating up from
                // the weight-formula default.
                let bits = n as u32 * t + 64;
                assert!(
                    monotone_premise_decreasing(n, t, bits).unwrap(),
                    "n={n} t={t}"
                );
            }
        }
    }
}
