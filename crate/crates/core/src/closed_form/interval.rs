//! Fixed-point interval arithmetic with outward rounding, plus rigorous
//! sine/cosine of dyadic multiples of pi.
//!
//! A value is an interval `[lo, hi]` of big integers scaled by `2^prec`.
//! Every operation rounds the lower endpoint toward minus infinity and the
//! upper endpoint toward plus infinity, so a computed interval always
//! encloses the exact real result. The terms of the weight formulas scale
//! like `2^n`, which is why the precision is a parameter rather than a
//! machine float format.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn shr_floor(x: BigInt, k: u32) -> BigInt {
    // num-bigint's shift is arithmetic: it rounds toward minus infinity.
    x >> k
}

fn shr_ceil(x: BigInt, k: u32) -> BigInt {
    -((-x) >> k)
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}

/// A closed interval of reals, both endpoints scaled by `2^prec`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Ival {
    pub lo: BigInt,
    pub hi: BigInt,
}

impl Ival {
    pub fn point(mantissa: BigInt) -> Self {
        Ival {
            lo: mantissa.clone(),
            hi: mantissa,
        }
    }

    pub fn zero() -> Self {
        Ival::point(BigInt::zero())
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Ival::point(BigInt::from(v) << prec)
    }

    /// Exact `2^e`; `e` may be negative as long as `prec + e >= 0`.
    pub fn pow2(e: i64, prec: u32) -> Self {
        let shift = prec as i64 + e;
        assert!(shift >= 0, "2^{e} is not representable at {prec} bits");
        Ival::point(BigInt::one() << shift as u64)
    }

    pub fn add(&self, o: &Ival) -> Ival {
        Ival {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Ival) -> Ival {
        Ival {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Ival {
        Ival {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    /// Exact scaling by `2^k`.
    pub fn shl(&self, k: u64) -> Ival {
        Ival {
            lo: &self.lo << k,
            hi: &self.hi << k,
        }
    }

    /// Outward-rounded scaling by `2^-k`.
    pub fn shr_outward(&self, k: u32) -> Ival {
        Ival {
            lo: shr_floor(self.lo.clone(), k),
            hi: shr_ceil(self.hi.clone(), k),
        }
    }

    /// Exact scaling by a small non-negative integer.
    pub fn scale_int(&self, k: u64) -> Ival {
        Ival {
            lo: &self.lo * k,
            hi: &self.hi * k,
        }
    }

    pub fn mul(&self, o: &Ival, prec: u32) -> Ival {
        let a = &self.lo * &o.lo;
        let b = &self.lo * &o.hi;
        let c = &self.hi * &o.lo;
        let d = &self.hi * &o.hi;
        let lo = (&a).min(&b).min(&c).min(&d).clone();
        let hi = a.max(b).max(c).max(d);
        Ival {
            lo: shr_floor(lo, prec),
            hi: shr_ceil(hi, prec),
        }
    }

    /// Outward-rounded division by a small positive integer.
    pub fn div_int(&self, k: u64, _prec: u32) -> Ival {
        let k = BigInt::from(k);
        Ival {
            lo: div_floor(&self.lo, &k),
            hi: div_ceil(&self.hi, &k),
        }
    }

    /// `self^e` by binary powering with interval multiplication.
    pub fn powi(&self, e: u64, prec: u32) -> Ival {
        let mut result = Ival::point(BigInt::one() << prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        result
    }

    /// `1 / self`, or `None` when the interval is not sign-definite.
    pub fn recip(&self, prec: u32) -> Option<Ival> {
        if !(self.lo.is_positive() || self.hi.is_negative()) {
            return None;
        }
        let scale = BigInt::one() << (2 * prec as u64);
        Some(Ival {
            lo: div_floor(&scale, &self.hi),
            hi: div_ceil(&scale, &self.lo),
        })
    }

    /// Widens both endpoints by `ulps` units in the last place.
    pub fn widen(&self, ulps: BigInt) -> Ival {
        Ival {
            lo: &self.lo - &ulps,
            hi: &self.hi + ulps,
        }
    }

    pub fn width(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// Certified strict comparison: every value of `self` is below every
    /// value of `o`.
    pub fn strictly_below(&self, o: &Ival) -> bool {
        self.hi < o.lo
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }
}

/// Evaluation context: a working precision, an enclosure of pi, and a memo
/// table for the trigonometric values of one evaluation.
pub(crate) struct TrigCtx {
    prec: u32,
    pi: Ival,
    cos_cache: HashMap<(u64, u32), Ival>,
}

/// `arctan(1/x)` from the alternating series, with the tail bounded by its
/// first omitted term.
fn atan_recip(x: u64, prec: u32) -> Ival {
    let unit = BigInt::one() << prec;
    let cutoff = &unit << 2u32;
    let x = BigInt::from(x);
    let xx = &x * &x;
    let mut denom_pow = x;
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let den = &denom_pow * BigInt::from(2 * k + 1);
        if den > cutoff {
            break;
        }
        let (q, r) = unit.div_rem(&den);
        let up = if r.is_zero() { q.clone() } else { &q + 1 };
        if k.is_multiple_of(2) {
            lo += &q;
            hi += up;
        } else {
            lo -= up;
            hi -= &q;
        }
        denom_pow *= &xx;
        k += 1;
    }
    // Remaining tail is below one unit in the last place.
    Ival {
        lo: lo - 1,
        hi: hi + 1,
    }
}

impl TrigCtx {
    pub fn new(prec: u32) -> Self {
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239).
        let pi = atan_recip(5, prec)
            .scale_int(16)
            .sub(&atan_recip(239, prec).scale_int(4));
        TrigCtx {
            prec,
            pi,
            cos_cache: HashMap::new(),
        }
    }

    /// Rigorous enclosure of `cos(k * pi / 2^m)`.
    pub fn cos_pi_frac(&mut self, k: i128, m: u32) -> Ival {
        assert!(m <= 32, "denominator exponent out of range");
        if m == 0 {
            return Ival::from_int(if k & 1 == 0 { 1 } else { -1 }, self.prec);
        }
        let period = 1i128 << (m + 1);
        let mut k = k.rem_euclid(period) as u64;
        let half = 1u64 << m;
        let quarter = 1u64 << (m - 1);
        if k > half {
            k = (1u64 << (m + 1)) - k;
        }
        let (k1, negate) = if k > quarter {
            (half - k, true)
        } else {
            (k, false)
        };
        let mag = if let Some(v) = self.cos_cache.get(&(k1, m)) {
            v.clone()
        } else {
            let v = self.cos_first_quadrant(k1, m);
            self.cos_cache.insert((k1, m), v.clone());
            v
        };
        if negate {
            mag.neg()
        } else {
            mag
        }
    }

    /// Rigorous enclosure of `sin(k * pi / 2^m)` via the quarter-turn shift.
    pub fn sin_pi_frac(&mut self, k: i128, m: u32) -> Ival {
        if m == 0 {
            return Ival::zero();
        }
        self.cos_pi_frac(k - (1i128 << (m - 1)), m)
    }

    /// `cos` of `k1 * pi / 2^m` with `0 <= k1 <= 2^(m-1)` (first quadrant).
    /// Arguments are pushed below pi/4 so both Taylor series alternate with
    /// decreasing terms from the first step.
    fn cos_first_quadrant(&self, k1: u64, m: u32) -> Ival {
        let quarter = 1u64 << (m - 1);
        if k1 == 0 {
            return Ival::from_int(1, self.prec);
        }
        if k1 == quarter {
            return Ival::zero();
        }
        if k1 <= quarter >> 1 {
            let x = self.pi_times(k1, m);
            self.cos_series(&x)
        } else {
            let x = self.pi_times(quarter - k1, m);
            self.sin_series(&x)
        }
    }

    /// Enclosure of `k * pi / 2^m` for small non-negative `k`.
    fn pi_times(&self, k: u64, m: u32) -> Ival {
        self.pi.scale_int(k).shr_outward(m)
    }

    fn cos_series(&self, x: &Ival) -> Ival {
        debug_assert!(!x.lo.is_negative());
        let prec = self.prec;
        let x2 = x.mul(x, prec);
        let mut term = Ival::from_int(1, prec);
        let mut sum = term.clone();
        let mut q: u64 = 1;
        loop {
            term = term.mul(&x2, prec).div_int((2 * q - 1) * (2 * q), prec);
            if term.hi <= BigInt::from(2) {
                // Alternating with decreasing terms: the tail is bounded by
                // this term.
                return sum.widen(&term.hi + 1);
            }
            if q & 1 == 1 {
                sum = sum.sub(&term);
            } else {
                sum = sum.add(&term);
            }
            q += 1;
            assert!(q < 1 << 20, "cosine series failed to converge");
        }
    }

    fn sin_series(&self, x: &Ival) -> Ival {
        debug_assert!(!x.lo.is_negative());
        let prec = self.prec;
        let x2 = x.mul(x, prec);
        let mut term = x.clone();
        let mut sum = term.clone();
        let mut q: u64 = 1;
        loop {
            term = term.mul(&x2, prec).div_int((2 * q) * (2 * q + 1), prec);
            if term.hi <= BigInt::from(2) {
                return sum.widen(&term.hi + 1);
            }
            if q & 1 == 1 {
                sum = sum.sub(&term);
            } else {
                sum = sum.add(&term);
            }
            q += 1;
            assert!(q < 1 << 20, "sine series failed to converge");
        }
    }
}
