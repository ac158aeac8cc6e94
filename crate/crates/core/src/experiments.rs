//! Experiment grids over `d = 2^t + 2^s` and closed-form cross-checks.
//!
//! The presets reproduce the computational findings for the two-power
//! degrees: for fixed `t`, odd `l` and `r` in `{0, 1, 2}`, they generate
//! every `n = 2^(t+1) l + r` and `d = 2^t + 2^s` with `t < s <= log2(n)`,
//! compute the exact trichotomy, and compare it to the stated expectation.

use serde::Serialize;

use crate::closed_form::{
    default_precision_bits, residue_class_sums_closed, weight_pow2_closed,
    weight_pow2_plus1_closed, weight_two_powers_closed,
};
use crate::combinatorics::{residue_class_sum_with_row, PascalRow};
use crate::weight::{Esbf, Trichotomy};

fn floor_log2(n: u64) -> u32 {
    63 - n.leading_zeros()
}

/// What a run is expected to show.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Expectation {
    /// Every generated pair has weight below `2^(n-1)`.
    AllLess,
    /// Every generated pair has weight above `2^(n-1)`.
    AllGreater,
    /// No per-pair claim, but at least one `Greater` witness must exist.
    Mixed,
    /// Expected trichotomy keyed by degree.
    PerCase(Vec<(u64, Trichotomy)>),
}

/// A grid of `(n, d) = (2^(t+1) l + r, 2^t + 2^s)` pairs plus an expectation.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub t: u32,
    pub l_min: u64,
    pub l_max: u64,
    pub r_set: Vec<i8>,
    pub expectation: Expectation,
}

impl ExperimentSpec {
    /// Scales the `l` range down by a factor in `(0, 1]`, keeping it odd and
    /// at least `l_min`.
    pub fn scaled(mut self, factor: f64) -> Self {
        assert!(factor > 0.0 && factor <= 1.0, "scale must be in (0, 1]");
        let mut l_max = ((self.l_max as f64) * factor).floor() as u64;
        if l_max.is_multiple_of(2) {
            l_max = l_max.saturating_sub(1);
        }
        self.l_max = l_max.max(self.l_min);
        self
    }
}

/// The built-in experiment presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// t = 1, odd l in 3..=181: expect all weights below half.
    T1,
    /// t = 2, l = 3 (n = 24 + r): expect d = 12 above and d = 20 below.
    T2L3,
    /// t = 2, odd l in 5..=121: expect all weights below half.
    T2,
    /// t = 3, odd l in 3..=31: expect at least one weight above half.
    T3Plus,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::T1 => "t1",
            Preset::T2L3 => "t2-l3",
            Preset::T2 => "t2",
            Preset::T3Plus => "t3plus",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "t1" => Some(Preset::T1),
            "t2-l3" => Some(Preset::T2L3),
            "t2" => Some(Preset::T2),
            "t3plus" => Some(Preset::T3Plus),
            _ => None,
        }
    }

    pub fn spec(self) -> ExperimentSpec {
        let (t, l_min, l_max, expectation) = match self {
            Preset::T1 => (1, 3, 181, Expectation::AllLess),
            Preset::T2L3 => (
                2,
                3,
                3,
                Expectation::PerCase(vec![(12, Trichotomy::Greater), (20, Trichotomy::Less)]),
            ),
            Preset::T2 => (2, 5, 121, Expectation::AllLess),
            Preset::T3Plus => (3, 3, 31, Expectation::Mixed),
        };
        ExperimentSpec {
            name: self.name().to_string(),
            t,
            l_min,
            l_max,
            r_set: vec![0, 1, 2],
            expectation,
        }
    }
}

/// One generated pair with its exact trichotomy versus the expectation.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    pub t: u32,
    pub s: u32,
    pub l: u64,
    pub r: i8,
    pub n: u64,
    pub d: u64,
    pub trichotomy: Trichotomy,
    pub expected: Option<Trichotomy>,
    pub deviation: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub rows: Vec<ExperimentRow>,
    pub deviations: usize,
    pub greater_witnesses: Vec<(u64, u64)>,
    pub ok: bool,
}

/// Runs a grid, computing the exact trichotomy of every generated pair.
pub fn run_experiment(spec: &ExperimentSpec) -> ExperimentReport {
    let mut rows = Vec::new();
    let mut deviations = 0usize;
    let mut greater_witnesses = Vec::new();
    let mut l = spec.l_min | 1;
    while l <= spec.l_max {
        for &r in &spec.r_set {
            let n_i = (1i128 << (spec.t + 1)) * l as i128 + r as i128;
            if n_i < 1 {
                continue;
            }
            let n = n_i as u64;
            let row = PascalRow::new(n);
            for s in spec.t + 1..=floor_log2(n) {
                let d = (1u64 << spec.t) + (1u64 << s);
                if d > n {
                    continue;
                }
                let e = Esbf::new(n, d).expect("generated pairs are valid");
                let trichotomy = e.weight_report_with_row(&row).trichotomy();
                let expected = match &spec.expectation {
                    Expectation::AllLess => Some(Trichotomy::Less),
                    Expectation::AllGreater => Some(Trichotomy::Greater),
                    Expectation::Mixed => None,
                    Expectation::PerCase(cases) => {
                        cases.iter().find(|(cd, _)| *cd == d).map(|(_, e)| *e)
                    }
                };
                let deviation = expected.is_some_and(|want| want != trichotomy);
                if deviation {
                    deviations += 1;
                }
                if trichotomy == Trichotomy::Greater {
                    greater_witnesses.push((n, d));
                }
                rows.push(ExperimentRow {
                    t: spec.t,
                    s,
                    l,
                    r,
                    n,
                    d,
                    trichotomy,
                    expected,
                    deviation,
                });
            }
        }
        l += 2;
    }
    let ok = deviations == 0
        && (spec.expectation != Expectation::Mixed || !greater_witnesses.is_empty());
    ExperimentReport {
        spec: spec.clone(),
        rows,
        deviations,
        greater_witnesses,
        ok,
    }
}

/// One closed-form value that failed to reproduce its exact integer.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormMismatch {
    pub family: String,
    pub n: u64,
    pub params: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormVerification {
    pub checks: usize,
    pub escalations: u64,
    pub failures: Vec<ClosedFormMismatch>,
}

impl ClosedFormVerification {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Cross-checks every applicable closed form against exact integers for all
/// `4 <= n <= n_max`: residue-class sums for `p <= log2(n) + 1`, the
/// power-of-two weight form, the `2^t + 1` weight form, and the two-power
/// weight form. Precision follows the default policy unless overridden.
pub fn verify_closed_forms(n_max: u64, precision_bits: Option<u32>) -> ClosedFormVerification {
    verify_closed_forms_with_progress(n_max, precision_bits, |_| {})
}

/// Same as [`verify_closed_forms`] with a per-`n` progress callback.
pub fn verify_closed_forms_with_progress(
    n_max: u64,
    precision_bits: Option<u32>,
    mut progress: impl FnMut(u64),
) -> ClosedFormVerification {
    let mut checks = 0usize;
    let mut escalations = 0u64;
    let mut failures = Vec::new();
    for n in 4..=n_max {
        progress(n);
        let bits = precision_bits.unwrap_or_else(|| default_precision_bits(n));
        let row = PascalRow::new(n);
        let top = floor_log2(n);

        for p in 1..=top + 1 {
            match residue_class_sums_closed(n, p, bits) {
                Ok(evals) => {
                    for (i, eval) in evals.iter().enumerate() {
                        checks += 1;
                        escalations += u64::from(eval.escalations());
                        let exact = residue_class_sum_with_row(&row, 1u64 << p, i as u64)
                            .expect("residues are in range");
                        if eval.rounded() != exact.clone().into() {
                            failures.push(ClosedFormMismatch {
                                family: "residue-class-sum".into(),
                                n,
                                params: format!("p={p} i={i}"),
                                detail: format!("rounded {} != exact {}", eval.rounded(), exact),
                            });
                        }
                    }
                }
                Err(err) => {
                    checks += 1;
                    failures.push(ClosedFormMismatch {
                        family: "residue-class-sum".into(),
                        n,
                        params: format!("p={p}"),
                        detail: err.to_string(),
                    });
                }
            }
        }

        for t in 1..=top {
            checks += 1;
            let exact = Esbf::new(n, 1u64 << t)
                .expect("2^t <= n")
                .weight_report_with_row(&row);
            match weight_pow2_closed(n, t, bits) {
                Ok(eval) => {
                    escalations += u64::from(eval.escalations());
                    if eval.rounded() != exact.weight().clone().into() {
                        failures.push(ClosedFormMismatch {
                            family: "weight-pow2".into(),
                            n,
                            params: format!("t={t}"),
                            detail: format!(
                                "rounded {} != exact {}",
                                eval.rounded(),
                                exact.weight()
                            ),
                        });
                    }
                }
                Err(err) => failures.push(ClosedFormMismatch {
                    family: "weight-pow2".into(),
                    n,
                    params: format!("t={t}"),
                    detail: err.to_string(),
                }),
            }
        }

        for t in 1..=top {
            let d = (1u64 << t) + 1;
            if d > n {
                continue;
            }
            checks += 1;
            let exact = Esbf::new(n, d)
                .expect("d <= n checked")
                .weight_report_with_row(&row);
            match weight_pow2_plus1_closed(n, t, bits) {
                Ok(eval) => {
                    escalations += u64::from(eval.escalations());
                    if eval.rounded() != exact.weight().clone().into() {
                        failures.push(ClosedFormMismatch {
                            family: "weight-pow2-plus1".into(),
                            n,
                            params: format!("t={t}"),
                            detail: format!(
                                "rounded {} != exact {}",
                                eval.rounded(),
                                exact.weight()
                            ),
                        });
                    }
                }
                Err(err) => failures.push(ClosedFormMismatch {
                    family: "weight-pow2-plus1".into(),
                    n,
                    params: format!("t={t}"),
                    detail: err.to_string(),
                }),
            }
        }

        for t in 1..top {
            for s in t + 1..=top {
                let d = (1u64 << t) + (1u64 << s);
                if d > n {
                    continue;
                }
                checks += 1;
                let exact = Esbf::new(n, d)
                    .expect("d <= n checked")
                    .weight_report_with_row(&row);
                match weight_two_powers_closed(n, t, s, bits) {
                    Ok(eval) => {
                        escalations += u64::from(eval.escalations());
                        if eval.rounded() != exact.weight().clone().into() {
                            failures.push(ClosedFormMismatch {
                                family: "weight-two-powers".into(),
                                n,
                                params: format!("t={t} s={s}"),
                                detail: format!(
                                    "rounded {} != exact {}",
                                    eval.rounded(),
                                    exact.weight()
                                ),
                            });
                        }
                    }
                    Err(err) => failures.push(ClosedFormMismatch {
                        family: "weight-two-powers".into(),
                        n,
                        params: format!("t={t} s={s}"),
                        detail: err.to_string(),
                    }),
                }
            }
        }
    }
    ClosedFormVerification {
        checks,
        escalations,
        failures,
    }
}
