//! Exact-arithmetic tools for elementary symmetric Boolean functions.
//!
//! The elementary symmetric Boolean function `sigma_{n,d}` is the XOR of all
//! degree-`d` monomials in `n` variables. Its output depends only on the
//! Hamming weight of the input, so its weight reduces to a sum of binomial
//! coefficients selected by the 2-adic partial order. This crate computes
//! those weights exactly at any `n`, decides balancedness, classifies every
//! `(n, d)` pair by the known weight criteria (isolating the open cases of
//! the balancedness conjecture), and evaluates the trigonometric closed
//! forms for the weights with certified error bounds.
//!
//! Module map:
//!
//! * [`combinatorics`] — binomial coefficients, the 2-adic order, Lucas
//!   parity, the bitwise join, residue-class binomial sums.
//! * [`weight`] — `sigma_{n,d}` value vectors, the simplified-value/ANF
//!   transforms, exact weights and the trichotomy against `2^(n-1)`.
//! * [`closed_form`] — high-precision interval evaluation of the closed
//!   forms, plus the residue-table trichotomy for `d = 2^t`.
//! * [`classify`] — rule dispatch producing a balancedness verdict with a
//!   machine-readable proof trace, and enumeration of open conjecture cases.
//! * [`oracle`] — independent brute-force ground truth for small `n`.
//! * [`sweep`] — parallel `(n, d)` sweeps with crash-safe checkpointing.
//! * [`experiments`] — preset experiment grids over `d = 2^t + 2^s` and
//!   closed-form cross-verification.

pub mod classify;
pub mod closed_form;
pub mod combinatorics;
pub mod experiments;
pub mod oracle;
pub mod sweep;
pub mod weight;

pub use classify::{classify, open_cases, CanonicalParams, TraceStep, Verdict, VerdictKind};
pub use closed_form::{trichotomy_weight_pow2, ClosedFormError, ClosedFormEval, Dyadic};
pub use combinatorics::{binomial, lucas_parity, or_join, preceq, residue_class_sum, PascalRow};
pub use weight::{power_decomposition, Esbf, SimplifiedVector, Trichotomy, WeightReport};
