//! Exact combinatorics of tournament score sequences.
//!
//! A tournament on the complete graph `K_n` orients every edge; its score
//! sequence lists the in-degrees in non-decreasing order. This crate counts
//! those sequences exactly, decomposes them into irreducible blocks, computes
//! the Erdős–Ginzburg–Ziv numbers they are built from, and certifies the
//! constants governing their growth with directed-rounding interval
//! arithmetic.
//!
//! Everything upstream of the final decimal output is exact: big integers for
//! counts, big rationals for series coefficients and probabilities, and
//! outward-rounded decimal intervals (`DecimalEnclosure`) wherever an
//! irrational constant enters.
//!
//! Module map:
//! - [`exact`] — big-integer/rational helpers and enclosure arithmetic,
//! - [`egz`] — Erdős–Ginzburg–Ziv numbers `N_n` with oracle and bounds,
//! - [`scores`] — the score-sequence counts `S_n`, series transforms,
//! - [`decomp`] — irreducible decomposition counts `S_{n,m}`,
//! - [`asympt`] — the constant λ, derived constants, limit diagnostics,
//! - [`oracle`] — ground-truth enumeration and exact uniform sampling.

pub mod asympt;
pub mod decomp;
pub mod egz;
mod error;
pub mod exact;
pub mod oracle;
pub mod scores;

pub use error::{Error, Result};
