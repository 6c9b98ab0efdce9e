//! Exact analysis of achievement sets (sets of subsums) of convergent
//! positive series, and of the Cantorvals they form.
//!
//! Everything geometric in this crate is computed over arbitrary-precision
//! rationals: interval covers, gaps, measures, attractor iterates and
//! boundary decompositions are exact, never floating point. Decimals appear
//! only in dimension estimates (Moran roots, box-count slopes), where they
//! are produced by a fixed-point solver working at 60 significant digits.
//!
//! The crate is `no_std` (with `alloc`); IO, serialization and the command
//! line live in the companion `cantorval-cli` crate.
//!
//! Module map:
//!
//! * [`rational`] / [`interval`] — the exact scalar and closed-interval-set
//!   algebra every other module builds on.
//! * [`series`] — multigeometric series with exact term/tail closed forms,
//!   the `xm(m)` family, and Kakeya term/tail profiles.
//! * [`subsum`] — depth-n interval covers of the achievement set, gap
//!   reports, and trichotomy classification certificates.
//! * [`ifs`] — the iterated function system whose attractor is the
//!   Cantorval `X(m)`, its operator `W`, the disjoint decomposition of
//!   `Wⁿ(I)`, and certified inner approximations.
//! * [`boundary`] — the self-similar decomposition of the Cantorval
//!   boundary, distance formulas, the reflection involution, and ε-covers
//!   for box counting.
//! * [`dimension`] — Moran-equation roots (closed form and bisection),
//!   box-count slope fits, and scaling-exponent criticality checks.
//! * [`hiprec`] — the fixed-point big-decimal arithmetic (ln/exp/sqrt)
//!   backing the dimension solver.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod boundary;
pub mod dimension;
mod error;
pub mod hiprec;
pub mod ifs;
pub mod interval;
pub mod rational;
pub mod series;
pub mod subsum;

pub use error::Error;
pub use interval::{Interval, IntervalSet};
pub use rational::Rational;

/// Default enumeration budget: the maximum number of distinct items
/// (prefix sums, cover intervals, boxes) an operation may materialize
/// before aborting with [`Error::BudgetExceeded`].
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
