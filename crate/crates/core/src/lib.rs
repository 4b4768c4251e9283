//! Exact arithmetic for Dedekind sums along the convergents of the
//! base-`b` Fredholm-type series `x(b) = sum_{j>=0} 1/b^(2^j)`, `b >= 3`.
//!
//! The crate computes classical Dedekind sums by three independent exact
//! methods, generates the continued-fraction expansion of `x(b)` by the
//! recursive doubling rule, and verifies — with certified rational interval
//! arithmetic, never floating point — the structural identities of the
//! expansion: quotient symmetries, integer-part recurrences, denominator
//! ratio limits, and the localization of cluster values of the scaled sums
//! inside explicit open intervals.

pub mod asymptotics;
pub mod cfrac;
pub mod cli;
pub mod dedekind;
pub mod error;
pub mod format;
pub mod numerics;
pub mod shallit;

pub use error::{Error, Result};
pub use numerics::{Int, Interval, Rational};
