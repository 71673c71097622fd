//! Exact scalars: rationals and elements of a single real quadratic field.
//!
//! Nothing in here touches floating point except the explicit `to_f64`
//! renderings.

mod rational;
mod real;

pub use rational::{rational_set_gcd, ExactRational};
pub use real::{parse_real_list, ratio_is_rational, ExactReal, QuadraticReal};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("empty input")]
    EmptyInput,
    #[error("degenerate set: every value is zero")]
    DegenerateSet,
    #[error("radicand {0} is not a square-free integer >= 2")]
    BadRadicand(u64),
    #[error("values from different quadratic fields sqrt({0}) and sqrt({1})")]
    MixedRadicals(u64, u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}
