use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ExactRational, NumericError};

/// `rational + coeff·√radicand` with a square-free radicand `≥ 2` and a
/// nonzero coefficient.
///
/// Values with a zero coefficient are never built as `QuadraticReal`; they
/// collapse to [`ExactReal::Rational`], so structural equality is value
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticReal {
    rational: ExactRational,
    coeff: ExactRational,
    radicand: u64,
}

impl QuadraticReal {
    /// A zero coefficient collapses to a rational, hence `ExactReal`.
    #[allow(clippy::new_ret_no_self)]
    pub fn new(
        rational: ExactRational,
        coeff: ExactRational,
        radicand: u64,
    ) -> Result<ExactReal, NumericError> {
        if radicand < 2 || !is_square_free(radicand) {
            return Err(NumericError::BadRadicand(radicand));
        }
        Ok(ExactReal::from_parts(rational, coeff, radicand))
    }

    pub fn rational(&self) -> &ExactRational {
        &self.rational
    }

    pub fn coeff(&self) -> &ExactRational {
        &self.coeff
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// Exact sign of `p + r√d`.
    ///
    /// When `p` and `r` have opposite signs the larger of `p²` and `r²d` wins;
    /// the two are never equal because `d` is not a perfect square.
    pub fn signum(&self) -> i8 {
        let sp = self.rational.signum();
        let sr = self.coeff.signum();
        if sp == 0 || sp == sr {
            return sr;
        }
        let p2 = &self.rational * &self.rational;
        let r2d = &(&self.coeff * &self.coeff) * &ExactRational::from(self.radicand);
        if p2 > r2d {
            sp
        } else {
            sr
        }
    }
}

/// A scalar that is either rational or lies in a real quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactReal {
    Rational(ExactRational),
    Quadratic(QuadraticReal),
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal::Rational(ExactRational::zero())
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        ExactReal::Rational(ExactRational::from_integer(value))
    }

    /// Builds `p + r√d` and collapses to a rational when `r = 0`. The
    /// radicand must already be square-free.
    pub(crate) fn from_parts(p: ExactRational, r: ExactRational, d: u64) -> Self {
        if r.is_zero() {
            ExactReal::Rational(p)
        } else {
            ExactReal::Quadratic(QuadraticReal {
                rational: p,
                coeff: r,
                radicand: d,
            })
        }
    }

    /// `r·√d` for an arbitrary positive integer `d`, extracting square factors.
    pub fn sqrt_times(r: ExactRational, d: u64) -> Self {
        if d == 0 || r.is_zero() {
            return ExactReal::zero();
        }
        let (outer, core) = split_square(d);
        let coeff = &r * &ExactRational::from(outer);
        if core == 1 {
            ExactReal::Rational(coeff)
        } else {
            ExactReal::from_parts(ExactRational::zero(), coeff, core)
        }
    }

    pub fn radicand(&self) -> Option<u64> {
        match self {
            ExactReal::Rational(_) => None,
            ExactReal::Quadratic(q) => Some(q.radicand),
        }
    }

    pub fn as_rational(&self) -> Option<&ExactRational> {
        match self {
            ExactReal::Rational(r) => Some(r),
            ExactReal::Quadratic(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactReal::Rational(_))
    }

    /// Rational part, irrational coefficient and radicand (`1` for rationals).
    pub fn parts(&self) -> (ExactRational, ExactRational, u64) {
        match self {
            ExactReal::Rational(r) => (r.clone(), ExactRational::zero(), 1),
            ExactReal::Quadratic(q) => (q.rational.clone(), q.coeff.clone(), q.radicand),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactReal::Rational(r) if r.is_zero())
    }

    pub fn signum(&self) -> i8 {
        match self {
            ExactReal::Rational(r) => r.signum(),
            ExactReal::Quadratic(q) => q.signum(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        let (p, r, d) = self.parts();
        ExactReal::from_parts(-p, -r, d)
    }

    fn field(&self, other: &Self) -> Result<u64, NumericError> {
        match (self.radicand(), other.radicand()) {
            (Some(a), Some(b)) if a != b => Err(NumericError::MixedRadicals(a, b)),
            (Some(a), _) | (None, Some(a)) => Ok(a),
            (None, None) => Ok(1),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, NumericError> {
        let d = self.field(other)?;
        let (p1, r1, _) = self.parts();
        let (p2, r2, _) = other.parts();
        Ok(ExactReal::from_parts(p1 + p2, r1 + r2, d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, NumericError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, NumericError> {
        let d = self.field(other)?;
        let (p1, r1, _) = self.parts();
        let (p2, r2, _) = other.parts();
        let dq = ExactRational::from(d);
        let p = &(&p1 * &p2) + &(&(&r1 * &r2) * &dq);
        let r = &(&p1 * &r2) + &(&r1 * &p2);
        Ok(ExactReal::from_parts(p, r, d))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, NumericError> {
        if other.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let d = self.field(other)?;
        // multiply through by the conjugate of the divisor
        let (p2, r2, _) = other.parts();
        let dq = ExactRational::from(d);
        let norm = &(&p2 * &p2) - &(&(&r2 * &r2) * &dq);
        let conj = ExactReal::from_parts(p2 / &norm, -(r2 / &norm), d);
        self.try_mul(&conj)
    }

    pub fn mul_rational(&self, k: &ExactRational) -> Self {
        let (p, r, d) = self.parts();
        ExactReal::from_parts(&p * k, &r * k, d)
    }

    pub fn add_rational(&self, k: &ExactRational) -> Self {
        let (p, r, d) = self.parts();
        ExactReal::from_parts(&p + k, r, d)
    }

    /// Exact comparison; fails only for values from different quadratic fields.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, NumericError> {
        let diff = self.try_sub(other)?;
        Ok(diff.signum().cmp(&0))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactReal::Rational(r) => r.to_f64(),
            ExactReal::Quadratic(q) => q.rational.to_f64() + q.coeff.to_f64() * (q.radicand as f64).sqrt(),
        }
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl From<ExactRational> for ExactReal {
    fn from(value: ExactRational) -> Self {
        ExactReal::Rational(value)
    }
}

impl From<i64> for ExactReal {
    fn from(value: i64) -> Self {
        ExactReal::Rational(value.into())
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(r) => write!(f, "{r}"),
            ExactReal::Quadratic(q) => {
                let negative = q.coeff.is_negative();
                let mag = q.coeff.abs();
                if !q.rational.is_zero() {
                    write!(f, "{}{}", q.rational, if negative { "-" } else { "+" })?;
                } else if negative {
                    write!(f, "-")?;
                }
                if mag != ExactRational::one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "sqrt({})", q.radicand)
            }
        }
    }
}

impl FromStr for ExactReal {
    type Err = NumericError;

    /// Accepts `a`, `a/b`, `sqrt(d)`, `c/e*sqrt(d)` and sums such as
    /// `a/b+c/e*sqrt(d)`, without whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumericError::Parse(s.to_string());
        if s.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in s.char_indices() {
            if i > start && (c == '+' || c == '-') && !s[..i].ends_with('/') {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);

        let mut rational: Option<ExactRational> = None;
        let mut radical: Option<ExactReal> = None;
        for term in terms {
            if let Some(idx) = term.find("sqrt(") {
                if radical.is_some() {
                    return Err(bad());
                }
                let inner = term[idx + 5..].strip_suffix(')').ok_or_else(bad)?;
                let d: u64 = inner.parse().map_err(|_| bad())?;
                let head = &term[..idx];
                let coeff = match head {
                    "" | "+" => ExactRational::one(),
                    "-" => -ExactRational::one(),
                    _ => head.strip_suffix('*').ok_or_else(bad)?.parse()?,
                };
                radical = Some(ExactReal::sqrt_times(coeff, d));
            } else {
                if rational.is_some() {
                    return Err(bad());
                }
                rational = Some(term.parse()?);
            }
        }
        let base = ExactReal::Rational(rational.unwrap_or_default());
        match radical {
            Some(r) => base.try_add(&r),
            None => Ok(base),
        }
    }
}

impl Serialize for ExactReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Writes `d = outer²·core` with `core` square-free.
fn split_square(mut d: u64) -> (u64, u64) {
    let mut outer = 1u64;
    let mut core = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= d {
        let mut e = 0;
        while d.is_multiple_of(p) {
            d /= p;
            e += 1;
        }
        outer *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    (outer, core * d)
}

pub(crate) fn is_square_free(d: u64) -> bool {
    split_square(d).0 == 1
}

/// Parses a comma-separated list of scalars, e.g. `0,1,1+sqrt(2)`.
pub fn parse_real_list(s: &str) -> Result<Vec<ExactReal>, NumericError> {
    s.split(',').map(str::parse).collect()
}

/// Whether `a / b` is rational, decided exactly.
pub fn ratio_is_rational(a: &ExactReal, b: &ExactReal) -> Result<bool, NumericError> {
    Ok(a.try_div(b)?.is_rational())
}
