//! Digit sets and their arithmetic structure: difference sets, greatest
//! common divisors, integer normalization, residues and the gap thresholds.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{parse_real_list, rational_set_gcd, ExactRational, ExactReal, NumericError};

/// Subsets are enumerated exhaustively for the containment threshold.
pub const MAX_SUBSET_DIGITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaError {
    #[error("a digit set needs at least two distinct digits, got {0}")]
    TooFewDigits(usize),
    #[error("duplicate digit {0}")]
    DuplicateDigit(String),
    #[error("ratio {0} is not in (0, 1)")]
    RatioOutOfRange(String),
    #[error("irrational structure: the difference set has no common divisor")]
    NoCommonDivisor,
    #[error("subset enumeration too large: {0} digits (limit {MAX_SUBSET_DIGITS})")]
    SubsetEnumerationTooLarge(usize),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// A finite digit set `Σ` (at least two digits, strictly increasing) with an
/// optional contraction ratio. Without an explicit ratio the critical value
/// `q = 1/|Σ|` is implied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaSet {
    digits: Vec<ExactReal>,
    ratio: Option<ExactRational>,
}

/// `digits = shift + scale · sigma_star`, with `sigma_star` starting at zero
/// and having coprime entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    #[serde(with = "crate::serde_bigint::vec")]
    pub sigma_star: Vec<BigInt>,
    pub shift: ExactReal,
    pub scale: ExactReal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueProfile {
    pub modulus: u64,
    /// Residues in digit order, with repetition.
    pub residues: Vec<u64>,
    pub complete: bool,
}

/// Either the greatest common divisor of the difference set or two
/// differences whose ratio is irrational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisorStructure {
    Divisor(ExactReal),
    Irrational { first: ExactReal, second: ExactReal },
}

impl SigmaSet {
    /// Sorts the digits; rejects duplicates, fewer than two digits and mixed
    /// quadratic fields.
    pub fn new(mut digits: Vec<ExactReal>) -> Result<Self, SigmaError> {
        if digits.len() < 2 {
            return Err(SigmaError::TooFewDigits(digits.len()));
        }
        let mut radicand = None;
        for d in &digits {
            if let Some(r) = d.radicand() {
                match radicand {
                    Some(prev) if prev != r => {
                        return Err(NumericError::MixedRadicals(prev, r).into())
                    }
                    _ => radicand = Some(r),
                }
            }
        }
        digits.sort_by(|a, b| a.try_cmp(b).expect("digits share one field"));
        if let Some(w) = digits.windows(2).find(|w| w[0] == w[1]) {
            return Err(SigmaError::DuplicateDigit(w[0].to_string()));
        }
        Ok(SigmaSet {
            digits,
            ratio: None,
        })
    }

    /// Like [`SigmaSet::new`] but silently merges repeated digits.
    pub fn new_dedup(mut digits: Vec<ExactReal>) -> Result<Self, SigmaError> {
        let mut seen = Vec::with_capacity(digits.len());
        digits.retain(|d| {
            if seen.contains(d) {
                false
            } else {
                seen.push(d.clone());
                true
            }
        });
        Self::new(digits)
    }

    pub fn from_integers(digits: &[i64]) -> Result<Self, SigmaError> {
        Self::new(digits.iter().map(|&d| ExactReal::from(d)).collect())
    }

    /// Parses the comma-separated digit syntax, e.g. `0,1,8,9`.
    pub fn parse(s: &str) -> Result<Self, SigmaError> {
        Self::new(parse_real_list(s)?)
    }

    pub fn with_ratio(mut self, q: ExactRational) -> Result<Self, SigmaError> {
        if !q.is_positive() || q >= ExactRational::one() {
            return Err(SigmaError::RatioOutOfRange(q.to_string()));
        }
        self.ratio = Some(q);
        Ok(self)
    }

    pub fn digits(&self) -> &[ExactReal] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn radicand(&self) -> Option<u64> {
        self.digits.iter().find_map(ExactReal::radicand)
    }

    pub fn explicit_ratio(&self) -> Option<&ExactRational> {
        self.ratio.as_ref()
    }

    /// The contraction ratio: the explicit one if set, else `1/|Σ|`.
    pub fn ratio(&self) -> ExactRational {
        self.ratio
            .clone()
            .unwrap_or_else(|| ExactRational::new(1, self.len() as i64).expect("len >= 2"))
    }

    /// Whether `q·|Σ| = 1`.
    pub fn is_critical(&self) -> bool {
        &self.ratio() * &ExactRational::from(self.len() as u64) == ExactRational::one()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand().is_none()
    }

    pub fn rational_digits(&self) -> Option<Vec<ExactRational>> {
        self.digits.iter().map(|d| d.as_rational().cloned()).collect()
    }

    pub fn min(&self) -> &ExactReal {
        &self.digits[0]
    }

    pub fn max(&self) -> &ExactReal {
        &self.digits[self.len() - 1]
    }

    pub fn diameter(&self) -> ExactReal {
        self.max().try_sub(self.min()).expect("same field")
    }

    /// `{a·σ + b}`; `a` must be nonzero.
    pub fn affine(&self, a: &ExactRational, b: &ExactRational) -> Result<Self, SigmaError> {
        if a.is_zero() {
            return Err(NumericError::DivisionByZero.into());
        }
        let digits = self
            .digits
            .iter()
            .map(|d| d.mul_rational(a).add_rational(b))
            .collect();
        let out = Self::new(digits)?;
        Ok(match &self.ratio {
            Some(q) => out.with_ratio(q.clone())?,
            None => out,
        })
    }

    /// `D(Σ)`: every pairwise difference, including zero, sorted.
    pub fn difference_set(&self) -> Vec<ExactReal> {
        let mut out: Vec<ExactReal> = Vec::with_capacity(self.len() * self.len());
        for a in &self.digits {
            for b in &self.digits {
                out.push(a.try_sub(b).expect("same field"));
            }
        }
        out.sort_by(|a, b| a.try_cmp(b).expect("same field"));
        out.dedup();
        out
    }

    pub fn divisor_structure(&self) -> DivisorStructure {
        let base = &self.digits[0];
        let offsets: Vec<ExactReal> = self.digits[1..]
            .iter()
            .map(|d| d.try_sub(base).expect("same field"))
            .collect();
        let unit = &offsets[0];
        let mut ratios = Vec::with_capacity(offsets.len());
        for off in &offsets {
            match off.try_div(unit).expect("nonzero offset") {
                ExactReal::Rational(r) => ratios.push(r),
                ExactReal::Quadratic(_) => {
                    return DivisorStructure::Irrational {
                        first: unit.clone(),
                        second: off.clone(),
                    }
                }
            }
        }
        let g = rational_set_gcd(&ratios).expect("offsets are nonzero");
        DivisorStructure::Divisor(unit.mul_rational(&g))
    }

    /// Greatest `δ > 0` with `D(Σ) ⊂ δℤ`, or `None` when some ratio of
    /// differences is irrational.
    pub fn common_divisor(&self) -> Option<ExactReal> {
        match self.divisor_structure() {
            DivisorStructure::Divisor(d) => Some(d),
            DivisorStructure::Irrational { .. } => None,
        }
    }

    pub fn normalize(&self) -> Result<Normalization, SigmaError> {
        let scale = self.common_divisor().ok_or(SigmaError::NoCommonDivisor)?;
        let shift = self.min().clone();
        let sigma_star = self
            .digits
            .iter()
            .map(|d| {
                let v = d.try_sub(&shift)?.try_div(&scale)?;
                let v = v.as_rational().expect("divisor divides every difference");
                debug_assert!(v.is_integer());
                Ok(v.numer().clone())
            })
            .collect::<Result<Vec<_>, NumericError>>()?;
        Ok(Normalization {
            sigma_star,
            shift,
            scale,
        })
    }

    /// `Δ(Σ)`: the largest gap between consecutive digits.
    pub fn max_gap(&self) -> ExactReal {
        self.digits
            .windows(2)
            .map(|w| w[1].try_sub(&w[0]).expect("same field"))
            .max_by(|a, b| a.try_cmp(b).expect("same field"))
            .expect("at least two digits")
    }

    /// `I(Σ) = Δ(Σ) / (Δ(Σ) + diam Σ)`.
    pub fn interval_threshold(&self) -> ExactReal {
        let gap = self.max_gap();
        let denom = gap.try_add(&self.diameter()).expect("same field");
        gap.try_div(&denom).expect("positive diameter")
    }

    /// `i(Σ)`: the minimum of [`SigmaSet::interval_threshold`] over all
    /// subsets with at least two elements, by exhaustive enumeration.
    pub fn containment_threshold(&self) -> Result<ExactReal, SigmaError> {
        let m = self.len();
        if m > MAX_SUBSET_DIGITS {
            return Err(SigmaError::SubsetEnumerationTooLarge(m));
        }
        if let Some(ints) = self.scaled_integers() {
            return Ok(ExactReal::Rational(min_threshold_integers(&ints)));
        }
        let mut best: Option<ExactReal> = None;
        for mask in 0u32..(1u32 << m) {
            if mask.count_ones() < 2 {
                continue;
            }
            let subset: Vec<ExactReal> = (0..m)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.digits[i].clone())
                .collect();
            let t = SigmaSet::new(subset)?.interval_threshold();
            if best.as_ref().is_none_or(|b| t.try_cmp(b) == Ok(Ordering::Less)) {
                best = Some(t);
            }
        }
        Ok(best.expect("at least one subset"))
    }

    /// Rational digits rescaled to integers, when they fit in `i128`.
    fn scaled_integers(&self) -> Option<Vec<i128>> {
        let digits = self.rational_digits()?;
        let den = digits
            .iter()
            .fold(BigInt::from(1), |acc, d| acc.lcm(d.denom()));
        digits
            .iter()
            .map(|d| (d.numer() * (&den / d.denom())).to_i128())
            .collect()
    }
}

/// Minimum of `Δ(B)/(Δ(B)+diam B)` over subsets of sorted integers. The
/// threshold is increasing in `Δ/diam`, so the comparison is done on that
/// ratio by cross-multiplication.
fn min_threshold_integers(ints: &[i128]) -> ExactRational {
    let m = ints.len();
    let mut best: Option<(i128, i128)> = None;
    let mut chosen = Vec::with_capacity(m);
    for mask in 0u32..(1u32 << m) {
        if mask.count_ones() < 2 {
            continue;
        }
        chosen.clear();
        chosen.extend((0..m).filter(|i| mask & (1 << i) != 0).map(|i| ints[i]));
        let gap = chosen.windows(2).map(|w| w[1] - w[0]).max().unwrap();
        let diam = chosen[chosen.len() - 1] - chosen[0];
        let better = match best {
            None => true,
            Some((bg, bd)) => gap * bd < bg * diam,
        };
        if better {
            best = Some((gap, diam));
        }
    }
    let (gap, diam) = best.expect("at least one subset");
    ExactRational::new(gap, gap + diam).expect("positive")
}

impl Normalization {
    pub fn residue_profile(&self, modulus: u64) -> ResidueProfile {
        let m = BigInt::from(modulus);
        let residues: Vec<u64> = self
            .sigma_star
            .iter()
            .map(|s| s.mod_floor(&m).to_u64().expect("residue below modulus"))
            .collect();
        let mut seen = vec![false; modulus as usize];
        let mut complete = residues.len() == modulus as usize;
        for &r in &residues {
            if std::mem::replace(&mut seen[r as usize], true) {
                complete = false;
            }
        }
        ResidueProfile {
            modulus,
            residues,
            complete,
        }
    }

    /// The normalized digits as a digit set of their own.
    pub fn as_sigma(&self) -> SigmaSet {
        SigmaSet::new(
            self.sigma_star
                .iter()
                .map(|s| ExactReal::from_integer(s.clone()))
                .collect(),
        )
        .expect("normalized digits are distinct")
    }

    /// The normalized digits as machine integers, if they fit.
    pub fn small_digits(&self) -> Option<Vec<i128>> {
        self.sigma_star.iter().map(ToPrimitive::to_i128).collect()
    }

    pub fn max_digit(&self) -> &BigInt {
        self.sigma_star.last().expect("nonempty")
    }

    pub fn is_identity(&self) -> bool {
        self.shift.is_zero() && self.scale == ExactReal::from(1)
    }
}

impl fmt::Display for SigmaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}
