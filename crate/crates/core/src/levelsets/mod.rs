//! Finite levels `F_n(Σ,q) = {Σ_{i≤n} σ_i q^i}` of a self-similar set and
//! everything computed from them.
//!
//! With `q = a/b` and normalized digits `σ* = (σ − x)/δ`, the level-`n`
//! points are stored as integers `W` through
//!
//! ```text
//! W_{n+1} = b·W_n + a^{n+1}·σ*,      point = x·(q + … + q^n) + δ·W / b^n
//! ```
//!
//! which for the critical ratio `q = 1/m` is the base-`m` recurrence
//! `W_{n+1} = m·W_n + σ*`.

mod collision;
mod distribution;
mod fourier;
mod intervals;

pub(crate) use collision::first_collision_limited;
pub use collision::{first_collision, Collision, MAX_QUADRATIC_COLLISION_LEVEL};
pub use distribution::pushforward_histogram;
pub use fourier::{fourier_partial, FourierProduct};
pub(crate) use intervals::{level_intervals_of, measure_over_delta};
pub use intervals::{
    envelope, intervals_csv, level_intervals, level_measure, EnvelopeBounds, IntervalUnion,
};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{ExactRational, ExactReal};
use crate::sigma::{Normalization, SigmaError, SigmaSet};

/// Enumeration refuses to build more candidate points than this.
pub const DEFAULT_MAX_VALUES: usize = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LevelError {
    #[error("level {level} would hold {candidates} points, above the limit of {limit}")]
    TooLarge {
        level: u32,
        candidates: usize,
        limit: usize,
    },
    #[error("integer overflow while enumerating level {0}")]
    Overflow(u32),
    #[error("dimension bound is undefined at level 0")]
    LevelZero,
    #[error("operation needs rational digits")]
    IrrationalDigits,
    #[error("collision search over quadratic digits is limited to level {max}, requested {requested}")]
    QuadraticDepth { requested: u32, max: u32 },
    #[error("delta must be positive")]
    NonPositiveDelta,
    #[error(transparent)]
    Sigma(#[from] SigmaError),
}

/// The level-`n` points of `E(Σ,q)` as scaled integers with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    level: u32,
    ratio_num: i128,
    ratio_den: i128,
    digits: Vec<i128>,
    values: Vec<i128>,
    multiplicities: Vec<u128>,
    /// `a^{level+1}`, the weight of the next appended digit.
    next_weight: i128,
    normalization: Normalization,
    ratio: ExactRational,
    max_values: usize,
}

impl LevelSet {
    /// `F_0 = {0}` for a digit set with a common divisor.
    pub fn level_zero(sigma: &SigmaSet) -> Result<Self, LevelError> {
        let normalization = sigma.normalize()?;
        let digits = normalization
            .small_digits()
            .ok_or(LevelError::Overflow(0))?;
        let ratio = sigma.ratio();
        let ratio_num = ratio.numer().to_i128().ok_or(LevelError::Overflow(0))?;
        let ratio_den = ratio.denom().to_i128().ok_or(LevelError::Overflow(0))?;
        Ok(LevelSet {
            level: 0,
            ratio_num,
            ratio_den,
            digits,
            values: vec![0],
            multiplicities: vec![1],
            next_weight: ratio_num,
            normalization,
            ratio,
            max_values: DEFAULT_MAX_VALUES,
        })
    }

    pub fn with_max_values(mut self, limit: usize) -> Self {
        self.max_values = limit;
        self
    }

    /// Enumerates level `n` from scratch.
    pub fn at_level(sigma: &SigmaSet, n: u32) -> Result<Self, LevelError> {
        let mut set = Self::level_zero(sigma)?;
        for _ in 0..n {
            set = set.advance()?;
        }
        Ok(set)
    }

    /// `V_{n+1} = b·V_n + a^{n+1}·Σ*`, merged and deduplicated with summed
    /// multiplicities.
    pub fn advance(&self) -> Result<Self, LevelError> {
        let next = self.level + 1;
        let candidates = self.values.len().saturating_mul(self.digits.len());
        if candidates > self.max_values {
            return Err(LevelError::TooLarge {
                level: next,
                candidates,
                limit: self.max_values,
            });
        }
        let overflow = || LevelError::Overflow(next);
        let mut pairs: Vec<(i128, u128)> = Vec::with_capacity(candidates);
        for &d in &self.digits {
            let shift = d.checked_mul(self.next_weight).ok_or_else(overflow)?;
            for (&v, &c) in self.values.iter().zip(&self.multiplicities) {
                let w = v
                    .checked_mul(self.ratio_den)
                    .and_then(|x| x.checked_add(shift))
                    .ok_or_else(overflow)?;
                pairs.push((w, c));
            }
        }
        pairs.sort_unstable_by_key(|p| p.0);
        let mut values = Vec::with_capacity(pairs.len());
        let mut multiplicities: Vec<u128> = Vec::with_capacity(pairs.len());
        for (w, c) in pairs {
            if values.last() == Some(&w) {
                let last = multiplicities.last_mut().expect("parallel vectors");
                *last = last.checked_add(c).ok_or_else(overflow)?;
            } else {
                values.push(w);
                multiplicities.push(c);
            }
        }
        Ok(LevelSet {
            level: next,
            values,
            multiplicities,
            next_weight: self.next_weight.checked_mul(self.ratio_num).ok_or_else(overflow)?,
            normalization: self.normalization.clone(),
            ratio: self.ratio.clone(),
            digits: self.digits.clone(),
            ..*self
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[i128] {
        &self.values
    }

    pub fn multiplicities(&self) -> &[u128] {
        &self.multiplicities
    }

    pub fn digits(&self) -> &[i128] {
        &self.digits
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    pub fn ratio(&self) -> &ExactRational {
        &self.ratio
    }

    pub fn ratio_parts(&self) -> (i128, i128) {
        (self.ratio_num, self.ratio_den)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `m^n`, the number of digit strings.
    pub fn total(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.digits.len()), self.level as usize)
    }

    /// Whether all `m^n` digit strings give distinct points.
    pub fn is_free(&self) -> bool {
        BigInt::from(self.values.len()) == self.total()
    }

    /// Factor taking a stored integer to its offset from [`LevelSet::offset`]:
    /// `δ / b^n`.
    pub fn scale(&self) -> ExactReal {
        let den = num_traits::pow(BigInt::from(self.ratio_den), self.level as usize);
        self.normalization
            .scale
            .mul_rational(&ExactRational::new(1, den).expect("positive"))
    }

    /// `x·(q + … + q^n)`, the contribution of the shift.
    pub fn offset(&self) -> ExactReal {
        let mut sum = ExactRational::zero();
        let mut power = ExactRational::one();
        for _ in 0..self.level {
            power = &power * &self.ratio;
            sum = &sum + &power;
        }
        self.normalization.shift.mul_rational(&sum)
    }

    /// The real points of `F_n`, ascending.
    pub fn points(&self) -> Vec<ExactReal> {
        let scale = self.scale();
        let offset = self.offset();
        self.values
            .iter()
            .map(|&v| {
                scale
                    .mul_rational(&ExactRational::from_integer(v))
                    .try_add(&offset)
                    .expect("same field")
            })
            .collect()
    }

    /// `(1/n)·log_m |F_n|`, an upper bound for the Hausdorff dimension.
    pub fn hausdorff_upper(&self) -> Result<DimensionBound, LevelError> {
        if self.level == 0 {
            return Err(LevelError::LevelZero);
        }
        let m = self.digits.len() as f64;
        let count = self.values.len() as u64;
        Ok(DimensionBound {
            level: self.level,
            count,
            base: self.digits.len() as u64,
            value: (count as f64).ln() / (self.level as f64 * m.ln()),
        })
    }
}

/// `dim_H E ≤ log(count) / (level · log base)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionBound {
    pub level: u32,
    pub count: u64,
    pub base: u64,
    /// Floating rendering of the bound.
    pub value: f64,
}

impl DimensionBound {
    /// Exactly when the level is free.
    pub fn is_full(&self) -> bool {
        Some(self.count) == self.base.checked_pow(self.level)
    }
}

/// Level-`n` dimension bound, enumerating from scratch.
pub fn hausdorff_upper(sigma: &SigmaSet, n: u32) -> Result<DimensionBound, LevelError> {
    if n == 0 {
        return Err(LevelError::LevelZero);
    }
    LevelSet::at_level(sigma, n)?.hausdorff_upper()
}
