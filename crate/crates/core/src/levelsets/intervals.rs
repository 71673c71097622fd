use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{LevelError, LevelSet};
use crate::numeric::ExactRational;
use crate::sigma::SigmaSet;

/// Sorted disjoint closed intervals; touching intervals are merged.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalUnion {
    intervals: Vec<(ExactRational, ExactRational)>,
}

impl IntervalUnion {
    /// Sorts and merges overlapping or touching intervals. Intervals with
    /// `lo > hi` are dropped.
    pub fn from_intervals(mut raw: Vec<(ExactRational, ExactRational)>) -> Self {
        raw.retain(|(lo, hi)| lo <= hi);
        raw.sort();
        let mut merged: Vec<(ExactRational, ExactRational)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        IntervalUnion { intervals: merged }
    }

    pub fn intervals(&self) -> &[(ExactRational, ExactRational)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> ExactRational {
        self.intervals
            .iter()
            .fold(ExactRational::zero(), |acc, (lo, hi)| &acc + &(hi - lo))
    }

    pub fn lower(&self) -> Option<&ExactRational> {
        self.intervals.first().map(|i| &i.0)
    }

    pub fn upper(&self) -> Option<&ExactRational> {
        self.intervals.last().map(|i| &i.1)
    }

    pub fn translate(&self, t: &ExactRational) -> Self {
        IntervalUnion {
            intervals: self.intervals.iter().map(|(lo, hi)| (lo + t, hi + t)).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.intervals.iter().chain(&other.intervals).cloned().collect())
    }

    /// Pointwise intersection (degenerate one-point pieces are kept).
    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].0.clone().max(b[j].0.clone());
            let hi = a[i].1.clone().min(b[j].1.clone());
            if lo <= hi {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_intervals(out)
    }

    /// Whether `[lo, hi]` lies inside one of the intervals.
    pub fn covers(&self, lo: &ExactRational, hi: &ExactRational) -> bool {
        self.intervals.iter().any(|(a, b)| a <= lo && hi <= b)
    }

    /// Point-set inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.intervals.iter().all(|(lo, hi)| other.covers(lo, hi))
    }
}

impl Serialize for IntervalUnion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.intervals.len()))?;
        for (lo, hi) in &self.intervals {
            seq.serialize_element(&[lo.to_string(), hi.to_string()])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntervalUnion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<(ExactRational, ExactRational)>::deserialize(d)?;
        Ok(Self::from_intervals(raw))
    }
}

/// `min E` and `max E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeBounds {
    pub e_min: ExactRational,
    pub e_max: ExactRational,
}

/// `[q·min Σ/(1−q), q·max Σ/(1−q)]` for rational digits.
pub fn envelope(sigma: &SigmaSet) -> Result<EnvelopeBounds, LevelError> {
    let lo = sigma.min().as_rational().ok_or(LevelError::IrrationalDigits)?;
    let hi = sigma.max().as_rational().ok_or(LevelError::IrrationalDigits)?;
    let q = sigma.ratio();
    let factor = &q / &(&ExactRational::one() - &q);
    Ok(EnvelopeBounds {
        e_min: lo * &factor,
        e_max: hi * &factor,
    })
}

/// The outer approximation `F_n + q^n·[min E, max E]` of `E`.
pub fn level_intervals(sigma: &SigmaSet, n: u32) -> Result<IntervalUnion, LevelError> {
    level_intervals_of(&LevelSet::at_level(sigma, n)?)
}

/// Total length of [`level_intervals`], an upper bound for `λ(E)`.
pub fn level_measure(sigma: &SigmaSet, n: u32) -> Result<ExactRational, LevelError> {
    let level = LevelSet::at_level(sigma, n)?;
    let delta = level
        .normalization()
        .scale
        .as_rational()
        .ok_or(LevelError::IrrationalDigits)?
        .clone();
    Ok(delta * &measure_over_delta(&level)?)
}

/// Merged level intervals in integer units of `δ/(b^n(b−a))` above `min E`.
///
/// Each interval is `[W(b−a), W(b−a) + σ*_max·a^{n+1}]`.
fn merged_units(level: &LevelSet) -> Result<Vec<(i128, i128)>, LevelError> {
    let n = level.level();
    let overflow = || LevelError::Overflow(n);
    let (a, b) = level.ratio_parts();
    let gap = b - a;
    let top = level
        .normalization()
        .max_digit()
        .to_i128()
        .ok_or_else(overflow)?;
    let width = a
        .checked_pow(n + 1)
        .and_then(|p| p.checked_mul(top))
        .ok_or_else(overflow)?;

    let mut merged: Vec<(i128, i128)> = Vec::new();
    for &w in level.values() {
        let lo = w.checked_mul(gap).ok_or_else(overflow)?;
        let hi = lo.checked_add(width).ok_or_else(overflow)?;
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    Ok(merged)
}

/// `δ/(b^n(b−a))`, the length of one integer unit divided by `δ`.
fn unit_over_delta(level: &LevelSet) -> ExactRational {
    let (a, b) = level.ratio_parts();
    let den = num_traits::pow(BigInt::from(b), level.level() as usize) * BigInt::from(b - a);
    ExactRational::new(1, den).expect("positive")
}

/// Interval approximation from an already enumerated level.
pub(crate) fn level_intervals_of(level: &LevelSet) -> Result<IntervalUnion, LevelError> {
    let norm = level.normalization();
    let shift = norm.shift.as_rational().ok_or(LevelError::IrrationalDigits)?;
    let delta = norm.scale.as_rational().ok_or(LevelError::IrrationalDigits)?;
    let merged = merged_units(level)?;
    let q = level.ratio();
    let base = shift * &(q / &(&ExactRational::one() - q));
    let unit = delta * &unit_over_delta(level);
    let to_real = |v: i128| &base + &(&unit * &ExactRational::from_integer(v));
    Ok(IntervalUnion {
        intervals: merged.into_iter().map(|(lo, hi)| (to_real(lo), to_real(hi))).collect(),
    })
}

/// Length of the level approximation divided by `δ`; works for any digit
/// field since only the normalized integers enter.
pub(crate) fn measure_over_delta(level: &LevelSet) -> Result<ExactRational, LevelError> {
    let total = merged_units(level)?
        .into_iter()
        .try_fold(0i128, |acc, (lo, hi)| acc.checked_add(hi - lo))
        .ok_or(LevelError::Overflow(level.level()))?;
    Ok(unit_over_delta(level) * &ExactRational::from_integer(total))
}

/// CSV rows `level,lo_num,lo_den,hi_num,hi_den` in lowest terms.
pub fn intervals_csv(levels: &[(u32, IntervalUnion)]) -> String {
    let mut out = String::from("level,lo_num,lo_den,hi_num,hi_den\n");
    for (level, union) in levels {
        for (lo, hi) in union.intervals() {
            writeln!(
                out,
                "{level},{},{},{},{}",
                lo.numer(),
                lo.denom(),
                hi.numer(),
                hi.denom()
            )
            .expect("writing to a String");
        }
    }
    out
}
