use serde::{Deserialize, Serialize};

use super::DecideError;
use crate::levelsets::{envelope, level_intervals, IntervalUnion};
use crate::numeric::{ExactRational, ExactReal};
use crate::sigma::SigmaSet;

/// Finite check that the translates `jδ + E` tile a window of the line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingCertificate {
    pub delta: ExactReal,
    pub window: ExactRational,
    pub level: u32,
    /// `[−M+R, M−R]` lies in the union of translates with `|j| ≤ M/δ`,
    /// where `R = max(|min E|, |max E|)`.
    pub covered: bool,
    /// Largest overlap length between two distinct translates.
    pub max_overlap: ExactRational,
    /// `2·(λ(level approximation) − δ)`.
    pub overlap_bound: ExactRational,
    pub lambda_e: ExactReal,
}

impl TilingCertificate {
    pub fn overlap_within_bound(&self) -> bool {
        self.max_overlap <= self.overlap_bound
    }
}

/// Requires complete residues; then `λ(E) = δ` and `δℤ` is a tiling basis.
pub fn tiling_certificate(
    sigma: &SigmaSet,
    n: u32,
    window: &ExactRational,
) -> Result<TilingCertificate, DecideError> {
    let norm = sigma.normalize()?;
    if !norm.residue_profile(sigma.len() as u64).complete {
        return Err(DecideError::Inapplicable(
            "the normalized digits miss a residue class".into(),
        ));
    }
    let delta = norm
        .scale
        .as_rational()
        .ok_or_else(|| DecideError::Inapplicable("tiling check needs rational digits".into()))?
        .clone();
    let hull = envelope(sigma)?;
    let reach = hull.e_min.abs().max(hull.e_max.abs());
    let lo = &reach - window;
    let hi = window - &reach;
    if lo > hi {
        return Err(DecideError::Inapplicable(format!(
            "window {window} is smaller than the envelope reach {reach}"
        )));
    }

    let base = level_intervals(sigma, n)?;
    let span = (window / &delta).floor();
    let span: i64 = i64::try_from(span).map_err(|_| DecideError::Inapplicable("window too wide".into()))?;
    let shift = |j: i64| &delta * &ExactRational::from_integer(j);
    let mut union = IntervalUnion::default();
    for j in -span..=span {
        union = union.union(&base.translate(&shift(j)));
    }
    let covered = union.covers(&lo, &hi);

    let width = &hull.e_max - &hull.e_min;
    let mut max_overlap = ExactRational::zero();
    for d in 1..=2 * span {
        let offset = shift(d);
        if offset > width {
            break;
        }
        let overlap = base.intersect(&base.translate(&offset)).measure();
        if overlap > max_overlap {
            max_overlap = overlap;
        }
    }
    let excess = &base.measure() - &delta;
    Ok(TilingCertificate {
        delta: delta.clone().into(),
        window: window.clone(),
        level: n,
        covered,
        max_overlap,
        overlap_bound: &ExactRational::from_integer(2) * &excess,
        lambda_e: delta.into(),
    })
}
