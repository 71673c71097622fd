use serde::{Deserialize, Serialize};

use super::{subcritical_report, theorem7_decide, DecideError, DecideOptions, DecisionReport, Verdict};
use crate::numeric::{ExactRational, ExactReal};
use crate::sigma::{SigmaSet, MAX_SUBSET_DIGITS};

/// Which tail condition holds eventually for the sorted terms `k_i·q^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KakeyaOutcome {
    /// `x_n > Σ_{i>n} x_i` for almost all `n`.
    CantorCondition,
    /// `x_n ≤ Σ_{i>n} x_i` for almost all `n`.
    IntervalUnionCondition,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GnsType {
    FiniteUnionOfIntervals,
    CantorSet,
    Cantorval,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnsClassification {
    pub kind: GnsType,
    pub kakeya: KakeyaOutcome,
    pub digits: Vec<ExactReal>,
    pub reason: String,
    pub report: Option<DecisionReport>,
}

/// All subset sums of `k`, sorted and without repeats.
pub fn subset_sums(k: &[ExactRational]) -> Result<Vec<ExactRational>, DecideError> {
    if k.len() > MAX_SUBSET_DIGITS {
        return Err(DecideError::Inapplicable(format!(
            "{} terms give too many subset sums",
            k.len()
        )));
    }
    let mut sums = vec![ExactRational::zero()];
    for x in k {
        let shifted: Vec<ExactRational> = sums.iter().map(|s| s + x).collect();
        sums.extend(shifted);
    }
    sums.sort();
    sums.dedup();
    Ok(sums)
}

/// Decides the eventual tail conditions of `(k_1, …, k_m; q)` exactly.
///
/// Below `t0 = min(k)·q` the sorted sequence repeats with `x_{n+m} = q·x_n`,
/// and so do the tails, so one block of `m` positions settles both.
pub fn kakeya_check(k: &[ExactRational], q: &ExactRational) -> Result<KakeyaOutcome, DecideError> {
    if k.is_empty() || k.iter().any(|x| !x.is_positive()) {
        return Err(DecideError::Inapplicable("terms must be positive".into()));
    }
    if !q.is_positive() || q >= &ExactRational::one() {
        return Err(DecideError::Inapplicable(format!("ratio {q} is not in (0, 1)")));
    }
    let lo = k.iter().min().expect("nonempty");
    let hi = k.iter().max().expect("nonempty");
    let top = lo * q;
    let floor = &top * q;

    let mut terms = Vec::new();
    let mut power = q.clone();
    loop {
        terms.extend(k.iter().map(|x| x * &power));
        if hi * &(&power * q) <= floor {
            break;
        }
        power = &power * q;
    }
    terms.sort_by(|a, b| b.cmp(a));

    let sum: ExactRational = k.iter().fold(ExactRational::zero(), |acc, x| &acc + x);
    let mut tail = &sum * &(q / &(&ExactRational::one() - q));
    let (mut small, mut large) = (false, false);
    for x in &terms {
        tail = &tail - x;
        if x <= &top && x > &floor {
            if x > &tail {
                large = true;
            } else {
                small = true;
            }
        }
    }
    Ok(match (large, small) {
        (true, false) => KakeyaOutcome::CantorCondition,
        (false, true) => KakeyaOutcome::IntervalUnionCondition,
        _ => KakeyaOutcome::Neither,
    })
}

/// Places the achievement set of `(k_1, …, k_m; q)` in the trichotomy:
/// finite union of intervals, Cantor set or Cantorval.
pub fn gns_classify(
    k: &[ExactRational],
    q: &ExactRational,
    opts: &DecideOptions,
) -> Result<GnsClassification, DecideError> {
    let kakeya = kakeya_check(k, q)?;
    let sums = subset_sums(k)?;
    let sigma = SigmaSet::new(sums.into_iter().map(ExactReal::from).collect())?.with_ratio(q.clone())?;
    let mut out = GnsClassification {
        kind: GnsType::Unknown,
        kakeya,
        digits: sigma.digits().to_vec(),
        reason: String::new(),
        report: None,
    };
    let classify = |out: &mut GnsClassification, kind, reason: &str| {
        out.kind = kind;
        out.reason = reason.to_string();
    };

    match kakeya {
        KakeyaOutcome::IntervalUnionCondition => {
            classify(&mut out, GnsType::FiniteUnionOfIntervals, "terms are eventually at most their tails");
            return Ok(out);
        }
        KakeyaOutcome::CantorCondition => {
            classify(&mut out, GnsType::CantorSet, "terms eventually exceed their tails");
            return Ok(out);
        }
        KakeyaOutcome::Neither => {}
    }

    let scaled = q * &ExactRational::from_integer(sigma.len() as i64);
    if scaled < ExactRational::one() {
        out.report = Some(subcritical_report(&sigma)?);
        classify(&mut out, GnsType::CantorSet, "q·|Σ| < 1 forces measure zero");
    } else if scaled == ExactRational::one() {
        let report = theorem7_decide(&sigma, opts)?;
        match report.verdict {
            Verdict::MeasureZero => classify(&mut out, GnsType::CantorSet, "measure zero"),
            Verdict::PositiveMeasure => classify(
                &mut out,
                GnsType::Cantorval,
                "positive measure without the interval tail condition",
            ),
            Verdict::Unknown => classify(&mut out, GnsType::Unknown, "measure undecided"),
        }
        out.report = Some(report);
    } else if ExactReal::from(q.clone()) >= sigma.interval_threshold() {
        classify(&mut out, GnsType::FiniteUnionOfIntervals, "q is above the interval threshold");
    } else {
        classify(&mut out, GnsType::Unknown, "q·|Σ| > 1 below the interval threshold");
    }
    Ok(out)
}
