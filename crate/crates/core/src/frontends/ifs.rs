use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FrontendError;
use crate::decide::{subcritical_report, theorem7_decide, DecideOptions, DecisionReport};
use crate::numeric::{ExactRational, ExactReal};
use crate::sigma::SigmaSet;

/// Maps `f_i(x, y) = ((x + a_i)/k, (y + b_i)/k)` with `k` the number of maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarIFS {
    pub points: Vec<(ExactReal, ExactReal)>,
}

impl PlanarIFS {
    pub fn new(points: Vec<(ExactReal, ExactReal)>) -> Result<Self, FrontendError> {
        if points.len() < 2 {
            return Err(FrontendError::Invalid("an IFS needs at least two maps".into()));
        }
        Ok(PlanarIFS { points })
    }

    /// Parses `a1,b1:a2,b2:...`.
    pub fn parse(text: &str) -> Result<Self, FrontendError> {
        let points = text
            .split(':')
            .map(|pair| {
                let (a, b) = pair
                    .split_once(',')
                    .ok_or_else(|| FrontendError::Invalid(format!("point {pair:?} is not a,b")))?;
                Ok((a.trim().parse()?, b.trim().parse()?))
            })
            .collect::<Result<Vec<_>, FrontendError>>()?;
        Self::new(points)
    }

    pub fn maps(&self) -> usize {
        self.points.len()
    }

    pub fn ratio(&self) -> ExactRational {
        ExactRational::new(1, self.maps() as u64).expect("positive")
    }

    pub fn is_rational(&self) -> bool {
        self.points.iter().all(|(a, b)| a.is_rational() && b.is_rational())
    }
}

/// `π_u` of the attractor is `E(Σ_u, 1/k)` with `Σ_u = {a_i + u·b_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub sigma: SigmaSet,
    /// Two maps project to the same digit, so `|Σ_u| < k`.
    pub degenerate: bool,
}

impl Projection {
    /// A collapsed projection has `q·|Σ_u| < 1` and is null.
    pub fn decide(&self, opts: &DecideOptions) -> Result<DecisionReport, FrontendError> {
        Ok(if self.degenerate {
            subcritical_report(&self.sigma)?
        } else {
            theorem7_decide(&self.sigma, opts)?
        })
    }
}

pub fn ifs_project(ifs: &PlanarIFS, u: &ExactReal) -> Result<Projection, FrontendError> {
    let digits = ifs
        .points
        .iter()
        .map(|(a, b)| u.try_mul(b)?.try_add(a))
        .collect::<Result<Vec<_>, _>>()?;
    let sigma = SigmaSet::new_dedup(digits)?.with_ratio(ifs.ratio())?;
    Ok(Projection {
        degenerate: sigma.len() < ifs.maps(),
        sigma,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub u: ExactRational,
    pub digits: Vec<ExactReal>,
    pub degenerate: bool,
    pub report: DecisionReport,
}

/// Positive rationals `p/s` in lowest terms with `p, s ≤ h`, ascending,
/// generated by descending the Stern–Brocot tree.
pub fn stern_brocot(h: u64) -> Vec<ExactRational> {
    fn walk(lo: (u64, u64), hi: (u64, u64), h: u64, out: &mut Vec<ExactRational>) {
        let mid = (lo.0 + hi.0, lo.1 + hi.1);
        if mid.0 > h || mid.1 > h {
            return;
        }
        walk(lo, mid, h, out);
        out.push(ExactRational::new(mid.0, mid.1).expect("positive denominator"));
        walk(mid, hi, h, out);
    }
    let mut out = Vec::new();
    walk((0, 1), (1, 0), h, &mut out);
    out
}

/// Decides every projection `u = p/s` with `|p|, s ≤ h`, sorted by `u`.
pub fn ifs_sweep(
    ifs: &PlanarIFS,
    h: u64,
    opts: &DecideOptions,
) -> Result<Vec<SweepEntry>, FrontendError> {
    let positive = stern_brocot(h);
    let mut candidates: Vec<ExactRational> = positive.iter().rev().map(|u| -u.clone()).collect();
    candidates.push(ExactRational::zero());
    candidates.extend(positive);
    candidates
        .into_par_iter()
        .map(|u| {
            let projection = ifs_project(ifs, &u.clone().into())?;
            let report = projection.decide(opts)?;
            Ok(SweepEntry {
                u,
                digits: projection.sigma.digits().to_vec(),
                degenerate: projection.degenerate,
                report,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::{Condition, Verdict};

    fn gasket() -> PlanarIFS {
        PlanarIFS::parse("0,0:1,0:0,1").unwrap()
    }

    fn r(text: &str) -> ExactReal {
        text.parse().unwrap()
    }

    fn digits(p: &Projection) -> Vec<String> {
        p.sigma.digits().iter().map(ToString::to_string).collect()
    }

    #[test]
    fn projection_examples() {
        let p = ifs_project(&gasket(), &r("2")).unwrap();
        assert_eq!(digits(&p), ["0", "1", "2"]);
        assert!(!p.degenerate);
        let p = ifs_project(&gasket(), &r("1")).unwrap();
        assert_eq!(digits(&p), ["0", "1"]);
        assert!(p.degenerate);
        let four = PlanarIFS::parse("0,0:1,0:1,1:0,sqrt(2)").unwrap();
        let p = ifs_project(&four, &r("1")).unwrap();
        assert_eq!(digits(&p), ["0", "1", "sqrt(2)", "2"]);
    }

    #[test]
    fn stern_brocot_enumeration() {
        let got: Vec<String> = stern_brocot(3).iter().map(ToString::to_string).collect();
        assert_eq!(got, ["1/3", "1/2", "2/3", "1", "3/2", "2", "3"]);
        // count of coprime pairs in [1,h]^2
        let h = 12u64;
        let expected = (1..=h)
            .flat_map(|p| (1..=h).map(move |s| (p, s)))
            .filter(|&(p, s)| num_integer::gcd(p, s) == 1)
            .count();
        let list = stern_brocot(h);
        assert_eq!(list.len(), expected);
        assert!(list.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn gasket_sweep() {
        let sweep = ifs_sweep(&gasket(), 2, &DecideOptions::default()).unwrap();
        let verdict = |u: &str| {
            let u: ExactRational = u.parse().unwrap();
            sweep.iter().find(|e| e.u == u).unwrap().report.verdict
        };
        assert_eq!(verdict("2"), Verdict::PositiveMeasure);
        assert_eq!(verdict("1/2"), Verdict::PositiveMeasure);
        assert_eq!(verdict("1"), Verdict::MeasureZero);
        assert!(sweep.iter().find(|e| e.u == ExactRational::one()).unwrap().degenerate);
        assert!(sweep.windows(2).all(|w| w[0].u < w[1].u));
        let sweep = ifs_sweep(&gasket(), 4, &DecideOptions::default()).unwrap();
        let four = sweep.iter().find(|e| e.u == ExactRational::from(4)).unwrap();
        assert_eq!(four.report.verdict, Verdict::MeasureZero);
        for entry in &sweep {
            entry.report.validate().unwrap();
        }
    }

    #[test]
    fn four_map_example_is_null() {
        let four = PlanarIFS::parse("0,0:1,0:1,1:0,sqrt(2)").unwrap();
        for u in ["1", "2", "1/2", "sqrt(2)", "2*sqrt(2)"] {
            let rep = ifs_project(&four, &r(u))
                .unwrap()
                .decide(&DecideOptions::default())
                .unwrap();
            assert_eq!(rep.fired_condition, Condition::NoCommonDivisor, "u={u}");
        }
    }
}
