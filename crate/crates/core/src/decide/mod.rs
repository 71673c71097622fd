//! The decision chain for positive measure at the critical ratio, the prime
//! case, the tiling certificate and the achievement-set classifier.

mod gns;
mod tiling;

pub use gns::{gns_classify, kakeya_check, subset_sums, GnsClassification, GnsType, KakeyaOutcome};
pub use tiling::{tiling_certificate, TilingCertificate};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{
    condition_ix_search, ix_exponents, vanishing_sum, CyclotomicError, IxTable,
};
use crate::levelsets::{
    first_collision_limited, measure_over_delta, Collision, DimensionBound, LevelError, LevelSet,
};
use crate::numeric::{ratio_is_rational, ExactRational, ExactReal};
use crate::sigma::{DivisorStructure, Normalization, ResidueProfile, SigmaError, SigmaSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("critical-ratio assumption violated: q = {q} but 1/|Σ| = 1/{m}")]
    NotCritical { q: String, m: usize },
    #[error("|Σ| = {0} is not prime")]
    NotPrime(usize),
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error(transparent)]
    Sigma(#[from] SigmaError),
    #[error(transparent)]
    Level(#[from] LevelError),
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    PositiveMeasure,
    MeasureZero,
    Unknown,
}

/// The step of the chain that produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "no-common-divisor")]
    NoCommonDivisor,
    #[serde(rename = "collision")]
    Collision,
    #[serde(rename = "residue-complete")]
    ResidueComplete,
    #[serde(rename = "prime-residue-incomplete")]
    PrimeResidueIncomplete,
    #[serde(rename = "condition-ix (bounded)")]
    ConditionIx,
    /// `q·|Σ| < 1`; used for collapsed projections.
    #[serde(rename = "subcritical-ratio")]
    SubcriticalRatio,
    #[serde(rename = "none")]
    Undecided,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::NoCommonDivisor => "no-common-divisor",
            Condition::Collision => "collision",
            Condition::ResidueComplete => "residue-complete",
            Condition::PrimeResidueIncomplete => "prime-residue-incomplete",
            Condition::ConditionIx => "condition-ix (bounded)",
            Condition::SubcriticalRatio => "subcritical-ratio",
            Condition::Undecided => "none",
        }
    }

    pub fn verdict(self) -> Verdict {
        match self {
            Condition::ResidueComplete | Condition::ConditionIx => Verdict::PositiveMeasure,
            Condition::NoCommonDivisor
            | Condition::Collision
            | Condition::PrimeResidueIncomplete
            | Condition::SubcriticalRatio => Verdict::MeasureZero,
            Condition::Undecided => Verdict::Unknown,
        }
    }
}

/// Two differences with an irrational ratio.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrationalPair {
    pub first: ExactReal,
    pub second: ExactReal,
}

/// `λ(F_n + q^n·[min E, max E])` for one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureBound {
    pub level: u32,
    pub value: ExactReal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub interval: ExactReal,
    pub containment: Option<ExactReal>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Certificates {
    pub delta: Option<ExactReal>,
    pub irrational_pair: Option<IrrationalPair>,
    pub normalization: Option<Normalization>,
    pub residues: Option<ResidueProfile>,
    pub collision: Option<Collision>,
    pub ix_table: Option<IxTable>,
    pub dimension: Option<DimensionBound>,
    pub measure_bounds: Vec<MeasureBound>,
    pub thresholds: Option<Thresholds>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaE {
    Exact { value: ExactReal },
    UpperBound { value: ExactReal, level: u32 },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub n_max: u32,
    pub k_max: Option<u32>,
    /// Deepest level enumerated for collisions and measure bounds.
    pub collision_depth: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub digits: Vec<ExactReal>,
    pub ratio: ExactRational,
    pub verdict: Verdict,
    pub fired_condition: Condition,
    /// The verdict rests on a finite search rather than an equivalence.
    pub bounded_evidence: bool,
    pub certificates: Certificates,
    #[serde(rename = "lambda_E")]
    pub lambda_e: LambdaE,
    pub limits: SearchLimits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    pub n_max: u32,
    /// `None` tries `k ≤ v_m(n) + 3` for each frequency.
    pub k_max: Option<u32>,
    /// Collision search stops at the deepest level with `m^n` below this.
    pub collision_budget: u64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            n_max: 8,
            k_max: None,
            collision_budget: 1 << 20,
        }
    }
}

impl DecideOptions {
    pub fn new(n_max: u32, k_max: Option<u32>) -> Self {
        DecideOptions {
            n_max,
            k_max,
            ..Self::default()
        }
    }

    /// Deepest level searched for `m` digits.
    pub fn collision_depth(&self, m: usize) -> u32 {
        let mut depth = 0;
        let mut size: u64 = 1;
        while depth < self.n_max {
            match size.checked_mul(m as u64) {
                Some(next) if next <= self.collision_budget => size = next,
                _ => break,
            }
            depth += 1;
        }
        depth
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn require_critical(sigma: &SigmaSet) -> Result<(), DecideError> {
    if sigma.is_critical() {
        Ok(())
    } else {
        Err(DecideError::NotCritical {
            q: sigma.ratio().to_string(),
            m: sigma.len(),
        })
    }
}

fn thresholds(sigma: &SigmaSet) -> Thresholds {
    Thresholds {
        interval: sigma.interval_threshold(),
        containment: sigma.containment_threshold().ok(),
    }
}

/// Runs the chain: no common divisor, collision, residue completeness, the
/// prime case, the frequency/level search, and otherwise unknown.
pub fn theorem7_decide(sigma: &SigmaSet, opts: &DecideOptions) -> Result<DecisionReport, DecideError> {
    require_critical(sigma)?;
    let m = sigma.len();
    let mut certs = Certificates {
        thresholds: Some(thresholds(sigma)),
        ..Certificates::default()
    };
    let depth = opts.collision_depth(m);
    let mut report = DecisionReport {
        digits: sigma.digits().to_vec(),
        ratio: sigma.ratio(),
        verdict: Verdict::Unknown,
        fired_condition: Condition::Undecided,
        bounded_evidence: false,
        certificates: Certificates::default(),
        lambda_e: LambdaE::Unknown,
        limits: SearchLimits {
            n_max: opts.n_max,
            k_max: opts.k_max,
            collision_depth: depth,
        },
    };

    let delta = match sigma.divisor_structure() {
        DivisorStructure::Irrational { first, second } => {
            certs.irrational_pair = Some(IrrationalPair { first, second });
            report.limits.collision_depth = 0;
            return Ok(finish(report, certs, Condition::NoCommonDivisor));
        }
        DivisorStructure::Divisor(d) => d,
    };
    let norm = sigma.normalize()?;
    let profile = norm.residue_profile(m as u64);
    certs.delta = Some(delta.clone());
    certs.normalization = Some(norm.clone());
    certs.residues = Some(profile.clone());

    // one walk for the dimension and measure bounds
    let mut level = LevelSet::level_zero(sigma)?;
    for _ in 0..depth {
        level = level.advance()?;
        certs.measure_bounds.push(MeasureBound {
            level: level.level(),
            value: delta.mul_rational(&measure_over_delta(&level)?),
        });
        certs.dimension = Some(level.hausdorff_upper()?);
        if !level.is_free() {
            break;
        }
    }

    if let Some(collision) = first_collision_limited(sigma, depth, usize::MAX)? {
        certs.collision = Some(collision);
        return Ok(finish(report, certs, Condition::Collision));
    }

    if profile.complete {
        certs.ix_table = Some(condition_ix_search(&norm.sigma_star, m as u64, opts.n_max.into(), None)?);
        report.lambda_e = LambdaE::Exact { value: delta };
        return Ok(finish(report, certs, Condition::ResidueComplete));
    }

    if is_prime(m as u64) {
        return Ok(finish(report, certs, Condition::PrimeResidueIncomplete));
    }

    let table = condition_ix_search(&norm.sigma_star, m as u64, opts.n_max.into(), opts.k_max)?;
    let complete = table.is_complete();
    certs.ix_table = Some(table);
    if let Some(best) = certs.measure_bounds.last() {
        report.lambda_e = LambdaE::UpperBound {
            value: best.value.clone(),
            level: best.level,
        };
    }
    let condition = if complete {
        Condition::ConditionIx
    } else {
        Condition::Undecided
    };
    Ok(finish(report, certs, condition))
}

fn finish(mut report: DecisionReport, certs: Certificates, condition: Condition) -> DecisionReport {
    report.verdict = condition.verdict();
    report.fired_condition = condition;
    report.bounded_evidence = condition == Condition::ConditionIx;
    if report.verdict == Verdict::MeasureZero {
        report.lambda_e = LambdaE::Exact {
            value: ExactReal::zero(),
        };
    }
    report.certificates = certs;
    report
}

/// Report for `q·|Σ| < 1`, where `E` is a null set.
pub fn subcritical_report(sigma: &SigmaSet) -> Result<DecisionReport, DecideError> {
    let m = sigma.len();
    let q = sigma.ratio();
    if &q * &ExactRational::from_integer(m) >= ExactRational::one() {
        return Err(DecideError::Inapplicable(format!(
            "q = {q} is not below 1/{m}"
        )));
    }
    let report = DecisionReport {
        digits: sigma.digits().to_vec(),
        ratio: q,
        verdict: Verdict::Unknown,
        fired_condition: Condition::Undecided,
        bounded_evidence: false,
        certificates: Certificates::default(),
        lambda_e: LambdaE::Unknown,
        limits: SearchLimits {
            n_max: 0,
            k_max: None,
            collision_depth: 0,
        },
    };
    let certs = Certificates {
        delta: sigma.common_divisor(),
        ..Certificates::default()
    };
    Ok(finish(report, certs, Condition::SubcriticalRatio))
}

/// For prime `|Σ|`: whether `E` has positive measure, i.e. the normalized
/// digits hit every residue class.
pub fn prime_decide(sigma: &SigmaSet) -> Result<bool, DecideError> {
    let m = sigma.len();
    if !is_prime(m as u64) {
        return Err(DecideError::NotPrime(m));
    }
    match sigma.normalize() {
        Ok(norm) => Ok(norm.residue_profile(m as u64).complete),
        Err(SigmaError::NoCommonDivisor) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

impl DecisionReport {
    pub fn sigma(&self) -> Result<SigmaSet, SigmaError> {
        SigmaSet::new(self.digits.clone())?.with_ratio(self.ratio.clone())
    }

    /// Recomputes the certificate behind the verdict from the digits alone.
    pub fn validate(&self) -> Result<(), String> {
        let sigma = self.sigma().map_err(|e| e.to_string())?;
        let certs = &self.certificates;
        let m = sigma.len();
        if self.fired_condition.verdict() != self.verdict {
            return Err(format!(
                "verdict {:?} does not follow from {}",
                self.verdict,
                self.fired_condition.label()
            ));
        }
        if self.fired_condition != Condition::SubcriticalRatio && !sigma.is_critical() {
            return Err("ratio is not 1/|Σ|".into());
        }
        let expect = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };

        match self.fired_condition {
            Condition::NoCommonDivisor => {
                let pair = certs.irrational_pair.as_ref().ok_or("missing irrational pair")?;
                let diffs = sigma.difference_set();
                expect(
                    diffs.contains(&pair.first) && diffs.contains(&pair.second),
                    "pair is not drawn from the difference set",
                )?;
                expect(
                    !ratio_is_rational(&pair.first, &pair.second).map_err(|e| e.to_string())?,
                    "pair has a rational ratio",
                )?;
                expect(sigma.common_divisor().is_none(), "a common divisor exists")
            }
            Condition::Collision => {
                let c = certs.collision.as_ref().ok_or("missing collision")?;
                let in_sigma = |ds: &[ExactReal]| ds.iter().all(|d| sigma.digits().contains(d));
                expect(in_sigma(&c.left) && in_sigma(&c.right), "witness uses foreign digits")?;
                expect(c.verify(&sigma.ratio()), "witness strings have different values")?;
                if let Some(dim) = &certs.dimension {
                    expect(
                        dim.level != c.level || !dim.is_full(),
                        "dimension bound is full at the collision level",
                    )?;
                }
                Ok(())
            }
            Condition::ResidueComplete => {
                let norm = sigma.normalize().map_err(|e| e.to_string())?;
                expect(norm.residue_profile(m as u64).complete, "residues are incomplete")?;
                expect(
                    certs.delta.as_ref() == Some(&norm.scale),
                    "delta differs from the divisor",
                )?;
                expect(
                    self.lambda_e == LambdaE::Exact { value: norm.scale.clone() },
                    "lambda_E differs from delta",
                )?;
                if let Some(table) = &certs.ix_table {
                    check_ix_table(&norm, m, table)?;
                    expect(table.is_complete(), "complete residues with a failed frequency")?;
                }
                Ok(())
            }
            Condition::PrimeResidueIncomplete => {
                expect(is_prime(m as u64), "|Σ| is not prime")?;
                let norm = sigma.normalize().map_err(|e| e.to_string())?;
                expect(!norm.residue_profile(m as u64).complete, "residues are complete")
            }
            Condition::ConditionIx => {
                let norm = sigma.normalize().map_err(|e| e.to_string())?;
                let table = certs.ix_table.as_ref().ok_or("missing frequency table")?;
                expect(table.is_complete(), "frequency table has failures")?;
                expect(
                    table.entries.len() as u64 == u64::from(self.limits.n_max),
                    "frequency table does not cover n_max",
                )?;
                check_ix_table(&norm, m, table)
            }
            Condition::SubcriticalRatio => expect(
                &sigma.ratio() * &ExactRational::from_integer(m) < ExactRational::one(),
                "ratio is not below 1/|Σ|",
            ),
            Condition::Undecided => Ok(()),
        }
    }
}

/// Re-runs the vanishing test for every claimed entry and checks that no
/// smaller level vanishes.
fn check_ix_table(norm: &Normalization, m: usize, table: &IxTable) -> Result<(), String> {
    if table.modulus != m as u64 {
        return Err("frequency table uses another modulus".into());
    }
    let star: &[BigInt] = &norm.sigma_star;
    for entry in &table.entries {
        let Some(k) = entry.k else { continue };
        for j in 1..=k {
            let order = (m as u64)
                .checked_pow(j)
                .ok_or("order overflow while checking the table")?;
            let cert = vanishing_sum(&ix_exponents(star, entry.n, order), order)
                .map_err(|e| e.to_string())?;
            if !cert.verify() {
                return Err(format!("quotient witness fails at n={}, k={j}", entry.n));
            }
            if cert.vanishes != (j == k) {
                return Err(format!("level {k} is not minimal for n={}", entry.n));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decide(text: &str) -> DecisionReport {
        theorem7_decide(&SigmaSet::parse(text).unwrap(), &DecideOptions::default()).unwrap()
    }

    fn r(text: &str) -> ExactReal {
        text.parse().unwrap()
    }

    #[test]
    fn chain_examples() {
        let rep = decide("0,1,2");
        assert_eq!(rep.verdict, Verdict::PositiveMeasure);
        assert_eq!(rep.fired_condition, Condition::ResidueComplete);
        assert_eq!(rep.lambda_e, LambdaE::Exact { value: r("1") });

        let rep = decide("0,1,4");
        assert_eq!(rep.verdict, Verdict::MeasureZero);
        assert_eq!(rep.lambda_e, LambdaE::Exact { value: r("0") });

        let rep = decide("0,1,8,9");
        assert_eq!(rep.verdict, Verdict::PositiveMeasure);
        assert_eq!(rep.fired_condition, Condition::ConditionIx);
        assert!(rep.bounded_evidence);
        let table = rep.certificates.ix_table.as_ref().unwrap();
        assert_eq!(
            (1..=4).map(|n| table.lookup(n).unwrap()).collect::<Vec<_>>(),
            [2, 1, 2, 3]
        );
        for rep in [decide("0,1,2"), decide("0,1,4"), decide("0,1,8,9")] {
            rep.validate().unwrap();
        }
    }

    #[test]
    fn each_condition_fires() {
        assert_eq!(decide("0,1,sqrt(2)").fired_condition, Condition::NoCommonDivisor);
        assert_eq!(decide("0,1,3").fired_condition, Condition::Collision);
        assert_eq!(decide("0,1,3").certificates.collision.unwrap().level, 2);
        assert_eq!(decide("0,sqrt(2),5*sqrt(2)").fired_condition, Condition::ResidueComplete);
        assert_eq!(decide("0,1,4,5").fired_condition, Condition::Collision);
        assert_eq!(decide("0,2,5,7").fired_condition, Condition::ResidueComplete);
    }

    #[test]
    fn prime_case_without_collision_in_range() {
        // the first collision of {0,1,7} lies beyond a depth-one search
        let sigma = SigmaSet::parse("0,1,7").unwrap();
        let rep = theorem7_decide(&sigma, &DecideOptions::new(1, None)).unwrap();
        assert_eq!(rep.fired_condition, Condition::PrimeResidueIncomplete);
        rep.validate().unwrap();
    }

    #[test]
    fn unknown_carries_bounds() {
        // no collision by depth 1 and the frequency search fails
        let sigma = SigmaSet::parse("0,1,4,6").unwrap();
        let rep = theorem7_decide(&sigma, &DecideOptions::new(1, Some(1))).unwrap();
        assert_eq!(rep.verdict, Verdict::Unknown);
        assert!(matches!(rep.lambda_e, LambdaE::UpperBound { level: 1, .. }));
        assert!(rep.certificates.dimension.is_some());
        rep.validate().unwrap();
    }

    #[test]
    fn critical_ratio_required() {
        let sigma = SigmaSet::parse("0,1,2")
            .unwrap()
            .with_ratio("1/4".parse().unwrap())
            .unwrap();
        assert!(matches!(
            theorem7_decide(&sigma, &DecideOptions::default()),
            Err(DecideError::NotCritical { .. })
        ));
        let rep = subcritical_report(&sigma).unwrap();
        assert_eq!(rep.verdict, Verdict::MeasureZero);
        rep.validate().unwrap();
    }

    #[test]
    fn prime_decide_examples() {
        let p = |t: &str| prime_decide(&SigmaSet::parse(t).unwrap()).unwrap();
        assert!(p("0,1,5"));
        assert!(!p("0,1,4"));
        assert!(p("0,3,6"));
        assert!(!p("0,1,sqrt(3)"));
        assert!(matches!(
            prime_decide(&SigmaSet::parse("0,1,2,3").unwrap()),
            Err(DecideError::NotPrime(4))
        ));
    }

    #[test]
    fn tampered_reports_are_rejected() {
        let mut rep = decide("0,1,4");
        rep.digits = vec![r("0"), r("1"), r("2")];
        assert!(rep.validate().is_err());

        let mut rep = decide("0,1,2");
        rep.verdict = Verdict::MeasureZero;
        assert!(rep.validate().is_err());

        let mut rep = decide("0,1,8,9");
        rep.certificates.ix_table.as_mut().unwrap().entries[0].k = Some(3);
        assert!(rep.validate().is_err());
    }

    #[test]
    fn budget_limits_depth() {
        let sigma = SigmaSet::parse("0,1,8,9").unwrap();
        let rep = theorem7_decide(&sigma, &DecideOptions::new(16, Some(8))).unwrap();
        assert_eq!(rep.limits.collision_depth, 10);
        assert_eq!(rep.fired_condition, Condition::ConditionIx);
        assert_eq!(rep.certificates.ix_table.as_ref().unwrap().entries.len(), 16);
    }

    #[test]
    fn json_roundtrip() {
        let rep = decide("0,1,8,9");
        let text = serde_json::to_string(&rep).unwrap();
        assert!(text.contains("\"fired_condition\":\"condition-ix (bounded)\""));
        assert!(text.contains("\"lambda_E\""));
        let back: DecisionReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rep);
        back.validate().unwrap();
    }
}
