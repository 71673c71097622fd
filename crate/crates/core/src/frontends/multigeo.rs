use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::FrontendError;
use crate::decide::subset_sums;
use crate::numeric::{ExactRational, ExactReal};
use crate::sigma::SigmaSet;

/// The series `k_1/n, …, k_m/n, k_1/n², …` with `q = 1/n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigeometric {
    pub k: Vec<u64>,
    pub base: u64,
}

impl Multigeometric {
    pub fn new(k: Vec<u64>, base: u64) -> Result<Self, FrontendError> {
        if k.is_empty() || k.contains(&0) {
            return Err(FrontendError::Invalid("terms must be positive integers".into()));
        }
        if base < 2 {
            return Err(FrontendError::Invalid(format!("base {base} is below 2")));
        }
        Ok(Multigeometric { k, base })
    }

    /// Parses the comma-separated term list, e.g. `3,2`.
    pub fn parse(terms: &str, base: u64) -> Result<Self, FrontendError> {
        let k = terms
            .split(',')
            .map(|t| u64::from_str(t.trim()).map_err(|e| FrontendError::Invalid(format!("term {t:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(k, base)
    }

    pub fn ratio(&self) -> ExactRational {
        ExactRational::new(1, self.base).expect("base is positive")
    }

    pub fn terms(&self) -> Vec<ExactRational> {
        self.k.iter().map(|&x| ExactRational::from(x)).collect()
    }

    /// `(Σk_i)·q/(1−q) = Σk_i/(n−1)`, the sum of the whole series.
    pub fn total(&self) -> ExactRational {
        let sum: u64 = self.k.iter().sum();
        ExactRational::new(sum, self.base - 1).expect("base above 1")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltSigma {
    pub sigma: SigmaSet,
    /// `|Σ| = n`, so the critical-ratio routes apply.
    pub critical: bool,
    /// All `2^m` subset sums are distinct.
    pub distinct_sums: bool,
}

/// `Σ = {Σ ε_i k_i : ε ∈ {0,1}^m}` at ratio `1/n`.
pub fn build_sigma(mg: &Multigeometric) -> Result<BuiltSigma, FrontendError> {
    let sums = subset_sums(&mg.terms())?;
    let distinct_sums = sums.len() == 1usize << mg.k.len();
    let sigma = SigmaSet::new(sums.into_iter().map(ExactReal::from).collect())?.with_ratio(mg.ratio())?;
    Ok(BuiltSigma {
        critical: sigma.len() as u64 == mg.base,
        distinct_sums,
        sigma,
    })
}

/// Divides any term by `n` while it stays an integer; the topological type
/// of the achievement set does not change.
pub fn reduce_multigeometric(mg: &Multigeometric) -> Multigeometric {
    let k = mg
        .k
        .iter()
        .map(|&x| {
            let mut x = x;
            while x % mg.base == 0 {
                x /= mg.base;
            }
            x
        })
        .collect();
    Multigeometric { k, base: mg.base }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NiteckiOutcome {
    /// `Σ` is an arithmetic progression; `hi` is the sum of the series.
    Interval {
        lo: ExactRational,
        hi: ExactRational,
        /// `n/(n−1)·Σk_i`, the endpoint in the usual statement, which does
        /// not match the series sum.
        alternative_hi: ExactRational,
    },
    Cantorval,
    NotApplicable { reason: String },
}

/// Needs `|Σ| = n` and complete residues mod `n`.
pub fn nitecki_classify(mg: &Multigeometric) -> Result<NiteckiOutcome, FrontendError> {
    let built = build_sigma(mg)?;
    if !built.critical {
        return Ok(NiteckiOutcome::NotApplicable {
            reason: format!("|Σ| = {} differs from n = {}", built.sigma.len(), mg.base),
        });
    }
    let norm = built.sigma.normalize()?;
    if !norm.residue_profile(mg.base).complete {
        return Ok(NiteckiOutcome::NotApplicable {
            reason: "subset sums miss a residue class".into(),
        });
    }
    let digits = built.sigma.digits();
    let step = &digits[1];
    let arithmetic = digits
        .iter()
        .enumerate()
        .all(|(i, d)| *d == step.mul_rational(&ExactRational::from(i as u64)));
    if arithmetic {
        let sum: u64 = mg.k.iter().sum();
        Ok(NiteckiOutcome::Interval {
            lo: ExactRational::zero(),
            hi: mg.total(),
            alternative_hi: ExactRational::new(sum * mg.base, mg.base - 1).expect("base above 1"),
        })
    } else {
        Ok(NiteckiOutcome::Cantorval)
    }
}
