use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::LevelError;
use crate::cyclotomic::vanishing_sum;
use crate::numeric::{ExactRational, ExactReal};
use crate::sigma::SigmaSet;

/// Orders above this are not sent to the exact vanishing test.
const MAX_CERTIFIED_ORDER: u64 = 1 << 24;

/// Partial product `∏_{k=1}^{K} q·Σ_σ exp(2πi·nσq^k/δ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierProduct {
    pub re: f64,
    pub im: f64,
    /// First `k` whose factor is exactly zero.
    pub zero_factor: Option<u32>,
    /// Every factor was checked exactly for vanishing.
    pub certified: bool,
}

impl FourierProduct {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn norm(&self) -> f64 {
        self.value().norm()
    }

    pub fn is_zero(&self) -> bool {
        self.zero_factor.is_some()
    }
}

/// Phases are reduced modulo 1 exactly before conversion to `f64`, and a
/// factor is declared zero only through [`vanishing_sum`].
pub fn fourier_partial(
    sigma: &SigmaSet,
    delta: &ExactRational,
    n: i64,
    k_max: u32,
) -> Result<FourierProduct, LevelError> {
    if !delta.is_positive() {
        return Err(LevelError::NonPositiveDelta);
    }
    let q = sigma.ratio();
    let freq = &ExactRational::from_integer(n) / delta;
    let weight = q.to_f64();
    let rational = sigma.rational_digits();

    let mut value = Complex64::new(1.0, 0.0);
    let mut certified = true;
    let mut power = ExactRational::one();
    for k in 1..=k_max {
        power = &power * &q;
        let step = &freq * &power;
        let factor = match &rational {
            Some(digits) => {
                let phases: Vec<ExactRational> =
                    digits.iter().map(|d| (d * &step).fract()).collect();
                match factor_vanishes(&phases) {
                    Some(true) => {
                        return Ok(FourierProduct {
                            re: 0.0,
                            im: 0.0,
                            zero_factor: Some(k),
                            certified,
                        })
                    }
                    Some(false) => {}
                    None => certified = false,
                }
                phases.iter().map(|t| unit(t.to_f64())).sum::<Complex64>()
            }
            None => {
                certified = false;
                sigma
                    .digits()
                    .iter()
                    .map(|d| unit(quadratic_phase(d, &step)))
                    .sum::<Complex64>()
            }
        };
        value *= factor * weight;
    }
    Ok(FourierProduct {
        re: value.re,
        im: value.im,
        zero_factor: None,
        certified,
    })
}

fn unit(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * turns)
}

/// `(d·step) mod 1` as a float, with the rational part reduced exactly.
fn quadratic_phase(d: &ExactReal, step: &ExactRational) -> f64 {
    let (p, r, root) = d.mul_rational(step).parts();
    let whole = p.fract().to_f64() + r.to_f64() * (root as f64).sqrt();
    whole - whole.floor()
}

/// `Some(vanishes)` when the order is small enough for the exact test.
fn factor_vanishes(phases: &[ExactRational]) -> Option<bool> {
    let order = phases
        .iter()
        .fold(BigInt::one(), |acc, t| acc.lcm(t.denom()))
        .to_u64()
        .filter(|&o| o <= MAX_CERTIFIED_ORDER)?;
    let exponents: Option<Vec<i128>> = phases
        .iter()
        .map(|t| (t.numer() * (BigInt::from(order) / t.denom())).to_i128())
        .collect();
    vanishing_sum(&exponents?, order).ok().map(|c| c.vanishes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(text: &str) -> ExactRational {
        text.parse().unwrap()
    }

    fn sigma(text: &str) -> SigmaSet {
        SigmaSet::parse(text).unwrap()
    }

    /// Direct evaluation with unreduced phases.
    fn naive(digits: &[f64], m: f64, delta: f64, n: f64, k_max: u32) -> Complex64 {
        (1..=k_max)
            .map(|k| {
                let step = n * m.powi(-(k as i32)) / delta;
                digits.iter().map(|d| unit(d * step)).sum::<Complex64>() / m
            })
            .product()
    }

    #[test]
    fn exact_zero_examples() {
        let p = fourier_partial(&sigma("0,1,2"), &q("1"), 1, 1).unwrap();
        assert_eq!(p.zero_factor, Some(1));
        assert!(p.certified && p.norm() == 0.0);
        for k in 1..6 {
            assert!(fourier_partial(&sigma("0,1,2"), &q("1"), 1, k).unwrap().is_zero());
        }
        let p = fourier_partial(&sigma("0,1,8,9"), &q("1"), 1, 2).unwrap();
        assert_eq!(p.zero_factor, Some(2));
        assert!(!fourier_partial(&sigma("0,1,8,9"), &q("1"), 1, 1).unwrap().is_zero());
    }

    #[test]
    fn nonzero_examples() {
        let p = fourier_partial(&sigma("0,1,3"), &q("1"), 1, 3).unwrap();
        assert!(p.certified && !p.is_zero());
        assert!(p.norm() > 0.0 && p.norm() <= 1.0);
        let p = fourier_partial(&sigma("0,1,3"), &q("1"), 1, 8).unwrap();
        assert!(p.norm() > 1e-3);
    }

    #[test]
    fn agrees_with_naive_product() {
        for (text, digits) in [("0,1,3", vec![0.0, 1.0, 3.0]), ("0,1,4,7", vec![0.0, 1.0, 4.0, 7.0])] {
            for n in [1, 2, 5, -3] {
                let fast = fourier_partial(&sigma(text), &q("1"), n, 6).unwrap().value();
                let slow = naive(&digits, digits.len() as f64, 1.0, n as f64, 6);
                assert!((fast - slow).norm() < 1e-12, "{text} n={n}");
            }
        }
    }

    #[test]
    fn quadratic_digits_are_uncertified() {
        let p = fourier_partial(&sigma("0,1,sqrt(2)"), &q("1"), 1, 4).unwrap();
        assert!(!p.certified && p.norm() <= 1.0);
        let slow = naive(&[0.0, 1.0, 2f64.sqrt()], 3.0, 1.0, 1.0, 4);
        assert!((p.value() - slow).norm() < 1e-12);
    }
}
