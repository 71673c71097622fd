use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{LevelError, LevelSet};
use crate::numeric::ExactRational;
use crate::sigma::SigmaSet;

/// Exact Kolmogorov–Smirnov distance between the level-`n` measure pushed
/// through `x ↦ (x/δ) mod 1` and the uniform distribution on `[0,1)`.
///
/// Each point of `F_n` carries weight `multiplicity·m^{−n}`.
pub fn pushforward_histogram(
    sigma: &SigmaSet,
    delta: &ExactRational,
    n: u32,
) -> Result<ExactRational, LevelError> {
    if !delta.is_positive() {
        return Err(LevelError::NonPositiveDelta);
    }
    let level = LevelSet::at_level(sigma, n)?;
    let scale = level.scale();
    let offset = level.offset();
    let scale = scale.as_rational().ok_or(LevelError::IrrationalDigits)?;
    let offset = offset.as_rational().ok_or(LevelError::IrrationalDigits)?;
    let total = ExactRational::from_integer(level.total());

    let mut atoms: BTreeMap<ExactRational, BigInt> = BTreeMap::new();
    for (&v, &mult) in level.values().iter().zip(level.multiplicities()) {
        let x = offset + &(scale * &ExactRational::from_integer(v));
        let t = (&x / delta).fract();
        *atoms.entry(t).or_default() += BigInt::from(mult);
    }

    let mut below = ExactRational::zero();
    let mut worst = ExactRational::zero();
    for (t, weight) in atoms {
        let through = &below + &(&ExactRational::from_integer(weight) / &total);
        let gap = (&below - &t).abs().max((&through - &t).abs());
        if gap > worst {
            worst = gap;
        }
        below = through;
    }
    Ok(worst)
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

    /// Empirical CDF checked on a fine grid plus both sides of every atom.
    fn oracle(digits: &[i64], delta: &ExactRational, n: u32) -> ExactRational {
        let m = digits.len() as i64;
        let ratio = ExactRational::new(1, m).unwrap();
        let mut points = vec![ExactRational::zero()];
        let mut power = ExactRational::one();
        for _ in 0..n {
            power = &power * &ratio;
            points = points
                .iter()
                .flat_map(|p| {
                    digits
                        .iter()
                        .map(|&d| p + &(&ExactRational::from_integer(d) * &power))
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        let ts: Vec<ExactRational> = points.iter().map(|p| (p / delta).fract()).collect();
        let w = ExactRational::new(1, ts.len() as i64).unwrap();
        let mut worst = ExactRational::zero();
        for t in &ts {
            let le = ts.iter().filter(|s| *s <= t).count() as i64;
            let lt = ts.iter().filter(|s| *s < t).count() as i64;
            for c in [le, lt] {
                let d = (&(&w * &ExactRational::from_integer(c)) - t).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    #[test]
    fn uniform_grid() {
        let s = sigma("0,1,2");
        assert_eq!(pushforward_histogram(&s, &q("1"), 1).unwrap(), q("1/3"));
        assert_eq!(pushforward_histogram(&s, &q("1"), 2).unwrap(), q("1/9"));
        for n in 1..8 {
            let now = pushforward_histogram(&s, &q("1"), n).unwrap();
            let next = pushforward_histogram(&s, &q("1"), n + 1).unwrap();
            assert!(next < now);
        }
    }

    #[test]
    fn matches_bruteforce() {
        for (digits, delta) in [
            (&[0i64, 1, 3][..], "1"),
            (&[0, 1, 4][..], "1"),
            (&[0, 2, 4][..], "2"),
            (&[0, 1, 8, 9][..], "1"),
            (&[0, 1, 3][..], "1/2"),
        ] {
            let s = SigmaSet::from_integers(digits).unwrap();
            for n in 1..5 {
                assert_eq!(
                    pushforward_histogram(&s, &q(delta), n).unwrap(),
                    oracle(digits, &q(delta), n),
                    "{digits:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn incomplete_stays_away_from_zero() {
        let d = pushforward_histogram(&sigma("0,1,3"), &q("1"), 3).unwrap();
        assert!(d > q("1/20"), "{d}");
    }

    #[test]
    fn rejects_bad_delta() {
        assert_eq!(
            pushforward_histogram(&sigma("0,1,2"), &q("0"), 1),
            Err(LevelError::NonPositiveDelta)
        );
    }
}
