use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{LevelError, LevelSet};
use crate::numeric::{ExactRational, ExactReal};
use crate::sigma::SigmaSet;

/// Depth limit for the exact quadratic-field collision search.
pub const MAX_QUADRATIC_COLLISION_LEVEL: u32 = 12;

/// Two distinct digit strings of the same length with the same value
/// `Σ σ_i q^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    pub level: u32,
    pub left: Vec<ExactReal>,
    pub right: Vec<ExactReal>,
}

impl Collision {
    /// Recomputes both sums in exact arithmetic.
    pub fn verify(&self, q: &ExactRational) -> bool {
        let value = |digits: &[ExactReal]| -> Option<ExactReal> {
            let mut acc = ExactReal::zero();
            let mut power = ExactRational::one();
            for d in digits {
                power = &power * q;
                acc = acc.try_add(&d.mul_rational(&power)).ok()?;
            }
            Some(acc)
        };
        self.left.len() == self.level as usize
            && self.right.len() == self.level as usize
            && self.left != self.right
            && matches!((value(&self.left), value(&self.right)), (Some(a), Some(b)) if a == b)
    }
}

/// Smallest `n ≤ n_max` with `|F_n| < |Σ|^n`, with a witness pair.
///
/// Digit sets with a common divisor are enumerated as scaled integers;
/// sets without one fall back to exact pairs `(p, r)` for `p + r√d`, limited
/// to [`MAX_QUADRATIC_COLLISION_LEVEL`].
pub fn first_collision(sigma: &SigmaSet, n_max: u32) -> Result<Option<Collision>, LevelError> {
    first_collision_limited(sigma, n_max, super::DEFAULT_MAX_VALUES)
}

pub(crate) fn first_collision_limited(
    sigma: &SigmaSet,
    n_max: u32,
    max_values: usize,
) -> Result<Option<Collision>, LevelError> {
    if sigma.common_divisor().is_some() {
        integer_collision(sigma, n_max, max_values)
    } else {
        if n_max > MAX_QUADRATIC_COLLISION_LEVEL {
            return Err(LevelError::QuadraticDepth {
                requested: n_max,
                max: MAX_QUADRATIC_COLLISION_LEVEL,
            });
        }
        quadratic_collision(sigma, n_max, max_values)
    }
}

fn integer_collision(
    sigma: &SigmaSet,
    n_max: u32,
    max_values: usize,
) -> Result<Option<Collision>, LevelError> {
    let mut levels = vec![LevelSet::level_zero(sigma)?.with_max_values(max_values)];
    for _ in 0..n_max {
        let next = levels.last().expect("nonempty").advance()?;
        let free = next.is_free();
        levels.push(next);
        if !free {
            return Ok(Some(witness(sigma, &levels)));
        }
    }
    Ok(None)
}

/// Decodes the smallest repeated value of the last level into digit strings.
/// Every earlier level is free, so each of its values has one string.
fn witness(sigma: &SigmaSet, levels: &[LevelSet]) -> Collision {
    let last = levels.last().expect("nonempty");
    let idx = last
        .multiplicities()
        .iter()
        .position(|&c| c > 1)
        .expect("level is not free");
    let mut strings = decode(levels, levels.len() - 1, last.values()[idx]);
    strings.sort();
    let to_digits = |s: &Vec<usize>| s.iter().map(|&i| sigma.digits()[i].clone()).collect();
    Collision {
        level: last.level(),
        left: to_digits(&strings[0]),
        right: to_digits(&strings[1]),
    }
}

/// All digit-index strings reaching `value` at level `depth`.
fn decode(levels: &[LevelSet], depth: usize, value: i128) -> Vec<Vec<usize>> {
    if depth == 0 {
        return vec![Vec::new()];
    }
    let here = &levels[depth];
    let prev = &levels[depth - 1];
    let (num, den) = here.ratio_parts();
    let weight = num.pow(here.level());
    let mut out = Vec::new();
    for (i, &d) in here.digits().iter().enumerate() {
        let rest = value - weight * d;
        if rest.rem_euclid(den) != 0 {
            continue;
        }
        let parent = rest / den;
        if prev.values().binary_search(&parent).is_ok() {
            for mut s in decode(levels, depth - 1, parent) {
                s.push(i);
                out.push(s);
            }
        }
    }
    out
}

fn quadratic_collision(
    sigma: &SigmaSet,
    n_max: u32,
    max_values: usize,
) -> Result<Option<Collision>, LevelError> {
    // digits as (P + R√d) / L with integer P, R
    let parts: Vec<(ExactRational, ExactRational)> = sigma
        .digits()
        .iter()
        .map(|d| {
            let (p, r, _) = d.parts();
            (p, r)
        })
        .collect();
    let common = parts.iter().fold(BigInt::from(1), |acc, (p, r)| {
        acc.lcm(p.denom()).lcm(r.denom())
    });
    let scaled = |x: &ExactRational| (x.numer() * (&common / x.denom())).to_i128();
    let digits: Vec<(i128, i128)> = parts
        .iter()
        .map(|(p, r)| Some((scaled(p)?, scaled(r)?)))
        .collect::<Option<_>>()
        .ok_or(LevelError::Overflow(0))?;
    let q = sigma.ratio();
    let a = q.numer().to_i128().ok_or(LevelError::Overflow(0))?;
    let b = q.denom().to_i128().ok_or(LevelError::Overflow(0))?;

    // each node: value, parent index, digit index
    let mut levels: Vec<Vec<Node>> = vec![vec![((0, 0), 0, 0)]];
    let mut weight: i128 = 1;
    for level in 1..=n_max {
        let overflow = || LevelError::Overflow(level);
        weight = weight.checked_mul(a).ok_or_else(overflow)?;
        let prev = levels.last().expect("nonempty");
        let candidates = prev.len() * digits.len();
        if candidates > max_values {
            return Err(LevelError::TooLarge {
                level,
                candidates,
                limit: max_values,
            });
        }
        let mut next = Vec::with_capacity(candidates);
        let mut seen: HashMap<(i128, i128), Vec<usize>> = HashMap::with_capacity(candidates);
        for (pi, ((vp, vr), _, _)) in prev.iter().enumerate() {
            for (di, (dp, dr)) in digits.iter().enumerate() {
                let lin = |v: i128, d: i128| {
                    v.checked_mul(b)?.checked_add(d.checked_mul(weight)?)
                };
                let value = (
                    lin(*vp, *dp).ok_or_else(overflow)?,
                    lin(*vr, *dr).ok_or_else(overflow)?,
                );
                seen.entry(value).or_default().push(next.len());
                next.push((value, pi, di));
            }
        }
        let clash = seen
            .values()
            .filter(|ids| ids.len() > 1)
            .map(|ids| {
                let mut strings: Vec<Vec<usize>> =
                    ids.iter().map(|&id| trace(&levels, &next, id)).collect();
                strings.sort();
                strings
            })
            .min();
        if let Some(strings) = clash {
            let to_digits = |s: &Vec<usize>| s.iter().map(|&i| sigma.digits()[i].clone()).collect();
            return Ok(Some(Collision {
                level,
                left: to_digits(&strings[0]),
                right: to_digits(&strings[1]),
            }));
        }
        levels.push(next);
    }
    Ok(None)
}

type Node = ((i128, i128), usize, usize);

fn trace(levels: &[Vec<Node>], last: &[Node], id: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let (_, mut parent, digit) = last[id];
    out.push(digit);
    for level in levels.iter().skip(1).rev() {
        let (_, p, d) = level[parent];
        out.push(d);
        parent = p;
    }
    out.reverse();
    out
}
