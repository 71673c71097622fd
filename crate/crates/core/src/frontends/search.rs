use num_integer::Integer;
use rayon::prelude::*;

use super::FrontendError;
use crate::cyclotomic::condition_ix_search;
use crate::decide::DecideOptions;
use crate::levelsets::first_collision_limited;
use crate::sigma::SigmaSet;

/// Sets `Σ ⊂ {0..bound}` with `|Σ| = size`, `min Σ = 0`, coprime entries and
/// incomplete residues mod `size` that show no collision and pass the
/// frequency/level search up to the limits in `opts`.
///
/// Results are in lexicographic order.
pub fn counterexample_search(
    size: usize,
    bound: u64,
    opts: &DecideOptions,
) -> Result<Vec<Vec<u64>>, FrontendError> {
    if size < 2 || bound < size as u64 {
        return Err(FrontendError::Invalid(format!(
            "need 2 ≤ size ≤ bound, got size {size} and bound {bound}"
        )));
    }
    let mut candidates = Vec::new();
    let mut current = vec![0u64];
    combinations(1, bound, size, &mut current, &mut candidates);

    let depth = opts.collision_depth(size);
    let hits = candidates
        .into_par_iter()
        .map(|digits| -> Result<Option<Vec<u64>>, FrontendError> {
            if digits.iter().fold(0, |g, &d| g.gcd(&d)) != 1 {
                return Ok(None);
            }
            let ints: Vec<i64> = digits.iter().map(|&d| d as i64).collect();
            let sigma = SigmaSet::from_integers(&ints)?;
            let norm = sigma.normalize()?;
            if norm.residue_profile(size as u64).complete {
                return Ok(None);
            }
            if first_collision_limited(&sigma, depth, usize::MAX)?.is_some() {
                return Ok(None);
            }
            let table = condition_ix_search(&norm.sigma_star, size as u64, opts.n_max.into(), opts.k_max)
                .map_err(crate::decide::DecideError::from)?;
            Ok(table.is_complete().then_some(digits))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(hits.into_iter().flatten().collect())
}

fn combinations(start: u64, bound: u64, size: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if current.len() == size {
        out.push(current.clone());
        return;
    }
    for d in start..=bound {
        current.push(d);
        combinations(d + 1, bound, size, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_four_digit_example() {
        let found = counterexample_search(4, 9, &DecideOptions::default()).unwrap();
        assert_eq!(found, vec![vec![0, 1, 8, 9]]);
    }

    #[test]
    fn prime_sizes_give_nothing() {
        assert!(counterexample_search(3, 12, &DecideOptions::default()).unwrap().is_empty());
        assert!(counterexample_search(2, 10, &DecideOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(counterexample_search(1, 9, &DecideOptions::default()).is_err());
        assert!(counterexample_search(5, 3, &DecideOptions::default()).is_err());
    }
}
