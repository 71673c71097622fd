use proptest::prelude::*;

use selfsim::numeric::{ExactRational, ExactReal};
use selfsim::sigma::SigmaSet;

fn digits(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-20i64..40, 2..=max_len).prop_map(|s| s.into_iter().collect())
}

fn scale() -> impl Strategy<Value = ExactRational> {
    (1i64..12, 1i64..8, any::<bool>())
        .prop_map(|(n, d, neg)| ExactRational::new(if neg { -n } else { n }, d).unwrap())
}

fn shift() -> impl Strategy<Value = ExactRational> {
    (-30i64..30, 1i64..6).prop_map(|(n, d)| ExactRational::new(n, d).unwrap())
}

proptest! {
    #[test]
    fn normalization_reconstructs_digits(ds in digits(7)) {
        let sigma = SigmaSet::from_integers(&ds).unwrap();
        let norm = sigma.normalize().unwrap();
        prop_assert_eq!(&norm.sigma_star[0], &0.into());
        for (d, s) in sigma.digits().iter().zip(&norm.sigma_star) {
            let rebuilt = norm.scale.mul_rational(&ExactRational::from(s.clone())).try_add(&norm.shift).unwrap();
            prop_assert_eq!(&rebuilt, d);
        }
    }

    #[test]
    fn normalization_is_idempotent(ds in digits(7)) {
        let norm = SigmaSet::from_integers(&ds).unwrap().normalize().unwrap();
        let again = norm.as_sigma().normalize().unwrap();
        prop_assert!(again.is_identity());
        prop_assert_eq!(again.sigma_star, norm.sigma_star);
    }

    #[test]
    fn affine_invariance(ds in digits(6), a in scale(), b in shift()) {
        let sigma = SigmaSet::from_integers(&ds).unwrap();
        let moved = sigma.affine(&a, &b).unwrap();
        let (n1, n2) = (sigma.normalize().unwrap(), moved.normalize().unwrap());
        prop_assert_eq!(
            n2.scale.clone(),
            n1.scale.mul_rational(&a.abs())
        );
        let m = sigma.len() as u64;
        prop_assert_eq!(
            n1.residue_profile(m).complete,
            n2.residue_profile(m).complete
        );
        if a.is_positive() {
            prop_assert_eq!(n1.sigma_star, n2.sigma_star);
        }
        prop_assert_eq!(sigma.interval_threshold(), moved.interval_threshold());
        prop_assert_eq!(
            sigma.containment_threshold().unwrap(),
            moved.containment_threshold().unwrap()
        );
    }

    #[test]
    fn quadratic_scaling_keeps_structure(ds in digits(6), d in prop::sample::select(vec![2u64, 3, 5])) {
        let root = ExactReal::sqrt_times(ExactRational::one(), d);
        let plain = SigmaSet::from_integers(&ds).unwrap();
        let scaled = SigmaSet::new(plain.digits().iter().map(|x| x.try_mul(&root).unwrap()).collect()).unwrap();
        let (n1, n2) = (plain.normalize().unwrap(), scaled.normalize().unwrap());
        prop_assert_eq!(n1.sigma_star, n2.sigma_star);
        prop_assert_eq!(n2.scale, n1.scale.try_mul(&root).unwrap());
    }

    #[test]
    fn containment_below_interval_threshold(ds in digits(8)) {
        let sigma = SigmaSet::from_integers(&ds).unwrap();
        let i = sigma.containment_threshold().unwrap();
        let big_i = sigma.interval_threshold();
        prop_assert!(i <= big_i);
        prop_assert!(i > ExactReal::zero());
    }

    #[test]
    fn irrational_digit_breaks_divisor(ds in digits(5), d in prop::sample::select(vec![2u64, 3, 7])) {
        let mut all: Vec<ExactReal> = ds.iter().map(|&x| ExactReal::from(x)).collect();
        all.push(ExactReal::sqrt_times(ExactRational::one(), d));
        let sigma = SigmaSet::new(all).unwrap();
        prop_assert!(sigma.common_divisor().is_none());
    }
}

/// Brute-force oracle for the containment threshold over subsets.
#[test]
fn containment_threshold_bruteforce() {
    let sets: &[&[i64]] = &[&[0, 1, 3], &[0, 1, 8, 9], &[0, 2, 3, 5], &[0, 1, 5, 6, 20], &[-3, 0, 4, 11]];
    for ds in sets {
        let sigma = SigmaSet::from_integers(ds).unwrap();
        let mut best: Option<ExactRational> = None;
        for mask in 0u32..(1 << ds.len()) {
            let mut sub: Vec<i64> = (0..ds.len()).filter(|i| mask >> i & 1 == 1).map(|i| ds[i]).collect();
            if sub.len() < 2 {
                continue;
            }
            sub.sort();
            let gap = sub.windows(2).map(|w| w[1] - w[0]).max().unwrap();
            let diam = sub[sub.len() - 1] - sub[0];
            let t = ExactRational::new(gap, gap + diam).unwrap();
            if best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        }
        assert_eq!(
            sigma.containment_threshold().unwrap(),
            ExactReal::from(best.unwrap()),
            "{ds:?}"
        );
    }
}
