use proptest::prelude::*;

use selfsim::decide::{prime_decide, theorem7_decide, Condition, DecideOptions, LambdaE, Verdict};
use selfsim::levelsets::level_measure;
use selfsim::numeric::{ExactRational, ExactReal};
use selfsim::sigma::SigmaSet;

fn digits() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(0i64..14, 2..=5).prop_map(|s| s.into_iter().collect())
}

fn opts() -> DecideOptions {
    DecideOptions::new(5, None)
}

fn combinations(pool: &[i64], size: usize) -> Vec<Vec<i64>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in pool.iter().enumerate() {
        for mut rest in combinations(&pool[i + 1..], size - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

proptest! {
    #[test]
    fn verdict_is_affine_invariant(ds in digits(), a in prop::sample::select(vec![-3i64, -1, 2, 5]), b in -9i64..9, c in 1i64..4) {
        let sigma = SigmaSet::from_integers(&ds).unwrap();
        let a = ExactRational::new(a, c).unwrap();
        let moved = sigma.affine(&a, &ExactRational::from(b)).unwrap();
        let r1 = theorem7_decide(&sigma, &opts()).unwrap();
        let r2 = theorem7_decide(&moved, &opts()).unwrap();
        prop_assert_eq!(r1.verdict, r2.verdict);
        prop_assert_eq!(r1.fired_condition, r2.fired_condition);
        if let (LambdaE::Exact { value: v1 }, LambdaE::Exact { value: v2 }) = (&r1.lambda_e, &r2.lambda_e) {
            prop_assert_eq!(v2.clone(), v1.mul_rational(&a.abs()));
        }
        r1.validate().unwrap();
        r2.validate().unwrap();
    }

    #[test]
    fn certificates_are_exclusive(ds in digits()) {
        let rep = theorem7_decide(&SigmaSet::from_integers(&ds).unwrap(), &opts()).unwrap();
        let c = &rep.certificates;
        match rep.verdict {
            Verdict::PositiveMeasure => {
                prop_assert!(c.collision.is_none());
                prop_assert!(c.residues.as_ref().unwrap().complete || c.ix_table.as_ref().unwrap().is_complete());
            }
            Verdict::MeasureZero => {
                let complete = c.residues.as_ref().is_some_and(|r| r.complete);
                prop_assert!(!complete);
                if let Some(col) = &c.collision {
                    let dim = c.dimension.as_ref().unwrap();
                    prop_assert_eq!(dim.level, col.level);
                    prop_assert!(dim.value < 1.0);
                }
            }
            Verdict::Unknown => prop_assert_eq!(rep.fired_condition, Condition::Undecided),
        }
        rep.validate().unwrap();
    }

    #[test]
    fn quadratic_scaling_keeps_verdict(ds in digits(), d in prop::sample::select(vec![2u64, 3, 5])) {
        let root = ExactReal::sqrt_times(ExactRational::one(), d);
        let plain = SigmaSet::from_integers(&ds).unwrap();
        let scaled = SigmaSet::new(plain.digits().iter().map(|x| x.try_mul(&root).unwrap()).collect()).unwrap();
        let r1 = theorem7_decide(&plain, &opts()).unwrap();
        let r2 = theorem7_decide(&scaled, &opts()).unwrap();
        prop_assert_eq!(r1.fired_condition, r2.fired_condition);
        r2.validate().unwrap();
    }
}

#[test]
fn prime_decide_agrees_with_chain() {
    let pool: Vec<i64> = (1..=15).collect();
    for size in [3usize, 5] {
        for rest in combinations(&pool, size - 1) {
            let mut ds = vec![0];
            ds.extend(rest);
            let sigma = SigmaSet::from_integers(&ds).unwrap();
            let positive = prime_decide(&sigma).unwrap();
            let rep = theorem7_decide(&sigma, &DecideOptions::new(4, None)).unwrap();
            let expected = if positive { Verdict::PositiveMeasure } else { Verdict::MeasureZero };
            assert_eq!(rep.verdict, expected, "{ds:?}");
        }
    }
}

#[test]
fn null_sets_shrink_monotonically() {
    for ds in [[0i64, 1, 3], [0, 1, 4], [0, 2, 3], [0, 1, 7]] {
        let sigma = SigmaSet::from_integers(&ds).unwrap();
        let rep = theorem7_decide(&sigma, &DecideOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::MeasureZero);
        let measures: Vec<ExactRational> = (1..=8).map(|n| level_measure(&sigma, n).unwrap()).collect();
        assert!(measures.windows(2).all(|w| w[1] <= w[0]), "{ds:?}");
        assert!(measures[7] < measures[0], "{ds:?}");
    }
}

#[test]
fn interval_threshold_routes_agree() {
    // q ≥ I(Σ) at q = 1/m only for progressions, which are complete
    for ds in [[0i64, 1, 2, 3], [0, 2, 4, 6], [5, 8, 11, 14]] {
        let sigma = SigmaSet::from_integers(&ds).unwrap();
        assert!(ExactReal::from(sigma.ratio()) >= sigma.interval_threshold());
        let rep = theorem7_decide(&sigma, &DecideOptions::default()).unwrap();
        assert_eq!(rep.fired_condition, Condition::ResidueComplete);
    }
}
