use proptest::prelude::*;

use selfsim::decide::{gns_classify, DecideOptions};
use selfsim::frontends::{build_sigma, counterexample_search, ifs_project, reduce_multigeometric, Multigeometric, PlanarIFS};
use selfsim::numeric::{ExactRational, ExactReal};

proptest! {
    #[test]
    fn subset_sum_count(k in prop::collection::vec(1u64..30, 1..6), base in 2u64..6) {
        let mg = Multigeometric::new(k.clone(), base).unwrap();
        let built = build_sigma(&mg).unwrap();
        prop_assert!(built.sigma.len() <= 1 << k.len());
        prop_assert_eq!(built.sigma.len() == 1 << k.len(), built.distinct_sums);
    }

    #[test]
    fn reduction_keeps_type(k in prop::collection::vec(1u64..5, 1..3), e in prop::collection::vec(0u32..3, 1..3)) {
        let base = 1u64 << k.len();
        let lifted: Vec<u64> = k.iter().zip(e.iter().cycle()).map(|(x, p)| x * base.pow(*p)).collect();
        let mg = Multigeometric::new(lifted, base).unwrap();
        let reduced = reduce_multigeometric(&mg);
        prop_assert!(reduced.k.iter().all(|x| x % base != 0));
        let critical = |m: &Multigeometric| build_sigma(m).unwrap().critical;
        prop_assume!(critical(&mg) && critical(&reduced));
        let opts = DecideOptions::new(5, None);
        let a = gns_classify(&mg.terms(), &mg.ratio(), &opts).unwrap().kind;
        let b = gns_classify(&reduced.terms(), &reduced.ratio(), &opts).unwrap().kind;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn projection_rescaling(
        pts in prop::collection::vec((-5i64..5, -5i64..5), 3..5),
        u in (1i64..7, 1i64..5),
        c in (1i64..5, 1i64..5),
    ) {
        let u = ExactRational::new(u.0, u.1).unwrap();
        let c = ExactRational::new(c.0, c.1).unwrap();
        let ifs = |scale: &ExactRational| {
            PlanarIFS::new(
                pts.iter()
                    .map(|&(a, b)| (ExactReal::from(a), ExactReal::from(&ExactRational::from(b) * scale)))
                    .collect(),
            )
            .unwrap()
        };
        let plain = ifs_project(&ifs(&ExactRational::one()), &u.clone().into());
        let moved = ifs_project(&ifs(&c), &(&u / &c).into());
        match (plain, moved) {
            (Ok(p), Ok(m)) => prop_assert_eq!(p.sigma.digits(), m.sigma.digits()),
            (p, m) => prop_assert_eq!(p.is_err(), m.is_err()),
        }
    }
}

#[test]
fn prime_sizes_have_no_candidates() {
    let opts = DecideOptions::default();
    assert!(counterexample_search(2, 16, &opts).unwrap().is_empty());
    assert!(counterexample_search(3, 15, &opts).unwrap().is_empty());
    assert!(counterexample_search(5, 9, &opts).unwrap().is_empty());
}
