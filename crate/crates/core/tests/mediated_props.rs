mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use sonc_core::mediated::{is_mediated_sequence, med_seq_size_bound};
use sonc_core::{med_seq, med_set, med_set_odd, MediatedSet, RationalPoint};

fn closure_holds(set: &MediatedSet) -> Result<(), String> {
    set.validate()?;
    let pts = set.points();
    for a in &set.anchors {
        if !pts.contains(a) {
            return Err(format!("anchor {a} missing"));
        }
    }
    for p in &pts {
        if !set.anchors.contains(p) && !set.triples.iter().any(|t| &t.u == p && t.is_valid()) {
            return Err(format!("{p} is neither an anchor nor an average"));
        }
    }
    Ok(())
}

proptest! {
    #[test]
    fn med_seq_valid_and_small(p in 2u128..=1_000_000, q_frac in 0.0f64..1.0) {
        let q = 1 + ((p - 1) as f64 * q_frac) as u128;
        let q = q.min(p - 1);
        let ts = med_seq(p, q).unwrap();
        prop_assert!(is_mediated_sequence(p, q, &ts));
        prop_assert!((ts.len() as f64) < med_seq_size_bound(p), "p={} q={} size {}", p, q, ts.len());
    }

    #[test]
    fn med_set_closure_hull_and_denominators(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = common::rng(seed);
        let c = common::random_circuit(&mut rng, n, 5);
        let trellis: Vec<RationalPoint> = c.trellis.iter().map(RationalPoint::from).collect();
        let b = RationalPoint::from(&c.beta);
        let set = med_set(&trellis, &b).unwrap();
        prop_assert!(closure_holds(&set).is_ok(), "{:?}", closure_holds(&set));
        prop_assert!(set.contains(&b));
        let p = c.common_denominator();
        let cap = &p * &p;
        for x in set.points() {
            prop_assert!(common::in_hull(&trellis, &x), "{} outside the trellis hull", x);
            prop_assert!(x.max_denominator() <= cap, "{} exceeds denominator {}", x, cap);
        }
    }

    #[test]
    fn med_set_odd_parity(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = common::rng(seed);
        let c = common::random_circuit(&mut rng, n, 5);
        let trellis: Vec<RationalPoint> = c.trellis.iter().map(RationalPoint::from).collect();
        let b = RationalPoint::from(&c.beta);
        let set = med_set_odd(&trellis, &b).unwrap();
        prop_assert!(closure_holds(&set).is_ok(), "{:?}", closure_holds(&set));
        prop_assert!(set.contains(&b));
        for x in set.points() {
            prop_assert!(common::in_hull(&trellis, &x));
            if x != b {
                prop_assert!(x.is_odd_even(), "{} breaks parity", x);
            }
        }
        for t in &set.triples {
            prop_assert!(t.u.has_odd_denominators());
        }
    }
}

#[test]
fn denominators_stay_bounded_for_wide_simplices() {
    let mut rng = common::rng(3);
    for _ in 0..50 {
        let c = common::random_circuit(&mut rng, 3, 15);
        let trellis: Vec<RationalPoint> = c.trellis.iter().map(RationalPoint::from).collect();
        let set = med_set(&trellis, &RationalPoint::from(&c.beta)).unwrap();
        let p: BigInt = c.common_denominator();
        assert!(set.max_denominator() <= &p * &p);
    }
}
