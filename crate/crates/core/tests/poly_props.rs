mod common;

use std::collections::BTreeMap;

use num_traits::Signed;
use proptest::prelude::*;
use sonc_core::poly::{is_nonneg_circuit, substitute_power};
use sonc_core::rat::{self, Rational};
use sonc_core::{support_partition, to_pn, Exponent, SparsePoly};

fn poly_strategy(n: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((prop::collection::vec(0u32..7, n), -20i64..=20, 1i64..=5), 1..10).prop_map(move |terms| {
        let mut map = BTreeMap::new();
        for (e, p, q) in terms {
            map.insert(Exponent::new(e), rat::frac(p, q));
        }
        SparsePoly::from_terms(n, map).unwrap()
    })
}

proptest! {
    #[test]
    fn partition_is_disjoint_cover(f in poly_strategy(3)) {
        let part = support_partition(&f);
        prop_assert_eq!(part.lambda.len() + part.gamma.len(), f.len());
        for (e, c) in f.terms() {
            prop_assert!(part.lambda.contains_key(e) != part.gamma.contains_key(e));
            if let Some(l) = part.lambda.get(e) {
                prop_assert!(e.is_even() && l.is_positive());
                prop_assert_eq!(l, c);
            }
        }
    }

    #[test]
    fn to_pn_idempotent_and_keeps_lambda(f in poly_strategy(2)) {
        let g = to_pn(&f);
        prop_assert_eq!(to_pn(&g), g.clone());
        let fe: Vec<&Exponent> = f.terms().map(|(e, _)| e).collect();
        let ge: Vec<&Exponent> = g.terms().map(|(e, _)| e).collect();
        prop_assert_eq!(fe, ge);
        for (e, c) in support_partition(&f).lambda {
            prop_assert_eq!(g.coeff(&e), c);
        }
        for (e, c) in support_partition(&f).gamma {
            prop_assert_eq!(g.coeff(&e), -c.abs());
        }
    }

    #[test]
    fn substitution_composes(f in poly_strategy(2), r in 1u32..4, s in 1u32..4) {
        prop_assert_eq!(substitute_power(&substitute_power(&f, r), s), substitute_power(&f, r * s));
    }

    #[test]
    fn nonneg_test_is_monotone(seed in any::<u64>(), n in 1usize..4, k in 0i64..10) {
        let mut rng = common::rng(seed);
        let c = common::random_circuit(&mut rng, n, 4);
        let coeffs: Vec<Rational> = c.trellis.iter().map(|_| common::random_positive(&mut rng)).collect();
        let theta = c.circuit_number_f64(&coeffs);
        let d = rat::from_f64(theta).unwrap() * rat::frac(11, 10);
        let d_small = &d * rat::frac(k, 10);
        if is_nonneg_circuit(&c, &coeffs, &d).unwrap() {
            prop_assert!(is_nonneg_circuit(&c, &coeffs, &d_small).unwrap());
        }
        if is_nonneg_circuit(&c, &coeffs, &d_small).unwrap() && !c.beta.is_even() {
            prop_assert!(is_nonneg_circuit(&c, &coeffs, &-d_small.clone()).unwrap());
        }
    }
}

/// Grid search over ±e^s finds a strictly negative value only where the exact test says no.
#[test]
fn nonneg_test_agrees_with_sampling_oracle() {
    let mut rng = common::rng(17);
    let mut negatives = 0;
    for _ in 0..100 {
        let n = 2;
        let c = common::random_circuit(&mut rng, n, 3);
        let coeffs: Vec<Rational> = c.trellis.iter().map(|_| common::random_positive(&mut rng)).collect();
        let theta = c.circuit_number_f64(&coeffs);
        let scale = 0.5 + 1.0 * rand::Rng::gen::<f64>(&mut rng);
        let d = rat::from_f64(theta * scale).unwrap();
        let f = common::circuit_poly(&c, &coeffs, &d);
        let steps = 81;
        let mut found = false;
        'grid: for i in 0..steps {
            for j in 0..steps {
                let s = [-4.0 + 8.0 * i as f64 / (steps - 1) as f64, -4.0 + 8.0 * j as f64 / (steps - 1) as f64];
                for signs in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
                    let x = [signs[0] * s[0].exp(), signs[1] * s[1].exp()];
                    if f.eval_f64(&x) < -1e-9 * common::magnitude(&f, &x) {
                        found = true;
                        break 'grid;
                    }
                }
            }
        }
        if found {
            negatives += 1;
            assert!(!is_nonneg_circuit(&c, &coeffs, &d).unwrap(), "oracle found a negative value of {f}");
        }
    }
    assert!(negatives > 0, "oracle never fired");
}
