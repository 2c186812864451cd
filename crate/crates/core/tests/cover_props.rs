mod common;

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use sonc_core::rat::Rational;
use sonc_core::{simplex_cover, support_partition, to_pn, AnchorRule, Exponent, InstanceClass, InstanceSpec};

fn class_strategy() -> impl Strategy<Value = InstanceClass> {
    prop_oneof![
        Just(InstanceClass::StandardSimplex),
        Just(InstanceClass::GeneralSimplex),
        Just(InstanceClass::ArbitraryPolytope),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cover_invariants(class in class_strategy(), n in 2usize..5, half_d in 2u32..6, extra in 2usize..10, seed in any::<u64>()) {
        let spec = InstanceSpec { n, d: 2 * half_d, t: n + 1 + extra, class, l: 2, seed, ..InstanceSpec::default() };
        let f = spec.generate();
        prop_assume!(f.is_ok());
        let f = f.unwrap();
        let part = support_partition(&to_pn(&f));
        let lambda = part.lambda_set();
        let gamma = part.gamma_set();
        let cover = simplex_cover(&lambda, &gamma, AnchorRule::default()).unwrap();

        for c in &cover.circuits {
            prop_assert!(c.weights.iter().all(Signed::is_positive));
            prop_assert_eq!(c.weights.iter().sum::<Rational>(), Rational::one());
            for i in 0..n {
                let s: Rational = c.trellis.iter().zip(&c.weights)
                    .map(|(a, l)| l * Rational::from_integer(a.entries()[i].into()))
                    .sum();
                prop_assert_eq!(s, Rational::from_integer(c.beta.entries()[i].into()));
            }
            prop_assert!(c.trellis.iter().all(|a| lambda.contains(a)));
        }
        let betas: BTreeSet<&Exponent> = cover.circuits.iter().map(|c| &c.beta).collect();
        for b in &gamma {
            prop_assert!(betas.contains(b), "{} uncovered", b);
        }
        let used: BTreeSet<&Exponent> = cover.circuits.iter().flat_map(|c| &c.trellis).collect();
        for a in &lambda {
            prop_assert!(used.contains(a) != cover.unused.contains(a));
        }
        prop_assert!(cover.circuits.len() <= gamma.len() + lambda.len());
        prop_assert_eq!(simplex_cover(&lambda, &gamma, AnchorRule::default()).unwrap(), cover);
    }
}

#[test]
fn zero_weights_never_reach_a_circuit() {
    let spec = InstanceSpec { n: 3, d: 6, t: 12, seed: 5, ..InstanceSpec::default() };
    let f = spec.generate().unwrap();
    let part = support_partition(&to_pn(&f));
    let cover = simplex_cover(&part.lambda_set(), &part.gamma_set(), AnchorRule::Lexicographic).unwrap();
    assert!(cover.circuits.iter().flat_map(|c| &c.weights).all(|w| !w.is_zero()));
}
