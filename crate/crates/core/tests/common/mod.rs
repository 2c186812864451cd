#![allow(dead_code)]

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sonc_core::linalg::{affine_coordinates, Affine};
use sonc_core::rat::{self, Rational};
use sonc_core::{Circuit, Exponent, RationalPoint, SparsePoly};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Even simplex in dimension n with an interior lattice point, coordinates ≤ 2·half_max.
pub fn random_circuit(rng: &mut ChaCha8Rng, n: usize, half_max: u32) -> Circuit {
    loop {
        let trellis: Vec<Exponent> =
            (0..=n).map(|_| Exponent::new((0..n).map(|_| 2 * rng.gen_range(0..=half_max)).collect())).collect();
        let weights: Vec<u32> = (0..=n).map(|_| rng.gen_range(1..=6)).collect();
        let total: u32 = weights.iter().sum();
        let mut beta = vec![0u32; n];
        for (a, w) in trellis.iter().zip(&weights) {
            for (b, x) in beta.iter_mut().zip(a.entries()) {
                *b += w * x;
            }
        }
        if beta.iter().any(|b| b % total != 0) {
            continue;
        }
        let beta = Exponent::new(beta.into_iter().map(|b| b / total).collect());
        if let Ok(c) = Circuit::new(trellis, beta) {
            return c;
        }
    }
}

pub fn random_positive(rng: &mut ChaCha8Rng) -> Rational {
    rat::frac(rng.gen_range(1..=200), rng.gen_range(1..=20))
}

/// Σ c_α x^α − d x^β.
pub fn circuit_poly(c: &Circuit, coeffs: &[Rational], d: &Rational) -> SparsePoly {
    let mut f = SparsePoly::zero(c.beta.dim());
    for (a, x) in c.trellis.iter().zip(coeffs) {
        f.add_term(a.clone(), x.clone());
    }
    f.add_term(c.beta.clone(), -d.clone());
    f
}

/// Σ λ_α x^α − x^β, which vanishes at the all-ones point and is nonnegative.
pub fn boundary_circuit(c: &Circuit) -> SparsePoly {
    circuit_poly(c, &c.weights, &rat::int(1))
}

/// Minimum of `f` over random points with coordinates ±e^s, s ∈ [−range, range].
pub fn sampled_min(f: &SparsePoly, rng: &mut ChaCha8Rng, samples: usize, range: f64) -> f64 {
    let n = f.n();
    let mut best = f64::INFINITY;
    let mut x = vec![0.0; n];
    for _ in 0..samples {
        for xi in x.iter_mut() {
            let mag = rng.gen_range(-range..=range).exp();
            *xi = if rng.gen_bool(0.5) { mag } else { -mag };
        }
        best = best.min(f.eval_f64(&x));
    }
    best
}

/// Σ |c_α x^α| at x, for relative tolerances.
pub fn magnitude(f: &SparsePoly, x: &[f64]) -> f64 {
    f.terms()
        .map(|(e, c)| {
            let m: f64 = e.entries().iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product();
            (rat::to_f64(c) * m).abs()
        })
        .sum()
}

/// Whether p lies in the convex hull of the trellis.
pub fn in_hull(trellis: &[RationalPoint], p: &RationalPoint) -> bool {
    let pts: Vec<Vec<Rational>> = trellis.iter().map(|t| t.coords().to_vec()).collect();
    match affine_coordinates(&pts, p.coords()) {
        Affine::Unique(w) => w.iter().all(|x| !x.is_negative()),
        _ => false,
    }
}

/// Smallest f(x)/Σ|terms(x)| over random points, half uniform in [−2,2]ⁿ and half ±e^s.
pub fn worst_relative(f: &SparsePoly, rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    let n = f.n();
    let mut worst = f64::INFINITY;
    let mut x = vec![0.0; n];
    for k in 0..samples {
        for xi in x.iter_mut() {
            *xi = if k % 2 == 0 {
                rng.gen_range(-2.0..=2.0)
            } else {
                let mag = rng.gen_range(-3.0f64..=3.0).exp();
                if rng.gen_bool(0.5) { mag } else { -mag }
            };
        }
        let m = magnitude(f, &x);
        if m > 0.0 {
            worst = worst.min(f.eval_f64(&x) / m);
        }
    }
    worst
}
