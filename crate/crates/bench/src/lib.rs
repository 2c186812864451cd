//! Fixed workloads shared by the benchmarks.

use sonc_core::{InstanceClass, InstanceSpec, SparsePoly};

/// The Motzkin polynomial x⁴y² + x²y⁴ − 3x²y² + 1.
pub fn motzkin() -> SparsePoly {
    SparsePoly::from_ints(2, &[(&[4, 2], 1), (&[2, 4], 1), (&[2, 2], -3), (&[0, 0], 1)]).expect("valid polynomial")
}

/// Seeded interior instance of the standard-simplex class.
pub fn standard_instance(n: usize, d: u32, t: usize, seed: u64) -> SparsePoly {
    InstanceSpec { n, d, t, class: InstanceClass::StandardSimplex, l: 1, seed, coef_max: 10, interior: true }
        .generate()
        .expect("feasible spec")
}
