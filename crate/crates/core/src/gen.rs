//! Seeded random instances for the three benchmark classes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cover::{sim_sel, simplex_cover, AnchorRule};
use crate::error::{Error, Result};
use crate::linalg::{affine_coordinates, rank, Affine};
use crate::poly::{Exponent, SparsePoly};
use crate::rat::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceClass {
    StandardSimplex,
    GeneralSimplex,
    ArbitraryPolytope,
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceClass::StandardSimplex => "standard-simplex",
            InstanceClass::GeneralSimplex => "general-simplex",
            InstanceClass::ArbitraryPolytope => "arbitrary-polytope",
        })
    }
}

impl FromStr for InstanceClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard-simplex" | "standard" => Ok(InstanceClass::StandardSimplex),
            "general-simplex" | "general" => Ok(InstanceClass::GeneralSimplex),
            "arbitrary-polytope" | "arbitrary" => Ok(InstanceClass::ArbitraryPolytope),
            _ => Err(Error::InvalidArgument(format!("unknown instance class {s:?}"))),
        }
    }
}

/// Parameters of a random instance; `t` counts all terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub d: u32,
    pub t: usize,
    pub class: InstanceClass,
    /// Minimum number of non-vertex terms, arbitrary class only.
    pub l: usize,
    pub seed: u64,
    /// Integer coefficients are drawn from 1..=coef_max in absolute value.
    pub coef_max: i64,
    /// Put f strictly inside the SONC cone.
    pub interior: bool,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec {
            n: 2,
            d: 6,
            t: 5,
            class: InstanceClass::StandardSimplex,
            l: 1,
            seed: 0,
            coef_max: 10,
            interior: false,
        }
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i + 1) as u128)
}

/// Uniform lattice point of {x ≥ 0, Σx ≤ total} by stars and bars.
fn random_composition(rng: &mut ChaCha8Rng, n: usize, total: u32) -> Vec<u32> {
    let mut cuts: Vec<u32> = rand::seq::index::sample(rng, (total as usize) + n, n).into_iter().map(|c| c as u32).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    cuts.iter()
        .enumerate()
        .map(|(i, &c)| {
            let part = c - prev - if i == 0 { 0 } else { 1 };
            prev = c;
            part
        })
        .collect()
}

fn lattice_simplex(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, n: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            rec(prefix, n, left - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), n, d, &mut out);
    out
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        if self.d == 0 || self.d % 2 == 1 {
            return Err(Error::InvalidArgument(format!("degree must be even and positive, got {}", self.d)));
        }
        if self.t < self.n + 2 {
            return Err(Error::InvalidArgument(format!("t = {} must be at least n + 2 = {}", self.t, self.n + 2)));
        }
        if self.coef_max < 1 {
            return Err(Error::InvalidArgument("coefficient range must be at least 1".into()));
        }
        let lattice = binomial(self.n as u64 + self.d as u64, self.n as u64);
        if self.class == InstanceClass::StandardSimplex && self.t as u128 > lattice {
            return Err(Error::InvalidArgument(format!(
                "standard simplex of degree {} in {} variables has only {lattice} lattice points",
                self.d, self.n
            )));
        }
        Ok(())
    }

    /// Draws the instance; identical specs give identical polynomials.
    pub fn generate(&self) -> Result<SparsePoly> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let (lambda, gamma) = match self.class {
            InstanceClass::StandardSimplex => self.standard_support(&mut rng)?,
            InstanceClass::GeneralSimplex => self.general_support(&mut rng)?,
            InstanceClass::ArbitraryPolytope => self.arbitrary_support(&mut rng)?,
        };
        if self.interior {
            self.interior_coefficients(&mut rng, lambda, gamma)
        } else {
            self.plain_coefficients(&mut rng, lambda, gamma)
        }
    }

    fn standard_support(&self, rng: &mut ChaCha8Rng) -> Result<(Vec<Exponent>, Vec<Exponent>)> {
        let n = self.n;
        let mut lambda = vec![Exponent::zeros(n)];
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = self.d;
            lambda.push(Exponent::new(e));
        }
        let want = self.t - lambda.len();
        let taken: BTreeSet<Exponent> = lambda.iter().cloned().collect();
        let lattice = binomial(n as u64 + self.d as u64, n as u64);
        let gamma: Vec<Exponent> = if lattice <= 200_000 || want as u128 * 2 > lattice {
            let mut all: Vec<Exponent> =
                lattice_simplex(n, self.d).into_iter().map(Exponent::new).filter(|e| !taken.contains(e)).collect();
            all.shuffle(rng);
            all.truncate(want);
            all
        } else {
            let mut seen = BTreeSet::new();
            while seen.len() < want {
                let e = Exponent::new(random_composition(rng, n, self.d));
                if !taken.contains(&e) {
                    seen.insert(e);
                }
            }
            seen.into_iter().collect()
        };
        Ok((lambda, gamma))
    }

    fn random_even_point(&self, rng: &mut ChaCha8Rng) -> Exponent {
        let half = self.d / 2;
        let total = rng.gen_range(1..=half);
        Exponent::new(random_composition(rng, self.n, total).into_iter().map(|x| 2 * x).collect())
    }

    fn general_support(&self, rng: &mut ChaCha8Rng) -> Result<(Vec<Exponent>, Vec<Exponent>)> {
        let n = self.n;
        for _ in 0..1000 {
            let mut lambda = vec![Exponent::zeros(n)];
            while lambda.len() < n + 1 {
                let e = self.random_even_point(rng);
                if !lambda.contains(&e) {
                    lambda.push(e);
                }
            }
            if let Some(top) = lambda.iter_mut().skip(1).max_by_key(|e| e.degree()) {
                let mut v = top.entries().to_vec();
                let slack = self.d - v.iter().sum::<u32>();
                let j = rng.gen_range(0..n);
                v[j] += slack;
                *top = Exponent::new(v);
            }
            let diffs: Vec<Vec<Rational>> = lambda[1..].iter().map(Exponent::to_rationals).collect();
            if rank(diffs) < n {
                continue;
            }
            let pts: Vec<Vec<Rational>> = lambda.iter().map(Exponent::to_rationals).collect();
            let inside = |e: &Exponent| match affine_coordinates(&pts, &e.to_rationals()) {
                Affine::Unique(w) => w.iter().all(|x| x >= &Rational::from_integer(0.into())),
                _ => false,
            };
            if let Some(gamma) = self.sample_inside(rng, &lambda, self.t - lambda.len(), inside) {
                return Ok((lambda, gamma));
            }
        }
        Err(Error::InvalidArgument(format!(
            "could not draw a general simplex with {} interior lattice points",
            self.t - n - 1
        )))
    }

    fn arbitrary_support(&self, rng: &mut ChaCha8Rng) -> Result<(Vec<Exponent>, Vec<Exponent>)> {
        let n = self.n;
        let n_gamma = self.l.max(self.t / 2).min(self.t - n - 1);
        if n_gamma < self.l.max(1) {
            return Err(Error::InvalidArgument(format!(
                "t = {} leaves room for only {} interior terms, need {}",
                self.t,
                self.t - n - 1,
                self.l
            )));
        }
        let n_lambda = self.t - n_gamma;
        for _ in 0..1000 {
            let mut lambda = vec![Exponent::zeros(n)];
            let mut tries = 0;
            while lambda.len() < n_lambda && tries < 100 * n_lambda {
                tries += 1;
                let e = self.random_even_point(rng);
                if !lambda.contains(&e) {
                    lambda.push(e);
                }
            }
            if lambda.len() < n_lambda {
                break;
            }
            let zero = lambda[0].clone();
            let inside = |e: &Exponent| sim_sel(e, &lambda, &zero).is_ok();
            if let Some(gamma) = self.sample_inside(rng, &lambda, n_gamma, inside) {
                return Ok((lambda, gamma));
            }
        }
        Err(Error::InvalidArgument(format!("could not draw {n_gamma} lattice points inside a random Newton polytope")))
    }

    /// Rounded random convex combinations of `lambda` accepted by `inside`.
    fn sample_inside(
        &self,
        rng: &mut ChaCha8Rng,
        lambda: &[Exponent],
        want: usize,
        inside: impl Fn(&Exponent) -> bool,
    ) -> Option<Vec<Exponent>> {
        let taken: BTreeSet<&Exponent> = lambda.iter().collect();
        let mut out = BTreeSet::new();
        let mut tries = 0;
        while out.len() < want {
            tries += 1;
            if tries > 200 * want + 200 {
                return None;
            }
            let k = rng.gen_range(2..=lambda.len().min(self.n + 1));
            let chosen: Vec<&Exponent> = lambda.choose_multiple(rng, k).collect();
            let w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
            let s: f64 = w.iter().sum();
            let e = Exponent::new(
                (0..self.n)
                    .map(|i| {
                        let x: f64 = chosen.iter().zip(&w).map(|(a, wj)| a.entries()[i] as f64 * wj / s).sum();
                        x.floor() as u32
                    })
                    .collect(),
            );
            if taken.contains(&e) || out.contains(&e) || !inside(&e) {
                continue;
            }
            out.insert(e);
        }
        Some(out.into_iter().collect())
    }

    fn draw_coef(&self, rng: &mut ChaCha8Rng) -> i64 {
        rng.gen_range(1..=self.coef_max)
    }

    fn plain_coefficients(
        &self,
        rng: &mut ChaCha8Rng,
        lambda: Vec<Exponent>,
        gamma: Vec<Exponent>,
    ) -> Result<SparsePoly> {
        let mut terms: Vec<(Exponent, Rational)> = Vec::with_capacity(lambda.len() + gamma.len());
        for a in lambda {
            let c = self.draw_coef(rng);
            terms.push((a, rat::int(c)));
        }
        for b in gamma {
            let mag = self.draw_coef(rng);
            let sign = if b.is_even() || rng.gen_bool(0.5) { -1 } else { 1 };
            terms.push((b, rat::int(sign * mag)));
        }
        SparsePoly::from_terms(self.n, terms)
    }

    /// Splits each c_α over the circuits using it and keeps |d_β| below the summed circuit numbers.
    fn interior_coefficients(
        &self,
        rng: &mut ChaCha8Rng,
        lambda: Vec<Exponent>,
        gamma: Vec<Exponent>,
    ) -> Result<SparsePoly> {
        let cover = simplex_cover(&lambda, &gamma, AnchorRule::default())?;
        let coef: Vec<(Exponent, Rational)> = lambda.iter().map(|a| (a.clone(), rat::int(self.draw_coef(rng)))).collect();
        let uses = |a: &Exponent| cover.circuits.iter().filter(|c| c.trellis.contains(a)).count().max(1);
        let lookup = |a: &Exponent| coef.iter().find(|(e, _)| e == a).map(|(_, c)| c.clone()).expect("Λ coefficient");
        let mut terms = coef.clone();
        for b in &gamma {
            let capacity: f64 = cover
                .circuits
                .iter()
                .filter(|c| &c.beta == b)
                .map(|c| {
                    let share: Vec<Rational> =
                        c.trellis.iter().map(|a| lookup(a) / rat::int(uses(a) as i64)).collect();
                    c.circuit_number_f64(&share)
                })
                .sum();
            let mag = capacity * rng.gen_range(0.1..0.9);
            let exact = rat::from_f64(mag)?;
            let rounded = rat::floor_to_denominator(&exact, 1000);
            let d = if rounded > rat::int(0) { rounded } else { exact };
            terms.push((b.clone(), -d));
        }
        let zero = Exponent::zeros(self.n);
        match terms.iter_mut().find(|(e, _)| e == &zero) {
            Some((_, c)) => *c += rat::int(1),
            None => terms.push((zero, rat::int(1))),
        }
        SparsePoly::from_terms(self.n, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::support_partition;

    #[test]
    fn standard_contains_vertices() {
        let spec = InstanceSpec { n: 2, d: 6, t: 5, seed: 1, ..Default::default() };
        let f = spec.generate().unwrap();
        assert_eq!(f.len(), 5);
        let part = support_partition(&f);
        for v in [[0, 0], [6, 0], [0, 6]] {
            assert!(part.lambda.contains_key(&Exponent::new(v.to_vec())));
        }
        assert!(!part.gamma.is_empty());
        assert_eq!(spec.generate().unwrap(), f);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(InstanceSpec { d: 5, ..Default::default() }.generate().is_err());
        assert!(InstanceSpec { t: 3, ..Default::default() }.generate().is_err());
        assert!(InstanceSpec { n: 1, d: 2, t: 4, ..Default::default() }.generate().is_err());
    }

    #[test]
    fn compositions_are_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let c = random_composition(&mut rng, 4, 7);
            assert_eq!(c.len(), 4);
            assert!(c.iter().sum::<u32>() <= 7);
        }
        assert_eq!(lattice_simplex(2, 2).len(), 6);
        assert_eq!(binomial(12, 2), 66);
    }

    #[test]
    fn every_class_generates() {
        for class in [InstanceClass::StandardSimplex, InstanceClass::GeneralSimplex, InstanceClass::ArbitraryPolytope] {
            for interior in [false, true] {
                let spec = InstanceSpec { n: 3, d: 8, t: 10, class, l: 3, seed: 7, coef_max: 10, interior };
                let f = spec.generate().unwrap();
                assert_eq!(f.n(), 3);
                assert!(f.degree() <= 8);
                let part = support_partition(&f);
                assert!(!part.gamma.is_empty(), "{class} {interior}");
                let c = simplex_cover(&part.lambda_set(), &part.gamma_set(), AnchorRule::default());
                assert!(c.is_ok(), "{class}");
            }
        }
    }

    #[test]
    fn class_names_roundtrip() {
        for class in [InstanceClass::StandardSimplex, InstanceClass::GeneralSimplex, InstanceClass::ArbitraryPolytope] {
            assert_eq!(class.to_string().parse::<InstanceClass>().unwrap(), class);
        }
    }
}
