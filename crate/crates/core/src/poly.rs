//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{affine_coordinates, Affine};
use crate::rat::{self, Rational};

/// Exponent vector in ℕⁿ, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Exponent(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn scaled(&self, r: u32) -> Exponent {
        Exponent(self.0.iter().map(|e| e * r).collect())
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.0.iter().map(|&e| Rational::from_integer(BigInt::from(e))).collect()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    n: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl SparsePoly {
    pub fn zero(n: usize) -> Self {
        SparsePoly { n, terms: BTreeMap::new() }
    }

    /// Builds from distinct exponents; repeated exponents are an error.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut p = SparsePoly::zero(n);
        for (e, c) in terms {
            if e.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: e.dim() });
            }
            if p.terms.contains_key(&e) {
                return Err(Error::DuplicateExponent(e.to_string()));
            }
            if !c.is_zero() {
                p.terms.insert(e, c);
            }
        }
        Ok(p)
    }

    /// Convenience constructor from integer data, used heavily in tests.
    pub fn from_ints(n: usize, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::from_terms(n, terms.iter().map(|(e, c)| (Exponent::new(e.to_vec()), rat::int(*c))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant(&self) -> Rational {
        self.coeff(&Exponent::zeros(self.n))
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    /// Adds `c·x^e`, dropping the term if it cancels.
    pub fn add_term(&mut self, e: Exponent, c: Rational) {
        assert_eq!(e.dim(), self.n, "exponent dimension");
        let entry = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// `f − ξ`.
    pub fn minus_constant(&self, xi: &Rational) -> SparsePoly {
        let mut g = self.clone();
        g.add_term(Exponent::zeros(self.n), -xi.clone());
        g
    }

    /// Largest absolute coefficient.
    pub fn coefficient_scale(&self) -> f64 {
        self.terms.values().map(|c| rat::to_f64(&c.abs())).fold(0.0, f64::max)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: f64 = e.entries().iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product();
                rat::to_f64(c) * m
            })
            .sum()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: PolyFile = serde_json::from_str(s)?;
        file.into_poly()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&PolyFile::from_poly(self)).expect("serializable")
    }

    /// Canonical text form; the certificate hash is taken over these bytes.
    pub fn canonical_string(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for (e, c) in &self.terms {
            s.push_str(&format!("{e}:{}\n", rat::to_pq(c)));
        }
        s
    }

    pub fn sha256_hex(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_string().as_bytes()))
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let a = c.abs();
            let mono: Vec<String> = e
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { format!("x{}", j + 1) } else { format!("x{}^{k}", j + 1) })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", rat::to_short(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", rat::to_short(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyFile {
    n: usize,
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    exp: Vec<u32>,
    coef: serde_json::Value,
}

impl PolyFile {
    fn into_poly(self) -> Result<SparsePoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            let coef = match &t.coef {
                serde_json::Value::String(s) => rat::parse_rational(s)?,
                serde_json::Value::Number(x) => rat::parse_rational(&x.to_string())?,
                other => return Err(Error::Parse(format!("coefficient must be a string or number, got {other}"))),
            };
            terms.push((Exponent::new(t.exp), coef));
        }
        SparsePoly::from_terms(self.n, terms)
    }

    fn from_poly(p: &SparsePoly) -> Self {
        PolyFile {
            n: p.n,
            terms: p
                .terms
                .iter()
                .map(|(e, c)| TermFile { exp: e.entries().to_vec(), coef: serde_json::Value::String(rat::to_short(c)) })
                .collect(),
        }
    }
}

/// Λ(f): even exponents with positive coefficient; Γ(f): the rest.
/// Both maps carry the raw coefficient of f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPartition {
    pub lambda: BTreeMap<Exponent, Rational>,
    pub gamma: BTreeMap<Exponent, Rational>,
}

impl SupportPartition {
    pub fn lambda_set(&self) -> Vec<Exponent> {
        self.lambda.keys().cloned().collect()
    }

    pub fn gamma_set(&self) -> Vec<Exponent> {
        self.gamma.keys().cloned().collect()
    }
}

pub fn support_partition(f: &SparsePoly) -> SupportPartition {
    let mut lambda = BTreeMap::new();
    let mut gamma = BTreeMap::new();
    for (e, c) in f.terms() {
        if e.is_even() && c.is_positive() {
            lambda.insert(e.clone(), c.clone());
        } else {
            gamma.insert(e.clone(), c.clone());
        }
    }
    SupportPartition { lambda, gamma }
}

/// PN-polynomial f̃: every non-Λ coefficient replaced by −|coefficient|.
pub fn to_pn(f: &SparsePoly) -> SparsePoly {
    let mut g = f.clone();
    for (e, c) in g.terms.iter_mut() {
        if !(e.is_even() && c.is_positive()) {
            *c = -c.abs();
        }
    }
    g
}

/// f(x₁ʳ, …, xₙʳ).
pub fn substitute_power(f: &SparsePoly, r: u32) -> SparsePoly {
    assert!(r >= 1, "substitution power must be positive");
    SparsePoly { n: f.n, terms: f.terms.iter().map(|(e, c)| (e.scaled(r), c.clone())).collect() }
}

/// Trellis with an interior point and its barycentric weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub trellis: Vec<Exponent>,
    pub beta: Exponent,
    pub weights: Vec<Rational>,
}

impl Circuit {
    /// Computes the weights of `beta`; fails unless `beta` is in the relative interior.
    pub fn new(trellis: Vec<Exponent>, beta: Exponent) -> Result<Self> {
        if trellis.iter().any(|a| !a.is_even()) {
            return Err(Error::InvalidArgument("trellis points must be even".into()));
        }
        let pts: Vec<Vec<Rational>> = trellis.iter().map(Exponent::to_rationals).collect();
        match affine_coordinates(&pts, &beta.to_rationals()) {
            Affine::Unique(w) if w.iter().all(|x| x.is_positive()) => Ok(Circuit { trellis, beta, weights: w }),
            Affine::Degenerate => Err(Error::DegenerateTrellis),
            _ => Err(Error::NotInterior(beta.to_string())),
        }
    }

    /// Smallest p with every weight equal to q_i/p.
    pub fn common_denominator(&self) -> BigInt {
        self.weights.iter().fold(BigInt::one(), |acc, w| num_integer::Integer::lcm(&acc, w.denom()))
    }

    /// Θ in floating point.
    pub fn circuit_number_f64(&self, coeffs: &[Rational]) -> f64 {
        self.weights
            .iter()
            .zip(coeffs)
            .map(|(l, c)| {
                let l = rat::to_f64(l);
                (rat::to_f64(c) / l).powf(l)
            })
            .product()
    }
}

const MAX_CIRCUIT_DENOMINATOR: u64 = 1 << 32;

/// Exact test of `Σ c_α x^α − d x^β ≥ 0` on ℝⁿ via `Π(c_α p/q_α)^{q_α} ≥ |d|^p`.
pub fn is_nonneg_circuit(c: &Circuit, coeffs: &[Rational], d: &Rational) -> Result<bool> {
    if coeffs.len() != c.trellis.len() {
        return Err(Error::DimensionMismatch { expected: c.trellis.len(), found: coeffs.len() });
    }
    if coeffs.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidArgument("circuit coefficients must be positive".into()));
    }
    let dd = if c.beta.is_even() {
        if !d.is_positive() {
            return Ok(true);
        }
        d.clone()
    } else {
        d.abs()
    };
    if dd.is_zero() {
        return Ok(true);
    }
    let p = c.common_denominator();
    let p_u = rat::to_u128(&p)?;
    if p_u > MAX_CIRCUIT_DENOMINATOR as u128 {
        return Err(Error::Overflow(format!("circuit denominator {p} exceeds 2^32")));
    }
    // Decide in log space when clearly separated; otherwise compare exactly.
    let theta = c.circuit_number_f64(coeffs);
    let lhs = theta.ln();
    let rhs = rat::to_f64(&dd).ln();
    if lhs.is_finite() && rhs.is_finite() && (lhs - rhs).abs() > 1e-9 * (1.0 + lhs.abs().max(rhs.abs())) {
        return Ok(lhs > rhs);
    }
    let pr = Rational::from_integer(p.clone());
    let mut left = Rational::one();
    for (w, cf) in c.weights.iter().zip(coeffs) {
        let q = (w * &pr).to_integer();
        let base = cf * &pr / Rational::from_integer(q.clone());
        left *= num_traits::pow(base, rat::to_u128(&q)? as usize);
    }
    let right = num_traits::pow(dd, p_u as usize);
    Ok(left >= right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};

    pub(crate) fn motzkin() -> SparsePoly {
        SparsePoly::from_ints(2, &[(&[4, 2], 1), (&[2, 4], 1), (&[0, 0], 1), (&[2, 2], -3)]).unwrap()
    }

    fn ex6() -> SparsePoly {
        SparsePoly::from_ints(
            2,
            &[(&[0, 0], 1), (&[4, 0], 1), (&[0, 4], 1), (&[1, 2], -1), (&[2, 1], -1), (&[1, 1], 5)],
        )
        .unwrap()
    }

    fn e(v: &[u32]) -> Exponent {
        Exponent::new(v.to_vec())
    }

    #[test]
    fn partition_motzkin() {
        let sp = support_partition(&motzkin());
        assert_eq!(sp.lambda_set(), vec![e(&[0, 0]), e(&[2, 4]), e(&[4, 2])]);
        assert_eq!(sp.gamma_set(), vec![e(&[2, 2])]);
    }

    #[test]
    fn partition_single_square() {
        let f = SparsePoly::from_ints(1, &[(&[2], 1)]).unwrap();
        let sp = support_partition(&f);
        assert_eq!(sp.lambda_set(), vec![e(&[2])]);
        assert!(sp.gamma.is_empty());
    }

    #[test]
    fn partition_quartic_mixed() {
        let sp = support_partition(&ex6());
        assert_eq!(sp.gamma_set(), vec![e(&[1, 1]), e(&[1, 2]), e(&[2, 1])]);
    }

    #[test]
    fn pn_flips_positive_odd_terms() {
        let g = to_pn(&ex6());
        assert_eq!(g.coeff(&e(&[1, 1])), int(-5));
        assert_eq!(g.coeff(&e(&[1, 2])), int(-1));
        assert_eq!(g.coeff(&e(&[0, 4])), int(1));
        assert_eq!(to_pn(&motzkin()), motzkin());
    }

    #[test]
    fn substitution() {
        let f = SparsePoly::from_ints(1, &[(&[2], 1), (&[1], -1)]).unwrap();
        let g = substitute_power(&f, 3);
        assert_eq!(g, SparsePoly::from_ints(1, &[(&[6], 1), (&[3], -1)]).unwrap());
        assert_eq!(substitute_power(&f, 1), f);
        let m3 = SparsePoly::from_ints(2, &[(&[12, 6], 1), (&[6, 12], 1), (&[0, 0], 1), (&[6, 6], -3)]).unwrap();
        assert_eq!(substitute_power(&motzkin(), 3), m3);
    }

    #[test]
    fn motzkin_circuit_number() {
        let c = Circuit::new(vec![e(&[0, 0]), e(&[4, 2]), e(&[2, 4])], e(&[2, 2])).unwrap();
        assert_eq!(c.weights, vec![frac(1, 3); 3]);
        let ones = vec![int(1); 3];
        assert!(is_nonneg_circuit(&c, &ones, &int(3)).unwrap());
        assert!(!is_nonneg_circuit(&c, &ones, &int(4)).unwrap());
        assert!(is_nonneg_circuit(&c, &ones, &int(0)).unwrap());
        assert!(is_nonneg_circuit(&c, &ones, &int(-100)).unwrap());
        assert!(!is_nonneg_circuit(&c, &ones, &frac(300_001, 100_000)).unwrap());
    }

    #[test]
    fn odd_beta_uses_absolute_value() {
        let c = Circuit::new(vec![e(&[0]), e(&[2])], e(&[1])).unwrap();
        let ones = vec![int(1); 2];
        assert!(is_nonneg_circuit(&c, &ones, &int(-2)).unwrap());
        assert!(!is_nonneg_circuit(&c, &ones, &frac(-201, 100)).unwrap());
    }

    #[test]
    fn json_roundtrip_and_duplicates() {
        let f = ex6();
        let g = SparsePoly::from_json_str(&f.to_json_string()).unwrap();
        assert_eq!(f, g);
        let dup = r#"{"n":1,"terms":[{"exp":[1],"coef":"1"},{"exp":[1],"coef":"2"}]}"#;
        assert!(matches!(SparsePoly::from_json_str(dup), Err(Error::DuplicateExponent(_))));
        let mixed = r#"{"n":1,"terms":[{"exp":[2],"coef":0.25},{"exp":[0],"coef":"-3/6"},{"exp":[1],"coef":"0"}]}"#;
        let h = SparsePoly::from_json_str(mixed).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.constant(), frac(-1, 2));
        let bad = r#"{"n":2,"terms":[{"exp":[1],"coef":"1"}]}"#;
        assert!(SparsePoly::from_json_str(bad).is_err());
    }

    #[test]
    fn hash_depends_on_coefficients() {
        let f = motzkin();
        let g = f.minus_constant(&int(1));
        assert_ne!(f.sha256_hex(), g.sha256_hex());
        assert_eq!(f.sha256_hex(), motzkin().sha256_hex());
        assert_eq!(f.sha256_hex().len(), 64);
    }

    #[test]
    fn display() {
        assert_eq!(motzkin().to_string(), "1 - 3*x1^2*x2^2 + x1^2*x2^4 + x1^4*x2^2");
    }
}
