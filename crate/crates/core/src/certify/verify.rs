use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::cert::{CertMode, ExactTriple, SobsCertificate};
use super::check_cone;
use crate::mediated::RationalPoint;
use crate::poly::{to_pn, SparsePoly};
use crate::rat::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    HashMismatch,
    DimensionMismatch,
    NotMidpoint(String),
    InvalidExponent(String),
    ConeViolation(String),
    NegativePassthrough(String),
    ReconstructionMismatch(String),
}

impl RejectReason {
    /// Stable short code.
    pub fn code(&self) -> &'static str {
        match self {
            RejectReason::HashMismatch => "hash mismatch",
            RejectReason::DimensionMismatch => "dimension mismatch",
            RejectReason::NotMidpoint(_) => "not a midpoint",
            RejectReason::InvalidExponent(_) => "invalid exponent",
            RejectReason::ConeViolation(_) => "cone violation",
            RejectReason::NegativePassthrough(_) => "negative passthrough",
            RejectReason::ReconstructionMismatch(_) => "reconstruction mismatch",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::HashMismatch | RejectReason::DimensionMismatch => f.write_str(self.code()),
            RejectReason::NotMidpoint(s)
            | RejectReason::InvalidExponent(s)
            | RejectReason::ConeViolation(s)
            | RejectReason::NegativePassthrough(s)
            | RejectReason::ReconstructionMismatch(s) => write!(f, "{}: {s}", self.code()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected(RejectReason),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

fn check_shape(t: &ExactTriple, n: usize, mode: CertMode) -> Result<(), RejectReason> {
    if t.u.dim() != n || t.v.dim() != n || t.w.dim() != n {
        return Err(RejectReason::DimensionMismatch);
    }
    if t.v.midpoint(&t.w) != t.u {
        return Err(RejectReason::NotMidpoint(format!("{} is not the midpoint of {} and {}", t.u, t.v, t.w)));
    }
    if t.v.coords().iter().chain(t.w.coords()).any(Signed::is_negative) {
        return Err(RejectReason::InvalidExponent(format!("negative coordinate in {} or {}", t.v, t.w)));
    }
    if mode == CertMode::Direct {
        let squares = |p: &RationalPoint| p.coords().iter().all(rat::has_even_numerator_odd_denominator);
        if !squares(&t.v) || !squares(&t.w) || !t.u.has_odd_denominators() {
            return Err(RejectReason::InvalidExponent(format!(
                "{} / {} / {} not real-valued squares on the whole space",
                t.u, t.v, t.w
            )));
        }
    }
    Ok(())
}

fn check_membership(t: &ExactTriple) -> Result<(), RejectReason> {
    if !check_cone(&t.a, &t.b, &t.c) {
        return Err(RejectReason::ConeViolation(format!(
            "(a,b,c) = ({}, {}, {}) at u = {}",
            rat::to_short(&t.a),
            rat::to_short(&t.b),
            rat::to_short(&t.c),
            t.u
        )));
    }
    Ok(())
}

/// Exact check that the certificate reconstructs f (or f̃) minus ξ with every triple in the cone.
pub fn verify_certificate(f: &SparsePoly, cert: &SobsCertificate) -> Verdict {
    match verify_inner(f, cert) {
        Ok(()) => Verdict::Accepted,
        Err(r) => Verdict::Rejected(r),
    }
}

fn verify_inner(f: &SparsePoly, cert: &SobsCertificate) -> Result<(), RejectReason> {
    if cert.poly_sha256 != f.sha256_hex() {
        return Err(RejectReason::HashMismatch);
    }
    if cert.n != f.n() {
        return Err(RejectReason::DimensionMismatch);
    }
    let n = f.n();
    let triples: Vec<&ExactTriple> = cert.triples().collect();
    triples.par_iter().try_for_each(|t| check_shape(t, n, cert.mode))?;

    let mut sum: BTreeMap<RationalPoint, Rational> = BTreeMap::new();
    let mut add = |p: &RationalPoint, v: Rational| {
        let e = sum.entry(p.clone()).or_insert_with(Rational::zero);
        *e += v;
    };
    let two = rat::int(2);
    for t in &triples {
        add(&t.v, &two * &t.a);
        add(&t.w, t.b.clone());
        add(&t.u, -(&two * &t.c));
    }
    for (e, c) in &cert.passthrough {
        if e.dim() != n {
            return Err(RejectReason::DimensionMismatch);
        }
        if c.is_negative() {
            return Err(RejectReason::NegativePassthrough(e.to_string()));
        }
        if cert.mode == CertMode::Direct && !e.is_even() {
            return Err(RejectReason::InvalidExponent(format!("passthrough {e} is not a square")));
        }
        add(&RationalPoint::from(e), c.clone());
    }
    add(&RationalPoint::zeros(n), cert.xi.clone());

    let target = match cert.mode {
        CertMode::PnReduced => to_pn(f),
        CertMode::Direct => f.clone(),
    };
    for (e, c) in target.terms() {
        let p = RationalPoint::from(e);
        let got = sum.remove(&p).unwrap_or_else(Rational::zero);
        if &got != c {
            return Err(RejectReason::ReconstructionMismatch(format!(
                "coefficient of {p} is {} but should be {}",
                rat::to_short(&got),
                rat::to_short(c)
            )));
        }
    }
    if let Some((p, c)) = sum.into_iter().find(|(_, c)| !c.is_zero()) {
        return Err(RejectReason::ReconstructionMismatch(format!(
            "spurious term {} at {p}",
            rat::to_short(&c)
        )));
    }
    triples.par_iter().try_for_each(|t| check_membership(t))
}
