//! Rational mediated sets: sequences on a segment, sets over a trellis,
//! and the odd-denominator variant.

mod seq;
mod set;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::poly::Exponent;
use crate::rat::{self, Rational};

pub use seq::{brute_min_med_seq, is_mediated_sequence, med_seq, med_seq_size_bound, SeqTriple};
pub use set::{l_med_set, l_med_set_odd, med_set, med_set_odd};

/// Point of ℚⁿ, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(pub Vec<Rational>);

impl RationalPoint {
    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn zeros(n: usize) -> Self {
        RationalPoint(vec![Rational::from_integer(0.into()); n])
    }

    pub fn add(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rational) -> RationalPoint {
        RationalPoint(self.0.iter().map(|a| a * k).collect())
    }

    pub fn midpoint(&self, other: &RationalPoint) -> RationalPoint {
        self.add(other).scale(&rat::half())
    }

    /// `(1 − t)·self + t·other`.
    pub fn lerp(&self, other: &RationalPoint, t: &Rational) -> RationalPoint {
        self.add(&other.sub(self).scale(t))
    }

    pub fn is_lattice(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn is_even_lattice(&self) -> bool {
        self.0.iter().all(rat::is_even_integer)
    }

    pub fn has_odd_denominators(&self) -> bool {
        self.0.iter().all(|c| num_integer::Integer::is_odd(c.denom()))
    }

    /// Every coordinate has even numerator and odd denominator.
    pub fn is_odd_even(&self) -> bool {
        self.0.iter().all(rat::has_even_numerator_odd_denominator)
    }

    /// Largest coordinate denominator.
    pub fn max_denominator(&self) -> num_bigint::BigInt {
        self.0.iter().map(|c| c.denom().clone()).max().unwrap_or_else(|| 1.into())
    }

    /// Exponent vector if this is a nonnegative lattice point.
    pub fn to_exponent(&self) -> Option<Exponent> {
        let mut v = Vec::with_capacity(self.0.len());
        for c in &self.0 {
            if !c.is_integer() {
                return None;
            }
            let x: u32 = num_traits::ToPrimitive::to_u32(c.numer())?;
            v.push(x);
        }
        Some(Exponent::new(v))
    }
}

impl From<&Exponent> for RationalPoint {
    fn from(e: &Exponent) -> Self {
        RationalPoint(e.to_rationals())
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rat::to_short).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `(u, v, w)` with `u = (v + w)/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MediatedTriple {
    pub u: RationalPoint,
    pub v: RationalPoint,
    pub w: RationalPoint,
}

impl MediatedTriple {
    pub fn new(u: RationalPoint, v: RationalPoint, w: RationalPoint) -> Self {
        MediatedTriple { u, v, w }
    }

    pub fn is_valid(&self) -> bool {
        self.v != self.w && self.v.midpoint(&self.w) == self.u
    }
}

impl fmt::Display for MediatedTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}, {}]", self.u, self.v, self.w)
    }
}

/// Anchors (the generating points) plus the triples justifying every other point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MediatedSet {
    pub anchors: Vec<RationalPoint>,
    pub triples: Vec<MediatedTriple>,
}

impl MediatedSet {
    pub fn new(anchors: Vec<RationalPoint>) -> Self {
        MediatedSet { anchors, triples: Vec::new() }
    }

    /// Appends triples whose u-point is not yet justified.
    pub fn absorb(&mut self, triples: impl IntoIterator<Item = MediatedTriple>) {
        let mut seen: HashSet<RationalPoint> = self.triples.iter().map(|t| t.u.clone()).collect();
        seen.extend(self.anchors.iter().cloned());
        for t in triples {
            if seen.insert(t.u.clone()) {
                self.triples.push(t);
            }
        }
    }

    /// M = anchors ∪ u-points.
    pub fn points(&self) -> BTreeSet<RationalPoint> {
        self.anchors.iter().cloned().chain(self.triples.iter().map(|t| t.u.clone())).collect()
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.anchors.contains(p) || self.triples.iter().any(|t| &t.u == p)
    }

    /// Exact check of the mediated-set conditions; returns the first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let pts = self.points();
        let mut us = HashSet::new();
        for t in &self.triples {
            if !t.is_valid() {
                return Err(format!("triple {t} is not a proper average"));
            }
            if !pts.contains(&t.v) || !pts.contains(&t.w) {
                return Err(format!("triple {t} uses a point outside the set"));
            }
            if self.anchors.contains(&t.u) {
                return Err(format!("triple {t} re-derives an anchor"));
            }
            if !us.insert(&t.u) {
                return Err(format!("point {} is derived twice", t.u));
            }
        }
        Ok(())
    }

    /// Largest denominator over all points.
    pub fn max_denominator(&self) -> num_bigint::BigInt {
        self.points().iter().map(RationalPoint::max_denominator).max().unwrap_or_else(|| 1.into())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let enc = |p: &RationalPoint| -> Vec<[String; 2]> {
            p.0.iter().map(|c| [c.numer().to_string(), c.denom().to_string()]).collect()
        };
        let triples: Vec<TripleJson> =
            self.triples.iter().map(|t| TripleJson { u: enc(&t.u), v: enc(&t.v), w: enc(&t.w) }).collect();
        serde_json::to_value(triples).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    u: Vec<[String; 2]>,
    v: Vec<[String; 2]>,
    w: Vec<[String; 2]>,
}
