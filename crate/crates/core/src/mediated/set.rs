use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{med_seq, MediatedSet, MediatedTriple, RationalPoint};
use crate::error::{Error, Result};
use crate::linalg::{affine_coordinates, Affine};
use crate::rat::{self, Rational};

/// Parameter t with `b = (1 − t)·a1 + t·a2`, required to lie in (0, 1).
fn segment_parameter(a1: &RationalPoint, a2: &RationalPoint, b: &RationalPoint) -> Result<Rational> {
    if a1.dim() != a2.dim() || a1.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a1.dim(), found: b.dim().min(a2.dim()) });
    }
    let k = (0..a1.dim()).find(|&i| a1.0[i] != a2.0[i]).ok_or(Error::NotOnSegment)?;
    let t = (&b.0[k] - &a1.0[k]) / (&a2.0[k] - &a1.0[k]);
    if !t.is_positive() || t >= Rational::one() || a1.lerp(a2, &t) != *b {
        return Err(Error::NotOnSegment);
    }
    Ok(t)
}

/// {a1, a2}-rational mediated set containing b.
pub fn l_med_set(a1: &RationalPoint, a2: &RationalPoint, b: &RationalPoint) -> Result<MediatedSet> {
    let t = segment_parameter(a1, a2, b)?;
    let p = rat::to_u128(t.denom())?;
    let q = rat::to_u128(t.numer())?;
    let pr = Rational::from_integer(BigInt::from(p));
    let at = |s: u128| -> RationalPoint {
        match s {
            0 => a1.clone(),
            s if s == p => a2.clone(),
            s => a1.lerp(a2, &(Rational::from_integer(BigInt::from(s)) / &pr)),
        }
    };
    let mut set = MediatedSet::new(vec![a1.clone(), a2.clone()]);
    set.absorb(med_seq(p, q)?.into_iter().map(|s| MediatedTriple::new(at(s.u), at(s.v), at(s.w))));
    Ok(set)
}

/// Barycentric numerators q and common denominator p of `b` over `trellis`.
fn barycentric(trellis: &[RationalPoint], b: &RationalPoint) -> Result<(Vec<BigInt>, BigInt)> {
    if trellis.len() < 2 {
        return Err(Error::InvalidArgument("trellis needs at least two points".into()));
    }
    if trellis.iter().any(|a| a.dim() != b.dim()) {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: trellis[0].dim() });
    }
    let pts: Vec<Vec<Rational>> = trellis.iter().map(|a| a.0.clone()).collect();
    let w = match affine_coordinates(&pts, &b.0) {
        Affine::Unique(w) => w,
        Affine::Degenerate => return Err(Error::DegenerateTrellis),
        Affine::Inconsistent => return Err(Error::NotInterior(b.to_string())),
    };
    if w.iter().any(|x| !x.is_positive()) {
        return Err(Error::NotInterior(b.to_string()));
    }
    let p = w.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let pr = Rational::from_integer(p.clone());
    let q = w.iter().map(|x| (x * &pr).to_integer()).collect();
    Ok((q, p))
}

/// `Σ q_j a_j / Σ q_j`.
fn combination(points: &[&RationalPoint], q: &[BigInt]) -> RationalPoint {
    let total: BigInt = q.iter().sum();
    let mut acc = RationalPoint::zeros(points[0].dim());
    for (a, qj) in points.iter().zip(q) {
        acc = acc.add(&a.scale(&Rational::new(qj.clone(), total.clone())));
    }
    acc
}

/// T-rational mediated set containing b, chaining b through the tails of the trellis.
pub fn med_set(trellis: &[RationalPoint], b: &RationalPoint) -> Result<MediatedSet> {
    let (q, _) = barycentric(trellis, b)?;
    let m = trellis.len();
    let mut set = MediatedSet::new(trellis.to_vec());
    let mut prev = b.clone();
    for k in 0..m - 2 {
        let tail: Vec<&RationalPoint> = trellis[k + 1..].iter().collect();
        let next = combination(&tail, &q[k + 1..]);
        set.absorb(l_med_set(&trellis[k], &next, &prev)?.triples);
        prev = next;
    }
    set.absorb(l_med_set(&trellis[m - 2], &trellis[m - 1], &prev)?.triples);
    Ok(set)
}

/// Segment variant keeping odd denominators and even numerators off b.
pub fn l_med_set_odd(a1: &RationalPoint, a2: &RationalPoint, b: &RationalPoint) -> Result<MediatedSet> {
    if !a1.is_odd_even() || !a2.is_odd_even() || !b.has_odd_denominators() {
        return Err(Error::InvalidArgument("odd variant needs even-numerator/odd-denominator endpoints".into()));
    }
    let t = segment_parameter(a1, a2, b)?;
    let r = [a1, a2, b]
        .iter()
        .flat_map(|p| p.0.iter().map(|c| c.denom().clone()))
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let rr = Rational::from_integer(r.clone());
    let half_r = Rational::new(r.clone(), BigInt::from(2));
    let back = Rational::new(BigInt::from(2), r);
    let lift = |p: &RationalPoint| p.scale(&half_r);
    let unlift = |s: MediatedSet| s.triples.into_iter().map(move |t| {
        MediatedTriple::new(t.u.scale(&back), t.v.scale(&back), t.w.scale(&back))
    });
    let mut set = MediatedSet::new(vec![a1.clone(), a2.clone()]);
    if b.scale(&rr).is_even_lattice() {
        set.absorb(unlift(l_med_set(&lift(a1), &lift(a2), &lift(b))?));
        return Ok(set);
    }
    let (near, far) = if t <= rat::half() { (a1, a2) } else { (a2, a1) };
    let reflected = b.scale(&rat::int(2)).sub(near);
    set.absorb([MediatedTriple::new(b.clone(), near.clone(), reflected.clone())]);
    if reflected != *far {
        set.absorb(unlift(l_med_set(&lift(near), &lift(far), &lift(&reflected))?));
    }
    Ok(set)
}

/// T-rational mediated set containing the lattice point b in which every
/// point other than b has odd denominators and even numerators.
pub fn med_set_odd(trellis: &[RationalPoint], b: &RationalPoint) -> Result<MediatedSet> {
    if !trellis.iter().all(RationalPoint::is_even_lattice) {
        return Err(Error::InvalidArgument("odd variant needs an even trellis".into()));
    }
    if !b.is_lattice() {
        return Err(Error::InvalidArgument("odd variant needs a lattice point".into()));
    }
    let (q, _) = barycentric(trellis, b)?;
    let mut set = MediatedSet::new(trellis.to_vec());
    let pts: Vec<&RationalPoint> = trellis.iter().collect();
    odd_rec(&mut set, b.clone(), pts, q)?;
    Ok(set)
}

fn reduce(q: &mut [BigInt]) {
    let g = q.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_one() && !g.is_zero() {
        for x in q.iter_mut() {
            *x /= &g;
        }
    }
}

fn odd_rec(set: &mut MediatedSet, b: RationalPoint, pts: Vec<&RationalPoint>, mut q: Vec<BigInt>) -> Result<()> {
    reduce(&mut q);
    if pts.len() == 2 {
        set.absorb(l_med_set_odd(pts[0], pts[1], &b)?.triples);
        return Ok(());
    }
    let p: BigInt = q.iter().sum();
    let peel = if p.is_even() { q.iter().position(|x| x.is_odd()) } else { q.iter().position(|x| x.is_even()) };
    match peel {
        Some(i) => {
            let rest: Vec<&RationalPoint> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, a)| *a).collect();
            let rest_q: Vec<BigInt> = q.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
            let b1 = combination(&rest, &rest_q);
            set.absorb(l_med_set_odd(pts[i], &b1, &b)?.triples);
            odd_rec(set, b1, rest, rest_q)
        }
        None => {
            // All weights odd: split off the last two points, sharing the rest.
            let m = pts.len();
            let mut q_tail: Vec<BigInt> = q[..m - 2].to_vec();
            q_tail.push(&q[m - 2] + &q[m - 1]);
            let mut left: Vec<&RationalPoint> = pts[..m - 2].to_vec();
            left.push(pts[m - 2]);
            let mut right: Vec<&RationalPoint> = pts[..m - 2].to_vec();
            right.push(pts[m - 1]);
            let b1 = combination(&left, &q_tail);
            let b2 = combination(&right, &q_tail);
            set.absorb(l_med_set_odd(&b1, &b2, &b)?.triples);
            odd_rec(set, b1, left, q_tail.clone())?;
            odd_rec(set, b2, right, q_tail)
        }
    }
}
