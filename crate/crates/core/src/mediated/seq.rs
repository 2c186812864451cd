//! One-dimensional (0,p)-mediated sequences.

use std::collections::HashSet;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Integer triple with `2u = v + w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeqTriple {
    pub u: u128,
    pub v: u128,
    pub w: u128,
}

impl SeqTriple {
    pub const fn new(u: u128, v: u128, w: u128) -> Self {
        SeqTriple { u, v, w }
    }

    fn shift(self, s: u128) -> Self {
        SeqTriple::new(self.u + s, self.v + s, self.w + s)
    }

    fn reflect(self, p: u128) -> Self {
        SeqTriple::new(p - self.u, p - self.v, p - self.w)
    }

    fn scale(self, k: u128) -> Self {
        SeqTriple::new(self.u * k, self.v * k, self.w * k)
    }
}

/// Triples whose u-points together with {0, p} form a (0,p)-mediated sequence containing q.
pub fn med_seq(p: u128, q: u128) -> Result<Vec<SeqTriple>> {
    if q == 0 || q >= p {
        return Err(Error::InvalidArgument(format!("med_seq needs 0 < q < p, got p={p}, q={q}")));
    }
    if p > u128::MAX / 4 {
        return Err(Error::Overflow(format!("med_seq denominator {p} too large")));
    }
    Ok(med_seq_rec(p, q))
}

fn med_seq_rec(p: u128, q: u128) -> Vec<SeqTriple> {
    let g = p.gcd(&q);
    let (u, v) = (p / g, q / g);
    let raw: Vec<SeqTriple> = if u % 2 == 0 {
        let h = u / 2;
        if v == h {
            vec![SeqTriple::new(1, 0, 2)]
        } else if v < h {
            let mut a = med_seq_rec(h, v);
            a.push(SeqTriple::new(h, 0, u));
            a
        } else {
            let mut a = vec![SeqTriple::new(h, 0, u)];
            a.extend(med_seq_rec(h, v - h).into_iter().map(|t| t.shift(h)));
            a
        }
    } else if v % 2 == 0 {
        let k = v.trailing_zeros();
        let r = v >> k;
        let mut a = Vec::new();
        let mut prev = 0;
        for i in 1..=k {
            let x = v - (v >> i);
            a.push(SeqTriple::new(x, prev, v));
            prev = x;
        }
        let base = v - r;
        if v == u - r {
            a.push(SeqTriple::new(v, base, u));
        } else {
            a.push(SeqTriple::new((base + u) / 2, base, u));
            if v < u - r {
                a.extend(med_seq_rec((u + r - v) / 2, r).into_iter().map(|t| t.shift(base)));
            } else {
                let s = (v + u - r) / 2;
                a.extend(med_seq_rec((u + r - v) / 2, (v + r - u) / 2).into_iter().map(|t| t.shift(s)));
            }
        }
        a
    } else {
        med_seq_rec(u, u - v).into_iter().map(|t| t.reflect(u)).collect()
    };
    let mut seen = HashSet::new();
    raw.into_iter().filter(|t| seen.insert(t.u)).map(|t| t.scale(g)).collect()
}

/// Lemma-style size bound ½(log₂p + 3/2)².
pub fn med_seq_size_bound(p: u128) -> f64 {
    0.5 * ((p as f64).log2() + 1.5).powi(2)
}

/// Checks that `{0, p} ∪ u-points` is a (0,p)-mediated sequence containing q.
pub fn is_mediated_sequence(p: u128, q: u128, triples: &[SeqTriple]) -> bool {
    let mut pts: HashSet<u128> = triples.iter().map(|t| t.u).collect();
    pts.insert(0);
    pts.insert(p);
    pts.contains(&q)
        && triples.iter().all(|t| {
            2 * t.u == t.v + t.w && t.v != t.w && pts.contains(&t.v) && pts.contains(&t.w) && t.u > 0 && t.u < p
        })
}

const BRUTE_MAX_P: u32 = 64;

/// Exact minimal size (endpoints included) of a (0,p)-mediated sequence containing q.
pub fn brute_min_med_seq(p: u32, q: u32) -> Result<usize> {
    if p > BRUTE_MAX_P {
        return Err(Error::BudgetExceeded);
    }
    if q == 0 || q >= p {
        return Err(Error::InvalidArgument(format!("brute_min_med_seq needs 0 < q < p, got p={p}, q={q}")));
    }
    let start: u128 = 1 | (1u128 << p) | (1u128 << q);
    let mut search = Brute { p, failed: HashSet::new() };
    let mut bound = start.count_ones() as usize;
    loop {
        search.failed.clear();
        if search.dfs(start, bound) {
            return Ok(bound);
        }
        bound += 1;
    }
}

struct Brute {
    p: u32,
    failed: HashSet<u128>,
}

impl Brute {
    fn justified(&self, set: u128, x: u32) -> bool {
        let lo = (2 * x).saturating_sub(self.p);
        (lo..x).any(|a| set >> a & 1 == 1 && set >> (2 * x - a) & 1 == 1)
    }

    /// Options `(a, 2x − a)` to justify x, with the number of new points each adds.
    fn options(&self, set: u128, x: u32) -> Vec<(u128, u32)> {
        let lo = (2 * x).saturating_sub(self.p);
        let mut out: Vec<(u128, u32)> = (lo..x)
            .map(|a| {
                let add = (1u128 << a) | (1u128 << (2 * x - a));
                (add & !set, (add & !set).count_ones())
            })
            .collect();
        out.sort_by_key(|&(_, c)| c);
        out
    }

    fn dfs(&mut self, set: u128, bound: usize) -> bool {
        let size = set.count_ones() as usize;
        if size > bound {
            return false;
        }
        if self.failed.contains(&set) {
            return false;
        }
        let mut best: Option<Vec<(u128, u32)>> = None;
        for x in 1..self.p {
            if set >> x & 1 == 0 || self.justified(set, x) {
                continue;
            }
            let opts = self.options(set, x);
            let room = bound - size;
            let viable: Vec<(u128, u32)> = opts.into_iter().filter(|&(_, c)| c as usize <= room).collect();
            if viable.is_empty() {
                self.failed.insert(set);
                return false;
            }
            if best.as_ref().map_or(true, |b| viable.len() < b.len()) {
                best = Some(viable);
            }
        }
        let Some(options) = best else {
            return true;
        };
        for (add, _) in options {
            if self.dfs(set | add, bound) {
                return true;
            }
        }
        self.failed.insert(set);
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(u: u128, v: u128, w: u128) -> SeqTriple {
        SeqTriple::new(u, v, w)
    }

    #[test]
    fn small_goldens() {
        assert_eq!(med_seq(2, 1).unwrap(), vec![t(1, 0, 2)]);
        assert_eq!(med_seq(4, 1).unwrap(), vec![t(1, 0, 2), t(2, 0, 4)]);
        assert_eq!(med_seq(3, 2).unwrap(), vec![t(1, 0, 2), t(2, 1, 3)]);
        assert_eq!(med_seq(11, 2).unwrap(), vec![t(1, 0, 2), t(6, 1, 11), t(4, 6, 2), t(3, 4, 2), t(2, 3, 1)]);
    }

    #[test]
    fn gcd_scaling() {
        let a = med_seq(6, 4).unwrap();
        assert!(is_mediated_sequence(6, 4, &a));
        assert_eq!(a, med_seq(3, 2).unwrap().into_iter().map(|x| x.scale(2)).collect::<Vec<_>>());
    }

    #[test]
    fn exhaustive_small_p() {
        for p in 2..300u128 {
            for q in 1..p {
                let a = med_seq(p, q).unwrap();
                assert!(is_mediated_sequence(p, q, &a), "p={p} q={q} {a:?}");
                assert!((a.len() as f64) < med_seq_size_bound(p), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(med_seq(5, 0).is_err());
        assert!(med_seq(5, 5).is_err());
        assert!(brute_min_med_seq(65, 1).is_err());
    }

    #[test]
    fn brute_goldens() {
        assert_eq!(brute_min_med_seq(2, 1).unwrap(), 3);
        assert_eq!(brute_min_med_seq(8, 1).unwrap(), 5);
        assert_eq!(brute_min_med_seq(11, 2).unwrap(), 6);
    }

    #[test]
    fn brute_never_exceeds_construction() {
        for p in 2..24u32 {
            for q in 1..p {
                let built = med_seq(p as u128, q as u128).unwrap().len() + 2;
                assert!(brute_min_med_seq(p, q).unwrap() <= built);
            }
        }
    }
}
