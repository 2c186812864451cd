//! Simplex covers of the negative support by trellises drawn from Λ.

mod lp;

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Circuit, Exponent};
use crate::rat::Rational;

pub use lp::{lp_solve_exact, LpProblem};

/// How cover sweeps pick the anchor α₀.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AnchorRule {
    /// α₀ is the zero exponent whenever it belongs to Λ, else the smallest element of U.
    #[default]
    PreferConstant,
    /// α₀ is always the lexicographically smallest element of U.
    Lexicographic,
}

/// Circuits whose β's cover Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexCoverResult {
    pub circuits: Vec<Circuit>,
    /// Elements of Λ that ended up in no trellis.
    pub unused: Vec<Exponent>,
}

/// Weights over `lambda_set` maximizing the weight of `alpha0` among convex combinations equal to `beta`.
pub fn sim_sel(beta: &Exponent, lambda_set: &[Exponent], alpha0: &Exponent) -> Result<Vec<Rational>> {
    let k = lambda_set
        .iter()
        .position(|a| a == alpha0)
        .ok_or_else(|| Error::InvalidArgument(format!("anchor {alpha0} is not in Λ")))?;
    let n = beta.dim();
    let mut a = vec![vec![Rational::one(); lambda_set.len()]];
    for i in 0..n {
        a.push(lambda_set.iter().map(|al| Rational::from_integer(al.entries()[i].into())).collect());
    }
    let mut b = vec![Rational::one()];
    b.extend(beta.to_rationals());
    let mut objective = vec![Rational::zero(); lambda_set.len()];
    objective[k] = Rational::one();
    match lp_solve_exact(&LpProblem { objective, a, b }) {
        Err(Error::LpInfeasible) => Err(Error::CoverInfeasible(beta.to_string())),
        other => other,
    }
}

fn circuit_from_weights(beta: &Exponent, lambda_set: &[Exponent], w: &[Rational]) -> Circuit {
    let mut pairs: Vec<(Exponent, Rational)> =
        lambda_set.iter().zip(w).filter(|(_, x)| x.is_positive()).map(|(a, x)| (a.clone(), x.clone())).collect();
    pairs.sort_by(|x, y| x.0.cmp(&y.0));
    let (trellis, weights) = pairs.into_iter().unzip();
    Circuit { trellis, beta: beta.clone(), weights }
}

struct Sweep<'a> {
    lambda: &'a [Exponent],
    rule: AnchorRule,
    zero: Option<Exponent>,
}

impl Sweep<'_> {
    /// Anchor candidates for covering β: preferred anchor first, then U, then the rest of Λ.
    fn anchors(&self, u: &BTreeSet<Exponent>) -> Vec<Exponent> {
        let mut out = Vec::new();
        if self.rule == AnchorRule::PreferConstant {
            if let Some(z) = &self.zero {
                out.push(z.clone());
            }
        }
        for a in u.iter().chain(self.lambda) {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
        out
    }

    fn circuit_for_beta(&self, beta: &Exponent, u: &BTreeSet<Exponent>) -> Result<Circuit> {
        for a0 in self.anchors(u) {
            let w = sim_sel(beta, self.lambda, &a0)?;
            let k = self.lambda.iter().position(|a| a == &a0).expect("anchor in Λ");
            if w[k].is_positive() {
                return Ok(circuit_from_weights(beta, self.lambda, &w));
            }
        }
        Err(Error::CoverInfeasible(beta.to_string()))
    }

    /// First β (cycling from `start`) that admits a circuit through `a0`.
    fn circuit_for_anchor(&self, a0: &Exponent, gamma: &[Exponent], start: usize) -> Result<Option<(usize, Circuit)>> {
        let k = self.lambda.iter().position(|a| a == a0).expect("anchor in Λ");
        for off in 0..gamma.len() {
            let j = (start + off) % gamma.len();
            let w = sim_sel(&gamma[j], self.lambda, a0)?;
            if w[k].is_positive() {
                return Ok(Some((j, circuit_from_weights(&gamma[j], self.lambda, &w))));
            }
        }
        Ok(None)
    }
}

/// Three-phase sweep: joint sweep over U and V, then drain whichever remains.
pub fn simplex_cover(lambda_set: &[Exponent], gamma_set: &[Exponent], rule: AnchorRule) -> Result<SimplexCoverResult> {
    let mut lambda: Vec<Exponent> = lambda_set.to_vec();
    lambda.sort();
    lambda.dedup();
    let mut gamma: Vec<Exponent> = gamma_set.to_vec();
    gamma.sort();
    gamma.dedup();
    if gamma.is_empty() {
        return Ok(SimplexCoverResult { circuits: Vec::new(), unused: lambda });
    }
    if lambda.is_empty() {
        return Err(Error::CoverInfeasible(gamma[0].to_string()));
    }
    let zero = lambda.iter().find(|a| a.is_zero()).cloned();
    let sweep = Sweep { lambda: &lambda, rule, zero };
    let mut u: BTreeSet<Exponent> = lambda.iter().cloned().collect();
    let mut v: BTreeSet<Exponent> = gamma.iter().cloned().collect();
    let mut used: BTreeSet<Exponent> = BTreeSet::new();
    let mut circuits = Vec::new();
    let mut record = |c: Circuit, u: &mut BTreeSet<Exponent>, used: &mut BTreeSet<Exponent>| {
        for a in &c.trellis {
            u.remove(a);
            used.insert(a.clone());
        }
        circuits.push(c);
    };

    while !u.is_empty() && !v.is_empty() {
        let beta = v.pop_first().expect("nonempty");
        let c = sweep.circuit_for_beta(&beta, &u)?;
        record(c, &mut u, &mut used);
    }
    if !v.is_empty() {
        while let Some(beta) = v.pop_first() {
            if u.is_empty() {
                u = lambda.iter().cloned().collect();
            }
            let c = sweep.circuit_for_beta(&beta, &u)?;
            record(c, &mut u, &mut used);
        }
    } else {
        let mut cursor = 0;
        while let Some(a0) = u.first().cloned() {
            match sweep.circuit_for_anchor(&a0, &gamma, cursor)? {
                Some((j, c)) => {
                    cursor = j + 1;
                    record(c, &mut u, &mut used);
                }
                None => {
                    u.remove(&a0);
                }
            }
        }
    }
    let unused = lambda.iter().filter(|a| !used.contains(*a)).cloned().collect();
    Ok(SimplexCoverResult { circuits, unused })
}
