//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Rational;

/// maximize cᵀx subject to Ax = b, x ≥ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
}

impl LpProblem {
    fn check(&self) -> Result<()> {
        let n = self.objective.len();
        if self.a.len() != self.b.len() {
            return Err(Error::DimensionMismatch { expected: self.a.len(), found: self.b.len() });
        }
        if let Some(row) = self.a.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        Ok(())
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = Rational::one() / &self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Maximizes `cost` over columns `allowed`; returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let reduced = |j: usize| -> Rational {
                let mut r = cost[j].clone();
                for (i, &bj) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() && !cost[bj].is_zero() {
                        r -= &cost[bj] * &self.rows[i][j];
                    }
                }
                r
            };
            let Some(enter) = (0..allowed).find(|&j| !self.basis.contains(&j) && reduced(j).is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Optimal basic feasible solution, or `LpInfeasible` / `LpUnbounded`.
pub fn lp_solve_exact(p: &LpProblem) -> Result<Vec<Rational>> {
    p.check()?;
    let n = p.objective.len();
    let m = p.a.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (arow, bi)) in p.a.iter().zip(&p.b).enumerate() {
        let flip = bi.is_negative();
        let mut row: Vec<Rational> = arow.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        row.push(if flip { -bi } else { bi.clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..width).collect(), width };

    let mut phase1 = vec![Rational::zero(); width];
    for c in phase1.iter_mut().skip(n) {
        *c = -Rational::one();
    }
    t.optimize(&phase1, width);
    let infeasibility: Rational =
        t.basis.iter().enumerate().filter(|&(_, &bj)| bj >= n).map(|(i, _)| t.rhs(i).clone()).sum();
    if infeasibility.is_positive() {
        return Err(Error::LpInfeasible);
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut cost = p.objective.clone();
    cost.resize(width, Rational::zero());
    if !t.optimize(&cost, n) {
        return Err(Error::LpUnbounded);
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bj) in t.basis.iter().enumerate() {
        if bj < n {
            x[bj] = t.rhs(i).clone();
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn two_circuit_weights() {
        let p = LpProblem {
            objective: ints(&[0, 0, 0, 1]),
            a: vec![ints(&[1, 1, 1, 1]), ints(&[0, 4, 0, 4]), ints(&[0, 0, 4, 4])],
            b: ints(&[1, 2, 1]),
        };
        assert_eq!(lp_solve_exact(&p).unwrap(), vec![frac(1, 2), frac(1, 4), int(0), frac(1, 4)]);
    }

    #[test]
    fn vertex_weight_one() {
        let p = LpProblem {
            objective: ints(&[0, 1, 0]),
            a: vec![ints(&[1, 1, 1]), ints(&[0, 2, 4])],
            b: ints(&[1, 2]),
        };
        assert_eq!(lp_solve_exact(&p).unwrap(), ints(&[0, 1, 0]));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = LpProblem { objective: ints(&[1, 0]), a: vec![ints(&[1, 1]), ints(&[0, 2])], b: ints(&[1, 4]) };
        assert!(matches!(lp_solve_exact(&p), Err(Error::LpInfeasible)));
        let p = LpProblem { objective: ints(&[1, 0]), a: vec![ints(&[1, -1])], b: ints(&[1]) };
        assert!(matches!(lp_solve_exact(&p), Err(Error::LpUnbounded)));
    }

    #[test]
    fn redundant_rows_and_negative_rhs() {
        let p = LpProblem {
            objective: ints(&[1, 2]),
            a: vec![ints(&[1, 1]), ints(&[2, 2]), ints(&[-1, -1])],
            b: ints(&[3, 6, -3]),
        };
        assert_eq!(lp_solve_exact(&p).unwrap(), ints(&[0, 3]));
    }
}
