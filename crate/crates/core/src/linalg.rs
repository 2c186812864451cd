//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rat::Rational;

/// Row-reduces `rows` in place and returns the pivot columns.
pub fn row_reduce(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][col];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
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
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    row_reduce(&mut rows, ncols).len()
}

/// Outcome of solving for barycentric coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Affine {
    /// Unique coefficients with `Σλ·p = target` and `Σλ = 1`.
    Unique(Vec<Rational>),
    /// Target is outside the affine hull.
    Inconsistent,
    /// Points are affinely dependent.
    Degenerate,
}

/// Solves `Σ λ_i points[i] = target`, `Σ λ_i = 1` exactly.
pub fn affine_coordinates(points: &[Vec<Rational>], target: &[Rational]) -> Affine {
    let m = points.len();
    let n = target.len();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n + 1);
    let mut ones: Vec<Rational> = vec![Rational::one(); m];
    ones.push(Rational::one());
    rows.push(ones);
    for k in 0..n {
        let mut row: Vec<Rational> = points.iter().map(|p| p[k].clone()).collect();
        row.push(target[k].clone());
        rows.push(row);
    }
    let pivots = row_reduce(&mut rows, m + 1);
    if pivots.contains(&m) {
        return Affine::Inconsistent;
    }
    if pivots.len() < m {
        return Affine::Degenerate;
    }
    Affine::Unique((0..m).map(|i| rows[i][m].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};

    fn pt(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn motzkin_barycenter() {
        let pts = vec![pt(&[0, 0]), pt(&[4, 2]), pt(&[2, 4])];
        let got = affine_coordinates(&pts, &pt(&[2, 2]));
        assert_eq!(got, Affine::Unique(vec![frac(1, 3); 3]));
    }

    #[test]
    fn segment_in_plane() {
        let pts = vec![pt(&[0, 0]), pt(&[4, 4])];
        assert_eq!(affine_coordinates(&pts, &pt(&[1, 1])), Affine::Unique(vec![frac(3, 4), frac(1, 4)]));
        assert_eq!(affine_coordinates(&pts, &pt(&[1, 2])), Affine::Inconsistent);
    }

    #[test]
    fn dependent_points() {
        let pts = vec![pt(&[0, 0]), pt(&[2, 2]), pt(&[4, 4])];
        assert_eq!(affine_coordinates(&pts, &pt(&[1, 1])), Affine::Degenerate);
        assert_eq!(rank(pts), 1);
    }
}
