//! Sparse LDLᵀ with a fixed symbolic pattern for the normal equations.

use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;

/// Symmetric pattern given as a list of cliques over `n` nodes.
pub struct SymbolicLdl {
    n: usize,
    /// perm[k] = original index eliminated at step k.
    perm: Vec<usize>,
    /// inv[i] = elimination step of original index i.
    inv: Vec<usize>,
    /// Strictly-lower column structure in permuted indices, sorted.
    cols: Vec<Vec<usize>>,
    /// For each permuted row i, the columns k < i with i ∈ cols[k] and the position of i inside cols[k].
    rows: Vec<Vec<(usize, usize)>>,
}

impl SymbolicLdl {
    /// Minimum-degree ordering by the elimination game.
    pub fn new(n: usize, cliques: &[Vec<usize>]) -> Self {
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for c in cliques {
            for &i in c {
                for &j in c {
                    if i != j {
                        adj[i].insert(j);
                    }
                }
            }
        }
        let mut eliminated = vec![false; n];
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..n).map(|i| Reverse((adj[i].len(), i))).collect();
        let mut perm = Vec::with_capacity(n);
        let mut structure: Vec<Vec<usize>> = Vec::with_capacity(n);
        while let Some(Reverse((deg, v))) = heap.pop() {
            if eliminated[v] || deg != adj[v].len() {
                continue;
            }
            eliminated[v] = true;
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            for &a in &nbrs {
                adj[a].remove(&v);
            }
            for (x, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[x + 1..] {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
            for &a in &nbrs {
                heap.push(Reverse((adj[a].len(), a)));
            }
            perm.push(v);
            structure.push(nbrs);
            adj[v].clear();
        }
        let mut inv = vec![0; n];
        for (k, &v) in perm.iter().enumerate() {
            inv[v] = k;
        }
        let cols: Vec<Vec<usize>> = structure
            .into_iter()
            .map(|s| {
                let mut c: Vec<usize> = s.into_iter().map(|i| inv[i]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        let mut rows = vec![Vec::new(); n];
        for (k, col) in cols.iter().enumerate() {
            for (pos, &i) in col.iter().enumerate() {
                rows[i].push((k, pos));
            }
        }
        SymbolicLdl { n, perm, inv, cols, rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.n + self.cols.iter().map(Vec::len).sum::<usize>()
    }

    /// Storage slot of the symmetric entry (i, j) given in original indices.
    pub fn slot(&self, i: usize, j: usize) -> Slot {
        let (a, b) = (self.inv[i], self.inv[j]);
        if a == b {
            return Slot::Diag(a);
        }
        let (row, col) = if a > b { (a, b) } else { (b, a) };
        let pos = self.cols[col].binary_search(&row).expect("entry inside symbolic pattern");
        Slot::Off(col, pos)
    }

    pub fn new_matrix(&self) -> SymMatrix {
        SymMatrix { diag: vec![0.0; self.n], off: self.cols.iter().map(|c| vec![0.0; c.len()]).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Diag(usize),
    Off(usize, usize),
}

/// Symmetric matrix stored on the symbolic pattern, permuted indices.
#[derive(Clone)]
pub struct SymMatrix {
    pub diag: Vec<f64>,
    pub off: Vec<Vec<f64>>,
}

impl SymMatrix {
    pub fn clear(&mut self) {
        self.diag.iter_mut().for_each(|v| *v = 0.0);
        self.off.iter_mut().for_each(|c| c.iter_mut().for_each(|v| *v = 0.0));
    }

    pub fn add(&mut self, slot: Slot, v: f64) {
        match slot {
            Slot::Diag(k) => self.diag[k] += v,
            Slot::Off(c, p) => self.off[c][p] += v,
        }
    }

    /// y = M x in permuted indices.
    fn mul(&self, sym: &SymbolicLdl, x: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for (k, col) in sym.cols.iter().enumerate() {
            for (&i, &v) in col.iter().zip(&self.off[k]) {
                y[i] += v * x[k];
                y[k] += v * x[i];
            }
        }
        y
    }
}

/// Numeric factor L D Lᵀ of a `SymMatrix`.
pub struct Factor {
    d: Vec<f64>,
    l: Vec<Vec<f64>>,
    /// Pivots replaced because they were numerically zero.
    pub dropped: usize,
}

impl Factor {
    /// Positive-definite factorization; numerically zero pivots are replaced so their direction is ignored.
    pub fn new(sym: &SymbolicLdl, m: &SymMatrix) -> Factor {
        Self::factor_with(sym, m, |j, dj| {
            if dj > 1e-14 * m.diag[j].abs() && dj >= f64::MIN_POSITIVE {
                None
            } else {
                Some(1e128)
            }
        })
    }

    /// Quasi-definite factorization with dynamic regularization: a pivot whose sign
    /// disagrees with `signs` (original indices) or whose magnitude is below `eps`
    /// is replaced by `±delta`.
    pub fn quasi_definite(sym: &SymbolicLdl, m: &SymMatrix, signs: &[f64], eps: f64, delta: f64) -> Factor {
        Self::factor_with(sym, m, |j, dj| {
            let sg = signs[sym.perm[j]];
            if dj * sg > eps {
                None
            } else {
                Some(sg * delta)
            }
        })
    }

    fn factor_with(sym: &SymbolicLdl, m: &SymMatrix, fix: impl Fn(usize, f64) -> Option<f64>) -> Factor {
        let n = sym.n;
        let mut d = vec![0.0; n];
        let mut l: Vec<Vec<f64>> = sym.cols.iter().map(|c| vec![0.0; c.len()]).collect();
        let mut work = vec![0.0; n];
        let mut dropped = 0;
        for j in 0..n {
            work[j] = m.diag[j];
            for (&i, &v) in sym.cols[j].iter().zip(&m.off[j]) {
                work[i] = v;
            }
            for &(k, pos) in &sym.rows[j] {
                let ljk = l[k][pos];
                if ljk == 0.0 {
                    continue;
                }
                let f = ljk * d[k];
                work[j] -= ljk * f;
                for (&i, &lik) in sym.cols[k][pos + 1..].iter().zip(&l[k][pos + 1..]) {
                    work[i] -= lik * f;
                }
            }
            let mut dj = work[j];
            if let Some(v) = fix(j, dj) {
                dj = v;
                dropped += 1;
            }
            d[j] = dj;
            work[j] = 0.0;
            for (idx, &i) in sym.cols[j].iter().enumerate() {
                l[j][idx] = work[i] / dj;
                work[i] = 0.0;
            }
        }
        Factor { d, l, dropped }
    }

    fn solve_permuted(&self, sym: &SymbolicLdl, b: &mut [f64]) {
        for k in 0..sym.n {
            let bk = b[k];
            if bk != 0.0 {
                for (&i, &v) in sym.cols[k].iter().zip(&self.l[k]) {
                    b[i] -= v * bk;
                }
            }
        }
        for k in 0..sym.n {
            b[k] /= self.d[k];
        }
        for k in (0..sym.n).rev() {
            let mut s = b[k];
            for (&i, &v) in sym.cols[k].iter().zip(&self.l[k]) {
                s -= v * b[i];
            }
            b[k] = s;
        }
    }

    /// Solves M x = b (original indices) with a few steps of iterative refinement.
    pub fn solve(&self, sym: &SymbolicLdl, m: &SymMatrix, b: &[f64], refine: usize) -> Vec<f64> {
        let bp: Vec<f64> = sym.perm.iter().map(|&i| b[i]).collect();
        let mut x = bp.clone();
        self.solve_permuted(sym, &mut x);
        for _ in 0..refine {
            let mx = m.mul(sym, &x);
            let mut r: Vec<f64> = bp.iter().zip(&mx).map(|(a, b)| a - b).collect();
            self.solve_permuted(sym, &mut r);
            for (xi, ri) in x.iter_mut().zip(&r) {
                *xi += ri;
            }
        }
        let mut out = vec![0.0; sym.n];
        for (k, &i) in sym.perm.iter().enumerate() {
            out[i] = x[k];
        }
        out
    }
}
