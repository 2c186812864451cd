//! Homogeneous self-dual interior-point method for products of
//! 3-dimensional second-order cones (Mehrotra predictor-corrector, NT scaling).

use std::fmt;

use super::sparse::{Factor, Slot, SymbolicLdl};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Equality-constrained program over rotated cones {2ab ≥ c², a, b ≥ 0}:
/// minimize cᵀx subject to Ax = b.
#[derive(Clone, Debug, Default)]
pub struct RotatedProgram {
    pub nrows: usize,
    /// Per cone: `(row, slot, value)` with slot 0 = a, 1 = b, 2 = c.
    pub cones: Vec<Vec<(usize, usize, f64)>>,
    pub b: Vec<f64>,
    pub c: Vec<[f64; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIterations,
    Stalled,
}

impl fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolverStatus::Optimal => "optimal",
            SolverStatus::Infeasible => "infeasible",
            SolverStatus::Unbounded => "unbounded",
            SolverStatus::MaxIterations => "max-iterations",
            SolverStatus::Stalled => "stalled",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iter: usize,
    /// Per-iteration log on stderr.
    pub verbose: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings { tol: 1e-8, max_iter: 200, verbose: false }
    }
}

#[derive(Clone, Debug)]
pub struct ConicOutput {
    pub status: SolverStatus,
    /// Rotated-cone triples (a, b, c).
    pub x: Vec<[f64; 3]>,
    pub y: Vec<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub iterations: usize,
}

/// Pluggable conic back end.
pub trait ConicSolver {
    fn solve(&self, p: &RotatedProgram, settings: &SolverSettings) -> ConicOutput;
}

/// Built-in solver.
#[derive(Clone, Copy, Debug, Default)]
pub struct InteriorPoint;

type V3 = [f64; 3];

fn dot3(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn det(x: &V3) -> f64 {
    (x[0] - x[1].hypot(x[2])) * (x[0] + x[1].hypot(x[2]))
}

/// Rotated ↔ Lorentz; the map is its own inverse.
fn swap_basis(x: &V3) -> V3 {
    [(x[0] + x[1]) * SQRT_HALF, (x[0] - x[1]) * SQRT_HALF, x[2]]
}

fn jordan(a: &V3, b: &V3) -> V3 {
    [dot3(a, b), a[0] * b[1] + b[0] * a[1], a[0] * b[2] + b[0] * a[2]]
}

/// Solves `l ∘ d = r`.
fn jordan_div(l: &V3, r: &V3) -> V3 {
    let rho = det(l);
    let d0 = (l[0] * r[0] - l[1] * r[1] - l[2] * r[2]) / rho;
    [d0, (r[1] - d0 * l[1]) / l[0], (r[2] - d0 * l[2]) / l[0]]
}

/// Largest step keeping `x + αd` in the cone.
fn max_step(x: &V3, d: &V3) -> f64 {
    let a = d[0] * d[0] - d[1] * d[1] - d[2] * d[2];
    let b = x[0] * d[0] - x[1] * d[1] - x[2] * d[2];
    let c = det(x).max(0.0);
    let mut best = f64::INFINITY;
    if a.abs() < 1e-300 {
        if b < 0.0 {
            best = -c / (2.0 * b);
        }
    } else {
        let disc = b * b - a * c;
        if disc >= 0.0 {
            let q = -(b + b.signum() * disc.sqrt());
            for r in [q / a, if q != 0.0 { c / q } else { f64::INFINITY }] {
                if r > 0.0 && r < best {
                    best = r;
                }
            }
        }
    }
    if d[0] < 0.0 {
        best = best.min(-x[0] / d[0]);
    }
    best
}

/// Nesterov–Todd scaling: W x = W⁻¹ s.
#[derive(Clone, Copy)]
struct Nt {
    eta: f64,
    w: V3,
}

impl Nt {
    fn new(x: &V3, s: &V3) -> Option<Nt> {
        let dx = det(x);
        let ds = det(s);
        if !(dx > 0.0 && ds > 0.0 && x[0] > 0.0 && s[0] > 0.0) {
            return None;
        }
        let (nx, ns) = (dx.sqrt(), ds.sqrt());
        let xb = [x[0] / nx, x[1] / nx, x[2] / nx];
        let sb = [s[0] / ns, s[1] / ns, s[2] / ns];
        let gamma = ((1.0 + dot3(&xb, &sb)) / 2.0).sqrt();
        let w = [(sb[0] + xb[0]) / (2.0 * gamma), (sb[1] - xb[1]) / (2.0 * gamma), (sb[2] - xb[2]) / (2.0 * gamma)];
        Some(Nt { eta: (ds / dx).sqrt().sqrt(), w })
    }

    fn apply(&self, v: &V3, inverse: bool) -> V3 {
        let (w0, w1, w2) = (self.w[0], if inverse { -self.w[1] } else { self.w[1] }, if inverse { -self.w[2] } else { self.w[2] });
        let k = (w1 * v[1] + w2 * v[2]) / (1.0 + w0);
        let out = [w0 * v[0] + w1 * v[1] + w2 * v[2], w1 * v[0] + v[1] + k * w1, w2 * v[0] + v[2] + k * w2];
        let f = if inverse { 1.0 / self.eta } else { self.eta };
        [out[0] * f, out[1] * f, out[2] * f]
    }

    fn mul(&self, v: &V3) -> V3 {
        self.apply(v, false)
    }

    fn inv(&self, v: &V3) -> V3 {
        self.apply(v, true)
    }

    fn mul2(&self, v: &V3) -> V3 {
        self.mul(&self.mul(v))
    }

    fn mul2_matrix(&self) -> [V3; 3] {
        let e = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        [self.mul2(&e[0]), self.mul2(&e[1]), self.mul2(&e[2])]
    }
}

/// Cone block in Lorentz coordinates: each touched row with its 3 coefficients.
struct Block {
    rows: Vec<usize>,
    coef: Vec<V3>,
    /// Upper triangle of the 3×3 scaling block.
    wslots: [Slot; 6],
    /// Coupling entries (variable j, row) per touched row.
    aslots: Vec<[Slot; 3]>,
}

const UPPER: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// Static regularization of the KKT system, and the dynamic one for bad pivots.
const STATIC_REG: f64 = 1e-10;
const PIVOT_EPS: f64 = 1e-13;
const PIVOT_DELTA: f64 = 2e-7;

struct Lorentz {
    m: usize,
    blocks: Vec<Block>,
    b: Vec<f64>,
    c: Vec<V3>,
    /// KKT pattern over 3K cone variables followed by m rows.
    sym: SymbolicLdl,
    signs: Vec<f64>,
    row_slots: Vec<Slot>,
}

impl Lorentz {
    fn new(p: &RotatedProgram) -> Lorentz {
        let k = p.cones.len();
        let mut parts = Vec::with_capacity(k);
        let mut cliques = Vec::new();
        for (i, cone) in p.cones.iter().enumerate() {
            let mut rows: Vec<usize> = cone.iter().map(|e| e.0).collect();
            rows.sort_unstable();
            rows.dedup();
            let mut coef = vec![[0.0; 3]; rows.len()];
            for &(r, slot, v) in cone {
                let j = rows.binary_search(&r).unwrap();
                let mut rot = [0.0; 3];
                rot[slot] = v;
                // Row of A·T where T is the symmetric basis swap.
                let l = swap_basis(&rot);
                for t in 0..3 {
                    coef[j][t] += l[t];
                }
            }
            cliques.push(vec![3 * i, 3 * i + 1, 3 * i + 2]);
            for &r in &rows {
                cliques.push(vec![3 * i, 3 * i + 1, 3 * i + 2, 3 * k + r]);
            }
            parts.push((rows, coef));
        }
        let dim = 3 * k + p.nrows;
        let sym = SymbolicLdl::new(dim, &cliques);
        let blocks = parts
            .into_iter()
            .enumerate()
            .map(|(i, (rows, coef))| {
                let wslots = UPPER.map(|(a, b)| sym.slot(3 * i + a, 3 * i + b));
                let aslots = rows.iter().map(|&r| [0, 1, 2].map(|j| sym.slot(3 * i + j, 3 * k + r))).collect();
                Block { rows, coef, wslots, aslots }
            })
            .collect();
        let signs = (0..dim).map(|v| if v < 3 * k { 1.0 } else { -1.0 }).collect();
        let row_slots = (0..p.nrows).map(|r| sym.slot(3 * k + r, 3 * k + r)).collect();
        Lorentz { m: p.nrows, blocks, b: p.b.clone(), c: p.c.iter().map(swap_basis).collect(), sym, signs, row_slots }
    }

    fn a_mul(&self, x: &[V3]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (blk, xk) in self.blocks.iter().zip(x) {
            for (&r, a) in blk.rows.iter().zip(&blk.coef) {
                out[r] += dot3(a, xk);
            }
        }
        out
    }

    fn at_mul(&self, y: &[f64]) -> Vec<V3> {
        self.blocks
            .iter()
            .map(|blk| {
                let mut v = [0.0; 3];
                for (&r, a) in blk.rows.iter().zip(&blk.coef) {
                    for i in 0..3 {
                        v[i] += a[i] * y[r];
                    }
                }
                v
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dotv(a: &[V3], b: &[V3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| dot3(x, y)).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn inf_norm3(v: &[V3]) -> f64 {
    v.iter().flatten().fold(0.0, |a, x| a.max(x.abs()))
}

#[derive(Clone)]
struct Iterate {
    x: Vec<V3>,
    s: Vec<V3>,
    y: Vec<f64>,
    tau: f64,
    kappa: f64,
}

struct Metrics {
    pres: f64,
    dres: f64,
    gap: f64,
    pobj: f64,
    dobj: f64,
}

impl Lorentz {
    fn metrics(&self, it: &Iterate) -> Metrics {
        let t = it.tau;
        let ax = self.a_mul(&it.x);
        let rp: Vec<f64> = ax.iter().zip(&self.b).map(|(a, b)| a / t - b).collect();
        let aty = self.at_mul(&it.y);
        let rd: Vec<V3> = aty
            .iter()
            .zip(&it.s)
            .zip(&self.c)
            .map(|((a, s), c)| [(a[0] + s[0]) / t - c[0], (a[1] + s[1]) / t - c[1], (a[2] + s[2]) / t - c[2]])
            .collect();
        let pobj = dotv(&self.c, &it.x) / t;
        let dobj = dot(&self.b, &it.y) / t;
        Metrics {
            pres: inf_norm(&rp) / inf_norm(&self.b).max(1.0),
            dres: inf_norm3(&rd) / inf_norm3(&self.c).max(1.0),
            gap: dotv(&it.x, &it.s) / (t * t),
            pobj,
            dobj,
        }
    }
}

/// Certificate quality accepted for infeasibility once progress stops.
const REDUCED_TOL: f64 = 1e-6;

impl ConicSolver for InteriorPoint {
    fn solve(&self, p: &RotatedProgram, settings: &SolverSettings) -> ConicOutput {
        let lz = Lorentz::new(p);
        let k = lz.blocks.len();
        let e: V3 = [1.0, 0.0, 0.0];
        let mut it = Iterate { x: vec![e; k], s: vec![e; k], y: vec![0.0; lz.m], tau: 1.0, kappa: 1.0 };
        let tol = settings.tol;
        let mut best: Option<(f64, Iterate, usize)> = None;
        let mut status = SolverStatus::MaxIterations;
        let mut iterations = 0;
        let mut small_steps = 0;
        let mut infeasible_cert = f64::INFINITY;
        let mut unbounded_cert = f64::INFINITY;

        for iter in 0..=settings.max_iter {
            iterations = iter;
            let mt = lz.metrics(&it);
            let rel_gap = mt.gap.min((mt.pobj - mt.dobj).abs()) / mt.pobj.abs().min(mt.dobj.abs()).max(1.0);
            let score = mt.pres.max(mt.dres).max(rel_gap);
            if settings.verbose {
                eprintln!(
                    "{iter:3}  pres {:.2e}  dres {:.2e}  gap {:.2e}  pobj {:+.8e}  dobj {:+.8e}  tau {:.2e}  kappa {:.2e}",
                    mt.pres, mt.dres, rel_gap, mt.pobj, mt.dobj, it.tau, it.kappa
                );
            }
            if best.as_ref().map_or(true, |b| score < b.0) {
                best = Some((score, it.clone(), iter));
            }
            if mt.pres <= tol && mt.dres <= tol && rel_gap <= tol {
                status = SolverStatus::Optimal;
                break;
            }
            let by = dot(&lz.b, &it.y);
            if by > 0.0 {
                let aty = lz.at_mul(&it.y);
                let r: Vec<V3> = aty.iter().zip(&it.s).map(|(a, s)| [a[0] + s[0], a[1] + s[1], a[2] + s[2]]).collect();
                let ratio = inf_norm3(&r) / by;
                if it.tau < 1e-3 * it.kappa.max(1.0) {
                    if ratio < tol {
                        status = SolverStatus::Infeasible;
                        break;
                    }
                    infeasible_cert = infeasible_cert.min(ratio);
                }
            }
            let cx = dotv(&lz.c, &it.x);
            if cx < 0.0 {
                let ax = lz.a_mul(&it.x);
                let ratio = inf_norm(&ax) / -cx;
                if it.tau < 1e-3 * it.kappa.max(1.0) {
                    if ratio < tol {
                        status = SolverStatus::Unbounded;
                        break;
                    }
                    unbounded_cert = unbounded_cert.min(ratio);
                }
            }
            if iter == settings.max_iter {
                break;
            }
            match step(&lz, &mut it) {
                Some(alpha) if alpha > 1e-10 => small_steps = 0,
                Some(_) => {
                    small_steps += 1;
                    if small_steps >= 3 {
                        status = SolverStatus::Stalled;
                        break;
                    }
                }
                None => {
                    status = SolverStatus::Stalled;
                    break;
                }
            }
        }
        if matches!(status, SolverStatus::Stalled | SolverStatus::MaxIterations) {
            if infeasible_cert <= REDUCED_TOL {
                status = SolverStatus::Infeasible;
            } else if unbounded_cert <= REDUCED_TOL {
                status = SolverStatus::Unbounded;
            }
        }
        let (_, chosen, _) = if status == SolverStatus::Optimal {
            (0.0, it.clone(), iterations)
        } else {
            best.expect("at least one iterate")
        };
        let mt = lz.metrics(&chosen);
        let t = chosen.tau;
        ConicOutput {
            status,
            x: chosen.x.iter().map(|v| swap_basis(&[v[0] / t, v[1] / t, v[2] / t])).collect(),
            y: chosen.y.iter().map(|v| v / t).collect(),
            primal_residual: mt.pres,
            dual_residual: mt.dres,
            gap: mt.gap,
            iterations,
        }
    }
}

struct Direction {
    dx: Vec<V3>,
    ds: Vec<V3>,
    dy: Vec<f64>,
    dtau: f64,
    dkappa: f64,
}

fn step_length(it: &Iterate, d: &Direction) -> f64 {
    let mut a = f64::INFINITY;
    for (x, dx) in it.x.iter().zip(&d.dx) {
        a = a.min(max_step(x, dx));
    }
    for (s, ds) in it.s.iter().zip(&d.ds) {
        a = a.min(max_step(s, ds));
    }
    if d.dtau < 0.0 {
        a = a.min(-it.tau / d.dtau);
    }
    if d.dkappa < 0.0 {
        a = a.min(-it.kappa / d.dkappa);
    }
    a
}

/// Solver for the scaled KKT system `[W² Aᵀ; A 0]`.
struct Kkt<'a> {
    lz: &'a Lorentz,
    scal: &'a [Nt],
    mat: super::sparse::SymMatrix,
    factor: Factor,
}

impl<'a> Kkt<'a> {
    fn new(lz: &'a Lorentz, scal: &'a [Nt]) -> Kkt<'a> {
        let mut mat = lz.sym.new_matrix();
        for (blk, w) in lz.blocks.iter().zip(scal) {
            let g = w.mul2_matrix();
            for (&(a, b), &slot) in UPPER.iter().zip(&blk.wslots) {
                mat.add(slot, g[a][b] + if a == b { STATIC_REG } else { 0.0 });
            }
            for (coef, slots) in blk.coef.iter().zip(&blk.aslots) {
                for j in 0..3 {
                    mat.add(slots[j], coef[j]);
                }
            }
        }
        for &slot in &lz.row_slots {
            mat.add(slot, -STATIC_REG);
        }
        let factor = Factor::quasi_definite(&lz.sym, &mat, &lz.signs, PIVOT_EPS, PIVOT_DELTA);
        Kkt { lz, scal, mat, factor }
    }

    /// Unregularized operator.
    fn apply(&self, x: &[V3], z: &[f64]) -> (Vec<V3>, Vec<f64>) {
        let atz = self.lz.at_mul(z);
        let top = self
            .scal
            .iter()
            .zip(x)
            .zip(&atz)
            .map(|((w, x), a)| {
                let g = w.mul2(x);
                [g[0] + a[0], g[1] + a[1], g[2] + a[2]]
            })
            .collect();
        (top, self.lz.a_mul(x))
    }

    fn solve(&self, r1: &[V3], r2: &[f64]) -> (Vec<V3>, Vec<f64>) {
        let k = r1.len();
        let mut rhs: Vec<f64> = r1.iter().flatten().copied().collect();
        rhs.extend_from_slice(r2);
        let split = |v: &[f64]| -> (Vec<V3>, Vec<f64>) {
            (v[..3 * k].chunks(3).map(|c| [c[0], c[1], c[2]]).collect(), v[3 * k..].to_vec())
        };
        let mut sol = self.factor.solve(&self.lz.sym, &self.mat, &rhs, 0);
        let scale = inf_norm(&rhs).max(1e-300);
        let mut last = f64::INFINITY;
        for _ in 0..10 {
            let (x, z) = split(&sol);
            let (t, b) = self.apply(&x, &z);
            let applied: Vec<f64> = t.iter().flatten().copied().chain(b).collect();
            let res: Vec<f64> = rhs.iter().zip(&applied).map(|(a, b)| a - b).collect();
            let err = inf_norm(&res);
            if err <= 1e-15 * scale || err >= 0.5 * last {
                break;
            }
            last = err;
            let corr = self.factor.solve(&self.lz.sym, &self.mat, &res, 0);
            for (a, b) in sol.iter_mut().zip(&corr) {
                *a += b;
            }
        }
        split(&sol)
    }
}

/// One predictor-corrector step; returns the step length taken.
fn step(lz: &Lorentz, it: &mut Iterate) -> Option<f64> {
    let k = lz.blocks.len();
    let scal: Vec<Nt> = it.x.iter().zip(&it.s).map(|(x, s)| Nt::new(x, s)).collect::<Option<Vec<_>>>()?;
    let lam: Vec<V3> = scal.iter().zip(&it.x).map(|(w, x)| w.mul(x)).collect();
    let mu = (dotv(&it.x, &it.s) + it.tau * it.kappa) / (k as f64 + 1.0);
    let kkt = Kkt::new(lz, &scal);

    let ax = lz.a_mul(&it.x);
    let rp: Vec<f64> = ax.iter().zip(&lz.b).map(|(a, b)| a - b * it.tau).collect();
    let aty = lz.at_mul(&it.y);
    let rd: Vec<V3> = (0..k)
        .map(|i| {
            let (a, s, c) = (&aty[i], &it.s[i], &lz.c[i]);
            [a[0] + s[0] - c[0] * it.tau, a[1] + s[1] - c[1] * it.tau, a[2] + s[2] - c[2] * it.tau]
        })
        .collect();
    let rg = dotv(&lz.c, &it.x) - dot(&lz.b, &it.y) + it.kappa;

    // Coefficient of Δτ: W²x₁ + Aᵀz₁ = −c, A x₁ = b.
    let neg_c: Vec<V3> = lz.c.iter().map(|c| [-c[0], -c[1], -c[2]]).collect();
    let (x1, z1) = kkt.solve(&neg_c, &lz.b);
    // cᵀx₁ + bᵀz₁ = −‖W x₁‖².
    let wx1_sq: f64 = scal.iter().zip(&x1).map(|(w, x)| {
        let v = w.mul(x);
        dot3(&v, &v)
    }).sum();
    let denom = -wx1_sq - it.kappa / it.tau;

    let solve_dir = |sigma: f64, rc: &[V3], rtau: f64| -> Direction {
        let f = 1.0 - sigma;
        let d: Vec<V3> = lam.iter().zip(rc).map(|(l, r)| jordan_div(l, r)).collect();
        let r1: Vec<V3> = (0..k)
            .map(|i| {
                let wd = scal[i].mul(&d[i]);
                [wd[0] + f * rd[i][0], wd[1] + f * rd[i][1], wd[2] + f * rd[i][2]]
            })
            .collect();
        let r2: Vec<f64> = rp.iter().map(|r| -f * r).collect();
        let (x2, z2) = kkt.solve(&r1, &r2);
        let dtau = (-f * rg - dotv(&lz.c, &x2) - dot(&lz.b, &z2) - rtau / it.tau) / denom;
        let dx: Vec<V3> = (0..k)
            .map(|i| [x1[i][0] * dtau + x2[i][0], x1[i][1] * dtau + x2[i][1], x1[i][2] * dtau + x2[i][2]])
            .collect();
        let dy: Vec<f64> = z1.iter().zip(&z2).map(|(a, b)| -(a * dtau + b)).collect();
        let atdy = lz.at_mul(&dy);
        let ds: Vec<V3> = (0..k)
            .map(|i| {
                let mut v = [0.0; 3];
                for j in 0..3 {
                    v[j] = -atdy[i][j] + lz.c[i][j] * dtau - f * rd[i][j];
                }
                v
            })
            .collect();
        let dkappa = (rtau - it.kappa * dtau) / it.tau;
        Direction { dx, ds, dy, dtau, dkappa }
    };

    // Predictor.
    let rc_aff: Vec<V3> = lam.iter().map(|l| {
        let ll = jordan(l, l);
        [-ll[0], -ll[1], -ll[2]]
    }).collect();
    let aff = solve_dir(0.0, &rc_aff, -it.tau * it.kappa);
    let alpha_aff = step_length(it, &aff).min(1.0);
    let sigma = (1.0 - alpha_aff).powi(3).clamp(0.0, 1.0);

    // Corrector.
    let rc: Vec<V3> = (0..k)
        .map(|i| {
            let wdx = scal[i].mul(&aff.dx[i]);
            let wids = scal[i].inv(&aff.ds[i]);
            let cross = jordan(&wdx, &wids);
            let ll = jordan(&lam[i], &lam[i]);
            [-ll[0] - cross[0] + sigma * mu, -ll[1] - cross[1], -ll[2] - cross[2]]
        })
        .collect();
    let rtau = -it.tau * it.kappa - aff.dtau * aff.dkappa + sigma * mu;
    let dir = solve_dir(sigma, &rc, rtau);
    let alpha = (0.99 * step_length(it, &dir)).min(1.0);
    if !alpha.is_finite() {
        return None;
    }
    for i in 0..k {
        for j in 0..3 {
            it.x[i][j] += alpha * dir.dx[i][j];
            it.s[i][j] += alpha * dir.ds[i][j];
        }
    }
    for (y, dy) in it.y.iter_mut().zip(&dir.dy) {
        *y += alpha * dy;
    }
    it.tau += alpha * dir.dtau;
    it.kappa += alpha * dir.dkappa;
    if !(it.tau > 0.0 && it.kappa >= 0.0) || it.x.iter().flatten().chain(it.y.iter()).any(|v| !v.is_finite()) {
        return None;
    }
    Some(alpha)
}
