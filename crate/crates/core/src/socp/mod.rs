//! The rotated-cone program attached to a simplex cover, and its numeric solution.

mod ipm;
mod sparse;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cover::{simplex_cover, AnchorRule, SimplexCoverResult};
use crate::error::{Error, Result};
use crate::mediated::{med_set, med_set_odd, MediatedSet, RationalPoint};
use crate::poly::{support_partition, to_pn, Circuit, Exponent, SparsePoly};
use crate::rat::{self, Rational};

pub use ipm::{ConicOutput, ConicSolver, InteriorPoint, RotatedProgram, SolverSettings, SolverStatus};
pub use sparse::{Factor, Slot, SymMatrix, SymbolicLdl};

/// One cone triple, by index into the plan's point list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanTriple {
    pub circuit: usize,
    pub u: usize,
    pub v: usize,
    pub w: usize,
}

/// Mediated sets for every circuit plus a global index of exponent points.
#[derive(Clone, Debug)]
pub struct ConeTriplePlan {
    pub n: usize,
    pub odd_mode: bool,
    pub circuits: Vec<Circuit>,
    pub mediated: Vec<MediatedSet>,
    /// Distinct points in lexicographic order.
    pub points: Vec<RationalPoint>,
    pub triples: Vec<PlanTriple>,
    /// Λ-points in no trellis, carried as monomial squares.
    pub passthrough: Vec<Exponent>,
}

impl ConeTriplePlan {
    pub fn num_triples(&self) -> usize {
        self.triples.len()
    }

    pub fn index_of(&self, p: &RationalPoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    /// η(γ): slots touching each point.
    pub fn slot_multiplicity(&self) -> Vec<u32> {
        let mut eta = vec![0u32; self.points.len()];
        for t in &self.triples {
            eta[t.u] += 1;
            eta[t.v] += 1;
            eta[t.w] += 1;
        }
        eta
    }

    /// Largest coordinate denominator over all points.
    pub fn max_denominator(&self) -> BigInt {
        self.points.iter().map(RationalPoint::max_denominator).max().unwrap_or_else(BigInt::one)
    }

    /// Denominator bound (1 + nd²)^{n+1}.
    pub fn denominator_bound(n: usize, d: u64) -> BigInt {
        num_traits::pow(BigInt::from(1 + n as u64 * d * d), n + 1)
    }

    /// Triple-count bound ⅛·t·n·((n+1)·log₂(1+nd²) + 3)².
    pub fn triple_bound(t: usize, n: usize, d: u64) -> f64 {
        let l = (1.0 + n as f64 * (d * d) as f64).log2();
        t as f64 * n as f64 * ((n as f64 + 1.0) * l + 3.0).powi(2) / 8.0
    }
}

/// Computes mediated sets per circuit and indexes their points.
pub fn build_plan(f_pn: &SparsePoly, cover: &SimplexCoverResult, odd_mode: bool) -> Result<ConeTriplePlan> {
    let mediated: Vec<MediatedSet> = cover
        .circuits
        .par_iter()
        .map(|c| {
            let trellis: Vec<RationalPoint> = c.trellis.iter().map(RationalPoint::from).collect();
            let beta = RationalPoint::from(&c.beta);
            if odd_mode {
                med_set_odd(&trellis, &beta)
            } else {
                med_set(&trellis, &beta)
            }
        })
        .collect::<Result<_>>()?;
    let mut points: Vec<RationalPoint> = mediated.iter().flat_map(|m| m.points()).collect();
    points.sort();
    points.dedup();
    let idx = |p: &RationalPoint| points.binary_search(p).expect("indexed point");
    let mut triples = Vec::new();
    for (k, m) in mediated.iter().enumerate() {
        for t in &m.triples {
            triples.push(PlanTriple { circuit: k, u: idx(&t.u), v: idx(&t.v), w: idx(&t.w) });
        }
    }
    let in_trellis: std::collections::BTreeSet<&Exponent> = cover.circuits.iter().flat_map(|c| &c.trellis).collect();
    let passthrough = support_partition(f_pn).lambda.into_keys().filter(|a| !in_trellis.contains(a)).collect();
    Ok(ConeTriplePlan { n: f_pn.n(), odd_mode, circuits: cover.circuits.clone(), mediated, points, triples, passthrough })
}

/// Fixed-ξ feasibility or ξ-maximizing bound problem.
#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    Feasibility,
    Bound,
}

/// Equality rows of the conic program in exact arithmetic.
#[derive(Clone, Debug)]
pub struct SocpProblem {
    pub mode: Mode,
    /// One row per indexed point.
    pub rhs: Vec<Rational>,
    /// `(u, v, w)` row indices of every triple.
    pub triples: Vec<[usize; 3]>,
    /// Bound mode: row of the zero exponent, turned into the objective.
    pub objective_row: Option<usize>,
    /// Constant term f₀ of the target (bound mode).
    pub constant: Rational,
    pub passthrough: Vec<(Exponent, Rational)>,
}

impl SocpProblem {
    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    /// Standard form over rotated cones, scaled so that max |rhs| = 1.
    /// Returns the program and the scale factor.
    pub fn to_rotated(&self) -> (RotatedProgram, f64) {
        let skip = self.objective_row;
        let mut map = vec![usize::MAX; self.rhs.len()];
        let mut nrows = 0;
        for (i, m) in map.iter_mut().enumerate() {
            if Some(i) != skip {
                *m = nrows;
                nrows += 1;
            }
        }
        let b: Vec<f64> = (0..self.rhs.len()).filter(|&i| Some(i) != skip).map(|i| rat::to_f64(&self.rhs[i])).collect();
        let scale = b.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let scale = if scale > 0.0 { scale } else { 1.0 };
        let mut cones = Vec::with_capacity(self.triples.len());
        let mut c = Vec::with_capacity(self.triples.len());
        for &[u, v, w] in &self.triples {
            let mut entries = Vec::with_capacity(3);
            let mut cost = [0.0; 3];
            for (row, slot, val) in [(v, 0, 2.0), (w, 1, 1.0), (u, 2, -2.0)] {
                if Some(row) == skip {
                    cost[slot] += val;
                } else {
                    entries.push((map[row], slot, val));
                }
            }
            cones.push(entries);
            c.push(cost);
        }
        (RotatedProgram { nrows, cones, b: b.iter().map(|x| x / scale).collect(), c }, scale)
    }

    /// JSON standard form for external solvers (unscaled, rotated cones).
    pub fn dump_json(&self) -> serde_json::Value {
        let (prog, scale) = self.to_rotated();
        let mut triplets = Vec::new();
        for (k, cone) in prog.cones.iter().enumerate() {
            for &(row, slot, val) in cone {
                triplets.push((row, 3 * k + slot, val));
            }
        }
        serde_json::json!({
            "sense": "minimize",
            "variables": 3 * prog.cones.len(),
            "variable_layout": "per cone (a, b, c) with 2ab >= c^2, a >= 0, b >= 0",
            "objective": prog.c.iter().flatten().collect::<Vec<_>>(),
            "objective_offset": rat::to_f64(&self.constant),
            "objective_note": if self.objective_row.is_some() { "xi = objective_offset - objective value" } else { "feasibility" },
            "a": triplets,
            "b": prog.b.iter().map(|x| x * scale).collect::<Vec<_>>(),
            "b_exact": self.rhs.iter().enumerate().filter(|&(i, _)| Some(i) != self.objective_row).map(|(_, r)| rat::to_pq(r)).collect::<Vec<_>>(),
            "cones": prog.cones.iter().map(|_| serde_json::json!({"type": "rotated_soc", "dim": 3})).collect::<Vec<_>>(),
        })
    }
}

/// Equality rows `Σ_v 2a + Σ_w b − Σ_u 2c = g_γ` for the target g.
pub fn assemble(plan: &ConeTriplePlan, target: &SparsePoly, mode: Mode) -> Result<SocpProblem> {
    let mut rhs = vec![Rational::zero(); plan.points.len()];
    let pass: std::collections::BTreeSet<&Exponent> = plan.passthrough.iter().collect();
    let mut passthrough = Vec::new();
    for (e, c) in target.terms() {
        match plan.index_of(&RationalPoint::from(e)) {
            Some(i) => rhs[i] = c.clone(),
            None if pass.contains(e) => {
                if c.is_negative() {
                    return Err(Error::NegativePassthrough(e.to_string()));
                }
                passthrough.push((e.clone(), c.clone()));
            }
            None if mode == Mode::Bound && e.is_zero() && c.is_positive() => {}
            None => return Err(Error::UncoveredSupport(e.to_string())),
        }
    }
    let zero = RationalPoint::zeros(plan.n);
    let objective_row = if mode == Mode::Bound { plan.index_of(&zero) } else { None };
    if mode == Mode::Bound {
        passthrough.retain(|(e, _)| !e.is_zero());
    }
    Ok(SocpProblem {
        mode,
        rhs,
        triples: plan.triples.iter().map(|t| [t.u, t.v, t.w]).collect(),
        objective_row,
        constant: target.constant(),
        passthrough,
    })
}

/// Numeric solution in rotated coordinates.
#[derive(Clone, Debug)]
pub struct SocpSolution {
    pub status: SolverStatus,
    pub triples: Vec<[f64; 3]>,
    /// Bound mode only.
    pub xi: Option<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub iterations: usize,
}

impl SocpSolution {
    /// Largest violation of `a ≥ 0, b ≥ 0, 2ab ≥ c²`.
    pub fn cone_residual(&self) -> f64 {
        self.triples
            .iter()
            .map(|&[a, b, c]| (-a).max(-b).max(c * c - 2.0 * a * b).max(0.0))
            .fold(0.0, f64::max)
    }
}

pub fn solve(problem: &SocpProblem, settings: &SolverSettings) -> SocpSolution {
    solve_with(problem, settings, &InteriorPoint)
}

pub fn solve_with(problem: &SocpProblem, settings: &SolverSettings, solver: &dyn ConicSolver) -> SocpSolution {
    let xi_of = |obj: f64| -> Option<f64> {
        match problem.mode {
            Mode::Bound => Some(rat::to_f64(&problem.constant) - obj),
            Mode::Feasibility => None,
        }
    };
    if problem.triples.is_empty() {
        let feasible = problem.rhs.iter().all(Zero::is_zero);
        return SocpSolution {
            status: if feasible { SolverStatus::Optimal } else { SolverStatus::Infeasible },
            triples: Vec::new(),
            xi: xi_of(0.0),
            primal_residual: 0.0,
            dual_residual: 0.0,
            gap: 0.0,
            iterations: 0,
        };
    }
    let (prog, scale) = problem.to_rotated();
    let out = solver.solve(&prog, settings);
    let triples: Vec<[f64; 3]> = out.x.iter().map(|t| [t[0] * scale, t[1] * scale, t[2] * scale]).collect();
    let obj: f64 = triples.iter().zip(&prog.c).map(|(x, c)| x[0] * c[0] + x[1] * c[1] + x[2] * c[2]).sum();
    SocpSolution {
        status: out.status,
        triples,
        xi: xi_of(obj),
        primal_residual: out.primal_residual,
        dual_residual: out.dual_residual,
        gap: out.gap,
        iterations: out.iterations,
    }
}

/// Wall-clock time per pipeline phase.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PhaseTimings {
    pub cover: f64,
    pub mediated: f64,
    pub assemble: f64,
    pub solve: f64,
    pub certify: f64,
}

pub(crate) fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Result of the bound pipeline.
#[derive(Clone, Debug)]
pub struct LowerBound {
    pub xi: f64,
    pub cover: SimplexCoverResult,
    pub plan: ConeTriplePlan,
    pub problem: SocpProblem,
    pub solution: SocpSolution,
    pub timings: PhaseTimings,
}

/// Options shared by the bound and certification pipelines.
#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub solver: SolverSettings,
    pub anchor: AnchorRule,
    pub odd_mode: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { solver: SolverSettings::default(), anchor: AnchorRule::default(), odd_mode: false }
    }
}

/// Λ′ = Λ(f̃) ∪ {0} and Γ′ = Γ(f̃) ∖ {0}.
pub(crate) fn bound_support(f_pn: &SparsePoly) -> (Vec<Exponent>, Vec<Exponent>) {
    let part = support_partition(f_pn);
    let zero = Exponent::zeros(f_pn.n());
    let mut lambda = part.lambda_set();
    if !lambda.contains(&zero) {
        lambda.push(zero.clone());
    }
    let gamma = part.gamma_set().into_iter().filter(|g| g != &zero).collect();
    (lambda, gamma)
}

/// ξ_socp: the largest ξ for which f̃ − ξ is feasible for the cone program.
pub fn lower_bound(f: &SparsePoly, opts: &PipelineOptions) -> Result<LowerBound> {
    let mut timings = PhaseTimings::default();
    let f_pn = to_pn(f);
    let t0 = Instant::now();
    let (lambda, gamma) = bound_support(&f_pn);
    let cover = simplex_cover(&lambda, &gamma, opts.anchor)?;
    timings.cover = secs(t0.elapsed());
    let t1 = Instant::now();
    let plan = build_plan(&f_pn, &cover, false)?;
    timings.mediated = secs(t1.elapsed());
    let t2 = Instant::now();
    let problem = assemble(&plan, &f_pn, Mode::Bound)?;
    timings.assemble = secs(t2.elapsed());
    let t3 = Instant::now();
    let solution = solve(&problem, &opts.solver);
    timings.solve = secs(t3.elapsed());
    match solution.status {
        SolverStatus::Optimal => {}
        s => return Err(Error::Solver(s)),
    }
    let xi = match problem.objective_row {
        Some(_) => solution.xi.expect("bound mode"),
        None => rat::to_f64(&f_pn.constant()),
    };
    Ok(LowerBound { xi, cover, plan, problem, solution, timings })
}

/// Groups exponent rows by circuit for reporting.
pub fn triples_per_circuit(plan: &ConeTriplePlan) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for t in &plan.triples {
        *out.entry(t.circuit).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    fn motzkin() -> SparsePoly {
        SparsePoly::from_ints(2, &[(&[4, 2], 1), (&[2, 4], 1), (&[0, 0], 1), (&[2, 2], -3)]).unwrap()
    }

    fn ex6() -> SparsePoly {
        SparsePoly::from_ints(
            2,
            &[(&[0, 0], 1), (&[4, 0], 1), (&[0, 4], 1), (&[1, 2], -1), (&[2, 1], -1), (&[1, 1], 5)],
        )
        .unwrap()
    }

    fn cover_of(f: &SparsePoly) -> SimplexCoverResult {
        let p = support_partition(f);
        simplex_cover(&p.lambda_set(), &p.gamma_set(), AnchorRule::default()).unwrap()
    }

    #[test]
    fn motzkin_plan_shapes() {
        let f = motzkin();
        let plan = build_plan(&f, &cover_of(&f), false).unwrap();
        assert_eq!(plan.num_triples(), 3);
        assert_eq!(plan.points.len(), 6);
        assert!(plan.passthrough.is_empty());
        let odd = build_plan(&f, &cover_of(&f), true).unwrap();
        assert_eq!(odd.num_triples(), 5);
        assert_eq!(odd.max_denominator(), BigInt::from(3));
    }

    #[test]
    fn midpoint_single_triple() {
        let f = SparsePoly::from_ints(1, &[(&[0], 1), (&[2], 1), (&[1], -1)]).unwrap();
        let plan = build_plan(&f, &cover_of(&f), false).unwrap();
        assert_eq!(plan.num_triples(), 1);
    }

    #[test]
    fn quartic_mixed_bound() {
        let lb = lower_bound(&ex6(), &PipelineOptions::default()).unwrap();
        assert!((lb.xi + 6.916501).abs() < 1e-3, "xi = {}", lb.xi);
    }

    #[test]
    fn motzkin_bound_near_zero() {
        let lb = lower_bound(&motzkin(), &PipelineOptions::default()).unwrap();
        assert!(lb.xi <= 1e-6 && lb.xi >= -1e-4, "xi = {}", lb.xi);
    }

    #[test]
    fn constant_and_monomial_squares() {
        let f = SparsePoly::from_ints(1, &[(&[0], 5)]).unwrap();
        let lb = lower_bound(&f, &PipelineOptions::default()).unwrap();
        assert_eq!(lb.xi, 5.0);
        assert_eq!(lb.plan.num_triples(), 0);
        let g = SparsePoly::from_ints(1, &[(&[0], 1), (&[2], 1)]).unwrap();
        assert_eq!(lower_bound(&g, &PipelineOptions::default()).unwrap().xi, 1.0);
    }

    #[test]
    fn adding_constant_shifts_bound() {
        let base = lower_bound(&ex6(), &PipelineOptions::default()).unwrap().xi;
        let shifted = lower_bound(&ex6().minus_constant(&int(-3)), &PipelineOptions::default()).unwrap().xi;
        assert!((shifted - base - 3.0).abs() < 1e-6);
    }

    #[test]
    fn uncovered_support_is_rejected() {
        let f = motzkin();
        let plan = build_plan(&f, &cover_of(&f), false).unwrap();
        let g = SparsePoly::from_ints(2, &[(&[4, 2], 1), (&[2, 4], 1), (&[0, 0], 1), (&[2, 2], -3), (&[1, 2], -1)])
            .unwrap();
        assert!(matches!(assemble(&plan, &g, Mode::Feasibility), Err(Error::UncoveredSupport(_))));
    }
}
