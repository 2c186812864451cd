//! Rounding-projection conversion of numeric cone solutions into exact
//! sums of binomial squares, plus an independent verifier.

mod cert;
mod verify;

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, Zero};

use crate::cover::simplex_cover;
use crate::error::{Error, Result};
use crate::poly::{support_partition, to_pn, SparsePoly};
use crate::rat::{self, Rational};
use crate::socp::{
    assemble, build_plan, lower_bound, secs, solve, ConeTriplePlan, Mode, PhaseTimings, PipelineOptions,
    SocpProblem, SolverSettings, SolverStatus,
};

pub use cert::{CertMode, ExactTriple, SobsCertificate};
pub use verify::{verify_certificate, RejectReason, Verdict};

/// Nearest multiple of 2^-k with k = ⌈log₂(1/δ̂)⌉.
pub fn round_to_rational(x: f64, delta_hat: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("cannot round non-finite value {x}")));
    }
    if !(delta_hat > 0.0 && delta_hat.is_finite()) {
        return Err(Error::InvalidArgument(format!("rounding precision must be positive, got {delta_hat}")));
    }
    let k = (1.0 / delta_hat).log2().ceil().max(0.0) as i32;
    let scaled = (x * 2f64.powi(k)).round();
    let num = BigInt::from_f64(scaled).ok_or_else(|| Error::InvalidArgument(format!("cannot round {x}")))?;
    Ok(Rational::new(num, num_traits::pow(BigInt::from(2), k as usize)))
}

/// `a ≥ 0, b ≥ 0, 2ab ≥ c²` exactly.
pub fn check_cone(a: &Rational, b: &Rational, c: &Rational) -> bool {
    !a.is_negative() && !b.is_negative() && (a * b * Rational::from_integer(2.into())) >= c * c
}

/// Strict interior of the rotated cone.
pub fn check_cone_strict(a: &Rational, b: &Rational, c: &Rational) -> bool {
    a.is_positive() && b.is_positive() && (a * b * Rational::from_integer(2.into())) > c * c
}

/// η(γ) for the rows of a problem.
pub fn slot_multiplicity(problem: &SocpProblem) -> Vec<u32> {
    let mut eta = vec![0u32; problem.num_rows()];
    for t in &problem.triples {
        for &r in t {
            eta[r] += 1;
        }
    }
    eta
}

/// r(γ) = Σ_v 2a + Σ_w b − Σ_u 2c − f_γ for every row.
pub fn residuals(problem: &SocpProblem, values: &[[Rational; 3]]) -> Vec<Rational> {
    let mut r: Vec<Rational> = problem.rhs.iter().map(|x| -x.clone()).collect();
    let two = Rational::from_integer(2.into());
    for (&[u, v, w], [a, b, c]) in problem.triples.iter().zip(values) {
        r[v] += &two * a;
        r[w] += b;
        r[u] -= &two * c;
    }
    r
}

/// Spreads each row residual evenly over the slots touching it.
pub fn project(problem: &SocpProblem, values: &[[Rational; 3]]) -> Vec<[Rational; 3]> {
    let r = residuals(problem, values);
    let eta = slot_multiplicity(problem);
    let share = |row: usize, k: i64| -> Rational {
        if r[row].is_zero() {
            Rational::zero()
        } else {
            &r[row] / Rational::from_integer(BigInt::from(k * eta[row] as i64))
        }
    };
    problem
        .triples
        .iter()
        .zip(values)
        .map(|(&[u, v, w], [a, b, c])| [a - share(v, 2), b - share(w, 1), c + share(u, 2)])
        .collect()
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub delta_hat: f64,
    pub delta_tilde: f64,
    pub xi: Option<Rational>,
    pub pipeline: PipelineOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { delta_hat: 1e-5, delta_tilde: 1e-8, xi: None, pipeline: PipelineOptions::default() }
    }
}

/// A certificate together with run statistics.
#[derive(Clone, Debug)]
pub struct Certified {
    pub certificate: SobsCertificate,
    pub plan: ConeTriplePlan,
    pub attempts: usize,
    pub solver_status: SolverStatus,
    pub timings: PhaseTimings,
}

/// The polynomial whose cone decomposition is sought.
pub fn certificate_target(f: &SparsePoly, xi: &Rational, mode: CertMode) -> SparsePoly {
    match mode {
        CertMode::PnReduced => to_pn(f).minus_constant(xi),
        CertMode::Direct => f.minus_constant(xi),
    }
}

/// Round, project and check; the certificate is returned only if every triple is strictly inside the cone.
pub fn exact_sobs(f: &SparsePoly, opts: &CertifyOptions) -> Result<Certified> {
    let xi = opts.xi.clone().unwrap_or_else(Rational::zero);
    let mode = if opts.pipeline.odd_mode { CertMode::Direct } else { CertMode::PnReduced };
    let g = certificate_target(f, &xi, mode);
    let mut timings = PhaseTimings::default();

    let t0 = Instant::now();
    let part = support_partition(&g);
    let cover = simplex_cover(&part.lambda_set(), &part.gamma_set(), opts.pipeline.anchor)?;
    timings.cover = secs(t0.elapsed());
    let t1 = Instant::now();
    let plan = build_plan(&g, &cover, opts.pipeline.odd_mode)?;
    timings.mediated = secs(t1.elapsed());
    let t2 = Instant::now();
    let problem = assemble(&plan, &g, Mode::Feasibility)?;
    timings.assemble = secs(t2.elapsed());

    let schedule = [(opts.delta_hat, opts.delta_tilde), (opts.delta_hat / 1024.0, opts.delta_tilde / 100.0)];
    let mut last_status = SolverStatus::Optimal;
    for (attempt, &(dh, dt)) in schedule.iter().enumerate() {
        let t3 = Instant::now();
        let settings = SolverSettings { tol: dt, ..opts.pipeline.solver };
        let sol = solve(&problem, &settings);
        timings.solve += secs(t3.elapsed());
        last_status = sol.status;
        match sol.status {
            SolverStatus::Infeasible | SolverStatus::Unbounded => return Err(Error::Solver(sol.status)),
            SolverStatus::Optimal => {}
            _ if sol.primal_residual <= 1e-4 => {}
            _ => return Err(Error::Solver(sol.status)),
        }
        let t4 = Instant::now();
        let rounded: Vec<[Rational; 3]> = sol
            .triples
            .iter()
            .map(|t| Ok([round_to_rational(t[0], dh)?, round_to_rational(t[1], dh)?, round_to_rational(t[2], dh)?]))
            .collect::<Result<_>>()?;
        let exact = project(&problem, &rounded);
        let ok = exact.iter().all(|[a, b, c]| check_cone_strict(a, b, c));
        timings.certify += secs(t4.elapsed());
        if ok {
            let certificate = SobsCertificate::assemble(f, &xi, mode, &plan, &problem, &exact);
            return Ok(Certified { certificate, plan, attempts: attempt + 1, solver_status: sol.status, timings });
        }
    }
    Err(Error::NotStrictlyCertifiable(format!(
        "cone membership fails after precision escalation (solver status {last_status})"
    )))
}

/// ξ_cert = ⌊(ξ_socp − margin)·10⁶⌋ / 10⁶.
pub fn certified_xi(xi_socp: f64, margin: f64) -> Result<Rational> {
    let shifted = rat::from_f64(xi_socp - margin)?;
    Ok(rat::floor_to_denominator(&shifted, 1_000_000))
}

/// Bound first, then certify f̃ − ξ_cert.
pub fn certify_bound(f: &SparsePoly, margin: f64, opts: &CertifyOptions) -> Result<(f64, Certified)> {
    let lb = lower_bound(f, &PipelineOptions { odd_mode: false, ..opts.pipeline })?;
    let xi = certified_xi(lb.xi, margin)?;
    let mut certified = exact_sobs(f, &CertifyOptions { xi: Some(xi), ..opts.clone() })?;
    certified.timings.solve += lb.timings.solve;
    certified.timings.cover += lb.timings.cover;
    certified.timings.mediated += lb.timings.mediated;
    certified.timings.assemble += lb.timings.assemble;
    Ok((lb.xi, certified))
}
