//! Subcommand implementations behind the `sonc` binary.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sonc_core::certify::certificate_target;
use sonc_core::rat::{self, Rational};
use sonc_core::{
    assemble, certify_bound, exact_sobs, lower_bound, support_partition, verify_certificate, CertMode, CertifyOptions,
    Certified, Error, InstanceSpec, Mode, PhaseTimings, PipelineOptions, SobsCertificate, SolverSettings, SparsePoly,
    Verdict,
};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Verification rejected a certificate, or an error with no finer code.
    pub const REJECTED: i32 = 1;
    /// The numeric solution did not round into the cone (boundary instance or too little margin).
    pub const BOUNDARY: i32 = 2;
    pub const SOLVER: i32 = 3;
    pub const COVER: i32 = 4;
    pub const USAGE: i32 = 64;
    pub const PARSE: i32 = 65;
    pub const IO: i32 = 74;
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    /// Short machine-readable status, e.g. `solver-failure`.
    pub status: &'static str,
    /// Pipeline phase the error came from, if any.
    pub phase: Option<&'static str>,
    pub message: String,
}

impl CliError {
    fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError { code: exit::IO, status: "io-error", phase: None, message: format!("{}: {e}", path.display()) }
    }

    fn parse(path: &Path, e: Error) -> CliError {
        CliError { code: exit::PARSE, status: "parse-error", phase: None, message: format!("{}: {e}", path.display()) }
    }

    fn usage(message: String) -> CliError {
        CliError { code: exit::USAGE, status: "usage-error", phase: None, message }
    }

    pub fn to_lines(&self) -> String {
        let mut s = format!("status={}\n", self.status);
        if let Some(p) = self.phase {
            s.push_str(&format!("phase={p}\n"));
        }
        s.push_str(&format!("error={}\n", self.message));
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "status": self.status, "phase": self.phase, "error": self.message, "exit_code": self.code })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase {
            Some(p) => write!(f, "{} during {p}: {}", self.status, self.message),
            None => write!(f, "{}: {}", self.status, self.message),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let (code, status, phase) = match &e {
            Error::Parse(_) | Error::Json(_) | Error::DuplicateExponent(_) | Error::DimensionMismatch { .. } => {
                (exit::PARSE, "parse-error", None)
            }
            Error::CoverInfeasible(_) | Error::LpInfeasible | Error::LpUnbounded => (exit::COVER, "cover-failure", Some("cover")),
            Error::UncoveredSupport(_) | Error::NegativePassthrough(_) => (exit::COVER, "cover-failure", Some("assemble")),
            Error::NotOnSegment | Error::DegenerateTrellis | Error::NotInterior(_) | Error::Overflow(_) => {
                (exit::REJECTED, "pipeline-error", Some("mediated"))
            }
            Error::Solver(_) => (exit::SOLVER, "solver-failure", Some("solve")),
            Error::NotStrictlyCertifiable(_) => (exit::BOUNDARY, "boundary-failure", Some("certify")),
            Error::InvalidArgument(_) | Error::BudgetExceeded => (exit::REJECTED, "error", None),
        };
        CliError { code, status, phase, message: e.to_string() }
    }
}

/// Outcome of `bound` or `certify`.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub input: String,
    pub status: String,
    /// ξ_socp; present only when the solver reached optimality.
    pub bound: Option<f64>,
    /// Exact ξ of the certificate.
    pub xi_cert: Option<String>,
    pub circuits: usize,
    pub triples: usize,
    pub solver_status: String,
    pub iterations: Option<usize>,
    pub attempts: Option<usize>,
    pub timings: PhaseTimings,
    pub total_secs: f64,
    pub certificate_path: Option<String>,
    pub certificate_bits: Option<u64>,
    pub socp_dump: Option<String>,
}

impl RunReport {
    fn new(input: &Path) -> RunReport {
        RunReport {
            input: input.display().to_string(),
            status: "ok".into(),
            bound: None,
            xi_cert: None,
            circuits: 0,
            triples: 0,
            solver_status: String::new(),
            iterations: None,
            attempts: None,
            timings: PhaseTimings::default(),
            total_secs: 0.0,
            certificate_path: None,
            certificate_bits: None,
            socp_dump: None,
        }
    }

    /// `key=value` lines; absent fields are omitted.
    pub fn to_lines(&self) -> String {
        let mut out = Vec::new();
        let mut kv = |k: &str, v: String| out.push(format!("{k}={v}"));
        kv("input", self.input.clone());
        kv("status", self.status.clone());
        if let Some(b) = self.bound {
            kv("bound", format!("{b:.10}"));
        }
        if let Some(x) = &self.xi_cert {
            kv("xi_cert", x.clone());
        }
        kv("circuits", self.circuits.to_string());
        kv("triples", self.triples.to_string());
        kv("solver_status", self.solver_status.clone());
        if let Some(i) = self.iterations {
            kv("iterations", i.to_string());
        }
        if let Some(a) = self.attempts {
            kv("attempts", a.to_string());
        }
        let t = &self.timings;
        kv("time_cover", format!("{:.6}", t.cover));
        kv("time_mediated", format!("{:.6}", t.mediated));
        kv("time_assemble", format!("{:.6}", t.assemble));
        kv("time_solve", format!("{:.6}", t.solve));
        kv("time_certify", format!("{:.6}", t.certify));
        kv("time_total", format!("{:.6}", self.total_secs));
        if let Some(p) = &self.certificate_path {
            kv("certificate", p.clone());
        }
        if let Some(b) = self.certificate_bits {
            kv("certificate_bits", b.to_string());
        }
        if let Some(p) = &self.socp_dump {
            kv("socp_dump", p.clone());
        }
        out.join("\n") + "\n"
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn csv_header() -> &'static str {
        "input,status,bound,xi_cert,circuits,triples,total_secs"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.6}",
            self.input,
            self.status,
            self.bound.map(|b| format!("{b:.10}")).unwrap_or_default(),
            self.xi_cert.clone().unwrap_or_default(),
            self.circuits,
            self.triples,
            self.total_secs
        )
    }
}

pub fn read_poly(path: &Path) -> Result<SparsePoly, CliError> {
    let s = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    SparsePoly::from_json_str(&s).map_err(|e| CliError::parse(path, e))
}

pub fn read_certificate(path: &Path) -> Result<SobsCertificate, CliError> {
    let s = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    SobsCertificate::from_json_str(&s).map_err(|e| CliError::parse(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn write_json(path: &Path, v: &serde_json::Value) -> Result<(), CliError> {
    write_file(path, &(serde_json::to_string_pretty(v).expect("json serializes") + "\n"))
}

#[derive(Clone, Debug)]
pub struct BoundArgs {
    pub delta_socp: f64,
    pub dump_socp: Option<PathBuf>,
    pub verbose: bool,
}

impl Default for BoundArgs {
    fn default() -> Self {
        BoundArgs { delta_socp: 1e-8, dump_socp: None, verbose: false }
    }
}

fn solver_settings(delta_socp: f64, verbose: bool) -> Result<SolverSettings, CliError> {
    if !(delta_socp > 0.0 && delta_socp < 1.0) {
        return Err(CliError::usage(format!("--delta-socp must lie in (0, 1), got {delta_socp}")));
    }
    Ok(SolverSettings { tol: delta_socp, verbose, ..SolverSettings::default() })
}

pub fn cmd_bound(input: &Path, args: &BoundArgs) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let f = read_poly(input)?;
    let opts = PipelineOptions { solver: solver_settings(args.delta_socp, args.verbose)?, ..PipelineOptions::default() };
    let lb = lower_bound(&f, &opts)?;
    let mut report = RunReport::new(input);
    if let Some(p) = &args.dump_socp {
        write_json(p, &lb.problem.dump_json())?;
        report.socp_dump = Some(p.display().to_string());
    }
    report.bound = Some(lb.xi);
    report.circuits = lb.cover.circuits.len();
    report.triples = lb.plan.num_triples();
    report.solver_status = lb.solution.status.to_string();
    report.iterations = Some(lb.solution.iterations);
    report.timings = lb.timings;
    report.total_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct CertifyArgs {
    /// Fixed ξ as an integer, decimal or `p/q` string; defaults to 0.
    pub xi: Option<String>,
    /// Certify ⌊ξ_socp − margin⌋₆ instead of a fixed ξ.
    pub auto_margin: bool,
    pub margin: f64,
    pub delta_socp: f64,
    pub delta_round: f64,
    pub odd_mode: bool,
    /// Defaults to `<input stem>.cert.json` next to the input.
    pub out: Option<PathBuf>,
    pub dump_socp: Option<PathBuf>,
    pub verbose: bool,
}

impl Default for CertifyArgs {
    fn default() -> Self {
        CertifyArgs {
            xi: None,
            auto_margin: false,
            margin: 1e-4,
            delta_socp: 1e-8,
            delta_round: 1e-5,
            odd_mode: false,
            out: None,
            dump_socp: None,
            verbose: false,
        }
    }
}

pub fn default_certificate_path(input: &Path) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "poly".into());
    input.with_file_name(format!("{stem}.cert.json"))
}

pub fn cmd_certify(input: &Path, args: &CertifyArgs) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let f = read_poly(input)?;
    if !(args.delta_round > 0.0 && args.delta_round < 1.0) {
        return Err(CliError::usage(format!("--delta-round must lie in (0, 1), got {}", args.delta_round)));
    }
    if !(args.margin >= 0.0 && args.margin.is_finite()) {
        return Err(CliError::usage(format!("--margin must be nonnegative, got {}", args.margin)));
    }
    let xi = match (&args.xi, args.auto_margin) {
        (Some(_), true) => return Err(CliError::usage("--xi and --auto-margin are mutually exclusive".into())),
        (Some(s), false) => Some(rat::parse_rational(s).map_err(|e| CliError::usage(format!("--xi: {e}")))?),
        (None, _) => None,
    };
    let opts = CertifyOptions {
        delta_hat: args.delta_round,
        delta_tilde: args.delta_socp,
        xi,
        pipeline: PipelineOptions {
            solver: solver_settings(args.delta_socp, args.verbose)?,
            odd_mode: args.odd_mode,
            ..PipelineOptions::default()
        },
    };
    let mut report = RunReport::new(input);
    let certified: Certified = if args.auto_margin {
        let (xi_socp, c) = certify_bound(&f, args.margin, &opts)?;
        report.bound = Some(xi_socp);
        c
    } else {
        exact_sobs(&f, &opts)?
    };
    let cert = &certified.certificate;
    if let Some(p) = &args.dump_socp {
        let target = certificate_target(&f, &cert.xi, cert.mode);
        let problem = assemble(&certified.plan, &target, Mode::Feasibility)?;
        write_json(p, &problem.dump_json())?;
        report.socp_dump = Some(p.display().to_string());
    }
    let out = args.out.clone().unwrap_or_else(|| default_certificate_path(input));
    write_file(&out, &(cert.to_json_string() + "\n"))?;

    report.xi_cert = Some(rat::to_pq(&cert.xi));
    report.circuits = cert.circuits.len();
    report.triples = cert.num_triples();
    report.solver_status = certified.solver_status.to_string();
    report.attempts = Some(certified.attempts);
    report.timings = certified.timings.clone();
    report.certificate_path = Some(out.display().to_string());
    report.certificate_bits = Some(cert.bit_size());
    report.total_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Verdict plus the certificate's mode and ξ for reporting.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub verdict: Verdict,
    pub xi: Rational,
    pub mode: CertMode,
    pub triples: usize,
}

impl VerifyOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.verdict.is_accepted() {
            exit::OK
        } else {
            exit::REJECTED
        }
    }

    pub fn to_lines(&self) -> String {
        match &self.verdict {
            Verdict::Accepted => format!(
                "status=accepted\nxi={}\nmode={}\ntriples={}\n",
                rat::to_pq(&self.xi),
                self.mode,
                self.triples
            ),
            Verdict::Rejected(r) => format!("status=rejected\nreason={}\ndetail={r}\n", r.code()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.verdict {
            Verdict::Accepted => serde_json::json!({
                "status": "accepted",
                "xi": rat::to_pq(&self.xi),
                "mode": self.mode,
                "triples": self.triples,
            }),
            Verdict::Rejected(r) => serde_json::json!({ "status": "rejected", "reason": r.code(), "detail": r.to_string() }),
        }
    }
}

pub fn cmd_verify(poly: &Path, cert: &Path) -> Result<VerifyOutcome, CliError> {
    let f = read_poly(poly)?;
    let c = read_certificate(cert)?;
    Ok(VerifyOutcome { verdict: verify_certificate(&f, &c), xi: c.xi.clone(), mode: c.mode, triples: c.num_triples() })
}

/// Generates an instance and writes it to `out`, or returns the JSON text when `out` is `None`.
pub fn cmd_gen(spec: &InstanceSpec, out: Option<&Path>) -> Result<String, CliError> {
    let f = spec.generate()?;
    let text = f.to_json_string() + "\n";
    if let Some(p) = out {
        write_file(p, &text)?;
    }
    Ok(text)
}

/// Γ size of a generated or parsed polynomial, for quick summaries.
pub fn gamma_count(f: &SparsePoly) -> usize {
    support_partition(f).gamma.len()
}

/// Polynomial files (`*.json`, excluding certificates) in `dir`, sorted.
pub fn batch_inputs(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    for e in entries {
        let p = e.map_err(|e| CliError::io(dir, e))?.path();
        let name = p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        if p.is_file() && name.ends_with(".json") && !name.ends_with(".cert.json") {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

/// Runs `job` over every input on a pool of `jobs` workers; results keep input order.
pub fn run_batch<F>(inputs: &[PathBuf], jobs: usize, job: F) -> Vec<Result<RunReport, CliError>>
where
    F: Fn(&Path) -> Result<RunReport, CliError> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    pool.install(|| inputs.par_iter().map(|p| job(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_codes_by_kind() {
        assert_eq!(CliError::from(Error::NotStrictlyCertifiable("x".into())).code, exit::BOUNDARY);
        assert_eq!(CliError::from(Error::Solver(sonc_core::SolverStatus::Stalled)).code, exit::SOLVER);
        assert_eq!(CliError::from(Error::CoverInfeasible("(1,1)".into())).code, exit::COVER);
        assert_eq!(CliError::from(Error::Parse("bad".into())).code, exit::PARSE);
        let e = CliError::from(Error::Solver(sonc_core::SolverStatus::Infeasible));
        assert_eq!(e.phase, Some("solve"));
        assert!(e.to_lines().contains("status=solver-failure"));
    }

    #[test]
    fn certificate_path_next_to_input() {
        assert_eq!(default_certificate_path(Path::new("/tmp/a/motzkin.json")), PathBuf::from("/tmp/a/motzkin.cert.json"));
    }

    #[test]
    fn report_lines_skip_missing_fields() {
        let r = RunReport::new(Path::new("f.json"));
        let s = r.to_lines();
        assert!(s.contains("status=ok"));
        assert!(!s.contains("bound="));
        assert_eq!(RunReport::csv_header().split(',').count(), r.to_csv_row().split(',').count());
    }
}
