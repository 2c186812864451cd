use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sonc_cli::{
    batch_inputs, cmd_bound, cmd_certify, cmd_gen, cmd_verify, exit, gamma_count, run_batch, BoundArgs, CertifyArgs,
    CliError, RunReport,
};
use sonc_core::{InstanceClass, InstanceSpec, SparsePoly};

/// Lower bounds for sparse polynomials via sums of nonnegative circuits, with exact certificates.
#[derive(Parser)]
#[command(name = "sonc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the SONC lower bound ξ_socp.
    Bound(BoundCmd),
    /// Produce an exact certificate that f − ξ is nonnegative.
    Certify(CertifyCmd),
    /// Check a certificate against a polynomial in exact arithmetic.
    Verify(VerifyCmd),
    /// Generate a random benchmark instance.
    Gen(GenCmd),
}

#[derive(Args)]
struct Output {
    /// Machine-readable JSON instead of key=value lines.
    #[arg(long)]
    json: bool,
    /// Print solver iterations to stderr.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args)]
struct Batch {
    /// Process every polynomial file in a directory.
    #[arg(long, value_name = "DIR", conflicts_with = "input")]
    batch: Option<PathBuf>,
    /// Worker threads for batch mode.
    #[arg(long, default_value_t = 4)]
    jobs: usize,
}

#[derive(Args)]
struct BoundCmd {
    /// Polynomial JSON file.
    #[arg(required_unless_present = "batch")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-8)]
    delta_socp: f64,
    /// Write the conic program as JSON.
    #[arg(long, value_name = "PATH")]
    dump_socp: Option<PathBuf>,
    #[command(flatten)]
    batch: Batch,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CertifyCmd {
    /// Polynomial JSON file.
    #[arg(required_unless_present = "batch")]
    input: Option<PathBuf>,
    /// Certify f − ξ ≥ 0 for this ξ (integer, decimal or p/q); default 0.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "auto_margin")]
    xi: Option<String>,
    /// Certify ξ_socp − margin, rounded down to 6 decimals.
    #[arg(long)]
    auto_margin: bool,
    #[arg(long, default_value_t = 1e-4)]
    margin: f64,
    #[arg(long, default_value_t = 1e-8)]
    delta_socp: f64,
    #[arg(long, default_value_t = 1e-5)]
    delta_round: f64,
    /// Certify f − ξ directly with odd-denominator mediated sets.
    #[arg(long)]
    odd_mode: bool,
    /// Certificate path; defaults to <input>.cert.json.
    #[arg(long, short, conflicts_with = "batch")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "PATH", conflicts_with = "batch")]
    dump_socp: Option<PathBuf>,
    #[command(flatten)]
    batch: Batch,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyCmd {
    poly: PathBuf,
    cert: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenCmd {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    t: usize,
    /// standard-simplex, general-simplex or arbitrary-polytope.
    #[arg(long, default_value = "standard-simplex")]
    class: InstanceClass,
    /// Minimum number of inner terms (arbitrary-polytope).
    #[arg(long, default_value_t = 1)]
    l: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    coef_max: i64,
    /// Place the instance strictly inside the SONC cone.
    #[arg(long)]
    interior: bool,
    /// Output file; stdout if omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn print_report(r: &RunReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(&r.to_json()).expect("json"));
    } else {
        print!("{}", r.to_lines());
    }
}

fn print_error(e: &CliError, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(&e.to_json()).expect("json"));
    } else {
        eprint!("{}", e.to_lines());
    }
}

fn single(result: Result<RunReport, CliError>, json: bool) -> i32 {
    match result {
        Ok(r) => {
            print_report(&r, json);
            exit::OK
        }
        Err(e) => {
            print_error(&e, json);
            e.code
        }
    }
}

fn batch<F>(dir: &Path, jobs: usize, json: bool, job: F) -> i32
where
    F: Fn(&Path) -> Result<RunReport, CliError> + Sync,
{
    let inputs = match batch_inputs(dir) {
        Ok(v) => v,
        Err(e) => {
            print_error(&e, json);
            return e.code;
        }
    };
    let results = run_batch(&inputs, jobs, job);
    let mut code = exit::OK;
    if json {
        let items: Vec<serde_json::Value> =
            results.iter().map(|r| r.as_ref().map_or_else(CliError::to_json, RunReport::to_json)).collect();
        println!("{}", serde_json::to_string_pretty(&items).expect("json"));
    } else {
        println!("{}", RunReport::csv_header());
    }
    for (path, r) in inputs.iter().zip(&results) {
        match r {
            Ok(rep) if !json => println!("{}", rep.to_csv_row()),
            Ok(_) => {}
            Err(e) => {
                if !json {
                    println!("{},{},,,0,0,0", path.display(), e.status);
                }
                code = code.max(e.code);
            }
        }
    }
    code
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Bound(c) => {
            let args = BoundArgs { delta_socp: c.delta_socp, dump_socp: c.dump_socp, verbose: c.output.verbose };
            match (&c.input, &c.batch.batch) {
                (_, Some(dir)) => {
                    let args = BoundArgs { dump_socp: None, ..args };
                    batch(dir, c.batch.jobs, c.output.json, |p| cmd_bound(p, &args))
                }
                (Some(input), None) => single(cmd_bound(input, &args), c.output.json),
                (None, None) => unreachable!("clap requires an input"),
            }
        }
        Command::Certify(c) => {
            let args = CertifyArgs {
                xi: c.xi,
                auto_margin: c.auto_margin,
                margin: c.margin,
                delta_socp: c.delta_socp,
                delta_round: c.delta_round,
                odd_mode: c.odd_mode,
                out: c.out,
                dump_socp: c.dump_socp,
                verbose: c.output.verbose,
            };
            match (&c.input, &c.batch.batch) {
                (_, Some(dir)) => batch(dir, c.batch.jobs, c.output.json, |p| cmd_certify(p, &args)),
                (Some(input), None) => single(cmd_certify(input, &args), c.output.json),
                (None, None) => unreachable!("clap requires an input"),
            }
        }
        Command::Verify(c) => match cmd_verify(&c.poly, &c.cert) {
            Ok(v) => {
                if c.json {
                    println!("{}", serde_json::to_string_pretty(&v.to_json()).expect("json"));
                } else {
                    print!("{}", v.to_lines());
                }
                v.exit_code()
            }
            Err(e) => {
                print_error(&e, c.json);
                e.code
            }
        },
        Command::Gen(c) => {
            let spec = InstanceSpec {
                n: c.n,
                d: c.d,
                t: c.t,
                class: c.class,
                l: c.l,
                seed: c.seed,
                coef_max: c.coef_max,
                interior: c.interior,
            };
            match cmd_gen(&spec, c.out.as_deref()) {
                Ok(text) => {
                    match &c.out {
                        Some(p) => {
                            let f = SparsePoly::from_json_str(&text).expect("generated polynomial parses");
                            eprintln!("wrote {} ({} terms, {} inner)", p.display(), f.len(), gamma_count(&f));
                        }
                        None => print!("{text}"),
                    }
                    exit::OK
                }
                Err(e) => {
                    print_error(&e, false);
                    e.code
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    ExitCode::from(run(cli) as u8)
}
