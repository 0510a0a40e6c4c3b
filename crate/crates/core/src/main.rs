use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use periodic_interp::analytic::{candidate_fstrip_norm, StripGeometry};
use periodic_interp::bounds::{c1, c_general, c_main, c_optimized, m_bound, ConstantsRow};
use periodic_interp::normsolver::{sandwich, SolverConfig, ARTIFACT_VERSION};
use periodic_interp::periodize::{periodize, Kernel};
use periodic_interp::suite::{random_element, rng, SuiteSpec};
use periodic_interp::verify::{self, Suite, VerifyOptions};
use periodic_interp::{CandidateFn, Couple, Exponent};

#[derive(Parser)]
#[command(name = "periodic-interp", version, about = "Periodic complex interpolation on weighted lp couples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate C1, m, C_main, C_general and the optimized constant.
    Constants(ConstantsArgs),
    /// Run oracle/upper-bound sandwiches on seeded random instances.
    Sandwich(SandwichArgs),
    /// Periodize a closed-form strip function.
    Periodize(PeriodizeArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct ConstantsArgs {
    /// Periods, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<f64>,
    /// Gaussian parameter for the C1 column.
    #[arg(long)]
    alpha: Option<f64>,
    /// Outer parameter for the C_general column (needs --rho).
    #[arg(long, requires = "rho")]
    delta: Option<f64>,
    /// Inner parameter for the C_general column (needs --delta).
    #[arg(long, requires = "delta")]
    rho: Option<f64>,
    /// Also minimize C_general over (delta, rho).
    #[arg(long)]
    optimize: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(clap::Args)]
struct SandwichArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Dimension of a single couple; the maximal dimension for the full suite.
    #[arg(long)]
    n: Option<usize>,
    /// Exponent on Re z = 0 (`inf` allowed). Without --p0/--p1 all standard pairs run.
    #[arg(long, requires = "p1")]
    p0: Option<Exponent>,
    /// Exponent on Re z = 1 (`inf` allowed).
    #[arg(long, requires = "p0")]
    p1: Option<Exponent>,
    /// Weights, comma separated; random when omitted.
    #[arg(long, value_delimiter = ',', requires = "p0")]
    mu: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.7")]
    theta: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
    lambda: Vec<f64>,
    /// Random vectors per (theta, lambda).
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Laurent degree of the solver.
    #[arg(long = "laurent-N", default_value_t = 12)]
    laurent_n: usize,
    /// Boundary samples per degree.
    #[arg(long, default_value_t = 8)]
    oversample: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct PeriodizeArgs {
    /// JSON file holding a candidate function, or an object
    /// `{"couple": ..., "function": ...}`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    lambda: f64,
    /// Must match the centre of the input; defaults to it.
    #[arg(long)]
    theta: Option<f64>,
    /// Gaussian parameter; defaults to 1/lambda.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value = "w")]
    kernel: Kernel,
    /// Relative truncation tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Couple exponents and weights when the input is a bare function.
    #[arg(long, default_value = "2")]
    p0: Exponent,
    #[arg(long, default_value = "2")]
    p1: Exponent,
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<f64>>,
    /// Also project onto Laurent polynomials of this degree.
    #[arg(long = "emit-laurent")]
    emit_laurent: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Subtract this from every C1 bound (the checks should then fail).
    #[arg(long, default_value_t = 0.0, hide = true)]
    c1_offset: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure modes and their exit codes.
enum Failure {
    Assertion,
    Config(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

impl From<periodic_interp::Error> for Failure {
    fn from(e: periodic_interp::Error) -> Self {
        Failure::Config(e.into())
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn json_text<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Serialize)]
struct ConstantsOutput {
    #[serde(flatten)]
    row: ConstantsRow,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn constants_row(lambda: f64, args: &ConstantsArgs) -> periodic_interp::Result<ConstantsRow> {
    let mut row = ConstantsRow {
        lambda,
        alpha: args.alpha,
        delta: args.delta,
        rho: args.rho,
        c1: None,
        m: Some(m_bound(lambda)?),
        c_main: Some(c_main(lambda)?),
        c_general: None,
        c_opt: None,
        delta_opt: None,
        rho_opt: None,
    };
    if let Some(alpha) = args.alpha {
        row.c1 = Some(c1(lambda, alpha)?);
    }
    if let (Some(delta), Some(rho)) = (args.delta, args.rho) {
        row.c_general = Some(c_general(lambda, delta, rho)?);
    }
    if args.optimize {
        let opt = c_optimized(lambda)?;
        row.c_opt = Some(opt.value);
        row.delta_opt = Some(opt.delta);
        row.rho_opt = Some(opt.rho);
    }
    Ok(row)
}

/// Shortest round-trip form of an input, switching to exponent notation
/// outside `[1e-4, 1e15)`.
fn input_cell(x: f64) -> String {
    if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

fn run_constants(args: ConstantsArgs) -> Result<(), Failure> {
    let rows: Vec<ConstantsOutput> = args
        .lambda
        .iter()
        .map(|&lambda| match constants_row(lambda, &args) {
            Ok(row) => ConstantsOutput { row, error: None },
            Err(e) => ConstantsOutput {
                row: ConstantsRow {
                    lambda,
                    alpha: args.alpha,
                    delta: args.delta,
                    rho: args.rho,
                    c1: None,
                    m: None,
                    c_main: None,
                    c_general: None,
                    c_opt: None,
                    delta_opt: None,
                    rho_opt: None,
                },
                error: Some(e.to_string()),
            },
        })
        .collect();
    let text = match args.format {
        Format::Json => json_text(&rows)?,
        Format::Csv => {
            let mut s = String::from("lambda,alpha,delta,rho,c1,m,c_main,c_general,c_opt,delta_opt,rho_opt\n");
            for o in &rows {
                let r = &o.row;
                let fields = [
                    input_cell(r.lambda),
                    r.alpha.map(input_cell).unwrap_or_default(),
                    r.delta.map(input_cell).unwrap_or_default(),
                    r.rho.map(input_cell).unwrap_or_default(),
                    cell(r.c1),
                    cell(r.m),
                    cell(r.c_main),
                    cell(r.c_general),
                    cell(r.c_opt),
                    cell(r.delta_opt),
                    cell(r.rho_opt),
                ];
                s.push_str(&fields.join(","));
                if let Some(e) = &o.error {
                    s.push_str(&format!(",\"error: {}\"", e.replace('"', "'")));
                }
                s.push('\n');
            }
            s
        }
    };
    emit(None, &text)?;
    Ok(())
}

/// `(index, couple, a, θ, λ)`.
type Instance = (usize, Couple, periodic_interp::Element, f64, f64);

/// Instances requested on the command line.
fn sandwich_cases(args: &SandwichArgs) -> anyhow::Result<Vec<Instance>> {
    if let (Some(p0), Some(p1)) = (args.p0, args.p1) {
        let mut r = rng(args.seed);
        let couple = match &args.mu {
            Some(mu) => {
                if let Some(n) = args.n {
                    if n != mu.len() {
                        bail!("--n {n} disagrees with {} weights", mu.len());
                    }
                }
                Couple::new(p0, p1, mu.clone())?
            }
            None => {
                let n = args.n.unwrap_or(4);
                if n == 0 {
                    bail!("--n must be positive");
                }
                let mu = periodic_interp::suite::random_weights(&mut r, n);
                Couple::new(p0, p1, mu)?
            }
        };
        let mut out = Vec::new();
        for &theta in &args.theta {
            for &lambda in &args.lambda {
                for _ in 0..args.reps {
                    let a = random_element(&mut r, couple.n());
                    out.push((out.len(), couple.clone(), a, theta, lambda));
                }
            }
        }
        Ok(out)
    } else {
        let mut spec = SuiteSpec::standard(args.seed, args.theta.clone(), args.lambda.clone(), args.reps);
        if let Some(n) = args.n {
            if n == 0 {
                bail!("--n must be positive");
            }
            spec.n_max = n;
        }
        Ok(spec
            .cases()?
            .into_iter()
            .map(|c| (c.index, c.couple, c.a, c.theta, c.lambda))
            .collect())
    }
}

fn run_sandwich(args: SandwichArgs) -> Result<(), Failure> {
    let cfg = SolverConfig::with_degree(args.laurent_n, args.oversample);
    cfg.validate()?;
    for &t in &args.theta {
        if !(t > 0.0 && t < 1.0) {
            return Err(Failure::Config(anyhow::anyhow!("theta must lie in (0, 1), got {t}")));
        }
    }
    for &l in &args.lambda {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Failure::Config(anyhow::anyhow!("lambda must be positive, got {l}")));
        }
    }
    let cases = sandwich_cases(&args)?;
    let reports: Vec<Value> = cases
        .iter()
        .map(|(index, couple, a, theta, lambda)| {
            match sandwich(couple, a, *theta, *lambda, &cfg, Some(args.seed)) {
                Ok(r) => {
                    let mut v = serde_json::to_value(&r).expect("report serializes");
                    v["index"] = json!(index);
                    v
                }
                Err(e) => json!({ "index": index, "theta": theta, "lambda": lambda, "error": e.to_string() }),
            }
        })
        .collect();
    emit(args.out.as_ref(), &json_text(&reports)?)?;
    Ok(())
}

fn read_candidate(args: &PeriodizeArgs) -> anyhow::Result<(CandidateFn, Couple)> {
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let value: Value = serde_json::from_str(&text).context("input is not JSON")?;
    if value.get("function").is_some() {
        let couple: Couple = serde_json::from_value(value["couple"].clone()).context("parsing couple")?;
        let f: CandidateFn = serde_json::from_value(value["function"].clone()).context("parsing function")?;
        return Ok((f, couple));
    }
    let f: CandidateFn = serde_json::from_value(value).context("parsing candidate function")?;
    let couple = match &args.mu {
        Some(mu) => Couple::new(args.p0, args.p1, mu.clone())?,
        None => Couple::uniform(f.dim(), args.p0, args.p1)?,
    };
    Ok((f, couple))
}

fn run_periodize(args: PeriodizeArgs) -> Result<(), Failure> {
    let (f, couple) = read_candidate(&args)?;
    if couple.n() != f.dim() {
        return Err(Failure::Config(anyhow::anyhow!(
            "couple has dimension {} but the function has {} coordinates",
            couple.n(),
            f.dim()
        )));
    }
    let theta = args.theta.unwrap_or(f.theta());
    let geometry = StripGeometry::new(args.lambda, theta)?;
    let alpha = args.alpha.unwrap_or(1.0 / args.lambda);
    let p = periodize(&f, &couple, args.kernel, alpha, geometry, args.tol)?;
    let mut out = json!({
        "version": ARTIFACT_VERSION,
        "lambda": args.lambda,
        "theta": theta,
        "alpha": alpha,
        "kernel": args.kernel,
        "couple": couple,
        "K": p.truncation(),
        "tail_bound": p.tail_bound(),
        "candidate_fstrip_norm": candidate_fstrip_norm(&f, &couple)?,
        "fstrip_norm": p.fstrip_norm()?,
        "norm_bound_rhs": p.norm_bound_rhs()?,
        "value_at_theta": p.value_at_theta(),
    });
    if let Some(degree) = args.emit_laurent {
        let samples = periodic_interp::analytic::default_samples(degree);
        let proj = p.project(degree, samples)?;
        out["laurent"] = serde_json::to_value(&proj.function).expect("laurent serializes");
        out["aliasing"] = json!(proj.aliasing);
    }
    emit(args.out.as_ref(), &json_text(&out)?)?;
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let opts = VerifyOptions {
        c1_offset: args.c1_offset,
        seed: args.seed,
    };
    let summary = verify::run(args.suite, &opts);
    emit(args.out.as_ref(), &json_text(&summary)?)?;
    for c in &summary.criteria {
        eprintln!("{} criterion {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.title);
    }
    if summary.passed {
        Ok(())
    } else {
        Err(Failure::Assertion)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Constants(a) => run_constants(a),
        Command::Sandwich(a) => run_sandwich(a),
        Command::Periodize(a) => run_periodize(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion) => ExitCode::from(1),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
