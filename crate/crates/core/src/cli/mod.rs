//! Command-line front end. `main` only parses arguments and forwards to [`run`].

mod config;

pub use config::{AsymProbeConfig, CheckConfig, GenMatrixConfig, LambdaGrid, TransformConfig, VerifyConfig, WeylSweepConfig};

use crate::equivalence::{apply, weyl_invariance_check, ProblemSpec};
use crate::error::Error;
use crate::model::{validate_orders, Geometry};
use crate::quasideriv::verify_seed;
use crate::regularize::{build_f_symbolic, build_q, check_structure};
use crate::spectral::{asymptotics_probe, SolverConfig, WeylFlag};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde_json::json;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "quasiweyl", version, about = "Associated matrices, quasi-derivatives and Weyl matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON file with the command's parameters.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override the number of integration steps.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Override the half-line truncation point.
    #[arg(long = "truncation-X", global = true)]
    pub truncation_x: Option<f64>,
    /// Worker threads for lambda sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// First random seed (verify).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the symbolic Q and F matrices for given orders.
    GenMatrix {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
        /// Also emit LaTeX.
        #[arg(long)]
        latex: bool,
    },
    /// Weyl matrix over a lambda grid, as CSV.
    WeylSweep,
    /// Randomized exact check of the regularization identity.
    Verify,
    /// Map a problem through an order-changing correspondence.
    Transform {
        /// Compare Weyl matrices of the input and output problems.
        #[arg(long)]
        check: bool,
    },
    /// Measure the large-|rho| behaviour of a Weyl solution.
    AsymProbe,
}

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Config(String),
    /// Tolerance violated or numerical breakdown: exit code 1.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) => 1,
            CliError::Config(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_configuration() {
            CliError::Config(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

fn io_err(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::GenMatrix { n, orders, latex } => gen_matrix(cli, *n, orders.clone(), *latex),
        Command::WeylSweep => weyl_sweep(cli),
        Command::Verify => verify(cli),
        Command::Transform { check } => transform(cli, *check),
        Command::AsymProbe => asym_probe(cli),
    })
}

fn read_config<T: DeserializeOwned>(cli: &Cli) -> CliResult<Option<T>> {
    let Some(path) = &cli.config else { return Ok(None) };
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map(Some).map_err(|e| io_err(path, e))
}

fn require_config<T: DeserializeOwned>(cli: &Cli) -> CliResult<T> {
    read_config(cli)?.ok_or_else(|| CliError::Config("--config is required for this command".into()))
}

fn write_output(cli: &Cli, bytes: &[u8]) -> CliResult<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| io_err(path, e)),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::Config(e.to_string())),
    }
}

fn solver(cli: &Cli, mut cfg: SolverConfig) -> CliResult<SolverConfig> {
    if let Some(steps) = cli.steps {
        cfg.steps = steps;
    }
    if cfg.steps == 0 {
        return Err(CliError::Config("steps must be positive".into()));
    }
    Ok(cfg)
}

fn problem(cli: &Cli, spec: ProblemSpec) -> CliResult<ProblemSpec> {
    match cli.truncation_x {
        Some(x) if !spec.geometry().is_finite() => Ok(spec.with_truncation(x)?),
        _ => Ok(spec),
    }
}

fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Config(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Config(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Config(e.to_string()))
}

fn gen_matrix(cli: &Cli, n: Option<usize>, orders: Option<Vec<usize>>, latex: bool) -> CliResult<()> {
    let mut cfg: GenMatrixConfig = match read_config(cli)? {
        Some(c) => c,
        None => GenMatrixConfig {
            n: n.ok_or_else(|| CliError::Config("give --config or --n and --orders".into()))?,
            orders: Vec::new(),
            latex: false,
        },
    };
    if let Some(n) = n {
        cfg.n = n;
    }
    if let Some(o) = orders {
        cfg.orders = o;
    }
    cfg.latex |= latex;
    let orders = validate_orders(cfg.n, &cfg.orders)?;
    let q = build_q(&orders);
    let f = build_f_symbolic(&orders);
    let report = check_structure(&f);
    let doc = json!({
        "n": cfg.n,
        "orders": cfg.orders,
        "Q": q,
        "F": f,
        "structure": { "passes": report.passes(), "summary": report.summary() },
    });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Config(e.to_string()))?;
    text.push('\n');
    let tex = format!("Q = {}\n\nF = {}\n", q.to_latex(), f.to_latex());
    match (&cli.out, cfg.latex) {
        (Some(path), true) => {
            write_output(cli, text.as_bytes())?;
            let tex_path = path.with_extension("tex");
            std::fs::write(&tex_path, tex).map_err(|e| io_err(&tex_path, e))?;
        }
        (None, true) => write_output(cli, format!("{text}\n{tex}").as_bytes())?,
        (_, false) => write_output(cli, text.as_bytes())?,
    }
    if !report.passes() {
        return Err(CliError::Numerical(report.summary()));
    }
    Ok(())
}

fn flag_name(f: WeylFlag) -> &'static str {
    match f {
        WeylFlag::IllConditioned => "ill_conditioned",
        WeylFlag::SectorTie => "sector_tie",
    }
}

fn weyl_sweep(cli: &Cli) -> CliResult<()> {
    let cfg: WeylSweepConfig = require_config(cli)?;
    let spec = problem(cli, cfg.problem)?;
    let solver = solver(cli, cfg.solver)?;
    let lambdas = cfg.lambdas.values();
    if lambdas.is_empty() {
        return Err(CliError::Config("empty lambda grid".into()));
    }
    let n = spec.n();
    let f = spec.evaluator();
    let results: Vec<_> = lambdas
        .par_iter()
        .map(|&lambda| crate::spectral::weyl_matrix(&f, lambda, spec.u(), spec.v(), spec.geometry(), &solver))
        .collect();

    let mut header: Vec<String> = ["index", "lambda_re", "lambda_im", "rho_re", "rho_im"].map(String::from).to_vec();
    for s in 2..=n {
        for k in 1..s {
            header.push(format!("m_{s}_{k}_re"));
            header.push(format!("m_{s}_{k}_im"));
        }
    }
    header.push("cond".into());
    header.push("flags".into());

    let mut rows = Vec::with_capacity(results.len());
    let mut failure = None;
    for (i, (lambda, res)) in lambdas.iter().zip(results).enumerate() {
        let mut row = vec![i.to_string(), lambda.re.to_string(), lambda.im.to_string()];
        match res {
            Ok(sample) => {
                row.push(sample.rho.re.to_string());
                row.push(sample.rho.im.to_string());
                for s in 1..n {
                    for k in 0..s {
                        row.push(sample.m[(s, k)].re.to_string());
                        row.push(sample.m[(s, k)].im.to_string());
                    }
                }
                row.push(sample.condition.to_string());
                row.push(sample.flags.iter().map(|f| flag_name(*f)).collect::<Vec<_>>().join(";"));
            }
            Err(e) if !e.is_configuration() => {
                row.resize(header.len() - 1, "NaN".into());
                row.push(match e {
                    Error::SingularAtLambda(_) => "singular".into(),
                    Error::Overflow(_) => "overflow".into(),
                    Error::ExponentGuard(_) => "exponent_guard".into(),
                    _ => "sector_boundary".into(),
                });
                failure.get_or_insert_with(|| format!("lambda #{i}: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
        rows.push(row);
    }
    write_output(cli, &csv_bytes(&header, &rows)?)?;
    match failure {
        Some(m) => Err(CliError::Numerical(m)),
        None => Ok(()),
    }
}

fn verify(cli: &Cli) -> CliResult<()> {
    let mut cfg: VerifyConfig = read_config(cli)?.unwrap_or_default();
    if let Some(seed) = cli.seed {
        cfg.first_seed = seed;
    }
    let jobs: Vec<(usize, u64)> = cfg
        .ns
        .iter()
        .flat_map(|&n| (cfg.first_seed..cfg.first_seed + cfg.seeds).map(move |s| (n, s)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(n, seed)| verify_seed(n, seed, cfg.max_degree))
        .collect::<crate::Result<Vec<_>>>()?;
    let header = ["n", "seed", "orders", "residual_degree", "passed"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.seed.to_string(),
                r.orders.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                r.residual_degree.map_or_else(String::new, |d| d.to_string()),
                r.passed().to_string(),
            ]
        })
        .collect();
    write_output(cli, &csv_bytes(&header, &rows)?)?;
    let failed = results.iter().filter(|r| !r.passed()).count();
    eprintln!("verify: {} of {} cases passed", results.len() - failed, results.len());
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} cases left a nonzero residual")));
    }
    Ok(())
}

fn transform(cli: &Cli, check_flag: bool) -> CliResult<()> {
    let cfg: TransformConfig = require_config(cli)?;
    let spec = problem(cli, cfg.problem)?;
    let out = apply(&spec, cfg.correspondence, cfg.direction, cfg.free.map(|c| c.0))?;
    let check = match (&cfg.check, check_flag) {
        (Some(c), _) => Some(c.clone()),
        (None, true) => Some(CheckConfig::default()),
        (None, false) => None,
    };
    let mut doc = json!({ "spec": out });
    let mut failure = None;
    if let Some(check) = check {
        let solver = solver(cli, cfg.solver)?;
        let tol = check.tolerance.unwrap_or(match spec.geometry() {
            Geometry::FiniteInterval => 1e-6,
            Geometry::HalfLine { .. } => 1e-4,
        });
        let report = weyl_invariance_check(&spec, &out, &check.lambdas.values(), &solver)?;
        if !report.within(tol) {
            failure = Some(format!("Weyl deviation {} exceeds {tol}", report.max_deviation));
        }
        doc["check"] = json!({ "tolerance": tol, "passed": report.within(tol), "report": report });
    }
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Config(e.to_string()))?;
    text.push('\n');
    write_output(cli, text.as_bytes())?;
    match failure {
        Some(m) => Err(CliError::Numerical(m)),
        None => Ok(()),
    }
}

fn asym_probe(cli: &Cli) -> CliResult<()> {
    let cfg: AsymProbeConfig = require_config(cli)?;
    let spec = problem(cli, cfg.problem)?;
    let Geometry::HalfLine { truncation } = spec.geometry() else {
        return Err(CliError::Config("asym-probe needs a half-line problem".into()));
    };
    let solver = solver(cli, cfg.solver)?;
    let probe = asymptotics_probe(
        &spec.evaluator(),
        spec.u(),
        cfg.k,
        cfg.j,
        cfg.phi,
        &cfg.magnitudes,
        cfg.x,
        truncation,
        &solver,
    )?;
    let header = ["rho_abs", "ratio_re", "ratio_im", "limit_re", "limit_im", "rel_error"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = probe
        .samples
        .iter()
        .map(|s| {
            [s.rho_abs, s.ratio.re, s.ratio.im, probe.limit.re, probe.limit.im, s.rel_error]
                .iter()
                .map(ToString::to_string)
                .collect()
        })
        .collect();
    write_output(cli, &csv_bytes(&header, &rows)?)?;
    if !probe.is_nonincreasing(cfg.jitter) {
        return Err(CliError::Numerical("relative error grows with |rho|".into()));
    }
    Ok(())
}
