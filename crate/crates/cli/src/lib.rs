//! Command-line driver: solve built-in or file-defined problems at one or
//! more resolution levels and write residual tables, plot data and JSON
//! run records.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::thread;

use clap::builder::PossibleValuesParser;
use clap::{ArgGroup, Parser};
use thiserror::Error;

use fraclane::{
    builtin_experiment, published_orders, BoundarySpec, Config, FractionalOrders, Problem,
    ResolutionParams, Rhs, Run, SingularTerm, EXPERIMENT_NAMES,
};

mod document;
mod table;

pub use document::{
    BoundaryValuesDoc, CoefficientsDoc, DiagnosticsDoc, RunDocument, SolverDoc, TableRow,
    SCHEMA_VERSION,
};
pub use table::{format_sig9, parse_table_csv, table_csv, write_table_csv, ParsedTable};

/// Highest resolution level the driver accepts.
pub const MAX_CLI_LEVEL: u32 = 9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read config file {}: {source}", path.display())]
    ReadConfig {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("in {}: {source}", path.display())]
    Config {
        path: PathBuf,
        source: fraclane::Error,
    },

    #[error(transparent)]
    Problem(#[from] fraclane::Error),

    #[error("output format: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "fraclane",
    version,
    about = "Haar wavelet collocation solver for coupled fractional Lane-Emden systems",
    group(ArgGroup::new("source").required(true).args(["experiment", "config"])),
    group(ArgGroup::new("output").required(true).multiple(true)
        .args(["table", "dense", "json", "summary"])),
)]
pub struct Args {
    /// Built-in experiment to run.
    #[arg(long, value_parser = PossibleValuesParser::new(EXPERIMENT_NAMES))]
    pub experiment: Option<String>,

    /// TOML problem file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Maximum resolution level (defaults to 3).
    #[arg(long = "J", value_name = "LEVEL", conflicts_with = "sweep_j",
          value_parser = clap::value_parser!(u32).range(0..=MAX_CLI_LEVEL as i64))]
    pub level: Option<u32>,

    /// Comma-separated, strictly increasing levels, e.g. `3,4,5`.
    #[arg(long = "sweep-J", value_name = "LEVELS", value_delimiter = ',',
          value_parser = clap::value_parser!(u32).range(0..=MAX_CLI_LEVEL as i64))]
    pub sweep_j: Vec<u32>,

    #[arg(long, allow_negative_numbers = true)]
    pub alpha1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta2: Option<f64>,

    /// Use α1 = α2 = 2, β1 = β2 = 1.
    #[arg(long, conflicts_with_all = ["alpha1", "beta1", "alpha2", "beta2"])]
    pub classical: bool,

    /// Run all four published order tuples of the experiment.
    #[arg(long, requires = "experiment",
          conflicts_with_all = ["alpha1", "beta1", "alpha2", "beta2", "classical"])]
    pub published_orders: bool,

    #[arg(long, allow_negative_numbers = true)]
    pub k1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma2: Option<f64>,

    /// Interior point of the `y(1)` condition (nonlocal modes only).
    #[arg(long, allow_negative_numbers = true)]
    pub nu1: Option<f64>,
    /// Interior point of the `z(1)` condition (nonlocal modes only).
    #[arg(long, allow_negative_numbers = true)]
    pub nu2: Option<f64>,

    /// Right-hand side of the first equation as an expression in x, y, z.
    #[arg(long, allow_hyphen_values = true)]
    pub f1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub f2: Option<String>,

    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Halve Newton steps that increase the residual.
    #[arg(long)]
    pub damping: bool,
    #[arg(long)]
    pub fd_scale: Option<f64>,

    /// Residual table CSV on x = 0.1..0.9.
    #[arg(long, value_name = "PATH")]
    pub table: Option<PathBuf>,
    /// Residuals on the dense 401-point grid, same CSV layout.
    #[arg(long, value_name = "PATH")]
    pub dense: Option<PathBuf>,
    /// JSON run record.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Print tables and diagnostics to stdout.
    #[arg(long)]
    pub summary: bool,
}

/// Fully resolved work list.
#[derive(Debug, Clone)]
pub struct RunRequest {
    pub problems: Vec<Problem>,
    pub levels: Vec<u32>,
    pub solver: Config,
    pub args: Args,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn base_problem(args: &Args) -> Result<Problem, CliError> {
    if let Some(name) = &args.experiment {
        return builtin_experiment(name)
            .ok_or_else(|| usage(format!("unknown experiment '{name}'")));
    }
    let path = args.config.as_ref().expect("clap enforces a source");
    let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
        path: path.clone(),
        source,
    })?;
    Problem::from_config_str(&text).map_err(|source| CliError::Config {
        path: path.clone(),
        source,
    })
}

fn set_nu(b: &mut BoundarySpec<f64>, flag: &str, v: f64) -> Result<(), CliError> {
    let first = flag == "--nu1";
    match b {
        BoundarySpec::CaseI(d) => *(if first { &mut d.nu1 } else { &mut d.nu2 }) = v,
        BoundarySpec::CaseII(d) => *(if first { &mut d.nu1 } else { &mut d.nu2 }) = v,
        other => {
            return Err(usage(format!(
                "{flag} only applies to the CaseI and CaseII boundary modes, this problem uses {}",
                other.mode_name()
            )))
        }
    }
    Ok(())
}

impl RunRequest {
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        let mut base = base_problem(&args)?;
        let s1 = base.sing1;
        base.sing1 = SingularTerm::new(args.k1.unwrap_or(s1.k), args.gamma1.unwrap_or(s1.gamma));
        let s2 = base.sing2;
        base.sing2 = SingularTerm::new(args.k2.unwrap_or(s2.k), args.gamma2.unwrap_or(s2.gamma));
        if let Some(v) = args.nu1 {
            set_nu(&mut base.boundary, "--nu1", v)?;
        }
        if let Some(v) = args.nu2 {
            set_nu(&mut base.boundary, "--nu2", v)?;
        }
        if let Some(src) = &args.f1 {
            base.f1 = Rhs::parse(src).map_err(|e| usage(format!("--f1: {e}")))?;
        }
        if let Some(src) = &args.f2 {
            base.f2 = Rhs::parse(src).map_err(|e| usage(format!("--f2: {e}")))?;
        }

        let orders: Vec<FractionalOrders<f64>> = if args.published_orders {
            let name = args.experiment.as_deref().unwrap_or_default();
            published_orders(name)
                .ok_or_else(|| usage(format!("no published orders for '{name}'")))?
                .to_vec()
        } else if args.classical {
            vec![FractionalOrders::classical()]
        } else {
            let o = base.orders;
            vec![FractionalOrders::new(
                args.alpha1.unwrap_or(o.alpha1),
                args.beta1.unwrap_or(o.beta1),
                args.alpha2.unwrap_or(o.alpha2),
                args.beta2.unwrap_or(o.beta2),
            )]
        };
        let problems: Vec<Problem> = orders
            .into_iter()
            .map(|o| base.clone().with_orders(o))
            .collect();
        for p in &problems {
            p.validate()?;
        }

        let levels = if !args.sweep_j.is_empty() {
            if args.sweep_j.windows(2).any(|w| w[1] <= w[0]) {
                return Err(usage("--sweep-J levels must be strictly increasing"));
            }
            args.sweep_j.clone()
        } else {
            vec![args.level.unwrap_or(3)]
        };

        let mut solver = Config::default();
        if let Some(t) = args.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(usage(format!("--tol must be positive and finite, got {t}")));
            }
            solver.tol = t;
        }
        if let Some(n) = args.max_iter {
            solver.max_iter = n;
        }
        if let Some(h) = args.fd_scale {
            if !(h > 0.0 && h < 1.0) {
                return Err(usage(format!("--fd-scale must lie in (0, 1), got {h}")));
            }
            solver.fd_scale = h;
        }
        solver.damping = args.damping;

        Ok(RunRequest {
            problems,
            levels,
            solver,
            args,
        })
    }
}

/// `dir/name.ext` with `-tag` inserted before the extension for each tag.
pub fn tagged_path(base: &Path, tags: &[String]) -> PathBuf {
    if tags.is_empty() {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut name = stem;
    for t in tags {
        name.push('-');
        name.push_str(t);
    }
    if let Some(ext) = base.extension() {
        name.push('.');
        name.push_str(&ext.to_string_lossy());
    }
    base.with_file_name(name)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

struct Outcome {
    problem: usize,
    level: u32,
    result: Result<Run, fraclane::Error>,
}

fn solve_all(req: &RunRequest) -> Vec<Outcome> {
    let jobs: Vec<(usize, u32)> = (0..req.problems.len())
        .flat_map(|i| req.levels.iter().map(move |&j| (i, j)))
        .collect();
    thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(i, j)| {
                let spec = &req.problems[i];
                let cfg = &req.solver;
                s.spawn(move || {
                    let params = ResolutionParams::new(j)?;
                    fraclane::run(spec, params, cfg)
                })
            })
            .collect();
        jobs.iter()
            .zip(handles)
            .map(|(&(problem, level), h)| Outcome {
                problem,
                level,
                result: h.join().expect("solver thread panicked"),
            })
            .collect()
    })
}

fn summary_block(spec: &Problem, run: &Run) -> String {
    let d = &run.diagnostics;
    let p = run.params;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "problem {}  orders {}  J = {} (M = {}, {} unknowns)",
        spec.name,
        spec.orders,
        p.level(),
        p.m(),
        4 * p.m()
    );
    let _ = writeln!(
        s,
        "newton: {} after {} iterations, residual norm {}, condition estimate {}",
        if d.converged {
            "converged"
        } else {
            "NOT converged"
        },
        d.iterations,
        format_sig9(d.final_residual_norm),
        format_sig9(d.condition_estimate)
    );
    let _ = writeln!(s, "{:>6} {:>16} {:>16} {:>16}", "x", "r1", "r2", "r");
    for pt in run.tables.table.points() {
        let _ = writeln!(
            s,
            "{:>6} {:>16} {:>16} {:>16}",
            format_sig9(pt.x),
            format_sig9(pt.r1),
            format_sig9(pt.r2),
            format_sig9(pt.r)
        );
    }
    let _ = writeln!(s, "E = {}", format_sig9(run.tables.table.e_max));
    let _ = writeln!(
        s,
        "E on dense grid = {}",
        format_sig9(run.tables.dense.e_max)
    );
    s
}

fn sweep_block(spec: &Problem, rows: &[&Outcome]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "sweep {}  orders {}", spec.name, spec.orders);
    let _ = writeln!(
        s,
        "{:>3} {:>16} {:>16} {:>8} {:>5} {:>14}",
        "J", "E", "E_dense", "order", "iter", "cond"
    );
    let mut prev: Option<f64> = None;
    for o in rows {
        match &o.result {
            Ok(r) => {
                let e = r.tables.table.e_max;
                let order = prev
                    .map(|p| format!("{:.3}", (p / e).log2()))
                    .unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    s,
                    "{:>3} {:>16} {:>16} {:>8} {:>5} {:>14}",
                    o.level,
                    format_sig9(e),
                    format_sig9(r.tables.dense.e_max),
                    order,
                    r.diagnostics.iterations,
                    format_sig9(r.diagnostics.condition_estimate)
                );
                prev = Some(e);
            }
            Err(_) => {
                let _ = writeln!(s, "{:>3} {:>16}", o.level, "failed");
                prev = None;
            }
        }
    }
    s
}

/// Runs a parsed request; returns the process exit status.
pub fn execute(
    req: &RunRequest,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let outcomes = solve_all(req);
    let many_orders = req.problems.len() > 1;
    let many_levels = req.levels.len() > 1;
    let mut status = 0;
    let mut stdout = String::new();

    for o in &outcomes {
        let spec = &req.problems[o.problem];
        let run = match &o.result {
            Ok(r) => r,
            Err(e) => {
                let _ = writeln!(
                    err,
                    "error: {} orders {} J = {}: {e}",
                    spec.name, spec.orders, o.level
                );
                status = 2;
                continue;
            }
        };
        if !run.diagnostics.converged {
            let _ = writeln!(
                err,
                "warning: {} orders {} J = {}: Newton did not converge in {} iterations (residual norm {})",
                spec.name,
                spec.orders,
                o.level,
                run.diagnostics.iterations,
                format_sig9(run.diagnostics.final_residual_norm)
            );
            status = 2;
        }
        let mut tags = Vec::new();
        if many_orders {
            tags.push(format!("o{}", o.problem + 1));
        }
        if many_levels {
            tags.push(format!("J{}", o.level));
        }
        if let Some(p) = &req.args.table {
            write_file(&tagged_path(p, &tags), &table_csv(&run.tables.table)?)?;
        }
        if let Some(p) = &req.args.dense {
            write_file(&tagged_path(p, &tags), &table_csv(&run.tables.dense)?)?;
        }
        if let Some(p) = &req.args.json {
            let doc = RunDocument::new(spec, &req.solver, run);
            write_file(&tagged_path(p, &tags), &doc.to_json()?)?;
        }
        if req.args.summary {
            stdout.push_str(&summary_block(spec, run));
            stdout.push('\n');
        }
    }

    if req.args.summary && many_levels {
        for i in 0..req.problems.len() {
            let rows: Vec<&Outcome> = outcomes.iter().filter(|o| o.problem == i).collect();
            stdout.push_str(&sweep_block(&req.problems[i], &rows));
            stdout.push('\n');
        }
    }
    out.write_all(stdout.as_bytes())
        .map_err(|e| CliError::Format(e.to_string()))?;
    Ok(status)
}

/// Entry point shared by the binary and the tests. Exit codes: 0 when every
/// solve converged, 2 when any did not or failed, 1 for usage, config,
/// validation and I/O errors.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let result = RunRequest::from_args(args).and_then(|req| execute(&req, out, err));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
