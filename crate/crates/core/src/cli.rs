//! Command-line surface: `build`, `check`, `kernels`, `solve`, `scan`,
//! `collapse` and `suite`.
//!
//! Exit codes: 0 on success, 1 when a check, scan or suite finds a
//! violation (or a solve finds no root), 2 on bad flags, I/O or
//! validation errors. Output files are written to a temporary file in the
//! target directory and renamed into place only on success; each sits
//! beside a `<file>.manifest.json` describing the run.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::angle::Twist;
use crate::collapse::{default_window, integrate_release, TrajectoryReport, DEFAULT_DT};
use crate::conditions::{condition_residual, ConditionResidual};
use crate::geometry::{build_configuration, BodySystem, TwistedPolygonParams};
use crate::kernels::kernels;
use crate::newtonian::{cc_residual, CCReport, DEFAULT_CC_TOLERANCE};
use crate::solver::{
    certify_no_solution, solve_h, step_property_suite, Grid, ScanCell, ScanSpec, SolveOutcome,
    Spacing, DEFAULT_EXCLUSION, DEFAULT_SCAN_FLOOR,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Caps the scan thread pool.
pub const THREADS_ENV: &str = "POLYCC_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "polycc",
    version,
    about = "Twisted double-polygon central configurations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the 2N-body configuration and write it as JSON.
    Build {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the central-configuration residual of a body file.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CC_TOLERANCE)]
        tol: f64,
    },
    /// Print the kernels x, y, z.
    Kernels {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value = "pi-over-n")]
        theta: Twist,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for the height with equal rings and equal masses.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "pi-over-n")]
        theta: Twist,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the minimum kernel residual over h on an (a, b) grid.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "pi-over-n")]
        theta: Twist,
        /// lo:hi:steps, linear.
        #[arg(long)]
        a_grid: Grid,
        /// lo:hi:steps, linear.
        #[arg(long)]
        b_grid: Grid,
        /// lo:hi:steps.
        #[arg(long)]
        h_grid: Grid,
        #[arg(long, value_enum, default_value = "geometric")]
        h_spacing: SpacingArg,
        #[arg(long, default_value_t = DEFAULT_EXCLUSION)]
        exclusion: f64,
        #[arg(long, default_value_t = DEFAULT_SCAN_FLOOR)]
        floor: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Release a configuration from rest and track its shape.
    Collapse {
        /// Body JSON to release; otherwise built from the parameter flags.
        #[arg(long, conflicts_with_all = ["n", "a", "b", "h"])]
        input: Option<PathBuf>,
        #[command(flatten)]
        params: OptionalParamArgs,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Randomized property checks on the kernels plus the b = 1 scan.
    Suite {
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum SpacingArg {
    Linear,
    Geometric,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Geometric => Spacing::Geometric,
        }
    }
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    h: f64,
    /// `0`, `pi-over-n` or radians.
    #[arg(long)]
    theta: Twist,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
}

impl ParamArgs {
    fn params(&self) -> crate::Result<TwistedPolygonParams> {
        TwistedPolygonParams::with_mass(self.n, self.a, self.b, self.h, self.theta, self.m)
    }
}

#[derive(Debug, Args)]
pub struct OptionalParamArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, default_value = "pi-over-n")]
    theta: Twist,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
}

/// How a command ended when it did not error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Violation,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Violation => 1,
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    params: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    tool_version: &'a str,
    outputs: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    violations: Vec<String>,
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    #[serde(flatten)]
    report: &'a CCReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditions: Option<ConditionResidual>,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

pub fn run(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::Build { params, out } => {
            let params = params.params()?;
            let sys = build_configuration(&params)?;
            write_atomic(&out, &to_json(&sys)?)?;
            write_manifest(&out, "build", json!(params), None, vec![])?;
            Ok(Status::Success)
        }
        Command::Check { file, tol } => {
            let text = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let sys: BodySystem = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", file.display()))?;
            let report = cc_residual(&sys, tol)?;
            let conditions = sys
                .meta()
                .filter(|p| p.h() > 0.0 && p.twist().is_admissible(p.n()))
                .map(condition_residual)
                .transpose()?;
            let output = CheckOutput {
                report: &report,
                conditions,
            };
            println!("{}", serde_json::to_string_pretty(&output)?);
            Ok(if report.is_central {
                Status::Success
            } else {
                Status::Violation
            })
        }
        Command::Kernels {
            n,
            a,
            h,
            theta,
            out,
        } => {
            let values = kernels(n, a, h, theta)?;
            let text = to_json(&values)?;
            println!("{}", String::from_utf8_lossy(&text).trim_end());
            if let Some(out) = out {
                write_atomic(&out, &text)?;
                write_manifest(
                    &out,
                    "kernels",
                    json!({"n": n, "a": a, "h": h, "theta": theta}),
                    None,
                    vec![],
                )?;
            }
            Ok(Status::Success)
        }
        Command::Solve { n, theta, out } => {
            let outcome = solve_h(n, theta)?;
            let text = to_json(&outcome)?;
            println!("{}", String::from_utf8_lossy(&text).trim_end());
            if let Some(out) = out {
                write_atomic(&out, &text)?;
                write_manifest(&out, "solve", json!({"n": n, "theta": theta}), None, vec![])?;
            }
            Ok(match outcome {
                SolveOutcome::Root(_) => Status::Success,
                SolveOutcome::NoRoot(_) => Status::Violation,
            })
        }
        Command::Scan {
            n,
            theta,
            a_grid,
            b_grid,
            h_grid,
            h_spacing,
            exclusion,
            floor,
            out,
        } => {
            let spec = ScanSpec::new(
                n,
                theta,
                a_grid,
                b_grid,
                h_grid.with_spacing(h_spacing.into()),
            )
            .with_exclusion(exclusion);
            let cells = with_thread_pool(|| certify_no_solution(&spec))??;
            let violations: Vec<String> = cells
                .iter()
                .filter(|c| !(c.min_residual_over_h > floor))
                .map(|c| {
                    format!(
                        "a={} b={} min_residual={:e} at h={} (floor {floor:e})",
                        c.a, c.b, c.min_residual_over_h, c.argmin_h
                    )
                })
                .collect();
            write_atomic(&out, scan_csv(&cells).as_bytes())?;
            write_manifest(
                &out,
                "scan",
                json!({"spec": spec, "floor": floor}),
                None,
                violations.clone(),
            )?;
            for v in &violations {
                eprintln!("violation: {v}");
            }
            Ok(if violations.is_empty() {
                Status::Success
            } else {
                Status::Violation
            })
        }
        Command::Collapse {
            input,
            params,
            t_end,
            dt,
            out,
        } => {
            let (sys, echo) = match input {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let sys: BodySystem = serde_json::from_str(&text)
                        .with_context(|| format!("parsing {}", path.display()))?;
                    (sys, json!({"input": path}))
                }
                None => {
                    let (Some(n), Some(a), Some(b), Some(h)) =
                        (params.n, params.a, params.b, params.h)
                    else {
                        bail!("collapse needs --input or all of --n --a --b --h");
                    };
                    let p = TwistedPolygonParams::with_mass(n, a, b, h, params.theta, params.m)?;
                    (build_configuration(&p)?, json!(p))
                }
            };
            let t_end = match t_end {
                Some(t) => t,
                None => default_window(&sys)?,
            };
            let report = integrate_release(&sys, t_end, dt)?;
            write_atomic(&out, collapse_csv(&report).as_bytes())?;
            write_manifest(
                &out,
                "collapse",
                json!({"system": echo, "t_end": t_end, "dt": dt}),
                None,
                vec![],
            )?;
            Ok(Status::Success)
        }
        Command::Suite {
            n_max,
            samples,
            seed,
            out,
        } => {
            let report = step_property_suite(n_max, samples, seed)?;
            let text = to_json(&report)?;
            println!("{}", String::from_utf8_lossy(&text).trim_end());
            for c in &report.counterexamples {
                eprintln!("violation: {c}");
            }
            if let Some(out) = out {
                write_atomic(&out, &text)?;
                write_manifest(
                    &out,
                    "suite",
                    json!({"n_max": n_max, "samples": samples}),
                    Some(seed),
                    report.counterexamples.clone(),
                )?;
            }
            Ok(if report.passed() {
                Status::Success
            } else {
                Status::Violation
            })
        }
    }
}

/// Scan CSV, `a,b,min_residual,argmin_h`, 17 significant digits.
pub fn scan_csv(cells: &[ScanCell]) -> String {
    let mut out = String::from("a,b,min_residual,argmin_h\n");
    for c in cells {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            c.a, c.b, c.min_residual_over_h, c.argmin_h
        ));
    }
    out
}

/// Collapse CSV, `t,shape_drift,energy_rel_drift`, 17 significant digits.
pub fn collapse_csv(report: &TrajectoryReport) -> String {
    let mut out = String::from("t,shape_drift,energy_rel_drift\n");
    for ((t, s), e) in report
        .times
        .iter()
        .zip(&report.shape_drift)
        .zip(&report.energy_rel_drift)
    {
        out.push_str(&format!("{t:.16e},{s:.16e},{e:.16e}\n"));
    }
    out
}

fn with_thread_pool<T: Send>(f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value
            .parse()
            .with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{value}`"))?;
        builder = builder.num_threads(threads.max(1));
    }
    Ok(builder.build()?.install(f))
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut text = serde_json::to_vec_pretty(value)?;
    text.push(b'\n');
    Ok(text)
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn write_manifest(
    out: &Path,
    command: &str,
    params: serde_json::Value,
    seed: Option<u64>,
    violations: Vec<String>,
) -> anyhow::Result<()> {
    let manifest = Manifest {
        command,
        params,
        seed,
        tool_version: TOOL_VERSION,
        outputs: vec![out.display().to_string()],
        violations,
    };
    write_atomic(&manifest_path(out), &to_json(&manifest)?)
}
