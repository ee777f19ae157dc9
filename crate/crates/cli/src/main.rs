//! Command-line frontend for the two-phase conductor toolkit.
//!
//! Exit codes: 0 on success, 1 on validation errors (bad flags, malformed
//! profile documents, domain violations), 2 on solver failures.

use clap::{Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use twophase_core::eigensolver::{principal_frequency, EigenSolution};
use twophase_core::error::Error;
use twophase_core::experiments::{sweep_to_csv, sweep_to_json, SweepOutcome};
use twophase_core::geometry::{unit_ball_volume, Dimension, VolumeSpec};
use twophase_core::rearrangement::{trace_to_csv, trace_to_json, CONVERGENCE_TOL_FRACTION};
use twophase_core::{
    bessel_j, bessel_zero, check_counterexample, ground_state, improve, low_contrast_optimizer,
    optimize, principal_eigenvalue, rayleigh_quotient, rho_n, sweep, Order, RadialProfile,
    ZeroIndex, DEFAULT_SOLVER_TOL,
};

#[derive(Parser)]
#[command(
    name = "twophase",
    version,
    about = "Principal eigenvalues and optimal layouts of two-phase radial conductors in the unit n-ball"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Bessel function J_nu(x)
    Bessel {
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// The m-th positive zero of J_nu
    Zero {
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long)]
        m: u32,
    },
    /// Critical radius of the Laplacian ground-state gradient
    #[command(name = "rho-n")]
    RhoN {
        #[arg(long)]
        dim: u32,
    },
    /// Principal eigenvalue and eigenfunction of a profile
    Eigen {
        /// Profile document (JSON)
        #[arg(long)]
        profile: PathBuf,
        /// Relative eigenvalue tolerance (default 1e-10, or TPC_SOLVER_TOL)
        #[arg(long)]
        tol: Option<f64>,
        /// Dump the solution curve as csv (r,y,y_prime,sigma) or json
        #[arg(long, value_parser = ["csv", "json"])]
        out: Option<String>,
    },
    /// Run improvement steps on a profile (default: one step)
    Improve {
        #[arg(long)]
        profile: PathBuf,
        /// Volume fraction of the high material (defaults to the profile's)
        #[arg(long, conflicts_with = "measure")]
        fraction: Option<f64>,
        /// Absolute volume of the high material
        #[arg(long)]
        measure: Option<f64>,
        #[arg(long, default_value_t = 1)]
        max_iter: usize,
    },
    /// Iterate improvement to a fixed point and print the full trace
    Optimize {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, conflicts_with = "measure")]
        fraction: Option<f64>,
        #[arg(long)]
        measure: Option<f64>,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        /// Write the trace as CSV to this file
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the trace as JSON to this file
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sublevel set of the Laplacian ground-state gradient at fixed volume
    Lowcontrast {
        #[arg(long)]
        dim: u32,
        #[arg(long, conflicts_with = "measure")]
        fraction: Option<f64>,
        #[arg(long)]
        measure: Option<f64>,
    },
    /// Ball-versus-improved comparison at one parameter point
    Counterexample {
        #[arg(long)]
        dim: u32,
        #[arg(long, conflicts_with = "measure")]
        fraction: Option<f64>,
        #[arg(long)]
        measure: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
    },
    /// Parameter-grid sweep; writes <out>.csv and <out>.json
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        fractions: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        contrasts: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

enum AppError {
    Core(Error),
    Io(String),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Core(e)
    }
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Core(e) if e.is_input_error() => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Io(m) => write!(f, "{m}"),
        }
    }
}

/// 15 significant digits, locale-independent.
fn sig15(x: f64) -> String {
    format!("{x:.14e}")
}

fn main() -> ExitCode {
    // restore default SIGPIPE behavior so `twophase ... | head` exits
    // quietly instead of panicking on a closed pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(1);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn solver_tol(flag: Option<f64>) -> Result<f64, AppError> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("TPC_SOLVER_TOL") {
        Ok(text) => text.parse::<f64>().map_err(|_| {
            AppError::Core(Error::Domain(format!(
                "TPC_SOLVER_TOL: expected a number, got '{text}'"
            )))
        }),
        Err(_) => Ok(DEFAULT_SOLVER_TOL),
    }
}

fn read_profile(path: &Path) -> Result<RadialProfile, AppError> {
    let text = fs::read_to_string(path).map_err(|e| {
        AppError::Core(Error::Profile(format!("cannot read '{}': {e}", path.display())))
    })?;
    Ok(RadialProfile::from_json(&text)?)
}

fn volume_spec(
    dim: Dimension,
    fraction: Option<f64>,
    measure: Option<f64>,
    fallback: Option<f64>,
) -> Result<VolumeSpec, AppError> {
    match (fraction, measure, fallback) {
        (Some(f), _, _) => Ok(VolumeSpec::from_fraction(dim, f)?),
        (None, Some(m), _) => Ok(VolumeSpec::new(dim, m)?),
        (None, None, Some(m)) => Ok(VolumeSpec::new(dim, m)?),
        (None, None, None) => Err(AppError::Core(Error::Domain(
            "one of --fraction or --measure is required".into(),
        ))),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), AppError> {
    fs::write(path, contents)
        .map_err(|e| AppError::Io(format!("cannot write '{}': {e}", path.display())))
}

fn dispatch(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Bessel { nu, x } => {
            let v = bessel_j(Order::new(nu)?, x)?;
            println!("{}", sig15(v));
        }
        Command::Zero { nu, m } => {
            let v = bessel_zero(ZeroIndex::new(Order::new(nu)?, m)?)?;
            println!("{}", sig15(v));
        }
        Command::RhoN { dim } => {
            let d = Dimension::new(dim)?;
            let rho = rho_n(d)?;
            let gs = ground_state(d)?;
            println!("rho_n = {}", sig15(rho));
            println!("t_star = {}", sig15(rho * gs.mu()));
            println!("mu = {}", sig15(gs.mu()));
        }
        Command::Eigen { profile, tol, out } => {
            let p = read_profile(&profile)?;
            let tol = solver_tol(tol)?;
            let sol = principal_eigenvalue(&p, tol)?;
            match out.as_deref() {
                None => {
                    println!("lambda = {}", sig15(sol.lambda()));
                    println!("mu = {}", sig15(principal_frequency(&p)?));
                    println!("rayleigh = {}", sig15(rayleigh_quotient(&p, &sol)));
                    println!(
                        "boundary_gradient = {}",
                        sig15(sol.y_prime().last().copied().unwrap_or(0.0).abs())
                    );
                }
                Some("csv") => print!("{}", solution_csv(&sol)),
                Some("json") => println!("{}", solution_json(&sol)),
                Some(other) => unreachable!("clap rejects --out {other}"),
            }
        }
        Command::Improve { profile, fraction, measure, max_iter } => {
            let p = read_profile(&profile)?;
            let spec = volume_spec(p.dim(), fraction, measure, Some(p.high_measure()))?;
            let tol = solver_tol(None)?;
            let mut current = p;
            let mut lambda_before = None;
            for _ in 0..max_iter.max(1) {
                let (next, sol) = improve(&current, &spec, tol)?;
                if lambda_before.is_none() {
                    lambda_before = Some(sol.lambda());
                }
                let moved =
                    next.high_region().symmetric_difference_measure(&current.high_region());
                current = next;
                if moved < CONVERGENCE_TOL_FRACTION * unit_ball_volume(spec.dim()) {
                    break;
                }
            }
            let after = principal_eigenvalue(&current, tol)?;
            println!("lambda_before = {}", sig15(lambda_before.expect("ran at least once")));
            println!("lambda_after = {}", sig15(after.lambda()));
            println!("{}", current.to_json());
        }
        Command::Optimize { profile, fraction, measure, max_iter, csv, json } => {
            let p = read_profile(&profile)?;
            let spec = volume_spec(p.dim(), fraction, measure, Some(p.high_measure()))?;
            let tol = solver_tol(None)?;
            let set_tol = CONVERGENCE_TOL_FRACTION * unit_ball_volume(spec.dim());
            let trace = optimize(&p, &spec, max_iter, set_tol, tol)?;
            println!("converged = {}", trace.converged);
            println!("steps = {}", trace.steps.len());
            print!("{}", trace_to_csv(&trace));
            if let Some(path) = csv {
                write_file(&path, &trace_to_csv(&trace))?;
            }
            if let Some(path) = json {
                write_file(&path, &trace_to_json(&trace))?;
            }
        }
        Command::Lowcontrast { dim, fraction, measure } => {
            let d = Dimension::new(dim)?;
            let spec = volume_spec(d, fraction, measure, None)?;
            let res = low_contrast_optimizer(d, &spec)?;
            println!("threshold = {}", sig15(res.threshold.t));
            println!("classification = {:?}", res.classification);
            println!("a_star = {}", sig15(res.a_star));
            println!("rho_n = {}", sig15(res.rho_n));
            println!(
                "boundary_transition_measure = {}",
                sig15(res.boundary_transition_measure)
            );
            println!("critical_ball_measure = {}", sig15(res.critical_ball_measure));
            println!("achieved_measure = {}", sig15(res.threshold.achieved_measure));
            for (lo, hi) in res.threshold.set.intervals() {
                println!("interval = {} {}", sig15(*lo), sig15(*hi));
            }
        }
        Command::Counterexample { dim, fraction, measure, alpha, beta } => {
            let d = Dimension::new(dim)?;
            let spec = volume_spec(d, fraction, measure, None)?;
            let tol = solver_tol(None)?;
            let report = check_counterexample(d, &spec, alpha, beta, tol)?;
            println!("dim = {}", report.dim);
            println!("fraction = {}", sig15(report.fraction));
            println!("alpha = {}", sig15(report.alpha));
            println!("beta = {}", sig15(report.beta));
            println!("rho = {}", sig15(report.rho));
            println!("rho_n = {}", sig15(report.rho_n));
            println!("lambda_ball = {}", sig15(report.lambda_ball));
            println!("lambda_improved = {}", sig15(report.lambda_improved));
            println!("gap = {}", sig15(report.gap));
            println!("y2_prime_at_1 = {}", sig15(report.y2_prime_at_1));
            println!("z = {}", sig15(report.z));
            println!("d_n = {}", sig15(report.d_n));
            println!("verdict = {}", report.verdict);
            for (lo, hi) in report.improved_set.intervals() {
                println!("interval = {} {}", sig15(*lo), sig15(*hi));
            }
        }
        Command::Sweep { dims, fractions, contrasts, alpha, out } => {
            let tol = solver_tol(None)?;
            let rows = sweep(&dims, &fractions, &contrasts, alpha, tol);
            let base = out.with_extension("");
            let csv_path = base.with_extension("csv");
            let json_path = base.with_extension("json");
            let mut csv_bytes = Vec::new();
            sweep_to_csv(&rows, &mut csv_bytes)
                .map_err(|e| AppError::Io(format!("csv emission failed: {e}")))?;
            write_file(&csv_path, &String::from_utf8(csv_bytes).expect("csv is utf-8"))?;
            write_file(&json_path, &sweep_to_json(&rows))?;
            let refuted = rows
                .iter()
                .filter(|r| {
                    matches!(&r.outcome, SweepOutcome::Report(rep)
                        if rep.verdict == twophase_core::Verdict::Refuted)
                })
                .count();
            println!("rows = {}", rows.len());
            println!("refuted = {refuted}");
            println!("wrote {}", csv_path.display());
            println!("wrote {}", json_path.display());
        }
    }
    Ok(())
}

fn solution_csv(sol: &EigenSolution) -> String {
    let mut out = String::from("r,y,y_prime,sigma\n");
    for (i, sigma) in sigma_per_row(sol).into_iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            sig15(sol.grid()[i]),
            sig15(sol.y()[i]),
            sig15(sol.y_prime()[i]),
            sig15(sigma)
        ));
    }
    out
}

fn solution_json(sol: &EigenSolution) -> String {
    let doc = serde_json::json!({
        "lambda": sol.lambda(),
        "profile": sol.profile(),
        "grid": sol.grid(),
        "y": sol.y(),
        "y_prime": sol.y_prime(),
        "sigma": sigma_per_row(sol),
    });
    serde_json::to_string_pretty(&doc).expect("solution serializes")
}

/// σ per curve node; at interface duplicates the first row carries the
/// left-side value and the second the right-side value.
fn sigma_per_row(sol: &EigenSolution) -> Vec<f64> {
    let profile = sol.profile();
    let grid = sol.grid();
    (0..grid.len())
        .map(|i| {
            let r = grid[i];
            let side = if i + 1 < grid.len() && grid[i + 1] == r { r - 1e-13 } else { r + 1e-13 };
            profile.sigma(side.clamp(0.0, 1.0))
        })
        .collect()
}
