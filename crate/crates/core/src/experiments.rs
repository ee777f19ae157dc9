//! Is a centered ball of the better conductor ever beaten by another layout
//! of the same volume? This module sets up the centered-ball profile, runs
//! one thresholding improvement against it, and reports whether the
//! eigenvalue strictly dropped — together with the gradient-comparison data
//! (|y₂'(1)| versus the peak of |y₁'| inside the ball) that explains why the
//! sublevel set abandons the ball shape once its radius passes the critical
//! radius.

use crate::eigensolver::{gradient_magnitude, principal_eigenvalue, EigenSolution};
use crate::error::{Error, Result};
use crate::geometry::{
    ball_radius_for_volume, unit_ball_volume, Dimension, RadialSet, VolumeSpec,
};
use crate::ground_state::{ground_state, rho_n};
use crate::profile::{Layer, Material, RadialProfile};
use crate::rearrangement::{improve, level_threshold};
use serde::Serialize;
use std::fmt;
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// λ strictly decreased and the set moved: the centered ball loses.
    Refuted,
    /// The improvement step left the centered ball in place.
    NotRefuted,
    /// The set moved but the λ gap is within noise of the solver tolerance.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Refuted => "refuted",
            Verdict::NotRefuted => "not_refuted",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Everything measured at one (n, A, α, β) grid point.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub dim: u32,
    /// Volume fraction A/ω_n of the high-conductivity material.
    pub fraction: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Radius of the centered ball holding volume A.
    pub rho: f64,
    /// Critical radius of the Laplacian ground-state gradient.
    pub rho_n: f64,
    pub lambda_ball: f64,
    pub lambda_improved: f64,
    /// λ(ball) − λ(improved); positive when the ball is beaten.
    pub gap: f64,
    pub improved_set: RadialSet,
    /// |y'(1)| of the ball solution (outer-layer gradient at the boundary).
    pub y2_prime_at_1: f64,
    /// max of |y'| on [0, ρ] for the ball solution.
    pub z: f64,
    /// |ψ'(ρ)| − |ψ'(1)| for the Laplacian ground state; positive once the
    /// ball radius passes the point where |ψ'| falls below its boundary value.
    pub d_n: f64,
    pub verdict: Verdict,
}

/// Two-layer profile: high material on [0, ρ], low on [ρ, 1], with
/// ρ = (A/ω_n)^{1/n}.
pub fn ball_profile(
    dim: Dimension,
    spec: &VolumeSpec,
    alpha: f64,
    beta: f64,
) -> Result<RadialProfile> {
    if spec.dim() != dim {
        return Err(Error::Domain("ball_profile: dimension mismatch".into()));
    }
    let rho = ball_radius_for_volume(spec);
    RadialProfile::new(
        dim,
        alpha,
        beta,
        vec![
            Layer { r_outer: rho, material: Material::High },
            Layer { r_outer: 1.0, material: Material::Low },
        ],
    )
}

/// Solve the centered-ball layout, run one improvement step, and judge
/// whether the ball survived, at solver tolerance `tol`.
pub fn check_counterexample(
    dim: Dimension,
    spec: &VolumeSpec,
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<CounterexampleReport> {
    let omega = unit_ball_volume(dim);
    let ball = ball_profile(dim, spec, alpha, beta)?;
    let rho = ball_radius_for_volume(spec);
    let critical = rho_n(dim)?;
    let gs = ground_state(dim)?;

    let (improved_profile, ball_sol) = improve(&ball, spec, tol)?;
    let lambda_ball = ball_sol.lambda();
    let improved_set = improved_profile.high_region();
    let moved = improved_set.symmetric_difference_measure(&ball.high_region());
    let set_changed = moved > 1e-8 * omega;

    let lambda_improved = if set_changed {
        principal_eigenvalue(&improved_profile, tol)?.lambda()
    } else {
        lambda_ball
    };
    let gap = lambda_ball - lambda_improved;

    let verdict = if !set_changed {
        Verdict::NotRefuted
    } else if gap > 10.0 * tol * lambda_ball {
        Verdict::Refuted
    } else {
        Verdict::Inconclusive
    };

    Ok(CounterexampleReport {
        dim: dim.get(),
        fraction: spec.fraction(),
        alpha,
        beta,
        rho,
        rho_n: critical,
        lambda_ball,
        lambda_improved,
        gap,
        improved_set,
        y2_prime_at_1: gradient_magnitude(&ball_sol, 1.0),
        z: ball_sol.max_gradient_on(0.0, rho),
        d_n: gs.psi_prime_abs(rho) - gs.psi_prime_abs(1.0),
        verdict,
    })
}

/// Re-threshold the ball solution (exposed for diagnostics and tests).
pub fn threshold_of_ball_solution(
    sol: &EigenSolution,
    spec: &VolumeSpec,
) -> Result<crate::rearrangement::ThresholdResult> {
    level_threshold(sol, spec)
}

/// One sweep row: either a full report or the error that interrupted it.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub dim: u32,
    pub fraction: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(flatten)]
    pub outcome: SweepOutcome,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum SweepOutcome {
    Report(CounterexampleReport),
    Failed { error: String },
}

/// Run the full (dims × fractions × contrasts) grid in lexicographic order.
/// Per-point failures are recorded in their row and the sweep continues.
pub fn sweep(
    dims: &[u32],
    fractions: &[f64],
    contrasts: &[f64],
    alpha: f64,
    tol: f64,
) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(dims.len() * fractions.len() * contrasts.len());
    for &n in dims {
        for &fraction in fractions {
            for &contrast in contrasts {
                let beta = alpha * contrast;
                let outcome = (|| -> Result<CounterexampleReport> {
                    let dim = Dimension::new(n)?;
                    let spec = VolumeSpec::from_fraction(dim, fraction)?;
                    check_counterexample(dim, &spec, alpha, beta, tol)
                })();
                rows.push(SweepRow {
                    dim: n,
                    fraction,
                    alpha,
                    beta,
                    outcome: match outcome {
                        Ok(report) => SweepOutcome::Report(report),
                        Err(e) => SweepOutcome::Failed { error: e.to_string() },
                    },
                });
            }
        }
    }
    rows
}

fn sig15(x: f64) -> String {
    format!("{x:.14e}")
}

pub const SWEEP_CSV_HEADER: &str =
    "n,A_fraction,alpha,beta,rho,rho_n,lambda_ball,lambda_improved,gap,y2p1,z,verdict";

/// CSV emission ('.' decimal separator, 15 significant digits).
pub fn sweep_to_csv<W: Write>(rows: &[SweepRow], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for row in rows {
        match &row.outcome {
            SweepOutcome::Report(r) => writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.dim,
                sig15(r.fraction),
                sig15(r.alpha),
                sig15(r.beta),
                sig15(r.rho),
                sig15(r.rho_n),
                sig15(r.lambda_ball),
                sig15(r.lambda_improved),
                sig15(r.gap),
                sig15(r.y2_prime_at_1),
                sig15(r.z),
                r.verdict
            )?,
            SweepOutcome::Failed { error } => writeln!(
                out,
                "{},{},{},{},nan,nan,nan,nan,nan,nan,nan,error({})",
                row.dim,
                sig15(row.fraction),
                sig15(row.alpha),
                sig15(row.beta),
                error.replace([',', '\n'], ";")
            )?,
        }
    }
    Ok(())
}

/// JSON mirror of the sweep, including the improved set's intervals.
pub fn sweep_to_json(rows: &[SweepRow]) -> String {
    serde_json::to_string_pretty(rows).expect("sweep rows serialize")
}
