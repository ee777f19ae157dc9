//! Principal eigenvalues of two-phase radially layered conductors in the
//! unit n-ball, together with the sublevel-set rearrangement machinery that
//! improves a layout at fixed volume fraction and the experiment harness
//! that probes whether a centered ball of the better conductor can be
//! optimal.

pub mod bessel;
mod dd;
pub mod eigensolver;
pub mod error;
pub mod experiments;
pub mod gamma;
pub mod geometry;
pub mod ground_state;
mod interp;
pub mod profile;
pub mod quad;
pub mod rearrangement;

pub use bessel::{bessel_j, bessel_j_prime, bessel_zero, cross_product_check, Order, ZeroIndex};
pub use eigensolver::{
    fixed_field_energy, gradient_magnitude, principal_eigenvalue, rayleigh_quotient, shoot,
    EigenSolution, Shot,
};
pub use error::{Error, Result};
pub use experiments::{
    ball_profile, check_counterexample, sweep, CounterexampleReport, SweepRow, Verdict,
};
pub use gamma::gamma_half;
pub use geometry::{ball_radius_for_volume, unit_ball_volume, Dimension, RadialSet, VolumeSpec};
pub use ground_state::{g, ground_state, rho_n, GroundState};
pub use profile::{Layer, Material, RadialProfile};
pub use rearrangement::{
    improve, level_threshold, low_contrast_optimizer, optimize, ImprovementTrace,
    LowContrastResult, SetClass, ThresholdResult,
};

/// Default relative tolerance for eigenvalue solves.
pub const DEFAULT_SOLVER_TOL: f64 = 1e-10;
