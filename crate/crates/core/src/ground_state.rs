//! Dirichlet-Laplacian radial ground state on the unit n-ball and the
//! critical radius where its gradient magnitude peaks.
//!
//! The ground state is ψ(r) = C·r^{1-n/2} J_{n/2-1}(μr) with μ the first
//! positive zero of J_{n/2-1} and C fixed by ‖ψ‖_{L²} = 1 against the radial
//! measure n·ω_n·r^{n-1} dr. Writing ν = n/2 - 1, everything is evaluated
//! through the entire function J_ν(x)/x^ν, so there is no singularity to
//! dodge at the origin:
//!
//! ```text
//! ψ(r)    =  C μ^ν   · [J_ν(μr)/(μr)^ν]
//! |ψ'(r)| =  C μ^{ν+2} · r · [J_{ν+1}(μr)/(μr)^{ν+1}]
//! ```
//!
//! |ψ'| rises from 0 at the origin to a single interior maximum at ρ_n and
//! decreases toward r = 1 afterwards; ρ_n solves
//! t·J_{n/2-1}(t) = (n-1)·J_{n/2}(t) in t = μr.

use crate::bessel::{bessel_zero, j_raw, j_scaled_raw, Order, ZeroIndex};
use crate::error::{Error, Result};
use crate::geometry::{unit_ball_volume, Dimension};
use crate::quad::adaptive_simpson;

/// Radial ground state of the Dirichlet Laplacian, L²-normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundState {
    dim: Dimension,
    mu: f64,
    norm_constant: f64,
}

/// Builds the ground state for dimension n: locates μ = j_{n/2-1,1} and
/// computes the normalization constant by adaptive quadrature (tol 1e-10).
pub fn ground_state(dim: Dimension) -> Result<GroundState> {
    let nu = dim.as_f64() / 2.0 - 1.0;
    let mu = bessel_zero(ZeroIndex::new(Order::new(nu)?, 1)?)?;
    let n_omega = dim.as_f64() * unit_ball_volume(dim);
    // ∫₀¹ ψ_raw(r)²·nω_n·r^{n-1} dr with ψ_raw = μ^ν·J_ν(μr)/(μr)^ν
    let raw = |r: f64| mu.powf(nu) * j_scaled_raw(nu, mu * r);
    let weight = |r: f64| n_omega * r.powf(dim.as_f64() - 1.0);
    let norm_sq = adaptive_simpson(&|r| raw(r) * raw(r) * weight(r), 0.0, 1.0, 1e-10, 44)?;
    Ok(GroundState { dim, mu, norm_constant: 1.0 / norm_sq.sqrt() })
}

impl GroundState {
    pub fn dim(&self) -> Dimension {
        self.dim
    }

    /// μ = j_{n/2-1,1}; the principal Laplacian eigenvalue is μ².
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    fn nu(&self) -> f64 {
        self.dim.as_f64() / 2.0 - 1.0
    }

    /// ψ(r) on [0, 1]; finite and positive at r = 0, zero at r = 1.
    pub fn psi(&self, r: f64) -> f64 {
        assert!((0.0..=1.0).contains(&r), "psi: r = {r} outside [0, 1]");
        let nu = self.nu();
        self.norm_constant * self.mu.powf(nu) * j_scaled_raw(nu, self.mu * r)
    }

    /// |ψ'(r)| on [0, 1]; zero at the origin.
    pub fn psi_prime_abs(&self, r: f64) -> f64 {
        assert!((0.0..=1.0).contains(&r), "psi_prime_abs: r = {r} outside [0, 1]");
        let nu = self.nu();
        (self.norm_constant * self.mu.powf(nu + 2.0) * r * j_scaled_raw(nu + 1.0, self.mu * r))
            .abs()
    }
}

/// g(t) = (n-1)·J_{n/2}(t)/J_{n/2-1}(t), strictly increasing on (0, μ) from
/// 0 to +∞; its fixed point locates the critical radius.
pub fn g(dim: Dimension, t: f64) -> Result<f64> {
    let nu = dim.as_f64() / 2.0 - 1.0;
    let mu = bessel_zero(ZeroIndex::new(Order::new(nu)?, 1)?)?;
    if !(t > 0.0 && t < mu) {
        return Err(Error::Domain(format!(
            "g: t must lie in (0, mu) = (0, {mu:.12}), got {t}"
        )));
    }
    Ok((dim.as_f64() - 1.0) * j_raw(nu + 1.0, t) / j_raw(nu, t))
}

/// Critical radius ρ_n, the unique maximizer of |ψ'| in (0, 1).
///
/// The zero of h(t) = t·J_{n/2-1}(t) - (n-1)·J_{n/2}(t) is bracketed on
/// (0.01μ, 0.99μ), where h is positive at the left end and negative at the
/// right, and refined by bisection to 1e-12 in t.
pub fn rho_n(dim: Dimension) -> Result<f64> {
    let nu = dim.as_f64() / 2.0 - 1.0;
    let mu = bessel_zero(ZeroIndex::new(Order::new(nu)?, 1)?)?;
    let h = |t: f64| t * j_raw(nu, t) - (dim.as_f64() - 1.0) * j_raw(nu + 1.0, t);
    let mut a = 0.01 * mu;
    let mut b = 0.99 * mu;
    let (ha, hb) = (h(a), h(b));
    if !(ha > 0.0 && hb < 0.0) {
        return Err(Error::Bracketing(format!(
            "rho_n: no sign change on (0.01μ, 0.99μ) for n = {} (h = {ha:.3e}, {hb:.3e})",
            dim.get()
        )));
    }
    while b - a > 1e-12 {
        let mid = 0.5 * (a + b);
        if h(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b) / mu)
}
