//! Principal eigenvalue of the two-phase radial operator by shooting.
//!
//! For a piecewise-constant conductivity σ(r) on the unit n-ball the radial
//! eigenfunction solves, layer by layer,
//!
//! ```text
//! y'' + (n-1)/r · y' + (λ/σ) y = 0,   y'(0) = 0,  y(1) = 0,
//! ```
//!
//! with continuity of y and of the flux σ·y' across every interface, i.e.
//! y'(ρ⁺) = (σ⁻/σ⁺)·y'(ρ⁻). Integration starts at ε = 1e-6 from the
//! two-term series around the regular singular point (error O(ε⁴)) and runs
//! a Dormand-Prince 5(4) pair with steps capped at the dense-output grid
//! spacing, so every stored node pair carries y to ~1e-13 and cubic Hermite
//! reconstruction between nodes matches that accuracy.
//!
//! The secular function λ ↦ y(1; λ) is positive below the principal
//! eigenvalue and crosses zero transversally there; the Rayleigh quotient
//! confines the root to [α·μ², β·μ²] with μ = j_{n/2-1,1}, so a coarse scan
//! of that bracket followed by bisection and a secant polish cannot miss it.

use crate::bessel::{bessel_zero, Order, ZeroIndex};
use crate::error::{Error, Result};
use crate::geometry::{unit_ball_volume, RadialSet};
use crate::interp::{hermite, hermite_deriv, MonotoneCubic};
use crate::profile::RadialProfile;
use crate::quad::gauss12;

/// Number of uniform dense-output intervals per shoot.
const GRID_POINTS: usize = 2048;

/// Integration starts here; below it the two-term series is exact to O(ε⁴).
const ORIGIN_EPS: f64 = 1e-6;

/// Local error tolerance of the embedded RK pair.
const ODE_TOL: f64 = 1e-11;

/// One integrated trajectory at a trial eigenvalue.
#[derive(Clone, Debug)]
pub struct Shot {
    /// y(1; λ) — the secular function value.
    pub boundary_value: f64,
    /// Node radii; interface radii appear twice (left then right limit).
    pub grid: Vec<f64>,
    pub y: Vec<f64>,
    pub y_prime: Vec<f64>,
}

/// Principal eigenpair on a profile, L²-normalized against n·ω_n·r^{n-1} dr.
#[derive(Clone, Debug)]
pub struct EigenSolution {
    profile: RadialProfile,
    lambda: f64,
    grid: Vec<f64>,
    y: Vec<f64>,
    y_prime: Vec<f64>,
    grad_cache: std::sync::OnceLock<Vec<MonotoneCubic>>,
}

/// μ = j_{n/2-1,1} for the profile's dimension.
pub fn principal_frequency(profile: &RadialProfile) -> Result<f64> {
    let nu = profile.dim().as_f64() / 2.0 - 1.0;
    bessel_zero(ZeroIndex::new(Order::new(nu)?, 1)?)
}

/// Integrate the radial equation outward at trial eigenvalue `lambda_trial`.
pub fn shoot(profile: &RadialProfile, lambda_trial: f64) -> Result<Shot> {
    if !(lambda_trial.is_finite() && lambda_trial > 0.0) {
        return Err(Error::Domain(format!(
            "shoot: lambda must be > 0, got {lambda_trial}"
        )));
    }
    let n = profile.dim().as_f64();
    let mut stops: Vec<f64> = (1..=GRID_POINTS).map(|k| k as f64 / GRID_POINTS as f64).collect();
    for itf in profile.interfaces() {
        if itf > ORIGIN_EPS {
            stops.push(itf);
        }
    }
    stops.sort_by(f64::total_cmp);
    stops.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    let interfaces = profile.interfaces();

    let mut grid = Vec::with_capacity(GRID_POINTS + 64);
    let mut ys = Vec::with_capacity(GRID_POINTS + 64);
    let mut yps = Vec::with_capacity(GRID_POINTS + 64);
    let mut push = |r: f64, y: f64, yp: f64| {
        grid.push(r);
        ys.push(y);
        yps.push(yp);
    };

    push(0.0, 1.0, 0.0);
    let sigma0 = profile.sigma(ORIGIN_EPS);
    let mut r = ORIGIN_EPS;
    let mut y = 1.0 - lambda_trial / sigma0 * ORIGIN_EPS * ORIGIN_EPS / (2.0 * n);
    let mut v = -lambda_trial / sigma0 * ORIGIN_EPS / n;
    push(r, y, v);

    let mut h = 1e-5;
    for &stop in &stops {
        if stop <= r + 1e-15 {
            continue;
        }
        // stops include every interface, so σ is constant on (r, stop]
        let k = lambda_trial / profile.sigma(0.5 * (r + stop));
        integrate_span(n, k, &mut r, &mut y, &mut v, stop, &mut h, &mut push)?;
        if interfaces.iter().any(|&itf| (itf - stop).abs() < 1e-13) {
            let left = profile.sigma(stop - 1e-13);
            let right = profile.sigma(stop + 1e-13);
            v *= left / right;
            push(r, y, v);
        }
    }

    Ok(Shot { boundary_value: y, grid, y: ys, y_prime: yps })
}

/// Dormand-Prince 5(4) over one constant-σ span, recording accepted steps.
#[allow(clippy::too_many_arguments)]
fn integrate_span(
    n: f64,
    k: f64,
    r: &mut f64,
    y: &mut f64,
    v: &mut f64,
    target: f64,
    h: &mut f64,
    push: &mut impl FnMut(f64, f64, f64),
) -> Result<()> {
    let f = |r: f64, y: f64, v: f64| (v, -(n - 1.0) / r * v - k * y);
    let mut k1 = f(*r, *y, *v);
    while *r < target - 1e-15 {
        let hstep = h.min(target - *r).min(1.0 / GRID_POINTS as f64);
        if hstep < 1e-14 {
            return Err(Error::Convergence {
                what: "radial integration step size".into(),
                achieved: hstep,
                requested: 1e-14,
            });
        }
        let (r0, y0, v0) = (*r, *y, *v);
        let k2 = {
            let (dy, dv) = k1;
            f(r0 + 0.2 * hstep, y0 + hstep * 0.2 * dy, v0 + hstep * 0.2 * dv)
        };
        let k3 = f(
            r0 + 0.3 * hstep,
            y0 + hstep * (3.0 / 40.0 * k1.0 + 9.0 / 40.0 * k2.0),
            v0 + hstep * (3.0 / 40.0 * k1.1 + 9.0 / 40.0 * k2.1),
        );
        let k4 = f(
            r0 + 0.8 * hstep,
            y0 + hstep * (44.0 / 45.0 * k1.0 - 56.0 / 15.0 * k2.0 + 32.0 / 9.0 * k3.0),
            v0 + hstep * (44.0 / 45.0 * k1.1 - 56.0 / 15.0 * k2.1 + 32.0 / 9.0 * k3.1),
        );
        let k5 = f(
            r0 + 8.0 / 9.0 * hstep,
            y0 + hstep
                * (19372.0 / 6561.0 * k1.0 - 25360.0 / 2187.0 * k2.0 + 64448.0 / 6561.0 * k3.0
                    - 212.0 / 729.0 * k4.0),
            v0 + hstep
                * (19372.0 / 6561.0 * k1.1 - 25360.0 / 2187.0 * k2.1 + 64448.0 / 6561.0 * k3.1
                    - 212.0 / 729.0 * k4.1),
        );
        let k6 = f(
            r0 + hstep,
            y0 + hstep
                * (9017.0 / 3168.0 * k1.0 - 355.0 / 33.0 * k2.0 + 46732.0 / 5247.0 * k3.0
                    + 49.0 / 176.0 * k4.0
                    - 5103.0 / 18656.0 * k5.0),
            v0 + hstep
                * (9017.0 / 3168.0 * k1.1 - 355.0 / 33.0 * k2.1 + 46732.0 / 5247.0 * k3.1
                    + 49.0 / 176.0 * k4.1
                    - 5103.0 / 18656.0 * k5.1),
        );
        let y5 = y0
            + hstep
                * (35.0 / 384.0 * k1.0 + 500.0 / 1113.0 * k3.0 + 125.0 / 192.0 * k4.0
                    - 2187.0 / 6784.0 * k5.0
                    + 11.0 / 84.0 * k6.0);
        let v5 = v0
            + hstep
                * (35.0 / 384.0 * k1.1 + 500.0 / 1113.0 * k3.1 + 125.0 / 192.0 * k4.1
                    - 2187.0 / 6784.0 * k5.1
                    + 11.0 / 84.0 * k6.1);
        let k7 = f(r0 + hstep, y5, v5);
        let y4 = y0
            + hstep
                * (5179.0 / 57600.0 * k1.0 + 7571.0 / 16695.0 * k3.0 + 393.0 / 640.0 * k4.0
                    - 92097.0 / 339200.0 * k5.0
                    + 187.0 / 2100.0 * k6.0
                    + 1.0 / 40.0 * k7.0);
        let v4 = v0
            + hstep
                * (5179.0 / 57600.0 * k1.1 + 7571.0 / 16695.0 * k3.1 + 393.0 / 640.0 * k4.1
                    - 92097.0 / 339200.0 * k5.1
                    + 187.0 / 2100.0 * k6.1
                    + 1.0 / 40.0 * k7.1);
        let scale_y = ODE_TOL + ODE_TOL * y0.abs().max(y5.abs());
        let scale_v = ODE_TOL + ODE_TOL * v0.abs().max(v5.abs());
        let err = ((y5 - y4) / scale_y).abs().max(((v5 - v4) / scale_v).abs());
        if err <= 1.0 {
            *r = r0 + hstep;
            *y = y5;
            *v = v5;
            k1 = k7; // first-same-as-last
            push(*r, *y, *v);
        }
        let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        *h = (hstep * factor.clamp(0.2, 5.0)).max(1e-14);
        if err > 1.0 {
            k1 = f(*r, *y, *v);
        }
    }
    Ok(())
}

/// Smallest λ with y(1; λ) = 0, to relative tolerance `tol`.
pub fn principal_eigenvalue(profile: &RadialProfile, tol: f64) -> Result<EigenSolution> {
    if !(tol.is_finite() && tol >= 1e-12) {
        return Err(Error::Domain(format!(
            "principal_eigenvalue: tol must be >= 1e-12, got {tol}"
        )));
    }
    let mu = principal_frequency(profile)?;
    let lo = profile.alpha() * mu * mu * (1.0 - 1e-9);
    let hi = profile.beta() * mu * mu * (1.0 + 1e-9);
    let secular = |lambda: f64| -> Result<f64> { Ok(shoot(profile, lambda)?.boundary_value) };

    let f_lo = secular(lo)?;
    if f_lo <= 0.0 {
        return Err(Error::Bracketing(format!(
            "secular function is {f_lo:.3e} at the Rayleigh lower bound {lo:.6e}"
        )));
    }
    let mut bracket = None;
    for scan in [48usize, 512] {
        let mut prev_l = lo;
        let mut prev_f = f_lo;
        for i in 1..=scan {
            let l = lo + (hi - lo) * i as f64 / scan as f64;
            let fl = secular(l)?;
            if prev_f > 0.0 && fl <= 0.0 {
                bracket = Some((prev_l, l, prev_f, fl));
                break;
            }
            prev_l = l;
            prev_f = fl;
        }
        if bracket.is_some() {
            break;
        }
    }
    let (mut a, mut b, mut fa, mut fb) = bracket.ok_or_else(|| {
        Error::Bracketing(format!(
            "no sign change of y(1; λ) inside the Rayleigh bracket [{lo:.6e}, {hi:.6e}]"
        ))
    })?;

    while b - a > 0.25 * tol * b {
        let mid = 0.5 * (a + b);
        let fm = secular(mid)?;
        if fm > 0.0 {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    let mut lambda = if fb != fa { b - fb * (b - a) / (fb - fa) } else { 0.5 * (a + b) };
    if !(lambda > a - tol * b && lambda < b + tol * b) {
        lambda = 0.5 * (a + b);
    }

    let shot = shoot(profile, lambda)?;
    let sol = EigenSolution {
        profile: profile.clone(),
        lambda,
        grid: shot.grid,
        y: shot.y,
        y_prime: shot.y_prime,
        grad_cache: std::sync::OnceLock::new(),
    };
    sol.check_ground_state()?;
    Ok(sol.normalized())
}

impl EigenSolution {
    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn y_prime(&self) -> &[f64] {
        &self.y_prime
    }

    fn check_ground_state(&self) -> Result<()> {
        let peak = self.y.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        for (&r, &y) in self.grid.iter().zip(self.y.iter()) {
            if r < 1.0 - 2.0 / GRID_POINTS as f64 && y < -1e-6 * peak {
                return Err(Error::Bracketing(format!(
                    "eigenfunction changes sign at r = {r}: a higher mode was bracketed"
                )));
            }
        }
        Ok(())
    }

    fn normalized(mut self) -> Self {
        let norm_sq = self.integrate_y_squared();
        let scale = 1.0 / norm_sq.sqrt();
        for y in &mut self.y {
            *y *= scale;
        }
        for v in &mut self.y_prime {
            *v *= scale;
        }
        self.grad_cache = std::sync::OnceLock::new();
        self
    }

    /// ∫₀¹ y²·n·ω_n·r^{n-1} dr over the stored curve.
    fn integrate_y_squared(&self) -> f64 {
        let n = self.profile.dim().as_f64();
        let w = n * unit_ball_volume(self.profile.dim());
        let mut acc = 0.0;
        for i in 0..self.grid.len() - 1 {
            let (r0, r1) = (self.grid[i], self.grid[i + 1]);
            if r1 - r0 < 1e-15 {
                continue;
            }
            let (y0, y1) = (self.y[i], self.y[i + 1]);
            let (d0, d1) = (self.y_prime[i], self.y_prime[i + 1]);
            acc += gauss12(
                &|r| {
                    let y = hermite(r0, r1, y0, y1, d0, d1, r);
                    y * y * w * r.powf(n - 1.0)
                },
                r0,
                r1,
            );
        }
        acc
    }

    /// Value of y at any radius by cubic Hermite on the dense curve.
    pub fn y_at(&self, r: f64) -> f64 {
        let i = self.locate(r);
        hermite(
            self.grid[i],
            self.grid[i + 1],
            self.y[i],
            self.y[i + 1],
            self.y_prime[i],
            self.y_prime[i + 1],
            r,
        )
    }

    fn locate(&self, r: f64) -> usize {
        let n = self.grid.len();
        if r <= self.grid[0] {
            return 0;
        }
        if r >= self.grid[n - 1] {
            return n - 2;
        }
        let mut i = match self.grid.binary_search_by(|p| p.total_cmp(&r)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        // step over zero-width interface slots
        while i + 2 < n && self.grid[i + 1] - self.grid[i] < 1e-15 {
            i += 1;
        }
        i.min(n - 2)
    }

    /// Left and right limits of |y'| at r (they differ at interfaces).
    pub fn gradient_limits_at(&self, r: f64) -> (f64, f64) {
        let mut left = None;
        let mut right = None;
        for (i, &g) in self.grid.iter().enumerate() {
            if (g - r).abs() < 1e-12 {
                if left.is_none() {
                    left = Some(self.y_prime[i].abs());
                }
                right = Some(self.y_prime[i].abs());
            }
        }
        match (left, right) {
            (Some(l), Some(r)) => (l, r),
            _ => {
                let v = gradient_magnitude(self, r);
                (v, v)
            }
        }
    }

    /// σ_left·y'(left) − σ_right·y'(right) at each interior interface; the
    /// transmission condition makes these vanish identically.
    pub fn interface_flux_residuals(&self) -> Vec<f64> {
        self.profile
            .interfaces()
            .iter()
            .map(|&itf| {
                let (l, r) = self.gradient_limits_at(itf);
                let sl = self.profile.sigma(itf - 1e-13);
                let sr = self.profile.sigma(itf + 1e-13);
                sl * l - sr * r
            })
            .collect()
    }

    /// Per-layer monotone-cubic interpolants of |y'| over the dense curve.
    pub(crate) fn gradient_segments(&self) -> &[MonotoneCubic] {
        self.grad_cache.get_or_init(|| {
            let mut segments = Vec::new();
            let mut xs = Vec::new();
            let mut vs = Vec::new();
            for i in 0..self.grid.len() {
                if let Some(&last) = xs.last() {
                    if self.grid[i] - last < 1e-15 {
                        // interface duplicate: close this segment, start the next
                        if xs.len() >= 2 {
                            segments.push(MonotoneCubic::new(xs.clone(), vs.clone()));
                        }
                        xs.clear();
                        vs.clear();
                    }
                }
                xs.push(self.grid[i]);
                vs.push(self.y_prime[i].abs());
            }
            if xs.len() >= 2 {
                segments.push(MonotoneCubic::new(xs, vs));
            }
            segments
        })
    }

    /// max |y'| over [a, b], by node scan plus local refinement.
    pub fn max_gradient_on(&self, a: f64, b: f64) -> f64 {
        let mut best = gradient_magnitude(self, a).max(gradient_magnitude(self, b));
        let mut best_r = a;
        for (&r, &v) in self.grid.iter().zip(self.y_prime.iter()) {
            if r >= a && r <= b && v.abs() > best {
                best = v.abs();
                best_r = r;
            }
        }
        // golden-section polish around the best node
        let (mut lo, mut hi) = ((best_r - 2e-3).max(a), (best_r + 2e-3).min(b));
        let phi = 0.618_033_988_749_894_9;
        for _ in 0..40 {
            let m1 = hi - phi * (hi - lo);
            let m2 = lo + phi * (hi - lo);
            if gradient_magnitude(self, m1) > gradient_magnitude(self, m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        best.max(gradient_magnitude(self, 0.5 * (lo + hi)))
    }
}

/// |y'(r)| by shape-preserving interpolation of the dense curve; exactly 0
/// at r = 0, left limit at interface radii.
pub fn gradient_magnitude(sol: &EigenSolution, r: f64) -> f64 {
    assert!((0.0..=1.0).contains(&r), "gradient_magnitude: r = {r} outside [0, 1]");
    if r == 0.0 {
        return 0.0;
    }
    for seg in sol.gradient_segments() {
        let last = *seg.x().last().expect("segment non-empty");
        if r <= last {
            return seg.eval(r).max(0.0);
        }
    }
    sol.y_prime.last().expect("curve non-empty").abs()
}

/// ∫₀¹ σ(r)·y'(r)²·n·ω_n·r^{n-1} dr for the given conductivity layout.
///
/// With `profile` equal to the solution's own profile this reproduces λ,
/// because the eigenfunction is the Rayleigh-quotient minimizer. Evaluating
/// against a different layout of the same dimension gives the fixed-field
/// comparison energy that thresholding minimizes.
pub fn rayleigh_quotient(profile: &RadialProfile, sol: &EigenSolution) -> f64 {
    let cuts = profile.interfaces();
    weighted_gradient_energy(sol, &|r| profile.sigma(r), &cuts)
}

pub(crate) fn weighted_gradient_energy(
    sol: &EigenSolution,
    sigma_at: &dyn Fn(f64) -> f64,
    cuts: &[f64],
) -> f64 {
    let n = sol.profile.dim().as_f64();
    let w = n * unit_ball_volume(sol.profile.dim());
    let mut acc = 0.0;
    for i in 0..sol.grid.len() - 1 {
        let (r0, r1) = (sol.grid[i], sol.grid[i + 1]);
        if r1 - r0 < 1e-15 {
            continue;
        }
        // split at any σ-discontinuity interior to the curve interval
        let mut pieces = vec![r0];
        for &c in cuts {
            if c > r0 + 1e-15 && c < r1 - 1e-15 {
                pieces.push(c);
            }
        }
        pieces.push(r1);
        pieces.sort_by(f64::total_cmp);
        let (y0, y1) = (sol.y[i], sol.y[i + 1]);
        let (d0, d1) = (sol.y_prime[i], sol.y_prime[i + 1]);
        for pair in pieces.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let sigma = sigma_at(0.5 * (a + b));
            acc += gauss12(
                &|r| {
                    let yp = hermite_deriv(r0, r1, y0, y1, d0, d1, r);
                    sigma * yp * yp * w * r.powf(n - 1.0)
                },
                a,
                b,
            );
        }
    }
    acc
}

/// Fixed-field comparison energy: σ built from `high` (β inside, α outside)
/// against the solution's frozen gradient field.
pub fn fixed_field_energy(sol: &EigenSolution, high: &RadialSet) -> f64 {
    let alpha = sol.profile().alpha();
    let beta = sol.profile().beta();
    let mut cuts = Vec::new();
    for &(lo, hi) in high.intervals() {
        cuts.push(lo);
        cuts.push(hi);
    }
    let high = high.clone();
    weighted_gradient_energy(
        sol,
        &move |r| if high.contains(r) { beta } else { alpha },
        &cuts,
    )
}
