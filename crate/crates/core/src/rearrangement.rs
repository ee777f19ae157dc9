//! Volume-constrained sublevel-set thresholding of the gradient field and
//! the improvement iteration built on it.
//!
//! One improvement step: solve the eigenproblem on the current layout,
//! pick the threshold t so that {r : |y'(r)| ≤ t} has exactly the target
//! measure, and move the high-conductivity material onto that sublevel set.
//! The resulting layout never has a larger principal eigenvalue, strictly
//! smaller whenever the set actually changed, so iterating walks downhill
//! to a fixed point of the thresholding map.
//!
//! The low-contrast shortcut applies the same thresholding to the Laplacian
//! ground state ψ instead of a two-phase solve; |ψ'| is unimodal with peak
//! at the critical radius, so its sublevel sets are a centered ball alone or
//! a centered ball plus an annulus hugging the outer boundary.

use crate::eigensolver::{principal_eigenvalue, EigenSolution};
use crate::error::{Error, Result};
use crate::geometry::{unit_ball_volume, Dimension, RadialSet, VolumeSpec};
use crate::ground_state::{ground_state, rho_n};
use crate::profile::RadialProfile;
use serde::Serialize;

/// Measure tolerance for threshold solving, as a fraction of ω_n.
const MEASURE_TOL_FRACTION: f64 = 1e-10;

/// Default set-convergence tolerance for `optimize`, as a fraction of ω_n.
pub const CONVERGENCE_TOL_FRACTION: f64 = 1e-8;

/// Outcome of thresholding a gradient field at fixed volume.
#[derive(Clone, Debug)]
pub struct ThresholdResult {
    /// The threshold on |∇u|.
    pub t: f64,
    /// The sublevel set {|∇u| ≤ t}, trimmed to the target measure.
    pub set: RadialSet,
    pub achieved_measure: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImprovementStep {
    pub profile: RadialProfile,
    pub lambda: f64,
}

#[derive(Clone, Debug)]
pub struct ImprovementTrace {
    /// (layout, λ) pairs, starting with the initial profile and ending with
    /// the final one; λ is nonincreasing along the sequence.
    pub steps: Vec<ImprovementStep>,
    pub converged: bool,
    pub fixed_point: RadialProfile,
}

/// Shape classification of a sublevel set of a unimodal gradient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetClass {
    CenteredBall,
    BallWithBoundaryAnnulus,
}

/// Low-contrast approximate optimizer built from the Laplacian ground state.
#[derive(Clone, Debug)]
pub struct LowContrastResult {
    pub threshold: ThresholdResult,
    pub classification: SetClass,
    /// Radius a* where the sublevel set first touches the boundary,
    /// defined by |ψ'(a*)| = |ψ'(1)| on the rising branch.
    pub a_star: f64,
    pub rho_n: f64,
    /// |B(0, a*)| — measure at which the computed set stops being a ball.
    pub boundary_transition_measure: f64,
    /// |B(0, ρ_n)| — measure of the ball of critical radius.
    pub critical_ball_measure: f64,
}

/// Threshold |y'| of a solved eigenfunction at the volume in `spec`.
///
/// The threshold is found by bisection on s over the measure map
/// s ↦ |{|y'| ≤ s}| (continuous and nondecreasing, 0 at s < 0 and ω_n at
/// max |y'|), evaluating the sublevel set per monotone piece of the dense
/// curve; a final boundary adjustment pins the measure to the target within
/// 1e-10·ω_n even if bisection stalls on a numerically flat stretch.
pub fn level_threshold(sol: &EigenSolution, spec: &VolumeSpec) -> Result<ThresholdResult> {
    let dim = sol.profile().dim();
    if spec.dim() != dim {
        return Err(Error::Domain(format!(
            "level_threshold: spec dimension {} does not match solution dimension {}",
            spec.dim().get(),
            dim.get()
        )));
    }
    let omega = unit_ball_volume(dim);
    let target = spec.measure();
    let tol = MEASURE_TOL_FRACTION * omega;
    let segments = sol.gradient_segments();
    let smax = segments
        .iter()
        .flat_map(|seg| seg.values().iter())
        .fold(0.0f64, |m, &v| m.max(v));

    let sublevel = |s: f64| -> Result<RadialSet> {
        let mut intervals: Vec<(f64, f64)> = Vec::new();
        for seg in segments {
            let x = seg.x();
            let v = seg.values();
            let mut start = if v[0] <= s { Some(x[0]) } else { None };
            for i in 0..x.len() - 1 {
                match (v[i] <= s, v[i + 1] <= s) {
                    (true, false) => {
                        let c = seg.solve_in_interval(i, s);
                        intervals.push((start.take().unwrap_or(x[i]), c));
                    }
                    (false, true) => {
                        start = Some(seg.solve_in_interval(i, s));
                    }
                    _ => {}
                }
            }
            if let Some(st) = start {
                intervals.push((st, *x.last().expect("segment non-empty")));
            }
        }
        RadialSet::new(dim, intervals)
    };

    let mut lo = 0.0;
    let mut hi = smax * (1.0 + 1e-12);
    let mut best: Option<(f64, RadialSet, f64)> = None;
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        let set = sublevel(mid)?;
        let m = set.measure();
        if (m - target).abs() <= tol {
            best = Some((mid, set, m));
            break;
        }
        if m < target {
            lo = mid;
        } else {
            best = Some((mid, set, m));
            hi = mid;
        }
        if hi - lo < 1e-12 * smax.max(1e-300) {
            break;
        }
    }
    let (t, set, measure) = match best {
        Some(v) => v,
        // measure map is continuous from 0 to ω_n, so a threshold always
        // exists; reaching this means the curve itself is degenerate
        None => {
            return Err(Error::Convergence {
                what: "threshold bisection".into(),
                achieved: f64::NAN,
                requested: target,
            })
        }
    };
    let (set, measure) = trim_to_measure(set, measure, target, tol)?;
    Ok(ThresholdResult { t, set, achieved_measure: measure })
}

/// Move one interval boundary to absorb a small measure surplus.
fn trim_to_measure(
    set: RadialSet,
    measure: f64,
    target: f64,
    tol: f64,
) -> Result<(RadialSet, f64)> {
    if (measure - target).abs() <= tol {
        return Ok((set, measure));
    }
    let dim = set.dim();
    let omega = unit_ball_volume(dim);
    let n = dim.as_f64();
    let shave = (measure - target) / omega; // in units of r^n
    let mut intervals = set.intervals().to_vec();
    // widest interval absorbs the adjustment
    let idx = intervals
        .iter()
        .enumerate()
        .max_by(|a, b| (a.1 .1 - a.1 .0).total_cmp(&(b.1 .1 - b.1 .0)))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Domain("cannot trim an empty set".into()))?;
    let (lo, hi) = intervals[idx];
    if hi < 1.0 {
        let new_hi = (hi.powf(n) - shave).max(lo.powf(n)).powf(1.0 / n);
        intervals[idx] = (lo, new_hi);
    } else {
        let new_lo = (lo.powf(n) + shave).min(hi.powf(n)).powf(1.0 / n);
        intervals[idx] = (new_lo, hi);
    }
    let out = RadialSet::new(dim, intervals)?;
    let m = out.measure();
    if (m - target).abs() > tol {
        return Err(Error::Convergence {
            what: "measure trim".into(),
            achieved: (m - target).abs(),
            requested: tol,
        });
    }
    Ok((out, m))
}

/// One improvement step: returns the rearranged profile and the eigenpair
/// of the *input* profile that produced it.
///
/// λ(new) ≤ λ(old) always, strictly when the high region moved; with
/// α = β any rearrangement is λ-neutral and the input is returned as is.
pub fn improve(
    profile: &RadialProfile,
    spec: &VolumeSpec,
    solver_tol: f64,
) -> Result<(RadialProfile, EigenSolution)> {
    let dim = profile.dim();
    if spec.dim() != dim {
        return Err(Error::Domain("improve: spec and profile dimensions differ".into()));
    }
    let omega = unit_ball_volume(dim);
    if (profile.high_measure() - spec.measure()).abs() > 1e-6 * omega {
        return Err(Error::Domain(format!(
            "improve: profile's high-region measure {:.12e} does not match the target {:.12e}",
            profile.high_measure(),
            spec.measure()
        )));
    }
    let sol = principal_eigenvalue(profile, solver_tol)?;
    if profile.alpha() == profile.beta() {
        return Ok((profile.clone(), sol));
    }
    let thresholded = level_threshold(&sol, spec)?;
    let next =
        RadialProfile::from_high_region(dim, profile.alpha(), profile.beta(), &thresholded.set)?;
    Ok((next, sol))
}

/// Iterate `improve` until the high region stops moving (symmetric
/// difference below `set_tol`) or `max_iter` steps have run.
pub fn optimize(
    initial: &RadialProfile,
    spec: &VolumeSpec,
    max_iter: usize,
    set_tol: f64,
    solver_tol: f64,
) -> Result<ImprovementTrace> {
    if max_iter == 0 {
        return Err(Error::Domain("optimize: max_iter must be >= 1".into()));
    }
    let mut steps = Vec::new();
    let mut current = initial.clone();
    let mut converged = false;
    for _ in 0..max_iter {
        let (next, before) = improve(&current, spec, solver_tol)?;
        steps.push(ImprovementStep { profile: current.clone(), lambda: before.lambda() });
        let moved = next.high_region().symmetric_difference_measure(&current.high_region());
        current = next;
        if moved < set_tol {
            converged = true;
            break;
        }
    }
    let final_lambda = principal_eigenvalue(&current, solver_tol)?.lambda();
    steps.push(ImprovementStep { profile: current.clone(), lambda: final_lambda });
    Ok(ImprovementTrace { steps, converged, fixed_point: current })
}

/// Threshold the Laplacian ground state's gradient at volume A — the
/// low-contrast approximation to the optimal layout, with no two-phase
/// solve involved.
///
/// Reports both candidate transition volumes: |B(0, a*)|, where the
/// computed sublevel set first touches the boundary, and |B(0, ρ_n)|, the
/// ball at the critical radius.
pub fn low_contrast_optimizer(dim: Dimension, spec: &VolumeSpec) -> Result<LowContrastResult> {
    if spec.dim() != dim {
        return Err(Error::Domain("low_contrast_optimizer: dimension mismatch".into()));
    }
    let gs = ground_state(dim)?;
    let rho = rho_n(dim)?;
    let omega = unit_ball_volume(dim);
    let n = dim.as_f64();
    let target = spec.measure();
    let tol = MEASURE_TOL_FRACTION * omega;

    let v_peak = gs.psi_prime_abs(rho);
    let v_edge = gs.psi_prime_abs(1.0);

    // |ψ'| is strictly increasing on [0, ρ_n] and strictly decreasing on
    // [ρ_n, 1]; invert each branch by bisection
    let rising = |s: f64| -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= v_peak {
            return rho;
        }
        let (mut a, mut b) = (0.0, rho);
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if gs.psi_prime_abs(m) < s {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    let falling = |s: f64| -> f64 {
        if s >= v_peak {
            return rho;
        }
        let (mut a, mut b) = (rho, 1.0);
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if gs.psi_prime_abs(m) > s {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };

    let measure_at = |s: f64| -> f64 {
        let ball = omega * rising(s).powf(n);
        if s >= v_edge {
            ball + omega * (1.0 - falling(s).powf(n))
        } else {
            ball
        }
    };

    let (mut lo, mut hi) = (0.0, v_peak);
    let mut t = 0.5 * v_peak;
    for _ in 0..200 {
        t = 0.5 * (lo + hi);
        let m = measure_at(t);
        if (m - target).abs() <= 0.1 * tol || hi - lo < 1e-15 * v_peak {
            break;
        }
        if m < target {
            lo = t;
        } else {
            hi = t;
        }
    }

    let a = rising(t);
    let set = if t >= v_edge {
        RadialSet::new(dim, vec![(0.0, a), (falling(t), 1.0)])?
    } else {
        RadialSet::new(dim, vec![(0.0, a)])?
    };
    let measure = set.measure();
    let (set, measure) = trim_to_measure(set, measure, target, tol)?;
    let classification = if set.touches_outer_boundary(1e-9) {
        SetClass::BallWithBoundaryAnnulus
    } else {
        SetClass::CenteredBall
    };
    let a_star = rising(v_edge);
    Ok(LowContrastResult {
        threshold: ThresholdResult { t, set, achieved_measure: measure },
        classification,
        a_star,
        rho_n: rho,
        boundary_transition_measure: omega * a_star.powf(n),
        critical_ball_measure: omega * rho.powf(n),
    })
}

/// Trace export as a JSON array of steps.
pub fn trace_to_json(trace: &ImprovementTrace) -> String {
    serde_json::to_string_pretty(&trace.steps).expect("trace serializes")
}

/// Trace export as CSV rows (iteration, lambda, interface radii).
pub fn trace_to_csv(trace: &ImprovementTrace) -> String {
    let mut out = String::from("iteration,lambda,interfaces\n");
    for (i, step) in trace.steps.iter().enumerate() {
        let interfaces: Vec<String> =
            step.profile.interfaces().iter().map(|r| format!("{r:.15e}")).collect();
        out.push_str(&format!("{i},{:.15e},{}\n", step.lambda, interfaces.join(";")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::fixed_field_energy;
    use crate::profile::{Layer, Material};
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn ball(n: u32, alpha: f64, beta: f64, rho: f64) -> RadialProfile {
        RadialProfile::new(
            dim(n),
            alpha,
            beta,
            vec![
                Layer { r_outer: rho, material: Material::High },
                Layer { r_outer: 1.0, material: Material::Low },
            ],
        )
        .unwrap()
    }

    /// Random disjoint interval family of exactly the requested measure,
    /// via bisection on a shrink-about-centers factor.
    pub(crate) fn random_set_of_measure(rng: &mut StdRng, d: Dimension, a: f64) -> RadialSet {
        loop {
            let k = rng.random_range(1..=3usize);
            let mut pts: Vec<f64> = (0..2 * k).map(|_| rng.random_range(0.0..1.0)).collect();
            pts.sort_by(f64::total_cmp);
            let drawn =
                RadialSet::new(d, (0..k).map(|i| (pts[2 * i], pts[2 * i + 1])).collect()).unwrap();
            let complement = drawn.complement();
            for candidate in [drawn, complement] {
                if candidate.measure() < a || candidate.intervals().is_empty() {
                    continue;
                }
                // shrink about centers until the measure hits a
                let base = candidate.intervals().to_vec();
                let at = |t: f64| -> RadialSet {
                    RadialSet::new(
                        d,
                        base.iter()
                            .map(|&(lo, hi)| {
                                let c = 0.5 * (lo + hi);
                                let w = 0.5 * (hi - lo) * t;
                                (c - w, c + w)
                            })
                            .collect(),
                    )
                    .unwrap()
                };
                let (mut tlo, mut thi) = (0.0, 1.0);
                for _ in 0..80 {
                    let tm = 0.5 * (tlo + thi);
                    if at(tm).measure() < a {
                        tlo = tm;
                    } else {
                        thi = tm;
                    }
                }
                let set = at(0.5 * (tlo + thi));
                if (set.measure() - a).abs() < 1e-9 * unit_ball_volume(d) {
                    return set;
                }
            }
        }
    }

    #[test]
    fn threshold_measure_is_exact() {
        let p = ball(3, 1.0, 1.5, 0.7);
        let sol = principal_eigenvalue(&p, 1e-10).unwrap();
        let omega = unit_ball_volume(dim(3));
        for frac in [0.05, 0.3, 0.5, 0.343, 0.9] {
            let spec = VolumeSpec::from_fraction(dim(3), frac).unwrap();
            let th = level_threshold(&sol, &spec).unwrap();
            assert!(
                (th.achieved_measure - spec.measure()).abs() <= 1e-10 * omega,
                "frac={frac}: achieved {} vs target {}",
                th.achieved_measure,
                spec.measure()
            );
            assert!((th.set.measure() - th.achieved_measure).abs() < 1e-14);
        }
    }

    #[test]
    fn threshold_handles_extreme_fractions() {
        let p = ball(3, 1.0, 1.2, 0.7);
        let sol = principal_eigenvalue(&p, 1e-10).unwrap();
        let omega = unit_ball_volume(dim(3));
        for frac in [0.003, 0.997] {
            let spec = VolumeSpec::from_fraction(dim(3), frac).unwrap();
            let th = level_threshold(&sol, &spec).unwrap();
            assert!(
                (th.achieved_measure - spec.measure()).abs() <= 1e-10 * omega,
                "frac={frac}: {}",
                th.achieved_measure
            );
        }
    }

    #[test]
    fn threshold_set_is_sublevel() {
        let p = ball(2, 1.0, 1.3, 0.6);
        let sol = principal_eigenvalue(&p, 1e-10).unwrap();
        let spec = VolumeSpec::from_fraction(dim(2), 0.4).unwrap();
        let th = level_threshold(&sol, &spec).unwrap();
        // sampled points inside have |y'| ≤ t (+slack), outside ≥ t (-slack)
        let mut r = 0.001;
        while r < 1.0 {
            let g = crate::eigensolver::gradient_magnitude(&sol, r);
            let inside = th.set.contains(r);
            if inside {
                assert!(g <= th.t + 1e-6, "r={r}: inside with |y'|={g} > t={}", th.t);
            }
            // points far from the boundary of the set
            if !inside
                && th
                    .set
                    .intervals()
                    .iter()
                    .all(|&(lo, hi)| (r - lo).abs() > 1e-3 && (r - hi).abs() > 1e-3)
            {
                assert!(g >= th.t - 1e-6, "r={r}: outside with |y'|={g} < t={}", th.t);
            }
            r += 0.0137;
        }
    }

    #[test]
    fn homogeneous_thresholds_split_at_gradient_shape() {
        // σ ≡ 1, n = 3: y = ψ ∝ sin(πr)/r. The sublevel set is a centered
        // ball until the threshold reaches |ψ'(1)|, then gains an annulus.
        let p = RadialProfile::new(
            dim(3),
            1.0,
            1.0,
            vec![Layer { r_outer: 1.0, material: Material::High }],
        )
        .unwrap();
        let sol = principal_eigenvalue(&p, 1e-10).unwrap();
        let gs = ground_state(dim(3)).unwrap();
        // transition point a* where |ψ'(a*)| = |ψ'(1)| on the rising branch
        let v1 = gs.psi_prime_abs(1.0);
        let (mut a, mut b) = (0.0, rho_n(dim(3)).unwrap());
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if gs.psi_prime_abs(m) < v1 {
                a = m;
            } else {
                b = m;
            }
        }
        let a_star = 0.5 * (a + b);
        let omega = unit_ball_volume(dim(3));
        let transition = omega * a_star.powi(3);

        let small = VolumeSpec::new(dim(3), 0.8 * transition).unwrap();
        let th = level_threshold(&sol, &small).unwrap();
        assert!(th.set.is_centered_ball(1e-6), "{:?}", th.set.intervals());

        let large = VolumeSpec::new(dim(3), 1.3 * transition).unwrap();
        let th = level_threshold(&sol, &large).unwrap();
        assert!(th.set.touches_outer_boundary(1e-6), "{:?}", th.set.intervals());
        assert_eq!(th.set.intervals().len(), 2);
    }

    #[test]
    fn improve_descends_and_conserves_volume() {
        let p = ball(2, 1.0, 1.05, 0.9);
        let spec = VolumeSpec::new(dim(2), p.high_measure()).unwrap();
        let (next, before) = improve(&p, &spec, 1e-10).unwrap();
        assert!((next.high_measure() - spec.measure()).abs() < 1e-9 * unit_ball_volume(dim(2)));
        let after = principal_eigenvalue(&next, 1e-10).unwrap();
        assert!(after.lambda() <= before.lambda() + 1e-9 * before.lambda());
        // ρ = 0.9 > ρ_2, so the set must change and λ strictly drop
        assert!(
            next.high_region().symmetric_difference_measure(&p.high_region())
                > 1e-6 * unit_ball_volume(dim(2))
        );
        assert!(after.lambda() < before.lambda() - 1e-8 * before.lambda());
        assert!(next.high_region().touches_outer_boundary(1e-9));
    }

    #[test]
    fn improve_returns_input_at_equal_contrast() {
        let p = ball(3, 1.2, 1.2, 0.5);
        let spec = VolumeSpec::new(dim(3), p.high_measure()).unwrap();
        let (next, sol) = improve(&p, &spec, 1e-10).unwrap();
        assert_eq!(next, p);
        let mu = crate::eigensolver::principal_frequency(&p).unwrap();
        assert!((sol.lambda() - 1.2 * mu * mu).abs() < 1e-7 * sol.lambda());
    }

    #[test]
    fn improve_rejects_mismatched_volume() {
        let p = ball(2, 1.0, 1.5, 0.5);
        let spec = VolumeSpec::from_fraction(dim(2), 0.9).unwrap();
        assert!(matches!(improve(&p, &spec, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn optimize_reaches_a_fixed_point() {
        let p = ball(3, 1.0, 1.05, 0.9);
        let spec = VolumeSpec::new(dim(3), p.high_measure()).unwrap();
        let omega = unit_ball_volume(dim(3));
        let trace =
            optimize(&p, &spec, 40, CONVERGENCE_TOL_FRACTION * omega, 1e-10).unwrap();
        assert!(trace.converged, "should converge within 40 iterations");
        // λ nonincreasing along the trace
        for w in trace.steps.windows(2) {
            assert!(w[1].lambda <= w[0].lambda + 1e-8 * w[0].lambda);
        }
        // fixed point: one more improve step leaves the set in place
        let (again, _) = improve(&trace.fixed_point, &spec, 1e-10).unwrap();
        assert!(
            again
                .high_region()
                .symmetric_difference_measure(&trace.fixed_point.high_region())
                < CONVERGENCE_TOL_FRACTION * omega * 10.0
        );
        // volume preserved at every step
        for step in &trace.steps {
            assert!((step.profile.high_measure() - spec.measure()).abs() < 1e-9 * omega);
        }
    }

    #[test]
    fn optimize_stays_at_small_centered_ball() {
        // small volume fraction: the centered ball is already the fixed
        // point in the low-contrast regime (its surface gradient stays
        // below the boundary gradient, so the sublevel set never splits)
        let d = dim(2);
        let rho = 0.3;
        let p = ball(2, 1.0, 1.01, rho);
        let spec = VolumeSpec::new(d, p.high_measure()).unwrap();
        let omega = unit_ball_volume(d);
        let trace = optimize(&p, &spec, 10, CONVERGENCE_TOL_FRACTION * omega, 1e-10).unwrap();
        assert!(trace.converged);
        assert!(trace.fixed_point.high_region().is_centered_ball(1e-6));
        assert!(
            trace
                .fixed_point
                .high_region()
                .symmetric_difference_measure(&p.high_region())
                < 1e-4 * omega
        );
    }

    #[test]
    fn burton_brute_force() {
        // among random rearrangements of the same measure, none beats the
        // thresholded set on the fixed-field energy
        let p = ball(3, 1.0, 1.4, 0.75);
        let spec = VolumeSpec::new(dim(3), p.high_measure()).unwrap();
        let sol = principal_eigenvalue(&p, 1e-10).unwrap();
        let th = level_threshold(&sol, &spec).unwrap();
        let best = fixed_field_energy(&sol, &th.set);
        let mut rng = StdRng::seed_from_u64(42);
        for i in 0..100 {
            let candidate = random_set_of_measure(&mut rng, dim(3), spec.measure());
            let energy = fixed_field_energy(&sol, &candidate);
            assert!(
                energy >= best - 1e-9 * best.abs(),
                "candidate {i} beats threshold: {energy} < {best}"
            );
        }
    }

    #[test]
    fn low_contrast_classification() {
        let d = dim(3);
        // tiny volume: centered ball
        let res =
            low_contrast_optimizer(d, &VolumeSpec::from_fraction(d, 0.02).unwrap()).unwrap();
        assert_eq!(res.classification, SetClass::CenteredBall);
        assert!(res.threshold.set.is_centered_ball(1e-9));

        // half the ball: boundary annulus appears
        let res =
            low_contrast_optimizer(d, &VolumeSpec::from_fraction(d, 0.5).unwrap()).unwrap();
        assert_eq!(res.classification, SetClass::BallWithBoundaryAnnulus);
        assert!(res.threshold.set.touches_outer_boundary(1e-9));

        // transition volumes are ordered: |B(0,a*)| < |B(0,ρ_n)|
        assert!(res.boundary_transition_measure < res.critical_ball_measure);
        // measure is exact
        let omega = unit_ball_volume(d);
        assert!(
            (res.threshold.achieved_measure - 0.5 * omega).abs() <= 1e-10 * omega,
            "{}",
            res.threshold.achieved_measure
        );
    }

    #[test]
    fn low_contrast_oracle_n3() {
        // n = 3: ψ ∝ sin(πr)/r; scan |ψ'| on a dense grid as an independent
        // oracle for the sublevel set at fraction 0.5
        let d = dim(3);
        let gs = ground_state(d).unwrap();
        let res =
            low_contrast_optimizer(d, &VolumeSpec::from_fraction(d, 0.5).unwrap()).unwrap();
        let t = res.threshold.t;
        let mut r = 0.0005;
        while r < 1.0 {
            let inside = res.threshold.set.contains(r);
            let val = gs.psi_prime_abs(r);
            if val < t - 1e-6 {
                assert!(
                    inside
                        || res
                            .threshold
                            .set
                            .intervals()
                            .iter()
                            .any(|&(lo, hi)| (r - lo).abs() < 1e-3 || (r - hi).abs() < 1e-3),
                    "r={r} has |ψ'|={val} < t={t} but is outside"
                );
            }
            if val > t + 1e-6 {
                assert!(!inside, "r={r} has |ψ'|={val} > t={t} but is inside");
            }
            r += 0.0071;
        }
    }

    #[test]
    fn low_contrast_matches_two_phase_fixed_point() {
        let d = dim(2);
        let spec = VolumeSpec::from_fraction(d, 0.5).unwrap();
        let omega = unit_ball_volume(d);
        let rho = crate::geometry::ball_radius_for_volume(&spec);
        let p = ball(2, 1.0, 1.01, rho);
        let trace = optimize(&p, &spec, 60, CONVERGENCE_TOL_FRACTION * omega, 1e-10).unwrap();
        let lc = low_contrast_optimizer(d, &spec).unwrap();
        let dist = trace
            .fixed_point
            .high_region()
            .symmetric_difference_measure(&lc.threshold.set);
        assert!(dist <= 0.05 * omega, "symmetric difference {dist} vs {}", 0.05 * omega);
    }

    #[test]
    fn measure_map_has_no_jumps() {
        // level sets of |y'| have measure zero: a plateau of |y'| at value s
        // would keep the measure of the band {s-δ < |y'| ≤ s+δ} bounded away
        // from zero as δ shrinks, producing a jump of the measure map there.
        // For the analytic fields at hand the band measure scales like √δ,
        // so at δ = 1e-9·s_max it must be far below any real plateau.
        let p = ball(2, 1.0, 1.5, 0.6);
        let sol = principal_eigenvalue(&p, 1e-10).unwrap();
        let omega = unit_ball_volume(dim(2));
        let smax = sol.y_prime().iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let samples = 200_000;
        let grad: Vec<f64> = (0..samples)
            .map(|k| crate::eigensolver::gradient_magnitude(&sol, (k as f64 + 0.5) / samples as f64))
            .collect();
        let delta = 1e-9 * smax;
        for i in 0..=400 {
            let s = smax * i as f64 / 400.0;
            let mut band = 0.0;
            for (k, &g) in grad.iter().enumerate() {
                if g > s - delta && g <= s + delta {
                    band += ((k as f64 + 1.0) / samples as f64).powi(2)
                        - (k as f64 / samples as f64).powi(2);
                }
            }
            band *= omega;
            assert!(band < 1e-3 * omega, "plateau of measure {band} at level {s}");
        }
    }
}
