//! Shared oracles for the acceptance suite. Everything here is computed
//! independently of the library's evaluation paths: closed forms for
//! half-integer orders, a plain-f64 power series, and generators for random
//! test inputs.

use rand::rngs::StdRng;
use rand::Rng;
use twophase_core::geometry::{unit_ball_volume, Dimension, RadialSet};
use twophase_core::profile::{Layer, Material, RadialProfile};

use std::f64::consts::PI;

pub fn j_half(x: f64) -> f64 {
    (2.0 / (PI * x)).sqrt() * x.sin()
}

pub fn j_three_halves(x: f64) -> f64 {
    (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos())
}

pub fn j_five_halves(x: f64) -> f64 {
    (2.0 / (PI * x)).sqrt() * ((3.0 / (x * x) - 1.0) * x.sin() - 3.0 * x.cos() / x)
}

/// Plain-f64 Bessel series with a Lanczos-free factorial-based prefix;
/// adequate for small arguments, and fully independent of the library.
pub fn naive_j(nu: f64, x: f64) -> f64 {
    // Γ(ν+k+1) by direct product from Γ(ν+1) would need a gamma value; for
    // the oracle we only use integer ν where Γ(ν+1) = ν!
    assert!(nu.fract() == 0.0, "naive_j oracle is for integer orders");
    let mut prefix = 1.0;
    for k in 1..=(nu as u64) {
        prefix *= k as f64;
    }
    let mut term = (0.5 * x).powf(nu) / prefix;
    let mut sum = term;
    let q = 0.25 * x * x;
    for k in 1..200 {
        term *= -q / (k as f64 * (nu + k as f64));
        sum += term;
        if term.abs() < 1e-19 {
            break;
        }
    }
    sum
}

/// Bisection to 1e-12 on an arbitrary scalar function with a sign change.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    assert!(fa * f(b) < 0.0, "oracle bisection needs a bracket");
    while b - a > 1e-13 {
        let m = 0.5 * (a + b);
        if f(m) * fa > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Random layered profile: up to 4 layers, random materials and radii,
/// contrast between 1% and 100%.
pub fn random_profile(rng: &mut StdRng, n: u32) -> RadialProfile {
    let dim = Dimension::new(n).unwrap();
    loop {
        let layer_count = rng.random_range(1..=4usize);
        let mut radii: Vec<f64> = (0..layer_count - 1)
            .map(|_| rng.random_range(0.05..0.95))
            .collect();
        radii.push(1.0);
        radii.sort_by(f64::total_cmp);
        let mut start = if rng.random_bool(0.5) { Material::High } else { Material::Low };
        let mut layers = Vec::new();
        for &r in &radii {
            layers.push(Layer { r_outer: r, material: start });
            start = start.other();
        }
        let alpha = rng.random_range(0.5..2.0);
        let beta = alpha * (1.0 + rng.random_range(0.01..1.0));
        if let Ok(p) = RadialProfile::new(dim, alpha, beta, layers) {
            // profiles that collapsed to a single low layer have no high
            // region to conserve; keep them anyway unless empty-high tests
            // need otherwise
            return p;
        }
    }
}

/// Random disjoint interval family with exactly the requested measure.
pub fn random_set_of_measure(rng: &mut StdRng, dim: Dimension, a: f64) -> RadialSet {
    loop {
        let k = rng.random_range(1..=3usize);
        let mut pts: Vec<f64> = (0..2 * k).map(|_| rng.random_range(0.0..1.0)).collect();
        pts.sort_by(f64::total_cmp);
        let drawn =
            RadialSet::new(dim, (0..k).map(|i| (pts[2 * i], pts[2 * i + 1])).collect()).unwrap();
        let complement = drawn.complement();
        for candidate in [drawn, complement] {
            if candidate.measure() < a || candidate.intervals().is_empty() {
                continue;
            }
            let base = candidate.intervals().to_vec();
            let at = |t: f64| -> RadialSet {
                RadialSet::new(
                    dim,
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
            if (set.measure() - a).abs() < 1e-9 * unit_ball_volume(dim) {
                return set;
            }
        }
    }
}
