//! Shared fixtures for the criterion benchmarks in `benches/`.

use twophase_core::geometry::Dimension;
use twophase_core::profile::{Layer, Material, RadialProfile};

/// Centered-ball layout with the given high-material radius.
pub fn ball_profile(n: u32, alpha: f64, beta: f64, rho: f64) -> RadialProfile {
    RadialProfile::new(
        Dimension::new(n).expect("n >= 2"),
        alpha,
        beta,
        vec![
            Layer { r_outer: rho, material: Material::High },
            Layer { r_outer: 1.0, material: Material::Low },
        ],
    )
    .expect("valid profile")
}
