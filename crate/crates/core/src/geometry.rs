//! Measures and set algebra for radially symmetric subsets of the unit
//! n-ball. Sets are stored in radius space as disjoint sorted intervals;
//! every conversion to n-dimensional Lebesgue measure happens here.

use crate::error::{Error, Result};
use crate::gamma::gamma_half;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Intervals narrower than this are dropped during normalization; iterated
/// thresholding would otherwise accumulate degenerate slivers.
pub const SLIVER_WIDTH: f64 = 1e-12;

/// Space dimension n >= 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension: n must be >= 2, got {n}")));
        }
        Ok(Dimension(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Dimension::new(n)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.0
    }
}

/// Volume of the unit ball, ω_n = π^{n/2} / Γ(n/2 + 1).
pub fn unit_ball_volume(dim: Dimension) -> f64 {
    let n = dim.get();
    PI.powf(n as f64 / 2.0) / gamma_half(n + 2).expect("n + 2 > 0")
}

/// A finite union of disjoint radial intervals inside the unit ball.
///
/// Normalized on construction: intervals sorted, clipped slivers removed,
/// overlapping or touching intervals merged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialSet {
    dim: Dimension,
    intervals: Vec<(f64, f64)>,
}

impl RadialSet {
    pub fn new(dim: Dimension, mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &intervals {
            if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi > 1.0 + 1e-12 || lo > hi {
                return Err(Error::Domain(format!(
                    "radial set: interval ({lo}, {hi}) is not inside [0, 1]"
                )));
            }
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (lo, hi) in intervals {
            let hi = hi.min(1.0);
            match merged.last_mut() {
                Some(last) if lo <= last.1 + SLIVER_WIDTH => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        merged.retain(|&(lo, hi)| hi - lo > SLIVER_WIDTH);
        Ok(RadialSet { dim, intervals: merged })
    }

    pub fn empty(dim: Dimension) -> Self {
        RadialSet { dim, intervals: Vec::new() }
    }

    pub fn whole_ball(dim: Dimension) -> Self {
        RadialSet { dim, intervals: vec![(0.0, 1.0)] }
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// n-dimensional Lebesgue measure, ω_n · Σ (r_hi^n − r_lo^n).
    pub fn measure(&self) -> f64 {
        let n = self.dim.get() as i32;
        let omega = unit_ball_volume(self.dim);
        omega
            * self
                .intervals
                .iter()
                .map(|&(lo, hi)| hi.powi(n) - lo.powi(n))
                .sum::<f64>()
    }

    pub fn complement(&self) -> RadialSet {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = 0.0;
        for &(lo, hi) in &self.intervals {
            if lo > cursor {
                out.push((cursor, lo));
            }
            cursor = hi;
        }
        if cursor < 1.0 {
            out.push((cursor, 1.0));
        }
        RadialSet::new(self.dim, out).expect("complement intervals are valid")
    }

    /// Measure of the symmetric difference with `other`.
    pub fn symmetric_difference_measure(&self, other: &RadialSet) -> f64 {
        let n = self.dim.get() as i32;
        let omega = unit_ball_volume(self.dim);
        let mut cuts: Vec<f64> = vec![0.0, 1.0];
        for &(lo, hi) in self.intervals.iter().chain(other.intervals.iter()) {
            cuts.push(lo);
            cuts.push(hi);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut acc = 0.0;
        for pair in cuts.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            if hi <= lo {
                continue;
            }
            let mid = 0.5 * (lo + hi);
            if self.contains(mid) != other.contains(mid) {
                acc += hi.powi(n) - lo.powi(n);
            }
        }
        omega * acc
    }

    pub fn contains(&self, r: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= r && r <= hi)
    }

    /// A single interval anchored at the origin and not touching r = 1.
    pub fn is_centered_ball(&self, tol: f64) -> bool {
        self.intervals.len() == 1 && self.intervals[0].0 <= tol && self.intervals[0].1 < 1.0 - tol
    }

    /// Whether the set includes an annulus adjacent to the outer boundary.
    pub fn touches_outer_boundary(&self, tol: f64) -> bool {
        self.intervals.last().is_some_and(|&(_, hi)| hi >= 1.0 - tol)
    }
}

/// A target n-dimensional measure 0 < A < ω_n for the high-conductivity set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeSpec {
    dim: Dimension,
    measure: f64,
}

impl VolumeSpec {
    pub fn new(dim: Dimension, measure: f64) -> Result<Self> {
        let omega = unit_ball_volume(dim);
        if !measure.is_finite() || measure <= 0.0 || measure >= omega {
            return Err(Error::Domain(format!(
                "volume spec: measure must lie in (0, {omega:.6}), got {measure}"
            )));
        }
        Ok(VolumeSpec { dim, measure })
    }

    /// Build from a volume fraction of the unit ball.
    pub fn from_fraction(dim: Dimension, fraction: f64) -> Result<Self> {
        if !fraction.is_finite() || fraction <= 0.0 || fraction >= 1.0 {
            return Err(Error::Domain(format!(
                "volume spec: fraction must lie in (0, 1), got {fraction}"
            )));
        }
        Ok(VolumeSpec { dim, measure: fraction * unit_ball_volume(dim) })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn fraction(&self) -> f64 {
        self.measure / unit_ball_volume(self.dim)
    }
}

/// Radius ρ with |B(0, ρ)| equal to the requested measure: ρ = (A/ω_n)^{1/n}.
pub fn ball_radius_for_volume(spec: &VolumeSpec) -> f64 {
    (spec.measure() / unit_ball_volume(spec.dim())).powf(1.0 / spec.dim().as_f64())
}
