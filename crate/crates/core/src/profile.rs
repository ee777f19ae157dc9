//! Piecewise-constant radial conductivity profiles and their JSON document
//! form. A profile is a stack of layers, each reaching out to `r_outer` and
//! made of one of the two materials; the last layer always ends at r = 1.

use crate::error::{Error, Result};
use crate::geometry::{Dimension, RadialSet, SLIVER_WIDTH};
use serde::{Deserialize, Serialize};

/// Which of the two conductivities a layer carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Material {
    Low,
    High,
}

impl Material {
    pub fn other(self) -> Material {
        match self {
            Material::Low => Material::High,
            Material::High => Material::Low,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub r_outer: f64,
    pub material: Material,
}

/// Conductivity σ = β on the high region, α elsewhere, with 0 < α ≤ β,
/// restricted to radially layered high regions.
///
/// Invariants enforced on construction: strictly increasing layer radii
/// ending at exactly 1, adjacent layers of distinct material (equal
/// neighbors are merged), no sliver layers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileDocument", into = "ProfileDocument")]
pub struct RadialProfile {
    dim: Dimension,
    alpha: f64,
    beta: f64,
    layers: Vec<Layer>,
}

/// Raw JSON shape: `{"dim": n, "alpha": a, "beta": b, "layers": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDocument {
    dim: u32,
    alpha: f64,
    beta: f64,
    layers: Vec<Layer>,
}

impl TryFrom<ProfileDocument> for RadialProfile {
    type Error = Error;
    fn try_from(doc: ProfileDocument) -> Result<Self> {
        let dim = Dimension::new(doc.dim).map_err(|_| {
            Error::Profile(format!("field 'dim': must be an integer >= 2, got {}", doc.dim))
        })?;
        RadialProfile::new(dim, doc.alpha, doc.beta, doc.layers)
    }
}

impl From<RadialProfile> for ProfileDocument {
    fn from(p: RadialProfile) -> ProfileDocument {
        ProfileDocument { dim: p.dim.get(), alpha: p.alpha, beta: p.beta, layers: p.layers }
    }
}

/// Profiles are capped at this many layers; thresholding output beyond the
/// cap gets its smallest features merged away first.
pub const MAX_LAYERS: usize = 64;

impl RadialProfile {
    pub fn new(dim: Dimension, alpha: f64, beta: f64, layers: Vec<Layer>) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Profile(format!("field 'alpha': must be > 0, got {alpha}")));
        }
        if !(beta.is_finite() && beta >= alpha) {
            return Err(Error::Profile(format!(
                "field 'beta': must satisfy beta >= alpha > 0, got beta = {beta}, alpha = {alpha}"
            )));
        }
        if layers.is_empty() {
            return Err(Error::Profile("field 'layers': must not be empty".into()));
        }
        let mut prev = 0.0;
        for (i, layer) in layers.iter().enumerate() {
            if !layer.r_outer.is_finite() || layer.r_outer <= prev || layer.r_outer > 1.0 {
                return Err(Error::Profile(format!(
                    "field 'layers[{i}].r_outer': radii must be strictly increasing in (0, 1], got {}",
                    layer.r_outer
                )));
            }
            prev = layer.r_outer;
        }
        let last = layers.last().expect("non-empty").r_outer;
        if (last - 1.0).abs() > 1e-12 {
            return Err(Error::Profile(format!(
                "field 'layers': last r_outer must be 1, got {last}"
            )));
        }
        // merge sliver layers and equal-material neighbors
        let mut merged: Vec<Layer> = Vec::with_capacity(layers.len());
        let mut inner = 0.0;
        for mut layer in layers {
            if layer.r_outer - inner <= SLIVER_WIDTH && layer.r_outer < 1.0 {
                continue;
            }
            layer.r_outer = layer.r_outer.min(1.0);
            match merged.last_mut() {
                Some(prev) if prev.material == layer.material => prev.r_outer = layer.r_outer,
                Some(prev) if layer.r_outer - prev.r_outer <= SLIVER_WIDTH => {
                    prev.r_outer = layer.r_outer;
                    prev.material = layer.material;
                    // re-merge in case this now equals its left neighbor
                    if merged.len() >= 2 {
                        let m = merged.len();
                        if merged[m - 2].material == merged[m - 1].material {
                            let r = merged[m - 1].r_outer;
                            merged.truncate(m - 1);
                            merged.last_mut().expect("non-empty").r_outer = r;
                        }
                    }
                }
                _ => merged.push(layer),
            }
            inner = merged.last().expect("just pushed").r_outer;
        }
        if let Some(last) = merged.last_mut() {
            last.r_outer = 1.0;
        }
        if merged.len() > MAX_LAYERS {
            return Err(Error::Profile(format!(
                "field 'layers': {} layers exceeds the cap of {MAX_LAYERS}",
                merged.len()
            )));
        }
        Ok(RadialProfile { dim, alpha, beta, layers: merged })
    }

    /// Two-value profile whose high region is the given radial set.
    pub fn from_high_region(
        dim: Dimension,
        alpha: f64,
        beta: f64,
        high: &RadialSet,
    ) -> Result<Self> {
        let mut intervals = high.intervals().to_vec();
        // enforce the layer cap by dropping the smallest features first
        // (in practice thresholding produces at most a handful of intervals)
        while intervals.len() * 2 + 1 > MAX_LAYERS {
            let (idx, _) = intervals
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 .1 - a.1 .0).total_cmp(&(b.1 .1 - b.1 .0)))
                .expect("non-empty");
            intervals.remove(idx);
        }
        let mut layers = Vec::new();
        let mut cursor = 0.0;
        for &(lo, hi) in &intervals {
            if lo > cursor + SLIVER_WIDTH {
                layers.push(Layer { r_outer: lo, material: Material::Low });
            }
            layers.push(Layer { r_outer: hi, material: Material::High });
            cursor = hi;
        }
        if cursor < 1.0 - SLIVER_WIDTH {
            layers.push(Layer { r_outer: 1.0, material: Material::Low });
        } else if let Some(last) = layers.last_mut() {
            last.r_outer = 1.0;
        }
        if layers.is_empty() {
            layers.push(Layer { r_outer: 1.0, material: Material::Low });
        }
        RadialProfile::new(dim, alpha, beta, layers)
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn material_value(&self, m: Material) -> f64 {
        match m {
            Material::Low => self.alpha,
            Material::High => self.beta,
        }
    }

    /// Conductivity at radius r; layer i covers (r_{i-1}, r_i].
    pub fn sigma(&self, r: f64) -> f64 {
        self.material_value(self.material_at(r))
    }

    pub fn material_at(&self, r: f64) -> Material {
        for layer in &self.layers {
            if r <= layer.r_outer {
                return layer.material;
            }
        }
        self.layers.last().expect("non-empty").material
    }

    /// Interior material interfaces (excludes r = 1).
    pub fn interfaces(&self) -> Vec<f64> {
        self.layers[..self.layers.len() - 1].iter().map(|l| l.r_outer).collect()
    }

    /// The region occupied by the high-conductivity material.
    pub fn high_region(&self) -> RadialSet {
        let mut intervals = Vec::new();
        let mut inner = 0.0;
        for layer in &self.layers {
            if layer.material == Material::High {
                intervals.push((inner, layer.r_outer));
            }
            inner = layer.r_outer;
        }
        RadialSet::new(self.dim, intervals).expect("layer radii are valid interval bounds")
    }

    pub fn high_measure(&self) -> f64 {
        self.high_region().measure()
    }

    /// Same layout with both conductivities scaled by c > 0.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        RadialProfile::new(self.dim, c * self.alpha, c * self.beta, self.layers.clone())
    }

    /// Same layout with different material values.
    pub fn with_materials(&self, alpha: f64, beta: f64) -> Result<Self> {
        RadialProfile::new(self.dim, alpha, beta, self.layers.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Profile(e.to_string()))
    }
}
