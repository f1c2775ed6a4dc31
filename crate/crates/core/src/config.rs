//! Flat key-value run configuration.
//!
//! A configuration file is TOML with top-level keys only:
//!
//! ```toml
//! model = "cap"          # cap | ball | warped | interval
//! n = [2, 3, 5]          # scalar or list
//! K = [0.5, 1, 2]
//! R_min = 0.1            # radii R_min + k (R_max - R_min) / R_count, k = 1..R_count
//! R_max_fraction = 1.0   # R_max as a fraction of pi / (2 sqrt K)
//! R_count = 20
//! method = "shooting"
//! grid = 4096
//! ```
//!
//! Solve and verify runs need scalar model parameters; sweeps take the
//! Cartesian product of `n`, `K` and the radii (or `L` for intervals).

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{ModelManifold, SampledWarp, Warp};
use crate::solver::{Method, SolverConfig};
use crate::verify::VerifyConfig;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

fn scalar<T: Copy>(key: &str, value: &Option<OneOrMany<T>>) -> Result<Option<T>> {
    match value {
        None => Ok(None),
        Some(OneOrMany::One(x)) => Ok(Some(*x)),
        Some(OneOrMany::Many(v)) if v.len() == 1 => Ok(Some(v[0])),
        Some(OneOrMany::Many(_)) => Err(Error::Config(format!(
            "`{key}` must be a single value here"
        ))),
    }
}

fn required<T>(key: &str, value: Option<T>) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("missing `{key}`")))
}

/// Every key a configuration file may contain. Command-line flags are
/// collected into the same structure and laid over the file with
/// [`RunConfig::overlay`].
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<String>,
    pub n: Option<OneOrMany<u32>>,
    #[serde(rename = "K")]
    pub k: Option<OneOrMany<f64>>,
    #[serde(rename = "R")]
    pub radius: Option<OneOrMany<f64>>,
    #[serde(rename = "L")]
    pub length: Option<OneOrMany<f64>>,
    #[serde(rename = "R_min")]
    pub r_min: Option<f64>,
    #[serde(rename = "R_max")]
    pub r_max: Option<f64>,
    #[serde(rename = "R_max_fraction")]
    pub r_max_fraction: Option<f64>,
    #[serde(rename = "R_count")]
    pub r_count: Option<usize>,
    /// `sinh`, `identity`, `polynomial` or `sampled`, for `model = "warped"`.
    pub warp: Option<String>,
    pub warp_scale: Option<f64>,
    pub warp_coefficients: Option<Vec<f64>>,
    pub warp_samples: Option<Vec<f64>>,

    pub method: Option<String>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,

    pub buckets: Option<usize>,
    pub b_sequence: Option<Vec<f64>>,
    pub force_hypotheses: Option<bool>,
    pub z_tol: Option<f64>,
    pub z_one_tol: Option<f64>,
    pub gradient_tol: Option<f64>,
    pub chain_tol: Option<f64>,
    pub main_tol: Option<f64>,

    pub output: Option<String>,
    pub format: Option<String>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($field:ident),* $(,)?) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Values set in `top` replace those in `self`.
    pub fn overlay(mut self, top: RunConfig) -> Self {
        overlay_fields!(self, top;
            model, n, k, radius, length, r_min, r_max, r_max_fraction, r_count,
            warp, warp_scale, warp_coefficients, warp_samples,
            method, grid, tol,
            buckets, b_sequence, force_hypotheses,
            z_tol, z_one_tol, gradient_tol, chain_tol, main_tol,
            output, format,
        );
        self
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let mut cfg = SolverConfig::default();
        if let Some(m) = &self.method {
            cfg.method = m.parse()?;
        }
        if let Some(g) = self.grid {
            cfg.grid_points = g;
        }
        if let Some(t) = self.tol {
            cfg.tolerance = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn method(&self) -> Result<Method> {
        self.method.as_deref().map_or(Ok(Method::default()), str::parse)
    }

    pub fn verify_config(&self) -> Result<VerifyConfig> {
        let mut cfg = VerifyConfig::default();
        if let Some(b) = &self.b_sequence {
            cfg.b_sequence = b.clone();
        }
        if let Some(k) = self.buckets {
            cfg.buckets = k;
        }
        if let Some(f) = self.force_hypotheses {
            cfg.force_hypotheses = f;
        }
        for (slot, value) in [
            (&mut cfg.z_tol, self.z_tol),
            (&mut cfg.z_one_tol, self.z_one_tol),
            (&mut cfg.gradient_tol, self.gradient_tol),
            (&mut cfg.chain_tol, self.chain_tol),
            (&mut cfg.main_tol, self.main_tol),
        ] {
            if let Some(v) = value {
                *slot = v;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn kind(&self) -> Result<ModelKind> {
        required("model", self.model.as_deref())?.parse()
    }

    fn warp_spec(&self) -> Result<WarpSpec> {
        let name = required("warp", self.warp.as_deref())?;
        match name {
            "identity" | "flat" => Ok(WarpSpec::Identity),
            "sinh" | "hyperbolic" => Ok(WarpSpec::Sinh(required("warp_scale", self.warp_scale)?)),
            "polynomial" => Ok(WarpSpec::Polynomial(required(
                "warp_coefficients",
                self.warp_coefficients.clone(),
            )?)),
            "sampled" => Ok(WarpSpec::Sampled(required(
                "warp_samples",
                self.warp_samples.clone(),
            )?)),
            other => Err(Error::Config(format!("unknown warp `{other}`"))),
        }
    }

    /// The single model described by scalar parameters.
    pub fn model_spec(&self) -> Result<ModelSpec> {
        let kind = self.kind()?;
        Ok(ModelSpec {
            kind,
            n: scalar("n", &self.n)?,
            k: scalar("K", &self.k)?,
            radius: scalar("R", &self.radius)?,
            length: scalar("L", &self.length)?,
            warp: if kind == ModelKind::Warped {
                Some(self.warp_spec()?)
            } else {
                None
            },
        })
    }

    /// All models of a sweep in a fixed order: `n` outermost, then `K`,
    /// then the radius or length.
    pub fn sweep_specs(&self) -> Result<Vec<ModelSpec>> {
        let kind = self.kind()?;
        if kind == ModelKind::Interval {
            let lengths = required("L", self.length.as_ref())?.to_vec();
            return Ok(lengths
                .into_iter()
                .map(|l| ModelSpec {
                    kind,
                    n: None,
                    k: None,
                    radius: None,
                    length: Some(l),
                    warp: None,
                })
                .collect());
        }
        let dims = required("n", self.n.as_ref())?.to_vec();
        let curvatures = match kind {
            ModelKind::Cap => required("K", self.k.as_ref())?.to_vec(),
            _ => vec![f64::NAN],
        };
        let warp = if kind == ModelKind::Warped {
            Some(self.warp_spec()?)
        } else {
            None
        };
        let mut specs = Vec::new();
        for &n in &dims {
            for &k in &curvatures {
                let k = (!k.is_nan()).then_some(k);
                for r in self.radii(k)? {
                    specs.push(ModelSpec {
                        kind,
                        n: Some(n),
                        k,
                        radius: Some(r),
                        length: None,
                        warp: warp.clone(),
                    });
                }
            }
        }
        Ok(specs)
    }

    fn radii(&self, k: Option<f64>) -> Result<Vec<f64>> {
        if let Some(r) = &self.radius {
            return Ok(r.to_vec());
        }
        let count = required("R or R_count", self.r_count)?;
        let r_min = self.r_min.unwrap_or(0.0);
        let r_max = match (self.r_max, k) {
            (Some(r), _) => r,
            (None, Some(k)) if k > 0.0 => {
                self.r_max_fraction.unwrap_or(1.0) * FRAC_PI_2 / k.sqrt()
            }
            _ => return Err(Error::Config("missing `R_max` (needed unless K > 0)".into())),
        };
        if !(r_max > r_min) {
            return Err(Error::Config(format!(
                "need R_max > R_min, got R_min = {r_min}, R_max = {r_max}"
            )));
        }
        Ok((1..=count)
            .map(|i| r_min + i as f64 * (r_max - r_min) / count as f64)
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Cap,
    Ball,
    Warped,
    Interval,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Cap => "cap",
            ModelKind::Ball => "ball",
            ModelKind::Warped => "warped",
            ModelKind::Interval => "interval",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cap" | "spherical_cap" => Ok(ModelKind::Cap),
            "ball" | "euclidean_ball" => Ok(ModelKind::Ball),
            "warped" | "warped_ball" => Ok(ModelKind::Warped),
            "interval" => Ok(ModelKind::Interval),
            other => Err(Error::Config(format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WarpSpec {
    Identity,
    Sinh(f64),
    Polynomial(Vec<f64>),
    Sampled(Vec<f64>),
}

/// Unvalidated model parameters, kept so that sweep rows can echo the
/// input even when it does not describe a valid model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n: Option<u32>,
    pub k: Option<f64>,
    pub radius: Option<f64>,
    pub length: Option<f64>,
    pub warp: Option<WarpSpec>,
}

impl ModelSpec {
    pub fn cap(n: u32, k: f64, radius: f64) -> Self {
        Self {
            kind: ModelKind::Cap,
            n: Some(n),
            k: Some(k),
            radius: Some(radius),
            length: None,
            warp: None,
        }
    }

    pub fn build(&self) -> Result<ModelManifold> {
        match self.kind {
            ModelKind::Cap => ModelManifold::spherical_cap(
                required("n", self.n)?,
                required("K", self.k)?,
                required("R", self.radius)?,
            ),
            ModelKind::Ball => {
                ModelManifold::euclidean_ball(required("n", self.n)?, required("R", self.radius)?)
            }
            ModelKind::Interval => ModelManifold::interval(required("L", self.length)?),
            ModelKind::Warped => {
                let radius = required("R", self.radius)?;
                let warp = match required("warp", self.warp.as_ref())? {
                    WarpSpec::Identity => Warp::Identity,
                    WarpSpec::Sinh(a) => Warp::Sinh { scale: *a },
                    WarpSpec::Polynomial(c) => Warp::Polynomial { higher: c.clone() },
                    WarpSpec::Sampled(v) => Warp::Sampled(SampledWarp::new(radius, v.clone())?),
                };
                ModelManifold::warped_ball(required("n", self.n)?, warp, radius)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_sweep_file() {
        let cfg = RunConfig::parse(
            "model = \"cap\"\nn = [2, 3]\nK = 1\nR_min = 0.1\nR_count = 4\nmethod = \"fd\"\n",
        )
        .unwrap();
        let specs = cfg.sweep_specs().unwrap();
        assert_eq!(specs.len(), 8);
        assert_eq!(specs[0].n, Some(2));
        assert_eq!(specs[4].n, Some(3));
        let last = specs[3].radius.unwrap();
        assert!((last - FRAC_PI_2).abs() < 1e-15);
        assert!((specs[0].radius.unwrap() - (0.1 + (FRAC_PI_2 - 0.1) / 4.0)).abs() < 1e-15);
        assert_eq!(cfg.solver_config().unwrap().method, Method::FiniteDifference);
    }

    #[test]
    fn explicit_radius_list_and_empty_sweep() {
        let cfg = RunConfig::parse("model = \"cap\"\nn = 2\nK = 1.0\nR = []\n").unwrap();
        assert!(cfg.sweep_specs().unwrap().is_empty());
        let cfg = RunConfig::parse("model = \"ball\"\nn = 3\nR = [0.5, 1.0]\n").unwrap();
        assert_eq!(cfg.sweep_specs().unwrap().len(), 2);
    }

    #[test]
    fn rejects_unknown_keys_and_lists_for_single_model() {
        assert!(RunConfig::parse("modle = \"cap\"").is_err());
        assert!(RunConfig::parse("n = \"two\"").is_err());
        let cfg = RunConfig::parse("model = \"cap\"\nn = [2, 3]\nK = 1\nR = 1\n").unwrap();
        assert!(cfg.model_spec().is_err());
    }

    #[test]
    fn overlay_prefers_top_values() {
        let file = RunConfig::parse("model = \"cap\"\nn = 2\nK = 1\nR = 1.0\ngrid = 512\n").unwrap();
        let flags = RunConfig {
            radius: Some(OneOrMany::One(1.5)),
            ..RunConfig::default()
        };
        let merged = file.overlay(flags);
        let spec = merged.model_spec().unwrap();
        assert_eq!(spec.radius, Some(1.5));
        assert_eq!(merged.grid, Some(512));
        let model = spec.build().unwrap();
        assert_eq!(model.radius(), 1.5);
    }

    #[test]
    fn warped_models_from_config() {
        let cfg = RunConfig::parse(
            "model = \"warped\"\nn = 3\nR = 0.8\nwarp = \"polynomial\"\nwarp_coefficients = [0.0, -0.1]\n",
        )
        .unwrap();
        let model = cfg.model_spec().unwrap().build().unwrap();
        assert_eq!(model.variant_name(), "warped");
        let cfg = RunConfig::parse("model = \"warped\"\nn = 3\nR = 0.8\n").unwrap();
        assert!(cfg.model_spec().is_err());
    }

    #[test]
    fn invalid_cap_is_an_error() {
        let spec = ModelSpec::cap(2, 1.0, 4.0);
        assert!(spec.build().is_err());
    }
}
