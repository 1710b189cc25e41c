//! JSON run configuration.

use std::path::Path;

use anyhow::{bail, Context};
use fpladder::characteristic::{DiskGeometry, GeometryOptions};
use fpladder::ladder::SolveOptions;
use fpladder::series::SeriesOptions;
use fpladder::{BipartiteProblem, Complex, HalfPotential};
use serde::Deserialize;

/// A half-potential as written in the config file. Complex numbers are
/// `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialSpec {
    Delta {
        beta: [f64; 2],
    },
    Piecewise {
        breaks: Vec<f64>,
        values: Vec<[f64; 2]>,
    },
    /// Constant well `-β²` on `[0, width]`.
    Step {
        beta: [f64; 2],
        #[serde(default = "one")]
        width: f64,
    },
}

impl PotentialSpec {
    pub fn to_half(&self) -> HalfPotential {
        let c = |p: &[f64; 2]| Complex::new(p[0], p[1]);
        match self {
            PotentialSpec::Delta { beta } => HalfPotential::delta(c(beta)),
            PotentialSpec::Piecewise { breaks, values } => {
                HalfPotential::piecewise(breaks.clone(), values.iter().map(c).collect())
            }
            PotentialSpec::Step { beta, width } => HalfPotential::step(c(beta), *width),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(try_from = "RawRange")]
pub enum NRange {
    /// `[-N_ℓ, N_ℓ]`.
    #[default]
    Auto,
    Explicit(i64, i64),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRange {
    Word(String),
    Pair([i64; 2]),
}

impl TryFrom<RawRange> for NRange {
    type Error = String;

    fn try_from(raw: RawRange) -> Result<Self, String> {
        match raw {
            RawRange::Word(w) if w == "auto" => Ok(NRange::Auto),
            RawRange::Word(w) => Err(format!("expected \"auto\" or [lo, hi], got \"{w}\"")),
            RawRange::Pair([lo, hi]) if lo <= hi => Ok(NRange::Explicit(lo, hi)),
            RawRange::Pair([lo, hi]) => Err(format!("empty range [{lo}, {hi}]")),
        }
    }
}

impl NRange {
    pub fn resolve(&self, geometry: &DiskGeometry) -> (i64, i64) {
        match *self {
            NRange::Auto => (-geometry.n_max, geometry.n_max),
            NRange::Explicit(lo, hi) => (lo, hi),
        }
    }
}

fn one() -> f64 {
    1.0
}
fn default_tol() -> f64 {
    1e-15
}
fn default_max_iter() -> usize {
    200
}
fn default_class_tol() -> f64 {
    1e-12
}
fn default_boundary_samples() -> usize {
    720
}
fn default_quadrature_nodes() -> usize {
    256
}
fn default_series_order() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential_minus: PotentialSpec,
    pub potential_plus: PotentialSpec,
    pub ell: f64,
    #[serde(default)]
    pub n_range: NRange,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_class_tol")]
    pub imag_tol: f64,
    #[serde(default = "default_class_tol")]
    pub zero_tol: f64,
    #[serde(default = "one")]
    pub r_hi: f64,
    #[serde(default = "default_boundary_samples")]
    pub boundary_samples: usize,
    #[serde(default = "default_quadrature_nodes")]
    pub quadrature_nodes: usize,
    #[serde(default = "default_series_order")]
    pub series_order: usize,
    /// Solve indices outside `[-N_ℓ, N_ℓ]` too, marked uncertified.
    #[serde(default)]
    pub best_effort: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            anyhow::anyhow!("config field `{path}`: {}", e.into_inner())
        })?;
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_json(&text)
    }

    fn check(&self) -> anyhow::Result<()> {
        let positive = [
            ("tol", self.tol),
            ("imag_tol", self.imag_tol),
            ("zero_tol", self.zero_tol),
            ("r_hi", self.r_hi),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                bail!("config field `{name}` must be positive and finite (got {v})");
            }
        }
        if self.max_iter == 0 {
            bail!("config field `max_iter` must be at least 1");
        }
        if self.boundary_samples == 0 {
            bail!("config field `boundary_samples` must be at least 1");
        }
        if self.quadrature_nodes < 16 {
            bail!("config field `quadrature_nodes` must be at least 16");
        }
        if self.series_order == 0 {
            bail!("config field `series_order` must be at least 1");
        }
        Ok(())
    }

    /// Builds the problem; fails with the library's message on invalid input.
    pub fn problem(&self) -> anyhow::Result<BipartiteProblem> {
        BipartiteProblem::new(
            self.potential_minus.to_half(),
            self.potential_plus.to_half(),
            self.ell,
        )
        .context("invalid configuration")
    }

    pub fn geometry_options(&self) -> GeometryOptions {
        GeometryOptions {
            r_hi: self.r_hi,
            boundary_samples: self.boundary_samples,
            quadrature_nodes: self.quadrature_nodes,
            ..Default::default()
        }
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            imag_tol: self.imag_tol,
            zero_tol: self.zero_tol,
            best_effort: self.best_effort,
            ..Default::default()
        }
    }

    pub fn series_options(&self) -> SeriesOptions {
        SeriesOptions {
            quadrature_nodes: self.quadrature_nodes,
            boundary_samples: self.boundary_samples,
            ..Default::default()
        }
    }
}
