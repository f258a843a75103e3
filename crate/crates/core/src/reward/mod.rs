//! Staged layout reward: format, boundary containment, zone disentanglement
//! and collision terms, and their sum.

mod context;

pub use context::{BoundaryGeometry, BoundaryPath, Pose, ScoringContext, TermState, Undo};

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::GeomError;
use crate::scene::{load_scene, validate, Scene, ValidationReport};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0} must be a finite, non-negative weight")]
    BadWeight(&'static str),
}

/// Term weights. Defaults: boundary 1.0, zone 0.5, collision 2.0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RewardConfig {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    /// Granted when the output parses and validates without errors.
    pub fmt_reward: f64,
    /// Count every zone pair twice (a, b) and (b, a) in the IoU sum.
    pub ordered_zone_pairs: bool,
}

impl Default for RewardConfig {
    fn default() -> Self {
        RewardConfig {
            lambda1: 1.0,
            lambda2: 0.5,
            lambda3: 2.0,
            fmt_reward: 1.0,
            ordered_zone_pairs: false,
        }
    }
}

impl RewardConfig {
    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        let cfg: RewardConfig = serde_json::from_str(s)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        for (name, w) in [
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("lambda3", self.lambda3),
        ] {
            if !(w.is_finite() && w >= 0.0) {
                return Err(ConfigError::BadWeight(name));
            }
        }
        if !self.fmt_reward.is_finite() {
            return Err(ConfigError::BadWeight("fmt_reward"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub r_fmt: f64,
    pub r_bound: f64,
    pub r_zone: f64,
    pub r_col: f64,
    pub total: f64,
}

impl RewardBreakdown {
    pub fn new(r_fmt: f64, r_bound: f64, r_zone: f64, r_col: f64) -> Self {
        RewardBreakdown {
            r_fmt,
            r_bound,
            r_zone,
            r_col,
            total: r_fmt + r_bound + r_zone + r_col,
        }
    }

    /// Sum of the three geometric terms.
    pub fn geometric(&self) -> f64 {
        self.r_bound + self.r_zone + self.r_col
    }
}

/// The three geometric penalty terms of one layout, each ≤ 0.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GeometricTerms {
    pub r_bound: f64,
    pub r_zone: f64,
    pub r_col: f64,
}

impl GeometricTerms {
    pub fn total(&self) -> f64 {
        self.r_bound + self.r_zone + self.r_col
    }

    pub fn all_zero(&self) -> bool {
        self.r_bound == 0.0 && self.r_zone == 0.0 && self.r_col == 0.0
    }
}

/// Boundary term: `−λ1 · Σ` footprint area outside the floor polygon.
/// Rectilinear rooms use the maximal-rectangle union, others direct clipping.
pub fn r_bound(scene: &Scene, cfg: &RewardConfig) -> Result<f64, GeomError> {
    r_bound_via(scene, cfg, BoundaryPath::Auto)
}

pub fn r_bound_via(
    scene: &Scene,
    cfg: &RewardConfig,
    path: BoundaryPath,
) -> Result<f64, GeomError> {
    let ctx = ScoringContext::with_path(scene, cfg.clone(), path)?;
    Ok(ctx.terms(&ctx.evaluate_scene(scene)).r_bound)
}

/// Zone term: `−λ2 · (Σ pairwise hull IoU + Σ hull area outside the floor)`.
pub fn r_zone(scene: &Scene, cfg: &RewardConfig) -> Result<f64, GeomError> {
    let ctx = ScoringContext::new(scene, cfg.clone())?;
    Ok(ctx.terms(&ctx.evaluate_scene(scene)).r_zone)
}

/// Collision term: `−λ3 · Σ` pairwise box overlap volume over unordered
/// pairs, skipping pairs joined by a stacking relation.
pub fn r_col(scene: &Scene, cfg: &RewardConfig) -> f64 {
    let volumes = context::pair_volumes(scene);
    let raw: f64 = volumes.iter().sum();
    context::weigh(cfg.lambda3, raw)
}

/// Format term; `None` means the output did not parse.
pub fn r_fmt(report: Option<&ValidationReport>, cfg: &RewardConfig) -> f64 {
    match report {
        Some(r) if r.ok => cfg.fmt_reward,
        _ => 0.0,
    }
}

/// All geometric terms of a parsed scene.
pub fn geometric_terms(scene: &Scene, cfg: &RewardConfig) -> Result<GeometricTerms, GeomError> {
    let ctx = ScoringContext::new(scene, cfg.clone())?;
    Ok(ctx.terms(&ctx.evaluate_scene(scene)))
}

/// Full breakdown for a parsed scene. Geometric terms fall back to zero when
/// the boundary itself is unusable (the scene then also fails validation).
pub fn score_scene(scene: &Scene, cfg: &RewardConfig) -> RewardBreakdown {
    let report = validate(scene);
    let fmt = r_fmt(Some(&report), cfg);
    match geometric_terms(scene, cfg) {
        Ok(t) => RewardBreakdown::new(fmt, t.r_bound, t.r_zone, t.r_col),
        Err(_) => RewardBreakdown::new(fmt, 0.0, 0.0, 0.0),
    }
}

/// Input accepted by [`composite_reward`].
#[derive(Clone, Copy, Debug)]
pub enum RewardInput<'a> {
    Text(&'a str),
    Scene(&'a Scene),
}

/// Scores raw model output or a parsed scene. Unparseable text scores 0 on
/// every term.
pub fn composite_reward(input: RewardInput<'_>, cfg: &RewardConfig) -> RewardBreakdown {
    match input {
        RewardInput::Scene(s) => score_scene(s, cfg),
        RewardInput::Text(t) => match load_scene(t) {
            Ok(s) => score_scene(&s, cfg),
            Err(_) => RewardBreakdown::default(),
        },
    }
}

#[cfg(test)]
mod tests;
