//! Group-relative advantages and the clipped, KL-regularized surrogate.
//!
//! Pure numerics over per-sample scalars; no policy or token-level
//! quantities live here.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Group size used in training.
pub const DEFAULT_GROUP_SIZE: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrpoError {
    #[error("group needs at least 2 samples, got {0}")]
    GroupTooSmall(usize),
    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("group has no importance ratios")]
    MissingRatios,
    #[error("group has no KL estimates")]
    MissingKl,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid config: {0}")]
    BadConfig(&'static str),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrpoConfig {
    pub clip_eps: f64,
    /// KL penalty coefficient.
    pub beta: f64,
    /// Groups whose reward std falls below this get all-zero advantages.
    pub std_floor: f64,
}

impl Default for GrpoConfig {
    fn default() -> Self {
        GrpoConfig {
            clip_eps: 0.2,
            beta: 0.04,
            std_floor: 1e-8,
        }
    }
}

impl GrpoConfig {
    pub fn check(&self) -> Result<(), GrpoError> {
        if !(self.clip_eps > 0.0 && self.clip_eps < 1.0) {
            return Err(GrpoError::BadConfig("clip_eps must lie in (0, 1)"));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(GrpoError::BadConfig("beta must be finite and >= 0"));
        }
        if !(self.std_floor > 0.0 && self.std_floor.is_finite()) {
            return Err(GrpoError::BadConfig("std_floor must be finite and > 0"));
        }
        Ok(())
    }
}

/// One sampling group: rewards plus optional ratios and KL estimates.
/// The `kl` key matches the JSON-lines group format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGroup {
    pub rewards: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratios: Option<Vec<f64>>,
    #[serde(default, rename = "kl", skip_serializing_if = "Option::is_none")]
    pub kl_estimates: Option<Vec<f64>>,
}

impl SampleGroup {
    pub fn new(rewards: Vec<f64>) -> Self {
        SampleGroup {
            rewards,
            ratios: None,
            kl_estimates: None,
        }
    }

    pub fn advantages(&self, cfg: &GrpoConfig) -> Result<Vec<f64>, GrpoError> {
        group_advantages(&self.rewards, cfg)
    }
}

/// Standardizes rewards within the group: `(R_i − mean) / std`, population std.
///
/// Values are first rescaled by a power of two so the arithmetic cannot
/// overflow; that rescaling is exact, so shifting rewards by a constant that
/// is itself exactly representable alongside them leaves the output unchanged
/// bit for bit. A group whose std is below `std_floor` gets all zeros.
pub fn group_advantages(rewards: &[f64], cfg: &GrpoConfig) -> Result<Vec<f64>, GrpoError> {
    let g = rewards.len();
    if g < 2 {
        return Err(GrpoError::GroupTooSmall(g));
    }
    if rewards.iter().any(|r| !r.is_finite()) {
        return Err(GrpoError::NonFinite("rewards"));
    }
    let max_abs = rewards.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    if max_abs == 0.0 {
        return Ok(vec![0.0; g]);
    }
    // exponent e with max_abs / 2^e in [0.5, 1)
    let e = max_abs.log2().floor() as i32 + 1;
    // two factors, since 2^-e alone overflows for subnormal groups
    let (s1, s2) = (2f64.powi(-e / 2), 2f64.powi(-e - (-e / 2)));
    let scaled: Vec<f64> = rewards.iter().map(|r| r * s1 * s2).collect();

    let n = g as f64;
    let mean = scaled.iter().sum::<f64>() / n;
    let dev: Vec<f64> = scaled.iter().map(|r| r - mean).collect();
    let var = dev.iter().map(|d| d * d).sum::<f64>() / n;
    let std = var.sqrt();
    if std * 2f64.powi(e) < cfg.std_floor || std == 0.0 {
        return Ok(vec![0.0; g]);
    }
    Ok(dev.iter().map(|d| d / std).collect())
}

/// `(1/G) Σ min(r_i Â_i, clip(r_i, 1−ε, 1+ε) Â_i)`.
pub fn clipped_surrogate(
    ratios: &[f64],
    advantages: &[f64],
    cfg: &GrpoConfig,
) -> Result<f64, GrpoError> {
    if ratios.len() != advantages.len() {
        return Err(GrpoError::LengthMismatch {
            what: "ratios",
            expected: advantages.len(),
            got: ratios.len(),
        });
    }
    if ratios.is_empty() {
        return Err(GrpoError::GroupTooSmall(0));
    }
    if ratios.iter().any(|r| !r.is_finite()) {
        return Err(GrpoError::NonFinite("ratios"));
    }
    let (lo, hi) = (1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps);
    let sum: f64 = ratios
        .iter()
        .zip(advantages)
        .map(|(&r, &a)| surrogate_term(r, a, lo, hi))
        .sum();
    Ok(sum / ratios.len() as f64)
}

fn surrogate_term(ratio: f64, adv: f64, lo: f64, hi: f64) -> f64 {
    (ratio * adv).min(ratio.clamp(lo, hi) * adv)
}

/// Clipped surrogate minus `β · mean(KL)`.
pub fn grpo_objective(group: &SampleGroup, cfg: &GrpoConfig) -> Result<f64, GrpoError> {
    let ratios = group.ratios.as_deref().ok_or(GrpoError::MissingRatios)?;
    let kl = group.kl_estimates.as_deref().ok_or(GrpoError::MissingKl)?;
    let g = group.rewards.len();
    if kl.len() != g {
        return Err(GrpoError::LengthMismatch {
            what: "kl",
            expected: g,
            got: kl.len(),
        });
    }
    if kl.iter().any(|k| !k.is_finite()) {
        return Err(GrpoError::NonFinite("kl"));
    }
    let adv = group_advantages(&group.rewards, cfg)?;
    let surrogate = clipped_surrogate(ratios, &adv, cfg)?;
    let mean_kl = kl.iter().sum::<f64>() / g as f64;
    Ok(surrogate - cfg.beta * mean_kl)
}

/// Per-group results, as emitted by the CLI for offline checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupEvaluation {
    pub advantages: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surrogate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
}

pub fn evaluate_group(group: &SampleGroup, cfg: &GrpoConfig) -> Result<GroupEvaluation, GrpoError> {
    let advantages = group_advantages(&group.rewards, cfg)?;
    let surrogate = match &group.ratios {
        Some(r) => Some(clipped_surrogate(r, &advantages, cfg)?),
        None => None,
    };
    let objective = match (&group.ratios, &group.kl_estimates) {
        (Some(_), Some(_)) => Some(grpo_objective(group, cfg)?),
        _ => None,
    };
    Ok(GroupEvaluation {
        advantages,
        surrogate,
        objective,
    })
}
