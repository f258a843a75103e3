//! Reward-driven layout repair by simulated annealing over planar poses.
//!
//! Only `pos_x`, `pos_y` and yaw of individual assets ever change. Zone
//! membership, sizes, heights and every graph edge are left as they were.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{footprint_of, GeomError, Point2};
use crate::reward::{score_scene, Pose, RewardBreakdown, RewardConfig, ScoringContext};
use crate::scene::{IntraZoneRelation, Scene, StructureKind};

#[derive(Debug, Error)]
pub enum DenoiseError {
    #[error("scene has no assets to move")]
    EmptyScene,
    #[error("boundary geometry: {0}")]
    Geometry(#[from] GeomError),
    #[error("invalid denoise config: {0}")]
    BadConfig(&'static str),
    #[error("cannot read denoise config {path}: {message}")]
    ConfigIo { path: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DenoiseConfig {
    pub seed: u64,
    pub max_iters: usize,
    pub init_temp: f64,
    /// Temperature multiplier applied every [`COOLING_PERIOD`] proposals.
    pub cooling: f64,
    pub move_sigma_pos: f64,
    pub move_sigma_rot: f64,
    /// When set, rotation moves jump to one of these yaw values instead of
    /// taking a Gaussian step.
    pub rot_snap: Option<Vec<f64>>,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        DenoiseConfig {
            seed: 0,
            max_iters: 20_000,
            init_temp: 0.05,
            cooling: 0.95,
            move_sigma_pos: 0.25,
            move_sigma_rot: 0.1,
            rot_snap: None,
        }
    }
}

pub const COOLING_PERIOD: usize = 100;

/// Wall drift beyond this (meters) for an `aligned_flush` asset gets flagged.
pub const FLUSH_DRIFT_LIMIT: f64 = 0.1;

impl DenoiseConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, DenoiseError> {
        let path = path.as_ref();
        let io = |message: String| DenoiseError::ConfigIo {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| io(e.to_string()))?;
        let cfg: DenoiseConfig = serde_json::from_str(&text).map_err(|e| io(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), DenoiseError> {
        if self.max_iters == 0 {
            return Err(DenoiseError::BadConfig("max_iters must be positive"));
        }
        if !(self.move_sigma_pos > 0.0 && self.move_sigma_rot > 0.0) {
            return Err(DenoiseError::BadConfig("move sigmas must be positive"));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(DenoiseError::BadConfig("cooling must lie in (0, 1)"));
        }
        if !(self.init_temp > 0.0 && self.init_temp.is_finite()) {
            return Err(DenoiseError::BadConfig("init_temp must be positive"));
        }
        if let Some(s) = &self.rot_snap {
            if s.is_empty() || s.iter().any(|v| !v.is_finite()) {
                return Err(DenoiseError::BadConfig("rot_snap must hold finite angles"));
            }
        }
        Ok(())
    }

    /// Yaw snaps at quarter turns.
    pub fn quarter_turn_snaps() -> Vec<f64> {
        use std::f64::consts::{FRAC_PI_2, PI};
        vec![0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// The move did not lower the geometric total.
    Improve,
    /// A worse move taken under the annealing rule.
    Anneal,
}

/// One accepted proposal. Totals are the geometric sum r_bound + r_zone + r_col.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub iter: usize,
    pub asset_id: String,
    pub old_total: f64,
    pub new_total: f64,
    pub best_total: f64,
    pub kind: StepKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftFlag {
    pub iter: usize,
    pub asset_id: String,
    pub wall_id: String,
    pub drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenoiseTrace {
    pub seed: u64,
    pub iterations: usize,
    pub steps: Vec<TraceStep>,
    pub drift_flags: Vec<DriftFlag>,
    pub final_breakdown: RewardBreakdown,
}

impl DenoiseTrace {
    /// One JSON object per line: steps, then drift flags, then a final summary.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let mut v = serde_json::to_value(s).expect("serializable");
            v["type"] = "step".into();
            out.push_str(&v.to_string());
            out.push('\n');
        }
        for f in &self.drift_flags {
            let mut v = serde_json::to_value(f).expect("serializable");
            v["type"] = "drift".into();
            out.push_str(&v.to_string());
            out.push('\n');
        }
        let summary = serde_json::json!({
            "type": "final",
            "seed": self.seed,
            "iterations": self.iterations,
            "accepted": self.steps.len(),
            "breakdown": self.final_breakdown,
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

fn draw_move<R: Rng>(poses: &[Pose], rng: &mut R, cfg: &DenoiseConfig) -> (usize, Pose) {
    let k = rng.random_range(0..poses.len());
    let mut pose = poses[k];
    let kind: f64 = rng.random();
    let translate = !(0.6..0.85).contains(&kind);
    let rotate = kind >= 0.6;
    if translate {
        let step = Normal::new(0.0, cfg.move_sigma_pos).expect("sigma checked positive");
        pose.x += step.sample(rng);
        pose.y += step.sample(rng);
    }
    if rotate {
        match &cfg.rot_snap {
            Some(snaps) => {
                let mut i = rng.random_range(0..snaps.len());
                if snaps.len() > 1 && snaps[i] == pose.yaw {
                    i = (i + 1) % snaps.len();
                }
                pose.yaw = snaps[i];
            }
            None => {
                let step = Normal::new(0.0, cfg.move_sigma_rot).expect("sigma checked positive");
                pose.yaw += step.sample(rng);
            }
        }
    }
    (k, pose)
}

fn apply_poses(scene: &mut Scene, poses: &[Pose]) {
    for (a, p) in scene.assets_mut().zip(poses) {
        a.pos[0] = p.x;
        a.pos[1] = p.y;
        a.rot[2] = p.yaw;
    }
}

/// Perturbs one uniformly chosen asset's planar position and/or yaw.
pub fn propose_move<R: Rng>(
    scene: &Scene,
    rng: &mut R,
    cfg: &DenoiseConfig,
) -> Result<Scene, DenoiseError> {
    cfg.check()?;
    if scene.asset_count() == 0 {
        return Err(DenoiseError::EmptyScene);
    }
    let mut poses = ScoringContext::poses_of(scene);
    let (k, pose) = draw_move(&poses, rng, cfg);
    poses[k] = pose;
    let mut out = scene.clone();
    apply_poses(&mut out, &poses);
    Ok(out)
}

/// An `aligned_flush` asset watched for drifting away from its wall.
struct FlushWatch {
    asset: usize,
    wall_id: String,
    segment: (Point2, Point2),
    initial: f64,
    flagged: bool,
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 > 0.0 {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    p.dist(a + ab * t)
}

fn corners_to_wall(corners: &[Point2], seg: (Point2, Point2)) -> f64 {
    corners
        .iter()
        .map(|&c| segment_distance(c, seg.0, seg.1))
        .fold(f64::INFINITY, f64::min)
}

fn flush_watches(scene: &Scene) -> Vec<FlushWatch> {
    let ids: Vec<&str> = scene.assets().map(|a| a.id.as_str()).collect();
    let mut out = Vec::new();
    for e in scene.functional_zones.iter().flat_map(|z| &z.spatial_graph) {
        if e.relation != IntraZoneRelation::AlignedFlush {
            continue;
        }
        let Some(asset) = ids.iter().position(|id| *id == e.source) else {
            continue;
        };
        let Some(wall) = scene.structure_node(&e.target) else {
            continue;
        };
        let (StructureKind::Wall, Some(seg)) = (wall.kind, wall.segment) else {
            continue;
        };
        let segment = (Point2::from(seg[0]), Point2::from(seg[1]));
        let a = scene.assets().nth(asset).expect("index from same iterator");
        out.push(FlushWatch {
            asset,
            wall_id: wall.id.clone(),
            segment,
            initial: corners_to_wall(&footprint_of(a).corners, segment),
            flagged: false,
        });
    }
    out
}

/// Anneals asset poses to maximize r_bound + r_zone + r_col.
///
/// Stops after `max_iters` proposals or as soon as all three terms are zero,
/// and returns the best layout seen. A layout that already scores zero is
/// returned unchanged with an empty trace.
pub fn denoise(
    scene: &Scene,
    reward_cfg: &RewardConfig,
    cfg: &DenoiseConfig,
) -> Result<(Scene, DenoiseTrace), DenoiseError> {
    cfg.check()?;
    let ctx = ScoringContext::new(scene, reward_cfg.clone())?;
    let ids: Vec<String> = scene.assets().map(|a| a.id.clone()).collect();
    let mut state = ctx.evaluate_scene(scene);
    let mut current = ctx.terms(&state);

    let mut trace = DenoiseTrace {
        seed: cfg.seed,
        iterations: 0,
        steps: Vec::new(),
        drift_flags: Vec::new(),
        final_breakdown: RewardBreakdown::default(),
    };
    if current.all_zero() {
        trace.final_breakdown = score_scene(scene, reward_cfg);
        return Ok((scene.clone(), trace));
    }
    if ids.is_empty() {
        return Err(DenoiseError::EmptyScene);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut watches = flush_watches(scene);
    let mut best_total = current.total();
    let mut best_poses = state.poses().to_vec();
    let mut temp = cfg.init_temp;

    for iter in 0..cfg.max_iters {
        if iter > 0 && iter % COOLING_PERIOD == 0 {
            temp *= cfg.cooling;
        }
        trace.iterations = iter + 1;
        let (k, pose) = draw_move(state.poses(), &mut rng, cfg);
        let undo = ctx.update(&mut state, k, pose);
        let proposed = ctx.terms(&state);
        let delta = proposed.total() - current.total();
        let kind = if delta >= 0.0 {
            StepKind::Improve
        } else if rng.random::<f64>() < (delta / temp).exp() {
            StepKind::Anneal
        } else {
            ctx.revert(&mut state, undo);
            continue;
        };

        if proposed.total() > best_total {
            best_total = proposed.total();
            best_poses.copy_from_slice(state.poses());
        }
        trace.steps.push(TraceStep {
            iter,
            asset_id: ids[k].clone(),
            old_total: current.total(),
            new_total: proposed.total(),
            best_total,
            kind,
        });
        current = proposed;

        for w in watches.iter_mut().filter(|w| w.asset == k && !w.flagged) {
            let d = corners_to_wall(&state.footprints()[k].corners, w.segment);
            if d - w.initial > FLUSH_DRIFT_LIMIT {
                w.flagged = true;
                trace.drift_flags.push(DriftFlag {
                    iter,
                    asset_id: ids[k].clone(),
                    wall_id: w.wall_id.clone(),
                    drift: d - w.initial,
                });
            }
        }

        if current.all_zero() {
            break;
        }
    }

    let mut out = scene.clone();
    apply_poses(&mut out, &best_poses);
    trace.final_breakdown = score_scene(&out, reward_cfg);
    Ok((out, trace))
}
