//! Zone-graph indoor scene layouts.
//!
//! Parse and validate layout JSON emitted by a layout model, score it with
//! the staged geometric reward (boundary, zone disentanglement, collision),
//! compute group-relative advantages, repair layouts by annealing, generate
//! room boundaries and produce physical-validity reports.

pub mod denoise;
pub mod forge;
pub mod geom;
pub mod grpo;
pub mod render;
pub mod report;
pub mod reward;
pub mod scene;
