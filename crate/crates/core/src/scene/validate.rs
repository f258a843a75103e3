use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::*;
use crate::geom::{is_simple, point_in_polygon, Point2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub code: &'static str,
    pub path: String,
    pub message: String,
    pub severity: Severity,
}

/// Result of [`validate`]. `ok` holds exactly when `violations` is empty;
/// advisory findings go to `warnings` and never affect `ok`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn has_code(&self, code: &str) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

/// Tilt beyond this (radians) on rx/ry draws a warning.
const TILT_WARN: f64 = 0.05;

/// Step used to probe which side of a wall its normal points to.
const NORMAL_PROBE: f64 = 1e-3;

/// Checks every structural invariant of the scene. Pure: the scene is not touched.
pub fn validate(scene: &Scene) -> ValidationReport {
    let mut v = Collector::default();
    check_architecture(scene, &mut v);
    check_assets(scene, &mut v);
    check_graphs(scene, &mut v);
    v.finish()
}

#[derive(Default)]
struct Collector {
    errors: Vec<Violation>,
    warnings: Vec<Violation>,
}

impl Collector {
    fn error(&mut self, code: &'static str, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(Violation {
            code,
            path: path.into(),
            message: message.into(),
            severity: Severity::Error,
        });
    }

    fn warn(&mut self, code: &'static str, path: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(Violation {
            code,
            path: path.into(),
            message: message.into(),
            severity: Severity::Warning,
        });
    }

    fn finish(self) -> ValidationReport {
        ValidationReport {
            ok: self.errors.is_empty(),
            violations: self.errors,
            warnings: self.warnings,
        }
    }
}

fn check_architecture(scene: &Scene, v: &mut Collector) {
    let arch = &scene.architecture;
    let poly: Vec<Point2> = arch
        .boundary_polygon
        .iter()
        .map(|p| Point2::new(p[0], p[1]))
        .collect();

    if poly.len() < 3 {
        v.error(
            "BOUNDARY_TOO_FEW_VERTICES",
            "/architecture/boundary_polygon",
            format!("{} vertices, need at least 3", poly.len()),
        );
    } else {
        let area = crate::geom::signed_area(&poly).abs();
        if !is_simple(&poly) {
            v.error(
                "BOUNDARY_NOT_SIMPLE",
                "/architecture/boundary_polygon",
                "boundary polygon self-intersects",
            );
        } else if area <= GEOM_EPS {
            v.error(
                "BOUNDARY_ZERO_AREA",
                "/architecture/boundary_polygon",
                format!("boundary area {area:e}"),
            );
        }
    }

    for (i, p) in arch.boundary_polygon.iter().enumerate() {
        if p[2].abs() > GEOM_EPS {
            v.error(
                "BOUNDARY_OFF_FLOOR",
                format!("/architecture/boundary_polygon/{i}"),
                format!("vertex z = {} is not on the floor plane", p[2]),
            );
        }
    }

    if arch.height.is_nan() || arch.height <= 0.0 {
        v.error(
            "HEIGHT_NONPOSITIVE",
            "/architecture/height",
            format!("room height {} must be positive", arch.height),
        );
    }

    if arch.prism_top.is_some() {
        v.error(
            "CONGRUENCE",
            "/architecture/bounds_top",
            "top and bottom polygons are not congruent 1:1 at a single height",
        );
    }

    let mut seen = HashSet::new();
    for (i, node) in arch.structure_nodes.iter().enumerate() {
        let path = format!("/architecture/structure_nodes/{i}");
        if !seen.insert(node.id.as_str()) {
            v.error(
                "DUP_STRUCTURE_ID",
                format!("{path}/id"),
                format!("duplicate structure id {:?}", node.id),
            );
        }
        let Some(n) = node.normal else { continue };
        if node.kind != StructureKind::Wall {
            continue;
        }
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if (len - 1.0).abs() > GEOM_EPS {
            v.error(
                "WALL_NORMAL_NOT_UNIT",
                format!("{path}/normal"),
                format!("normal length {len}"),
            );
            continue;
        }
        if let (Some(seg), true) = (node.segment, poly.len() >= 3) {
            let mid = Point2::new((seg[0][0] + seg[1][0]) / 2.0, (seg[0][1] + seg[1][1]) / 2.0);
            let probe = mid + Point2::new(n[0], n[1]) * NORMAL_PROBE;
            if !point_in_polygon(probe, &poly) {
                v.error(
                    "WALL_NORMAL_OUTWARD",
                    format!("{path}/normal"),
                    format!("normal of {} does not point into the room", node.id),
                );
            }
        }
    }
}

fn check_assets(scene: &Scene, v: &mut Collector) {
    let stacked: HashSet<&str> = scene
        .functional_zones
        .iter()
        .flat_map(|z| z.spatial_graph.iter())
        .filter(|e| e.relation.is_stacking())
        .map(|e| e.source.as_str())
        .collect();

    let mut first_seen: HashMap<&str, String> = HashMap::new();
    let mut zone_ids = HashSet::new();
    for (zi, zone) in scene.functional_zones.iter().enumerate() {
        if !zone_ids.insert(zone.id.as_str()) {
            v.error(
                "DUP_ZONE_ID",
                format!("/functional_zones/{zi}/id"),
                format!("duplicate zone id {:?}", zone.id),
            );
        }
        for (ai, a) in zone.assets.iter().enumerate() {
            let path = format!("/functional_zones/{zi}/assets/{ai}");
            if let Some(prev) = first_seen.get(a.id.as_str()) {
                v.error(
                    "DUP_ASSET_ID",
                    format!("{path}/id"),
                    format!("asset id {:?} already used at {prev}", a.id),
                );
            } else {
                first_seen.insert(a.id.as_str(), path.clone());
            }

            if a.size.iter().any(|&s| s.is_nan() || s <= 0.0) {
                v.error(
                    "ASSET_SIZE_NONPOSITIVE",
                    format!("{path}/size"),
                    format!("size {:?} must be strictly positive", a.size),
                );
                continue;
            }
            let (bottom, _) = a.z_range();
            if bottom < -GEOM_EPS {
                v.error(
                    "ASSET_BELOW_FLOOR",
                    format!("{path}/pos"),
                    format!("box bottom at z = {bottom} is below the floor"),
                );
            } else if bottom > GEOM_EPS && !stacked.contains(a.id.as_str()) {
                v.warn(
                    "ASSET_NOT_ON_FLOOR",
                    format!("{path}/pos"),
                    format!("box bottom at z = {bottom}; floor items expect pos_z = h/2"),
                );
            }
            if a.rot[0].abs() >= TILT_WARN || a.rot[1].abs() >= TILT_WARN {
                v.warn(
                    "ASSET_TILTED",
                    format!("{path}/rot"),
                    "rx/ry are ignored by footprint geometry",
                );
            }
        }
    }
}

fn check_graphs(scene: &Scene, v: &mut Collector) {
    let structure: HashSet<&str> = scene
        .architecture
        .structure_nodes
        .iter()
        .map(|n| n.id.as_str())
        .collect();
    let zones: HashSet<&str> = scene
        .functional_zones
        .iter()
        .map(|z| z.id.as_str())
        .collect();

    for (zi, zone) in scene.functional_zones.iter().enumerate() {
        let members: HashSet<&str> = zone.assets.iter().map(|a| a.id.as_str()).collect();
        for (ei, e) in zone.spatial_graph.iter().enumerate() {
            for (end, id) in [("source", &e.source), ("target", &e.target)] {
                if !members.contains(id.as_str()) && !structure.contains(id.as_str()) {
                    v.error(
                        "GRAPH_UNKNOWN_ENDPOINT",
                        format!("/functional_zones/{zi}/spatial_graph/{ei}/{end}"),
                        format!(
                            "{id:?} is neither an asset of zone {:?} nor a structure node",
                            zone.id
                        ),
                    );
                }
            }
        }
    }

    for (ei, e) in scene.zone_topology.edges.iter().enumerate() {
        for (end, id) in [("source", &e.source), ("target", &e.target)] {
            if !zones.contains(id.as_str()) && !structure.contains(id.as_str()) {
                v.error(
                    "TOPOLOGY_UNKNOWN_NODE",
                    format!("/zone_topology/edges/{ei}/{end}"),
                    format!("{id:?} is neither a functional zone nor a structure node"),
                );
            }
        }
    }
}
