//! The zone-graph scene model: typed layout, answer extraction, parsing,
//! validation and canonical serialization.

mod extract;
mod parse;
mod serialize;
mod validate;
pub mod vocab;

pub use extract::{extract_answer, ExtractError};
pub use parse::{parse_scene, ParseError};
pub use serialize::serialize;
pub use validate::{validate, Severity, ValidationReport, Violation};
pub use vocab::{
    AssetRole, IntraZoneRelation, OffsetDescriptor, StructureKind, TopoRelation, ZoneKind,
};

use serde_json::{Map, Value};
use thiserror::Error;

/// Tolerance for coordinate comparisons, in meters.
pub const GEOM_EPS: f64 = 1e-6;

/// Room height used when the layout carries neither `height` nor a prism top.
pub const DEFAULT_ROOM_HEIGHT: f64 = 2.8;

/// Fields the schema does not know about, kept verbatim in input order.
pub type Extras = Map<String, Value>;

#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub meta: Meta,
    pub architecture: Architecture,
    pub zone_topology: ZoneTopology,
    pub functional_zones: Vec<FunctionalZone>,
    pub extra: Extras,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Meta {
    pub scene_type: String,
    pub instruction: Option<String>,
    pub extra: Extras,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Architecture {
    /// Floor polygon, counter-clockwise, every vertex at z = 0 for a valid scene.
    pub boundary_polygon: Vec<[f64; 3]>,
    pub height: f64,
    pub structure_nodes: Vec<StructureNode>,
    /// Only set when the input used the prism form and its top face is not
    /// congruent with the bottom; kept so the mismatch survives round-trips.
    pub prism_top: Option<Vec<[f64; 3]>>,
    pub extra: Extras,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureNode {
    pub id: String,
    pub kind: StructureKind,
    /// Wall endpoints in floor-plane (x, y).
    pub segment: Option<[[f64; 2]; 2]>,
    pub normal: Option<[f64; 3]>,
    pub pos: Option<[f64; 3]>,
    pub extra: Extras,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ZoneTopology {
    pub nodes: Vec<TopoNode>,
    pub edges: Vec<TopoEdge>,
    pub extra: Extras,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TopoNode {
    pub id: String,
    pub kind: ZoneKind,
    pub extra: Extras,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TopoEdge {
    pub source: String,
    pub target: String,
    pub relation: TopoRelation,
    pub spatial_offset: Option<OffsetDescriptor>,
    pub extra: Extras,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalZone {
    pub id: String,
    pub semantic_label: String,
    pub assets: Vec<Asset>,
    pub spatial_graph: Vec<SpatialEdge>,
    pub extra: Extras,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpatialEdge {
    pub source: String,
    pub target: String,
    pub relation: IntraZoneRelation,
    pub extra: Extras,
}

/// One placed object. `pos` is the center of its bounding box.
#[derive(Clone, Debug, PartialEq)]
pub struct Asset {
    pub id: String,
    pub category: String,
    pub role: AssetRole,
    pub description: String,
    pub pos: [f64; 3],
    /// Euler angles `[rx, ry, rz]` in radians; only yaw (`rz`) affects footprints.
    pub rot: [f64; 3],
    /// `[w, h, d]`: extent along local x, vertical extent, extent along local y.
    pub size: [f64; 3],
    pub extra: Extras,
}

impl Asset {
    pub fn width(&self) -> f64 {
        self.size[0]
    }

    pub fn height(&self) -> f64 {
        self.size[1]
    }

    pub fn depth(&self) -> f64 {
        self.size[2]
    }

    pub fn yaw(&self) -> f64 {
        self.rot[2]
    }

    /// Vertical interval `[bottom, top]` of the box.
    pub fn z_range(&self) -> (f64, f64) {
        let half = self.size[1] / 2.0;
        (self.pos[2] - half, self.pos[2] + half)
    }
}

impl Scene {
    pub fn assets(&self) -> impl Iterator<Item = &Asset> {
        self.functional_zones.iter().flat_map(|z| z.assets.iter())
    }

    pub fn assets_mut(&mut self) -> impl Iterator<Item = &mut Asset> {
        self.functional_zones
            .iter_mut()
            .flat_map(|z| z.assets.iter_mut())
    }

    pub fn asset_count(&self) -> usize {
        self.functional_zones.iter().map(|z| z.assets.len()).sum()
    }

    pub fn find_asset(&self, id: &str) -> Option<&Asset> {
        self.assets().find(|a| a.id == id)
    }

    pub fn structure_node(&self, id: &str) -> Option<&StructureNode> {
        self.architecture
            .structure_nodes
            .iter()
            .find(|n| n.id == id)
    }

    /// Floor polygon projected to (x, y).
    pub fn boundary_xy(&self) -> Vec<[f64; 2]> {
        self.architecture
            .boundary_polygon
            .iter()
            .map(|v| [v[0], v[1]])
            .collect()
    }
}

/// Failure to obtain a scene from raw model output.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoadError {
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl LoadError {
    pub fn code(&self) -> &'static str {
        match self {
            LoadError::Extract(_) => "NO_ANSWER",
            LoadError::Parse(e) => e.code(),
        }
    }
}

/// Extracts the answer JSON from model output (tagged or bare) and parses it.
pub fn load_scene(text: &str) -> Result<Scene, LoadError> {
    let json = extract_answer(text)?;
    Ok(parse_scene(&json)?)
}

impl Scene {
    /// An empty room: the given floor polygon, no structure nodes, no zones.
    pub fn empty_room(scene_type: &str, floor: &[[f64; 2]], height: f64) -> Scene {
        let mut boundary: Vec<[f64; 3]> = floor.iter().map(|p| [p[0], p[1], 0.0]).collect();
        if parse::signed_area_xy(&boundary) < 0.0 {
            boundary.reverse();
        }
        Scene {
            meta: Meta {
                scene_type: scene_type.to_string(),
                ..Default::default()
            },
            architecture: Architecture {
                boundary_polygon: boundary,
                height,
                structure_nodes: Vec::new(),
                prism_top: None,
                extra: Extras::new(),
            },
            zone_topology: ZoneTopology::default(),
            functional_zones: Vec::new(),
            extra: Extras::new(),
        }
    }

    /// Appends a zone and registers it as a topology node.
    pub fn push_zone(&mut self, zone: FunctionalZone) -> &mut FunctionalZone {
        let kind = if self.zone_topology.nodes.is_empty() {
            ZoneKind::Primary
        } else {
            ZoneKind::Secondary
        };
        self.zone_topology.nodes.push(TopoNode {
            id: zone.id.clone(),
            kind,
            extra: Extras::new(),
        });
        self.functional_zones.push(zone);
        self.functional_zones.last_mut().unwrap()
    }
}

impl FunctionalZone {
    pub fn new(id: &str, semantic_label: &str) -> Self {
        FunctionalZone {
            id: id.to_string(),
            semantic_label: semantic_label.to_string(),
            assets: Vec::new(),
            spatial_graph: Vec::new(),
            extra: Extras::new(),
        }
    }

    pub fn with_asset(mut self, asset: Asset) -> Self {
        self.assets.push(asset);
        self
    }

    pub fn with_relation(
        mut self,
        source: &str,
        target: &str,
        relation: IntraZoneRelation,
    ) -> Self {
        self.spatial_graph.push(SpatialEdge {
            source: source.to_string(),
            target: target.to_string(),
            relation,
            extra: Extras::new(),
        });
        self
    }
}

impl Asset {
    /// A satellite box standing on the floor: `pos_z = h / 2`.
    pub fn floor_box(id: &str, category: &str, xy: [f64; 2], size: [f64; 3], yaw: f64) -> Self {
        Asset {
            id: id.to_string(),
            category: category.to_string(),
            role: AssetRole::Satellite,
            description: String::new(),
            pos: [xy[0], xy[1], size[1] / 2.0],
            rot: [0.0, 0.0, yaw],
            size,
            extra: Extras::new(),
        }
    }

    pub fn anchor(mut self) -> Self {
        self.role = AssetRole::ZoneAnchor;
        self
    }
}
