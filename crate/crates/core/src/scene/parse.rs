use serde_json::{Map, Value};
use thiserror::Error;

use super::vocab::*;
use super::*;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    JsonSyntax(String),
    #[error("missing field {0}")]
    SchemaMissingField(String),
    #[error("bad type at {path}: expected {expected}")]
    SchemaBadType {
        path: String,
        expected: &'static str,
    },
    #[error("unknown relation {value:?} at {path}")]
    UnknownRelation { path: String, value: String },
    #[error("unknown {kind} {value:?} at {path}")]
    UnknownVariant {
        path: String,
        kind: &'static str,
        value: String,
    },
}

impl ParseError {
    /// Stable short code, used by the CLI and reports.
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::JsonSyntax(_) => "JSON_SYNTAX",
            ParseError::SchemaMissingField(_) => "SCHEMA_MISSING_FIELD",
            ParseError::SchemaBadType { .. } => "SCHEMA_BAD_TYPE",
            ParseError::UnknownRelation { .. } => "UNKNOWN_RELATION",
            ParseError::UnknownVariant { .. } => "UNKNOWN_VARIANT",
        }
    }
}

type Result<T> = std::result::Result<T, ParseError>;

/// Parses layout JSON into a [`Scene`].
///
/// Unknown keys are kept in each object's `extra` map. Unknown values for any
/// closed vocabulary are rejected.
pub fn parse_scene(json: &str) -> Result<Scene> {
    let root: Value =
        serde_json::from_str(json).map_err(|e| ParseError::JsonSyntax(e.to_string()))?;
    let mut obj = Obj::new(&root, String::new())?;

    let meta = parse_meta(obj.take_obj("meta")?)?;
    let architecture = parse_architecture(obj.take_obj("architecture")?)?;
    let zone_topology = parse_topology(obj.take_obj("zone_topology")?)?;
    let functional_zones = obj
        .take_array("functional_zones")?
        .into_iter()
        .map(|(v, path)| parse_zone(Obj::new(v, path)?))
        .collect::<Result<Vec<_>>>()?;

    Ok(Scene {
        meta,
        architecture,
        zone_topology,
        functional_zones,
        extra: obj.into_extras(),
    })
}

fn parse_meta(mut obj: Obj<'_>) -> Result<Meta> {
    Ok(Meta {
        scene_type: obj.take_string("scene_type")?,
        instruction: obj.take_opt_string("instruction")?,
        extra: obj.into_extras(),
    })
}

fn parse_architecture(mut obj: Obj<'_>) -> Result<Architecture> {
    let explicit_height = obj.take_opt_number("height")?;
    let (mut bottom, mut top) = if obj.has("boundary_polygon") {
        (obj.take_points3("boundary_polygon")?, None)
    } else if obj.has("bounds_bottom") {
        let bottom = obj.take_points3("bounds_bottom")?;
        let top = obj.take_opt_points3("bounds_top")?;
        (bottom, top)
    } else {
        return Err(ParseError::SchemaMissingField(
            obj.child_path("boundary_polygon"),
        ));
    };

    // canonical winding is counter-clockwise; prism faces flip together
    if signed_area_xy(&bottom) < 0.0 {
        bottom.reverse();
        if let Some(t) = top.as_mut() {
            t.reverse();
        }
    }

    let mut height = explicit_height;
    let mut prism_top = None;
    if let Some(top) = top {
        if prism_congruent(&bottom, &top) {
            if height.is_none() {
                height = Some(top[0][2]);
            }
        } else {
            if height.is_none() {
                height = top.first().map(|v| v[2]);
            }
            prism_top = Some(top);
        }
    }

    let structure_nodes = match obj.take_opt_array("structure_nodes")? {
        Some(items) => items
            .into_iter()
            .map(|(v, path)| parse_structure_node(Obj::new(v, path)?))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };

    Ok(Architecture {
        boundary_polygon: bottom,
        height: height.unwrap_or(DEFAULT_ROOM_HEIGHT),
        structure_nodes,
        prism_top,
        extra: obj.into_extras(),
    })
}

/// Top face matches the bottom 1:1 in plan, and sits at a single height.
pub(crate) fn prism_congruent(bottom: &[[f64; 3]], top: &[[f64; 3]]) -> bool {
    if bottom.len() != top.len() || top.is_empty() {
        return false;
    }
    let h = top[0][2];
    bottom.iter().zip(top).all(|(b, t)| {
        (b[0] - t[0]).abs() <= GEOM_EPS
            && (b[1] - t[1]).abs() <= GEOM_EPS
            && (t[2] - h).abs() <= GEOM_EPS
    })
}

pub(crate) fn signed_area_xy(pts: &[[f64; 3]]) -> f64 {
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        acc += a[0] * b[1] - b[0] * a[1];
    }
    acc / 2.0
}

fn parse_structure_node(mut obj: Obj<'_>) -> Result<StructureNode> {
    let id = obj.take_string("id")?;
    let kind = obj.take_enum("type", "structure type", StructureKind::from_wire)?;
    let segment = match obj.take_opt("segment") {
        Some((v, path)) => {
            let pts = points::<2>(v, &path)?;
            if pts.len() != 2 {
                return Err(bad_type(path, "two [x, y] endpoints"));
            }
            Some([pts[0], pts[1]])
        }
        None => None,
    };
    Ok(StructureNode {
        id,
        kind,
        segment,
        normal: obj.take_opt_vec3("normal")?,
        pos: obj.take_opt_vec3("pos")?,
        extra: obj.into_extras(),
    })
}

fn parse_topology(mut obj: Obj<'_>) -> Result<ZoneTopology> {
    let nodes = match obj.take_opt_array("nodes")? {
        Some(items) => items
            .into_iter()
            .map(|(v, path)| {
                let mut o = Obj::new(v, path)?;
                Ok(TopoNode {
                    id: o.take_string("id")?,
                    kind: o.take_enum("type", "zone type", ZoneKind::from_wire)?,
                    extra: o.into_extras(),
                })
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let edges = match obj.take_opt_array("edges")? {
        Some(items) => items
            .into_iter()
            .map(|(v, path)| {
                let mut o = Obj::new(v, path)?;
                let source = o.take_string("source")?;
                let target = o.take_string("target")?;
                let relation = o.take_relation("relation", TopoRelation::from_wire)?;
                let spatial_offset = match o.take_opt("spatial_offset") {
                    Some((Value::Null, _)) | None => None,
                    Some((v, path)) => {
                        let s = v.as_str().ok_or_else(|| bad_type(path.clone(), "string"))?;
                        Some(OffsetDescriptor::from_wire(s).ok_or_else(|| {
                            ParseError::UnknownVariant {
                                path,
                                kind: "spatial offset",
                                value: s.to_string(),
                            }
                        })?)
                    }
                };
                Ok(TopoEdge {
                    source,
                    target,
                    relation,
                    spatial_offset,
                    extra: o.into_extras(),
                })
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    Ok(ZoneTopology {
        nodes,
        edges,
        extra: obj.into_extras(),
    })
}

fn parse_zone(mut obj: Obj<'_>) -> Result<FunctionalZone> {
    let id = obj.take_string("id")?;
    let semantic_label = obj.take_opt_string("semantic_label")?.unwrap_or_default();
    let assets = obj
        .take_array("assets")?
        .into_iter()
        .map(|(v, path)| parse_asset(Obj::new(v, path)?))
        .collect::<Result<Vec<_>>>()?;
    let spatial_graph = match obj.take_opt_array("spatial_graph")? {
        Some(items) => items
            .into_iter()
            .map(|(v, path)| {
                let mut o = Obj::new(v, path)?;
                Ok(SpatialEdge {
                    source: o.take_string("source")?,
                    target: o.take_string("target")?,
                    relation: o.take_relation("relation", IntraZoneRelation::from_wire)?,
                    extra: o.into_extras(),
                })
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    Ok(FunctionalZone {
        id,
        semantic_label,
        assets,
        spatial_graph,
        extra: obj.into_extras(),
    })
}

fn parse_asset(mut obj: Obj<'_>) -> Result<Asset> {
    Ok(Asset {
        id: obj.take_string("id")?,
        category: obj.take_string("category")?,
        role: obj.take_enum("role", "asset role", AssetRole::from_wire)?,
        description: obj.take_opt_string("description")?.unwrap_or_default(),
        pos: obj.take_vec3("pos")?,
        rot: obj.take_opt_vec3("rot")?.unwrap_or([0.0; 3]),
        size: obj.take_vec3("size")?,
        extra: obj.into_extras(),
    })
}

fn bad_type(path: String, expected: &'static str) -> ParseError {
    ParseError::SchemaBadType { path, expected }
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| bad_type(path.to_string(), "number"))
}

fn points<const N: usize>(v: &Value, path: &str) -> Result<Vec<[f64; N]>> {
    let expected = if N == 2 {
        "array of [x, y]"
    } else {
        "array of [x, y, z]"
    };
    let arr = v
        .as_array()
        .ok_or_else(|| bad_type(path.to_string(), expected))?;
    arr.iter()
        .enumerate()
        .map(|(i, p)| fixed::<N>(p, &format!("{path}/{i}")))
        .collect()
}

fn fixed<const N: usize>(v: &Value, path: &str) -> Result<[f64; N]> {
    let expected = if N == 2 { "[x, y]" } else { "[x, y, z]" };
    let arr = v
        .as_array()
        .ok_or_else(|| bad_type(path.to_string(), expected))?;
    if arr.len() != N {
        return Err(bad_type(path.to_string(), expected));
    }
    let mut out = [0.0; N];
    for (i, x) in arr.iter().enumerate() {
        out[i] = number(x, &format!("{path}/{i}"))?;
    }
    Ok(out)
}

/// A JSON object being consumed field by field; whatever is left over
/// becomes the extras map.
struct Obj<'a> {
    path: String,
    rest: Map<String, Value>,
    src: &'a Map<String, Value>,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, path: String) -> Result<Self> {
        let src = v
            .as_object()
            .ok_or_else(|| bad_type(display(&path), "object"))?;
        Ok(Obj {
            path,
            rest: src.clone(),
            src,
        })
    }

    fn child_path(&self, key: &str) -> String {
        format!("{}/{}", self.path, key)
    }

    fn has(&self, key: &str) -> bool {
        self.src.contains_key(key)
    }

    fn take_opt(&mut self, key: &str) -> Option<(&'a Value, String)> {
        self.rest.shift_remove(key);
        self.src.get(key).map(|v| (v, self.child_path(key)))
    }

    fn take(&mut self, key: &str) -> Result<(&'a Value, String)> {
        self.take_opt(key)
            .ok_or_else(|| ParseError::SchemaMissingField(self.child_path(key)))
    }

    fn take_obj(&mut self, key: &str) -> Result<Obj<'a>> {
        let (v, path) = self.take(key)?;
        Obj::new(v, path)
    }

    fn take_string(&mut self, key: &str) -> Result<String> {
        let (v, path) = self.take(key)?;
        v.as_str()
            .map(str::to_string)
            .ok_or_else(|| bad_type(path, "string"))
    }

    fn take_opt_string(&mut self, key: &str) -> Result<Option<String>> {
        match self.take_opt(key) {
            None | Some((Value::Null, _)) => Ok(None),
            Some((v, path)) => v
                .as_str()
                .map(|s| Some(s.to_string()))
                .ok_or_else(|| bad_type(path, "string")),
        }
    }

    fn take_opt_number(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take_opt(key) {
            None | Some((Value::Null, _)) => Ok(None),
            Some((v, path)) => number(v, &path).map(Some),
        }
    }

    fn take_array(&mut self, key: &str) -> Result<Vec<(&'a Value, String)>> {
        let (v, path) = self.take(key)?;
        let arr = v
            .as_array()
            .ok_or_else(|| bad_type(path.clone(), "array"))?;
        Ok(arr
            .iter()
            .enumerate()
            .map(|(i, x)| (x, format!("{path}/{i}")))
            .collect())
    }

    fn take_opt_array(&mut self, key: &str) -> Result<Option<Vec<(&'a Value, String)>>> {
        if !self.has(key) {
            self.rest.shift_remove(key);
            return Ok(None);
        }
        if self.src[key].is_null() {
            self.rest.shift_remove(key);
            return Ok(None);
        }
        self.take_array(key).map(Some)
    }

    fn take_vec3(&mut self, key: &str) -> Result<[f64; 3]> {
        let (v, path) = self.take(key)?;
        fixed::<3>(v, &path)
    }

    fn take_opt_vec3(&mut self, key: &str) -> Result<Option<[f64; 3]>> {
        match self.take_opt(key) {
            None | Some((Value::Null, _)) => Ok(None),
            Some((v, path)) => fixed::<3>(v, &path).map(Some),
        }
    }

    fn take_points3(&mut self, key: &str) -> Result<Vec<[f64; 3]>> {
        let (v, path) = self.take(key)?;
        points::<3>(v, &path)
    }

    fn take_opt_points3(&mut self, key: &str) -> Result<Option<Vec<[f64; 3]>>> {
        match self.take_opt(key) {
            None | Some((Value::Null, _)) => Ok(None),
            Some((v, path)) => points::<3>(v, &path).map(Some),
        }
    }

    fn take_enum<T>(
        &mut self,
        key: &str,
        kind: &'static str,
        lookup: fn(&str) -> Option<T>,
    ) -> Result<T> {
        let (v, path) = self.take(key)?;
        let s = v.as_str().ok_or_else(|| bad_type(path.clone(), "string"))?;
        lookup(s).ok_or_else(|| ParseError::UnknownVariant {
            path,
            kind,
            value: s.to_string(),
        })
    }

    fn take_relation<T>(&mut self, key: &str, lookup: fn(&str) -> Option<T>) -> Result<T> {
        let (v, path) = self.take(key)?;
        let s = v.as_str().ok_or_else(|| bad_type(path.clone(), "string"))?;
        lookup(s).ok_or_else(|| ParseError::UnknownRelation {
            path,
            value: s.to_string(),
        })
    }

    fn into_extras(self) -> Extras {
        self.rest
    }
}

fn display(path: &str) -> String {
    if path.is_empty() {
        "/".to_string()
    } else {
        path.to_string()
    }
}
