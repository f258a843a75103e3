use serde_json::{json, Map, Value};

use super::*;

/// Canonical JSON for a scene: schema keys first in schema order, then any
/// preserved extras in their original order. Floats use the shortest
/// representation that parses back to the same value.
pub fn serialize(scene: &Scene) -> String {
    let value = scene_value(scene);
    serde_json::to_string_pretty(&value).expect("scene values are always serializable")
}

pub(crate) fn scene_value(scene: &Scene) -> Value {
    let mut root = Map::new();
    root.insert("meta".into(), meta_value(&scene.meta));
    root.insert(
        "architecture".into(),
        architecture_value(&scene.architecture),
    );
    root.insert("zone_topology".into(), topology_value(&scene.zone_topology));
    root.insert(
        "functional_zones".into(),
        Value::Array(scene.functional_zones.iter().map(zone_value).collect()),
    );
    with_extras(root, &scene.extra)
}

fn with_extras(mut map: Map<String, Value>, extra: &Extras) -> Value {
    for (k, v) in extra {
        if !map.contains_key(k) {
            map.insert(k.clone(), v.clone());
        }
    }
    Value::Object(map)
}

fn meta_value(meta: &Meta) -> Value {
    let mut m = Map::new();
    m.insert("scene_type".into(), json!(meta.scene_type));
    if let Some(instr) = &meta.instruction {
        m.insert("instruction".into(), json!(instr));
    }
    with_extras(m, &meta.extra)
}

fn architecture_value(arch: &Architecture) -> Value {
    let mut m = Map::new();
    match &arch.prism_top {
        None => {
            m.insert("boundary_polygon".into(), json!(arch.boundary_polygon));
            m.insert("height".into(), json!(arch.height));
        }
        Some(top) => {
            m.insert("bounds_bottom".into(), json!(arch.boundary_polygon));
            m.insert("bounds_top".into(), json!(top));
            m.insert("height".into(), json!(arch.height));
        }
    }
    m.insert(
        "structure_nodes".into(),
        Value::Array(arch.structure_nodes.iter().map(structure_value).collect()),
    );
    with_extras(m, &arch.extra)
}

fn structure_value(node: &StructureNode) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), json!(node.id));
    m.insert("type".into(), json!(node.kind.as_str()));
    if let Some(seg) = &node.segment {
        m.insert("segment".into(), json!(seg));
    }
    if let Some(n) = &node.normal {
        m.insert("normal".into(), json!(n));
    }
    if let Some(p) = &node.pos {
        m.insert("pos".into(), json!(p));
    }
    with_extras(m, &node.extra)
}

fn topology_value(topo: &ZoneTopology) -> Value {
    let mut m = Map::new();
    let nodes = topo
        .nodes
        .iter()
        .map(|n| {
            let mut o = Map::new();
            o.insert("id".into(), json!(n.id));
            o.insert("type".into(), json!(n.kind.as_str()));
            with_extras(o, &n.extra)
        })
        .collect();
    let edges = topo
        .edges
        .iter()
        .map(|e| {
            let mut o = Map::new();
            o.insert("source".into(), json!(e.source));
            o.insert("target".into(), json!(e.target));
            o.insert("relation".into(), json!(e.relation.as_str()));
            if let Some(off) = e.spatial_offset {
                o.insert("spatial_offset".into(), json!(off.as_str()));
            }
            with_extras(o, &e.extra)
        })
        .collect();
    m.insert("nodes".into(), Value::Array(nodes));
    m.insert("edges".into(), Value::Array(edges));
    with_extras(m, &topo.extra)
}

fn zone_value(zone: &FunctionalZone) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), json!(zone.id));
    m.insert("semantic_label".into(), json!(zone.semantic_label));
    m.insert(
        "assets".into(),
        Value::Array(zone.assets.iter().map(asset_value).collect()),
    );
    let graph = zone
        .spatial_graph
        .iter()
        .map(|e| {
            let mut o = Map::new();
            o.insert("source".into(), json!(e.source));
            o.insert("target".into(), json!(e.target));
            o.insert("relation".into(), json!(e.relation.as_str()));
            with_extras(o, &e.extra)
        })
        .collect();
    m.insert("spatial_graph".into(), Value::Array(graph));
    with_extras(m, &zone.extra)
}

fn asset_value(a: &Asset) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), json!(a.id));
    m.insert("category".into(), json!(a.category));
    m.insert("role".into(), json!(a.role.as_str()));
    m.insert("description".into(), json!(a.description));
    m.insert("pos".into(), json!(a.pos));
    m.insert("rot".into(), json!(a.rot));
    m.insert("size".into(), json!(a.size));
    with_extras(m, &a.extra)
}
