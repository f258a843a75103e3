//! Seeded scene generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zonekit::forge::{boundary_stub_scene, generate_boundary, Shape, ShapeSpec};
use zonekit::geom::{polygon_clip_area, Point2, Polygon};
use zonekit::reward::{geometric_terms, RewardConfig};
use zonekit::scene::{
    Asset, FunctionalZone, IntraZoneRelation, Scene, TopoEdge, TopoRelation, DEFAULT_ROOM_HEIGHT,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn room(shape: Shape, seed: u64) -> Polygon {
    generate_boundary(&ShapeSpec::new(shape).seed(seed)).unwrap()
}

const BLOCK: f64 = 1.6;
const STEP: f64 = 1.8;

fn square(x0: f64, y0: f64, side: f64) -> Vec<Point2> {
    vec![
        Point2::new(x0, y0),
        Point2::new(x0 + side, y0),
        Point2::new(x0 + side, y0 + side),
        Point2::new(x0, y0 + side),
    ]
}

/// Lower-left corners of disjoint 1.6 m squares lying fully inside `poly`.
pub fn free_blocks(poly: &Polygon) -> Vec<Point2> {
    let (lo, hi) = poly.bbox();
    let mut out = Vec::new();
    let mut y = lo.y + 0.1;
    while y + BLOCK <= hi.y {
        let mut x = lo.x + 0.1;
        while x + BLOCK <= hi.x {
            let sq = square(x, y, BLOCK);
            let inside = polygon_clip_area(&sq, poly.vertices()).unwrap();
            if (inside - BLOCK * BLOCK).abs() < 1e-9 {
                out.push(Point2::new(x, y));
            }
            x += STEP;
        }
        y += STEP;
    }
    out
}

/// A scene with no penalties: every zone lives in its own free block and its
/// assets sit in disjoint quarter cells of that block.
pub fn valid_scene(shape: Shape, seed: u64) -> (Scene, Polygon) {
    let mut r = rng(seed ^ 0x5eed);
    let poly = room(shape, seed);
    let mut scene = boundary_stub_scene(&poly, shape.as_str(), DEFAULT_ROOM_HEIGHT);
    let mut blocks = free_blocks(&poly);
    assert!(
        blocks.len() >= 2,
        "{shape} seed {seed}: only {} blocks",
        blocks.len()
    );
    blocks.shuffle(&mut r);
    let zones = r.random_range(2..=3usize).min(blocks.len());
    let half = BLOCK / 2.0;
    for (z, corner) in blocks.iter().take(zones).enumerate() {
        let zid = format!("zone_{}", z + 1);
        let mut zone = FunctionalZone::new(&zid, "area");
        let mut cells = [0usize, 1, 2, 3];
        cells.shuffle(&mut r);
        let m = r.random_range(1..=4usize);
        for (k, &c) in cells.iter().take(m).enumerate() {
            let cx = corner.x + half * (c % 2) as f64 + half / 2.0;
            let cy = corner.y + half * (c / 2) as f64 + half / 2.0;
            let size = [
                r.random_range(0.3..0.55),
                r.random_range(0.3..1.2),
                r.random_range(0.3..0.55),
            ];
            let yaw = r.random_range(-0.2..0.2);
            let mut a = Asset::floor_box(
                &format!("{zid}_obj_{}", k + 1),
                "furniture",
                [cx, cy],
                size,
                yaw,
            );
            if k == 0 {
                a = a.anchor();
            }
            zone = zone.with_asset(a);
        }
        if r.random_bool(0.3) {
            let base = zone.assets[0].clone();
            let lamp_id = format!("{zid}_lamp");
            let mut lamp = Asset::floor_box(
                &lamp_id,
                "lamp",
                [base.pos[0], base.pos[1]],
                [0.2, 0.4, 0.2],
                0.0,
            );
            lamp.pos[2] = base.size[1] + 0.2;
            zone = zone.with_asset(lamp).with_relation(
                &lamp_id,
                &base.id,
                IntraZoneRelation::SupportedBy,
            );
        }
        scene.push_zone(zone);
    }
    for w in 1..zones {
        scene.zone_topology.edges.push(TopoEdge {
            source: format!("zone_{w}"),
            target: format!("zone_{}", w + 1),
            relation: TopoRelation::AdjacentOpen,
            spatial_offset: None,
            extra: Default::default(),
        });
    }
    (scene, poly)
}

#[derive(Clone, Copy, Debug)]
pub enum Corruption {
    /// Drop one asset near another, overlapping it.
    Collide,
    /// Center one asset on a boundary edge.
    Straddle,
    /// Slide a whole zone halfway toward another.
    ZoneShift,
}

pub fn corrupt(scene: &mut Scene, poly: &Polygon, kind: Corruption, r: &mut ChaCha8Rng) {
    let n = scene.asset_count();
    match kind {
        Corruption::Collide => {
            let i = r.random_range(0..n);
            let mut j = r.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let target: Vec<f64> = scene.assets().nth(j).unwrap().pos.to_vec();
            let (dx, dy) = (r.random_range(-0.25..0.25), r.random_range(-0.25..0.25));
            let a = scene.assets_mut().nth(i).unwrap();
            a.pos[0] = target[0] + dx;
            a.pos[1] = target[1] + dy;
        }
        Corruption::Straddle => {
            let v = poly.vertices();
            let e = r.random_range(0..v.len());
            let (p, q) = (v[e], v[(e + 1) % v.len()]);
            let t = r.random_range(0.3..0.7);
            let i = r.random_range(0..n);
            let a = scene.assets_mut().nth(i).unwrap();
            a.pos[0] = p.x + (q.x - p.x) * t;
            a.pos[1] = p.y + (q.y - p.y) * t;
        }
        Corruption::ZoneShift => {
            let zc = scene.functional_zones.len();
            let src = r.random_range(0..zc);
            let dst = (src + 1) % zc;
            let center = |z: &FunctionalZone| {
                let k = z.assets.len() as f64;
                let sx: f64 = z.assets.iter().map(|a| a.pos[0]).sum();
                let sy: f64 = z.assets.iter().map(|a| a.pos[1]).sum();
                (sx / k, sy / k)
            };
            let (a, b) = (
                center(&scene.functional_zones[src]),
                center(&scene.functional_zones[dst]),
            );
            let (dx, dy) = ((b.0 - a.0) * 0.5, (b.1 - a.1) * 0.5);
            for asset in &mut scene.functional_zones[src].assets {
                asset.pos[0] += dx;
                asset.pos[1] += dy;
            }
        }
    }
}

/// A valid scene with one to three seeded corruptions applied, repeated
/// until at least one geometric term is nonzero.
pub fn corrupted_scene(shape: Shape, seed: u64) -> (Scene, Polygon) {
    let (mut scene, poly) = valid_scene(shape, seed);
    let mut r = rng(seed ^ 0xbad);
    let kinds = [
        Corruption::Collide,
        Corruption::Straddle,
        Corruption::ZoneShift,
    ];
    let cfg = RewardConfig::default();
    let mut rounds: u32 = r.random_range(1..=3);
    while rounds > 0 || geometric_terms(&scene, &cfg).unwrap().all_zero() {
        let k = kinds[r.random_range(0..kinds.len())];
        corrupt(&mut scene, &poly, k, &mut r);
        rounds = rounds.saturating_sub(1);
    }
    (scene, poly)
}
