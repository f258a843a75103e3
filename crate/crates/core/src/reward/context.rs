use std::collections::HashMap;

use super::{GeometricTerms, RewardConfig};
use crate::geom::clip::clipped_area_over_triangles;
use crate::geom::{
    box_intersection_volume, convex_clip_area, convex_iou, maximal_rectangles, snap, triangulate,
    Footprint, GeomError, Point2, Polygon, RectSet, ZoneHull,
};
use crate::scene::Scene;

/// How the boundary term measures footprint area inside the room.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BoundaryPath {
    /// Maximal-rectangle union for rectilinear rooms, direct clipping otherwise.
    #[default]
    Auto,
    /// Maximal-rectangle union; fails on non-rectilinear rooms.
    Decomposition,
    /// Clip against the ear-clipped floor polygon.
    DirectClip,
}

/// Floor polygon with its triangulation and, for rectilinear rooms, its
/// maximal-rectangle decomposition.
#[derive(Clone, Debug)]
pub struct BoundaryGeometry {
    polygon: Polygon,
    triangles: Vec<[Point2; 3]>,
    rects: Option<RectSet>,
}

impl BoundaryGeometry {
    pub fn new(polygon: Polygon) -> Result<Self, GeomError> {
        let triangles = triangulate(polygon.vertices())?;
        let rects = if polygon.is_rectilinear() {
            Some(maximal_rectangles(&polygon)?)
        } else {
            None
        };
        Ok(BoundaryGeometry {
            polygon,
            triangles,
            rects,
        })
    }

    pub fn from_scene(scene: &Scene) -> Result<Self, GeomError> {
        Self::new(Polygon::from_xy(&scene.boundary_xy())?)
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn rects(&self) -> Option<&RectSet> {
        self.rects.as_ref()
    }

    pub fn inside_area(&self, convex: &[Point2], path: BoundaryPath) -> f64 {
        match (path, &self.rects) {
            (BoundaryPath::DirectClip, _) | (BoundaryPath::Auto, None) => {
                clipped_area_over_triangles(convex, &self.triangles)
            }
            (_, Some(r)) => r.covered_area(convex),
            (BoundaryPath::Decomposition, None) => {
                panic!("decomposition path requested for a non-rectilinear boundary")
            }
        }
    }

    /// Area of a convex polygon lying outside the room, snapped to 0 below tolerance.
    pub fn outside_area(&self, convex: &[Point2], path: BoundaryPath) -> f64 {
        let area = crate::geom::signed_area(convex);
        snap(area - self.inside_area(convex, path))
    }
}

/// Planar pose of one asset: center (x, y) and yaw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
}

#[derive(Clone, Debug)]
struct AssetDims {
    width: f64,
    depth: f64,
    height: f64,
    z_lo: f64,
    z_hi: f64,
}

/// Everything about a scene that stays fixed while poses change: boundary
/// geometry, asset dimensions, zone membership and stacking exemptions.
///
/// Asset indices follow the scene's zone order, then asset order.
#[derive(Clone, Debug)]
pub struct ScoringContext {
    boundary: BoundaryGeometry,
    path: BoundaryPath,
    cfg: RewardConfig,
    dims: Vec<AssetDims>,
    zone_of: Vec<usize>,
    zone_members: Vec<Vec<usize>>,
    exempt: Vec<bool>,
}

/// Cached per-asset, per-pair and per-zone measurements for one set of poses.
#[derive(Clone, Debug)]
pub struct TermState {
    poses: Vec<Pose>,
    footprints: Vec<Footprint>,
    outside: Vec<f64>,
    pair_vol: Vec<f64>,
    hulls: Vec<ZoneHull>,
    hull_outside: Vec<f64>,
    iou: Vec<f64>,
}

impl TermState {
    pub fn poses(&self) -> &[Pose] {
        &self.poses
    }

    pub fn footprints(&self) -> &[Footprint] {
        &self.footprints
    }

    /// Footprint area outside the room, per asset.
    pub fn outside_areas(&self) -> &[f64] {
        &self.outside
    }

    pub fn hulls(&self) -> &[ZoneHull] {
        &self.hulls
    }
}

/// What [`ScoringContext::update`] overwrote, for [`ScoringContext::revert`].
#[derive(Clone, Debug)]
pub struct Undo {
    asset: usize,
    pose: Pose,
    footprint: Footprint,
    outside: f64,
    pair_row: Vec<f64>,
    zone: usize,
    hull: ZoneHull,
    hull_outside: f64,
    iou_row: Vec<f64>,
}

pub(super) fn weigh(lambda: f64, raw: f64) -> f64 {
    // + 0.0 turns -0.0 into 0.0
    -(lambda * raw) + 0.0
}

/// Flattened asset index of every (id) and the stacking exemption matrix.
fn exemptions(scene: &Scene) -> (usize, Vec<bool>) {
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, a) in scene.assets().enumerate() {
        index.entry(a.id.as_str()).or_insert(i);
    }
    let n = scene.asset_count();
    let mut exempt = vec![false; n * n];
    for e in scene.functional_zones.iter().flat_map(|z| &z.spatial_graph) {
        if !e.relation.is_stacking() {
            continue;
        }
        if let (Some(&i), Some(&j)) = (index.get(e.source.as_str()), index.get(e.target.as_str())) {
            exempt[i * n + j] = true;
            exempt[j * n + i] = true;
        }
    }
    (n, exempt)
}

/// Overlap volume for every unordered non-exempt pair `i < j`, row-major.
pub(crate) fn pair_volumes(scene: &Scene) -> Vec<f64> {
    let (n, exempt) = exemptions(scene);
    let assets: Vec<_> = scene.assets().collect();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(if exempt[i * n + j] {
                0.0
            } else {
                box_intersection_volume(assets[i], assets[j])
            });
        }
    }
    out
}

impl ScoringContext {
    pub fn new(scene: &Scene, cfg: RewardConfig) -> Result<Self, GeomError> {
        Self::with_path(scene, cfg, BoundaryPath::Auto)
    }

    pub fn with_path(
        scene: &Scene,
        cfg: RewardConfig,
        path: BoundaryPath,
    ) -> Result<Self, GeomError> {
        let boundary = BoundaryGeometry::from_scene(scene)?;
        if path == BoundaryPath::Decomposition && boundary.rects.is_none() {
            // surface the offending edge
            crate::geom::is_rectilinear(boundary.polygon.vertices())?;
        }
        let dims = scene
            .assets()
            .map(|a| {
                let (z_lo, z_hi) = a.z_range();
                AssetDims {
                    width: a.width(),
                    depth: a.depth(),
                    height: a.height(),
                    z_lo,
                    z_hi,
                }
            })
            .collect();
        let mut zone_of = Vec::new();
        let mut zone_members = Vec::new();
        for (zi, zone) in scene.functional_zones.iter().enumerate() {
            let start = zone_of.len();
            zone_of.extend(std::iter::repeat_n(zi, zone.assets.len()));
            zone_members.push((start..zone_of.len()).collect());
        }
        let (_, exempt) = exemptions(scene);
        Ok(ScoringContext {
            boundary,
            path,
            cfg,
            dims,
            zone_of,
            zone_members,
            exempt,
        })
    }

    pub fn boundary(&self) -> &BoundaryGeometry {
        &self.boundary
    }

    pub fn config(&self) -> &RewardConfig {
        &self.cfg
    }

    pub fn asset_count(&self) -> usize {
        self.dims.len()
    }

    pub fn zone_of(&self, asset: usize) -> usize {
        self.zone_of[asset]
    }

    pub fn poses_of(scene: &Scene) -> Vec<Pose> {
        scene
            .assets()
            .map(|a| Pose {
                x: a.pos[0],
                y: a.pos[1],
                yaw: a.rot[2],
            })
            .collect()
    }

    pub fn evaluate_scene(&self, scene: &Scene) -> TermState {
        self.evaluate(Self::poses_of(scene))
    }

    pub fn evaluate(&self, poses: Vec<Pose>) -> TermState {
        assert_eq!(
            poses.len(),
            self.dims.len(),
            "pose count must match asset count"
        );
        let n = poses.len();
        let footprints: Vec<Footprint> = (0..n).map(|i| self.footprint(i, poses[i])).collect();
        let outside = footprints
            .iter()
            .map(|fp| self.boundary.outside_area(fp.as_slice(), self.path))
            .collect();
        let mut pair_vol = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = self.pair_volume(i, j, &footprints);
                pair_vol[i * n + j] = v;
                pair_vol[j * n + i] = v;
            }
        }
        let hulls: Vec<ZoneHull> = (0..self.zone_members.len())
            .map(|z| self.zone_hull(z, &footprints))
            .collect();
        let hull_outside = hulls.iter().map(|h| self.hull_outside(h)).collect();
        let zc = hulls.len();
        let mut iou = vec![0.0; zc * zc];
        for a in 0..zc {
            for b in (a + 1)..zc {
                let v = convex_iou(&hulls[a], &hulls[b]);
                iou[a * zc + b] = v;
                iou[b * zc + a] = v;
            }
        }
        TermState {
            poses,
            footprints,
            outside,
            pair_vol,
            hulls,
            hull_outside,
            iou,
        }
    }

    fn footprint(&self, i: usize, p: Pose) -> Footprint {
        let d = &self.dims[i];
        Footprint::new(Point2::new(p.x, p.y), p.yaw, d.width, d.depth)
    }

    fn pair_volume(&self, i: usize, j: usize, fps: &[Footprint]) -> f64 {
        let (i, j) = (i.min(j), i.max(j));
        if self.exempt[i * self.dims.len() + j] {
            return 0.0;
        }
        let (a, b) = (&self.dims[i], &self.dims[j]);
        let dz = a.z_hi.min(b.z_hi) - a.z_lo.max(b.z_lo);
        if dz <= 0.0 {
            return 0.0;
        }
        snap(convex_clip_area(fps[i].as_slice(), fps[j].as_slice()) * dz)
    }

    fn zone_hull(&self, z: usize, fps: &[Footprint]) -> ZoneHull {
        let pts: Vec<Point2> = self.zone_members[z]
            .iter()
            .flat_map(|&i| fps[i].corners)
            .collect();
        ZoneHull::of_points(&pts)
    }

    fn hull_outside(&self, h: &ZoneHull) -> f64 {
        match h.polygon() {
            None => 0.0,
            Some(p) => self
                .boundary
                .outside_area(p.vertices(), BoundaryPath::DirectClip),
        }
    }

    /// Moves one asset and refreshes only the measurements it affects.
    pub fn update(&self, st: &mut TermState, asset: usize, pose: Pose) -> Undo {
        let n = self.dims.len();
        let zone = self.zone_of[asset];
        let zc = st.hulls.len();
        let undo = Undo {
            asset,
            pose: st.poses[asset],
            footprint: st.footprints[asset],
            outside: st.outside[asset],
            pair_row: st.pair_vol[asset * n..(asset + 1) * n].to_vec(),
            zone,
            hull: st.hulls[zone].clone(),
            hull_outside: st.hull_outside[zone],
            iou_row: st.iou[zone * zc..(zone + 1) * zc].to_vec(),
        };

        st.poses[asset] = pose;
        st.footprints[asset] = self.footprint(asset, pose);
        st.outside[asset] = self
            .boundary
            .outside_area(st.footprints[asset].as_slice(), self.path);
        for j in 0..n {
            if j != asset {
                let v = self.pair_volume(asset, j, &st.footprints);
                st.pair_vol[asset * n + j] = v;
                st.pair_vol[j * n + asset] = v;
            }
        }
        st.hulls[zone] = self.zone_hull(zone, &st.footprints);
        st.hull_outside[zone] = self.hull_outside(&st.hulls[zone]);
        for w in 0..zc {
            if w != zone {
                let (a, b) = (zone.min(w), zone.max(w));
                let v = convex_iou(&st.hulls[a], &st.hulls[b]);
                st.iou[zone * zc + w] = v;
                st.iou[w * zc + zone] = v;
            }
        }
        undo
    }

    pub fn revert(&self, st: &mut TermState, undo: Undo) {
        let n = self.dims.len();
        let zc = st.hulls.len();
        let k = undo.asset;
        st.poses[k] = undo.pose;
        st.footprints[k] = undo.footprint;
        st.outside[k] = undo.outside;
        for (j, v) in undo.pair_row.into_iter().enumerate() {
            st.pair_vol[k * n + j] = v;
            st.pair_vol[j * n + k] = v;
        }
        let z = undo.zone;
        st.hulls[z] = undo.hull;
        st.hull_outside[z] = undo.hull_outside;
        for (w, v) in undo.iou_row.into_iter().enumerate() {
            st.iou[z * zc + w] = v;
            st.iou[w * zc + z] = v;
        }
    }

    pub fn boundary_raw(&self, st: &TermState) -> f64 {
        st.outside.iter().sum()
    }

    pub fn collision_raw(&self, st: &TermState) -> f64 {
        let n = self.dims.len();
        let mut acc = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                acc += st.pair_vol[i * n + j];
            }
        }
        acc
    }

    pub fn zone_raw(&self, st: &TermState) -> f64 {
        let zc = st.hulls.len();
        let mut iou = 0.0;
        for a in 0..zc {
            for b in (a + 1)..zc {
                iou += st.iou[a * zc + b];
            }
        }
        if self.cfg.ordered_zone_pairs {
            iou *= 2.0;
        }
        iou + st.hull_outside.iter().sum::<f64>()
    }

    /// Out-of-bounds volume: outside footprint area times asset height.
    pub fn oob_volume(&self, st: &TermState) -> f64 {
        st.outside
            .iter()
            .zip(&self.dims)
            .map(|(o, d)| o * d.height)
            .sum()
    }

    pub fn terms(&self, st: &TermState) -> GeometricTerms {
        GeometricTerms {
            r_bound: weigh(self.cfg.lambda1, self.boundary_raw(st)),
            r_zone: weigh(self.cfg.lambda2, self.zone_raw(st)),
            r_col: weigh(self.cfg.lambda3, self.collision_raw(st)),
        }
    }
}
