use super::clip::convex_clip_area;
use super::{snap, Point2};
use crate::scene::Asset;

/// Floor projection of an asset's box: a `w × d` rectangle about the box
/// center, rotated by yaw. Corners are counter-clockwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Footprint {
    pub corners: [Point2; 4],
}

impl Footprint {
    pub fn new(center: Point2, yaw: f64, width: f64, depth: f64) -> Self {
        let (hw, hd) = (width / 2.0, depth / 2.0);
        let local = [
            Point2::new(-hw, -hd),
            Point2::new(hw, -hd),
            Point2::new(hw, hd),
            Point2::new(-hw, hd),
        ];
        Footprint {
            corners: local.map(|p| p.rotate(yaw) + center),
        }
    }

    pub fn area(&self) -> f64 {
        super::polygon::signed_area(&self.corners)
    }

    pub fn as_slice(&self) -> &[Point2] {
        &self.corners
    }
}

/// Rotation about x and y is ignored: footprints follow yaw only.
pub fn footprint_of(asset: &Asset) -> Footprint {
    Footprint::new(
        Point2::new(asset.pos[0], asset.pos[1]),
        asset.yaw(),
        asset.width(),
        asset.depth(),
    )
}

/// Overlap volume of two yaw-rotated boxes: footprint intersection area
/// times the overlap of their vertical intervals.
pub fn box_intersection_volume(a: &Asset, b: &Asset) -> f64 {
    let (a_lo, a_hi) = a.z_range();
    let (b_lo, b_hi) = b.z_range();
    let dz = a_hi.min(b_hi) - a_lo.max(b_lo);
    if dz <= 0.0 {
        return 0.0;
    }
    let area = convex_clip_area(footprint_of(a).as_slice(), footprint_of(b).as_slice());
    snap(area * dz)
}
