//! Planar geometry for floor layouts: polygons, clipping, triangulation,
//! hulls, rectangle decomposition and box overlap.

pub(crate) mod clip;
mod footprint;
mod hull;
mod point;
mod polygon;
mod rect;
mod triangulate;

pub use clip::{convex_clip, convex_clip_area, polygon_clip_area};
pub use footprint::{box_intersection_volume, footprint_of, Footprint};
pub use hull::{convex_hull, convex_iou, ZoneHull};
pub use point::Point2;
pub use polygon::{
    is_rectilinear, is_simple, point_in_polygon, polygon_area, signed_area, Polygon,
};
pub use rect::{maximal_rectangles, Rect, RectSet};
pub use triangulate::triangulate;

use thiserror::Error;

/// Areas and volumes below this are treated as exactly zero (m², m³).
pub const MEASURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("polygon is not rectilinear: edge {edge} is not axis-parallel")]
    NotRectilinear { edge: usize },
    #[error("polygon is not simple")]
    NotSimple,
}

/// Snaps measurement noise below [`MEASURE_TOL`] to exact zero.
pub fn snap(x: f64) -> f64 {
    if x < MEASURE_TOL {
        0.0
    } else {
        x
    }
}
