use super::clip::convex_clip_area;
use super::point::orient;
use super::polygon::signed_area;
use super::{snap, Point2, Polygon};
use crate::scene::GEOM_EPS;

/// Convex hull of one zone's footprint corners, or `Empty` when the points
/// span no area.
#[derive(Clone, Debug, PartialEq)]
pub enum ZoneHull {
    Empty,
    Hull(Polygon),
}

impl ZoneHull {
    pub fn of_points(points: &[Point2]) -> ZoneHull {
        match convex_hull(points) {
            Some(p) => ZoneHull::Hull(p),
            None => ZoneHull::Empty,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ZoneHull::Empty)
    }

    pub fn area(&self) -> f64 {
        match self {
            ZoneHull::Empty => 0.0,
            ZoneHull::Hull(p) => p.area(),
        }
    }

    pub fn polygon(&self) -> Option<&Polygon> {
        match self {
            ZoneHull::Empty => None,
            ZoneHull::Hull(p) => Some(p),
        }
    }
}

/// Monotone-chain hull, counter-clockwise, collinear points dropped.
/// Returns `None` when fewer than three non-collinear points exist.
pub fn convex_hull(points: &[Point2]) -> Option<Polygon> {
    let mut pts: Vec<Point2> = points
        .iter()
        .copied()
        .filter(|p| p.x.is_finite() && p.y.is_finite())
        .collect();
    if pts.len() < 3 {
        return None;
    }
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.dist(*b) <= GEOM_EPS);
    if pts.len() < 3 {
        return None;
    }

    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for &p in pts.iter() {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();

    if hull.len() < 3 || signed_area(&hull) <= GEOM_EPS * GEOM_EPS {
        return None;
    }
    Polygon::new(hull).ok()
}

/// Intersection-over-union of two hulls; 0 when either is empty.
pub fn convex_iou(a: &ZoneHull, b: &ZoneHull) -> f64 {
    let (Some(pa), Some(pb)) = (a.polygon(), b.polygon()) else {
        return 0.0;
    };
    let inter = snap(convex_clip_area(pa.vertices(), pb.vertices()));
    if inter == 0.0 {
        return 0.0;
    }
    let union = pa.area() + pb.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x: f64, y: f64, s: f64) -> Vec<Point2> {
        vec![
            Point2::new(x, y),
            Point2::new(x + s, y),
            Point2::new(x + s, y + s),
            Point2::new(x, y + s),
        ]
    }

    #[test]
    fn square_with_center() {
        let mut pts = square(0., 0., 1.);
        pts.push(Point2::new(0.5, 0.5));
        pts.push(Point2::new(0.5, 0.0)); // collinear on an edge
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.len(), 4);
        assert_eq!(h.area(), 1.0);
    }

    #[test]
    fn degenerate_hulls() {
        assert!(convex_hull(&[Point2::new(0., 0.), Point2::new(1., 1.)]).is_none());
        assert!(convex_hull(&[
            Point2::new(0., 0.),
            Point2::new(1., 1.),
            Point2::new(2., 2.)
        ])
        .is_none());
        assert!(ZoneHull::of_points(&[]).is_empty());
    }

    #[test]
    fn iou_cases() {
        let a = ZoneHull::of_points(&square(0., 0., 1.));
        let b = ZoneHull::of_points(&square(0.5, 0., 1.));
        let far = ZoneHull::of_points(&square(5., 5., 1.));
        assert_eq!(convex_iou(&a, &a), 1.0);
        assert_eq!(convex_iou(&a, &far), 0.0);
        // 0.5 / (1 + 1 - 0.5)
        assert!((convex_iou(&a, &b) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(convex_iou(&a, &ZoneHull::Empty), 0.0);
    }
}
