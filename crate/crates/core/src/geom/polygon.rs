use super::point::orient;
use super::{GeomError, Point2};
use crate::scene::GEOM_EPS;

/// A polygon with counter-clockwise vertices and no repeated closing vertex.
///
/// Construction normalizes winding and rejects fewer than three vertices or
/// near-zero area. Simplicity is not checked here; see [`is_simple`].
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self, GeomError> {
        if vertices.len() > 3 {
            let (first, last) = (vertices[0], vertices[vertices.len() - 1]);
            if first.dist(last) <= GEOM_EPS {
                vertices.pop();
            }
        }
        if vertices.len() < 3 {
            return Err(GeomError::DegeneratePolygon(format!(
                "{} vertices",
                vertices.len()
            )));
        }
        let area = signed_area(&vertices);
        if area.abs() <= GEOM_EPS {
            return Err(GeomError::DegeneratePolygon(format!("area {area:e}")));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(Polygon { vertices })
    }

    pub fn from_xy(points: &[[f64; 2]]) -> Result<Self, GeomError> {
        Self::new(points.iter().map(|&p| p.into()).collect())
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn contains(&self, p: Point2) -> bool {
        point_in_polygon(p, &self.vertices)
    }

    pub fn is_simple(&self) -> bool {
        is_simple(&self.vertices)
    }

    pub fn is_rectilinear(&self) -> bool {
        is_rectilinear(&self.vertices).is_ok()
    }

    pub fn translated(&self, d: Point2) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&v| v + d).collect(),
        }
    }

    /// `(min, max)` corners of the axis-aligned bounding box.
    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }

    /// Edges as `(start, end)` pairs, closing edge included.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }
}

pub(crate) fn bbox(pts: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

/// Shoelace area; positive for counter-clockwise input.
pub fn signed_area(pts: &[Point2]) -> f64 {
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        acc += pts[i].cross(pts[(i + 1) % n]);
    }
    acc / 2.0
}

/// Unsigned area of a simple polygon in either winding.
pub fn polygon_area(pts: &[Point2]) -> Result<f64, GeomError> {
    if pts.len() < 3 {
        return Err(GeomError::DegeneratePolygon(format!(
            "{} vertices",
            pts.len()
        )));
    }
    let a = signed_area(pts).abs();
    if a <= GEOM_EPS {
        return Err(GeomError::DegeneratePolygon(format!("area {a:e}")));
    }
    Ok(a)
}

/// Even-odd crossing test. Points exactly on an edge may land either way.
pub fn point_in_polygon(p: Point2, pts: &[Point2]) -> bool {
    let n = pts.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (pts[i], pts[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Every edge axis-parallel within [`GEOM_EPS`]; `Err` names the first offender.
pub fn is_rectilinear(pts: &[Point2]) -> Result<(), GeomError> {
    let n = pts.len();
    for i in 0..n {
        let d = pts[(i + 1) % n] - pts[i];
        if d.x.abs() > GEOM_EPS && d.y.abs() > GEOM_EPS {
            return Err(GeomError::NotRectilinear { edge: i });
        }
    }
    Ok(())
}

/// Orientation sign with a distance tolerance: 0 when `c` lies within
/// [`GEOM_EPS`] of the line through `a` and `b`.
fn side(a: Point2, b: Point2, c: Point2) -> i8 {
    let len = (b - a).norm();
    let o = orient(a, b, c);
    if o.abs() <= GEOM_EPS * len.max(1.0) {
        0
    } else if o > 0.0 {
        1
    } else {
        -1
    }
}

fn on_segment(a: Point2, b: Point2, c: Point2) -> bool {
    c.x >= a.x.min(b.x) - GEOM_EPS
        && c.x <= a.x.max(b.x) + GEOM_EPS
        && c.y >= a.y.min(b.y) - GEOM_EPS
        && c.y <= a.y.max(b.y) + GEOM_EPS
}

/// Closed-segment intersection test (touching counts).
pub(crate) fn segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let d1 = side(q1, q2, p1);
    let d2 = side(q1, q2, p2);
    let d3 = side(p1, p2, q1);
    let d4 = side(p1, p2, q2);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(q1, q2, p1))
        || (d2 == 0 && on_segment(q1, q2, p2))
        || (d3 == 0 && on_segment(p1, p2, q1))
        || (d4 == 0 && on_segment(p1, p2, q2))
}

/// True when the closed polyline has no self-intersections, no repeated
/// vertices and no edge folding back onto its neighbour.
pub fn is_simple(pts: &[Point2]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if pts[i].dist(pts[j]) <= GEOM_EPS {
                return false;
            }
        }
    }
    for i in 0..n {
        let (a1, a2) = (pts[i], pts[(i + 1) % n]);
        for j in (i + 1)..n {
            let (b1, b2) = (pts[j], pts[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // shared vertex is fine; collinear fold-back is not
                let (shared, a_other, b_other) = if j == i + 1 {
                    (a2, a1, b2)
                } else {
                    (a1, a2, b1)
                };
                let u = a_other - shared;
                let v = b_other - shared;
                if side(shared, a_other, b_other) == 0 && u.dot(v) > 0.0 {
                    return false;
                }
            } else if segments_intersect(a1, a2, b1, b2) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[[f64; 2]]) -> Vec<Point2> {
        v.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn areas() {
        let square = pts(&[[0., 0.], [1., 0.], [1., 1.], [0., 1.]]);
        assert_eq!(polygon_area(&square).unwrap(), 1.0);
        let tri = pts(&[[0., 0.], [1., 0.], [0., 1.]]);
        assert_eq!(polygon_area(&tri).unwrap(), 0.5);
        let l = pts(&[[0., 0.], [4., 0.], [4., 2.], [2., 2.], [2., 4.], [0., 4.]]);
        // 4x4 square minus the 2x2 corner
        assert_eq!(polygon_area(&l).unwrap(), 4.0 * 4.0 - 2.0 * 2.0);
    }

    #[test]
    fn area_is_winding_independent() {
        let mut l = pts(&[[0., 0.], [4., 0.], [4., 2.], [2., 2.], [2., 4.], [0., 4.]]);
        l.reverse();
        assert_eq!(polygon_area(&l).unwrap(), 12.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(polygon_area(&pts(&[[0., 0.], [1., 0.]])).is_err());
        assert!(polygon_area(&pts(&[[0., 0.], [1., 0.], [2., 0.]])).is_err());
        assert!(Polygon::new(pts(&[[0., 0.], [1., 1.], [2., 2.]])).is_err());
    }

    #[test]
    fn polygon_normalizes_winding_and_closure() {
        let p = Polygon::new(pts(&[[0., 0.], [0., 1.], [1., 1.], [1., 0.], [0., 0.]])).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.area() > 0.0);
    }

    #[test]
    fn bowtie_not_simple() {
        let bowtie = pts(&[[0., 0.], [1., 1.], [1., 0.], [0., 1.]]);
        // edges (0,0)-(1,1) and (1,0)-(0,1) cross at (0.5, 0.5)
        assert!(segments_intersect(
            bowtie[0], bowtie[1], bowtie[2], bowtie[3]
        ));
        assert!(!is_simple(&bowtie));
    }

    #[test]
    fn simple_shapes() {
        assert!(is_simple(&pts(&[
            [0., 0.],
            [4., 0.],
            [4., 2.],
            [2., 2.],
            [2., 4.],
            [0., 4.]
        ])));
        assert!(is_simple(&pts(&[[0., 0.], [1., 0.], [0., 1.]])));
    }

    #[test]
    fn touching_and_folded_not_simple() {
        // vertex (2,0) touches the bottom edge from above via a spike
        let spike = pts(&[[0., 0.], [4., 0.], [4., 4.], [2., 0.], [0., 4.]]);
        assert!(!is_simple(&spike));
        // collinear fold-back
        let fold = pts(&[[0., 0.], [2., 0.], [1., 0.], [1., 1.]]);
        assert!(!is_simple(&fold));
        // repeated vertex
        let rep = pts(&[[0., 0.], [2., 0.], [2., 2.], [2., 0.], [0., 2.]]);
        assert!(!is_simple(&rep));
    }

    #[test]
    fn containment() {
        let l = pts(&[[0., 0.], [4., 0.], [4., 2.], [2., 2.], [2., 4.], [0., 4.]]);
        assert!(point_in_polygon(Point2::new(1., 3.), &l));
        assert!(!point_in_polygon(Point2::new(3., 3.), &l));
        assert!(!point_in_polygon(Point2::new(5., 1.), &l));
    }

    #[test]
    fn rectilinear_detection() {
        let l = pts(&[[0., 0.], [4., 0.], [4., 2.], [2., 2.], [2., 4.], [0., 4.]]);
        assert!(is_rectilinear(&l).is_ok());
        let trap = pts(&[[0., 0.], [4., 0.], [3., 3.], [1., 3.]]);
        assert_eq!(
            is_rectilinear(&trap),
            Err(GeomError::NotRectilinear { edge: 1 })
        );
    }
}
