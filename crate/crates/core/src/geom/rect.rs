use super::clip::convex_clip_area;
use super::polygon::{bbox, is_rectilinear, point_in_polygon};
use super::{GeomError, Point2, Polygon};
use crate::scene::GEOM_EPS;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    /// Counter-clockwise corners starting at the lower-left.
    pub fn corners(&self) -> [Point2; 4] {
        [
            Point2::new(self.x_min, self.y_min),
            Point2::new(self.x_max, self.y_min),
            Point2::new(self.x_max, self.y_max),
            Point2::new(self.x_min, self.y_max),
        ]
    }
}

/// Maximal axis-aligned rectangles of a rectilinear polygon, plus a
/// disjoint strip cover of their union for area queries.
#[derive(Clone, Debug, PartialEq)]
pub struct RectSet {
    rects: Vec<Rect>,
    strips: Vec<Rect>,
}

impl RectSet {
    pub fn from_rects(rects: Vec<Rect>) -> Self {
        let strips = disjoint_strips(&rects);
        RectSet { rects, strips }
    }

    /// The (possibly overlapping) maximal rectangles.
    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    /// Pairwise-disjoint rectangles whose union equals the union of `rects()`.
    pub fn strips(&self) -> &[Rect] {
        &self.strips
    }

    pub fn union_area(&self) -> f64 {
        self.strips.iter().map(Rect::area).sum()
    }

    /// Area of `convex ∩ union(rects)` for a convex counter-clockwise polygon.
    pub fn covered_area(&self, convex: &[Point2]) -> f64 {
        let (lo, hi) = bbox(convex);
        let mut total = 0.0;
        for s in &self.strips {
            if hi.x <= s.x_min || lo.x >= s.x_max || hi.y <= s.y_min || lo.y >= s.y_max {
                continue;
            }
            if lo.x >= s.x_min && hi.x <= s.x_max && lo.y >= s.y_min && hi.y <= s.y_max {
                total += super::polygon::signed_area(convex);
                continue;
            }
            total += convex_clip_area(convex, &s.corners());
        }
        total
    }
}

fn unique_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= GEOM_EPS);
    v
}

/// Decomposes a rectilinear polygon into all of its maximal contained
/// axis-aligned rectangles.
///
/// Vertex coordinates cut the plane into a grid; for every band of
/// consecutive rows the sweep keeps the horizontal runs of interior cells that
/// cannot grow up or down. Overlapping results are kept.
pub fn maximal_rectangles(p: &Polygon) -> Result<RectSet, GeomError> {
    let pts = p.vertices();
    is_rectilinear(pts)?;
    let xs = unique_sorted(pts.iter().map(|v| v.x).collect());
    let ys = unique_sorted(pts.iter().map(|v| v.y).collect());
    let (nx, ny) = (xs.len() - 1, ys.len() - 1);

    let inside: Vec<Vec<bool>> = (0..ny)
        .map(|j| {
            let cy = (ys[j] + ys[j + 1]) / 2.0;
            (0..nx)
                .map(|i| point_in_polygon(Point2::new((xs[i] + xs[i + 1]) / 2.0, cy), pts))
                .collect()
        })
        .collect();

    let covers = |row: usize, a: usize, b: usize| (a..=b).all(|i| inside[row][i]);

    let mut rects = Vec::new();
    for j0 in 0..ny {
        let mut mask = inside[j0].clone();
        for j1 in j0..ny {
            if j1 > j0 {
                for (m, &c) in mask.iter_mut().zip(&inside[j1]) {
                    *m &= c;
                }
            }
            if !mask.iter().any(|&m| m) {
                break;
            }
            let mut i = 0;
            while i < nx {
                if !mask[i] {
                    i += 1;
                    continue;
                }
                let a = i;
                while i + 1 < nx && mask[i + 1] {
                    i += 1;
                }
                let b = i;
                i += 1;
                let grows_down = j0 > 0 && covers(j0 - 1, a, b);
                let grows_up = j1 + 1 < ny && covers(j1 + 1, a, b);
                if !grows_down && !grows_up {
                    rects.push(Rect {
                        x_min: xs[a],
                        y_min: ys[j0],
                        x_max: xs[b + 1],
                        y_max: ys[j1 + 1],
                    });
                }
            }
        }
    }
    Ok(RectSet::from_rects(rects))
}

fn disjoint_strips(rects: &[Rect]) -> Vec<Rect> {
    if rects.is_empty() {
        return Vec::new();
    }
    let xs = unique_sorted(rects.iter().flat_map(|r| [r.x_min, r.x_max]).collect());
    let ys = unique_sorted(rects.iter().flat_map(|r| [r.y_min, r.y_max]).collect());
    let mut strips = Vec::new();
    for j in 0..ys.len() - 1 {
        let cy = (ys[j] + ys[j + 1]) / 2.0;
        let mut run_start: Option<usize> = None;
        for i in 0..xs.len() {
            let covered = i < xs.len() - 1 && {
                let c = Point2::new((xs[i] + xs[i + 1]) / 2.0, cy);
                rects.iter().any(|r| r.contains(c))
            };
            match (covered, run_start) {
                (true, None) => run_start = Some(i),
                (false, Some(s)) => {
                    strips.push(Rect {
                        x_min: xs[s],
                        y_min: ys[j],
                        x_max: xs[i],
                        y_max: ys[j + 1],
                    });
                    run_start = None;
                }
                _ => {}
            }
        }
    }
    strips
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[[f64; 2]]) -> Polygon {
        Polygon::from_xy(v).unwrap()
    }

    /// Union area by rasterizing cell centers on a `step` grid.
    fn raster_union_area(rects: &[Rect], lo: Point2, hi: Point2, step: f64) -> f64 {
        let nx = ((hi.x - lo.x) / step).round() as usize;
        let ny = ((hi.y - lo.y) / step).round() as usize;
        let mut count = 0usize;
        for j in 0..ny {
            for i in 0..nx {
                let c = Point2::new(
                    lo.x + (i as f64 + 0.5) * step,
                    lo.y + (j as f64 + 0.5) * step,
                );
                if rects.iter().any(|r| r.contains(c)) {
                    count += 1;
                }
            }
        }
        count as f64 * step * step
    }

    #[test]
    fn rectangle_is_its_own_decomposition() {
        let r = maximal_rectangles(&poly(&[[0., 0.], [4., 0.], [4., 5.], [0., 5.]])).unwrap();
        assert_eq!(
            r.rects(),
            &[Rect {
                x_min: 0.,
                y_min: 0.,
                x_max: 4.,
                y_max: 5.
            }]
        );
    }

    #[test]
    fn l_shape_two_overlapping_maximal_rects() {
        let l = poly(&[[0., 0.], [4., 0.], [4., 2.], [2., 2.], [2., 4.], [0., 4.]]);
        let r = maximal_rectangles(&l).unwrap();
        assert_eq!(r.rects().len(), 2);
        let raster = raster_union_area(r.rects(), Point2::new(0., 0.), Point2::new(4., 4.), 0.01);
        assert!((raster - 12.0).abs() < 1e-6, "raster {raster}");
        assert!((r.union_area() - 12.0).abs() < 1e-12);
        for rect in r.rects() {
            for c in rect.corners() {
                assert!(c.x <= 4.0 && c.y <= 4.0);
            }
        }
    }

    #[test]
    fn trapezoid_rejected() {
        let trap = poly(&[[0., 0.], [4., 0.], [3., 3.], [1., 3.]]);
        assert!(matches!(
            maximal_rectangles(&trap),
            Err(GeomError::NotRectilinear { .. })
        ));
    }

    #[test]
    fn covered_area_of_straddling_square() {
        let l = poly(&[[0., 0.], [4., 0.], [4., 2.], [2., 2.], [2., 4.], [0., 4.]]);
        let r = maximal_rectangles(&l).unwrap();
        let sq = Rect {
            x_min: 1.5,
            y_min: 2.5,
            x_max: 2.5,
            y_max: 3.5,
        }
        .corners();
        assert!((r.covered_area(&sq) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn u_shape_rectangles_maximal() {
        let u = poly(&[
            [0., 0.],
            [6., 0.],
            [6., 5.],
            [4., 5.],
            [4., 2.],
            [2., 2.],
            [2., 5.],
            [0., 5.],
        ]);
        let r = maximal_rectangles(&u).unwrap();
        // base bar plus two arms
        assert_eq!(r.rects().len(), 3);
        assert!((r.union_area() - (30.0 - 6.0)).abs() < 1e-12);
    }
}
