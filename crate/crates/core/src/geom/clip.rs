use super::point::orient;
use super::polygon::{bbox, signed_area};
use super::triangulate::triangulate;
use super::{GeomError, Point2};

/// Sutherland–Hodgman clip of `subject` against a convex, counter-clockwise `clip`.
///
/// Returns the vertices of the intersection (possibly empty). `subject` may be
/// any polygon; the result is exact for convex subjects.
pub fn convex_clip(subject: &[Point2], clip: &[Point2]) -> Vec<Point2> {
    let mut output: Vec<Point2> = subject.to_vec();
    let mut input: Vec<Point2> = Vec::with_capacity(subject.len() + clip.len());
    let m = clip.len();
    for i in 0..m {
        if output.is_empty() {
            break;
        }
        std::mem::swap(&mut input, &mut output);
        output.clear();
        let (a, b) = (clip[i], clip[(i + 1) % m]);
        let n = input.len();
        let mut prev = input[n - 1];
        let mut prev_side = orient(a, b, prev);
        for &cur in input.iter() {
            let cur_side = orient(a, b, cur);
            if cur_side >= 0.0 {
                if prev_side < 0.0 {
                    output.push(intersect(prev, cur, prev_side, cur_side));
                }
                output.push(cur);
            } else if prev_side >= 0.0 {
                output.push(intersect(prev, cur, prev_side, cur_side));
            }
            prev = cur;
            prev_side = cur_side;
        }
    }
    output
}

fn intersect(p: Point2, q: Point2, sp: f64, sq: f64) -> Point2 {
    let t = sp / (sp - sq);
    p + (q - p) * t
}

fn bboxes_disjoint(a: &[Point2], b: &[Point2]) -> bool {
    let (alo, ahi) = bbox(a);
    let (blo, bhi) = bbox(b);
    ahi.x <= blo.x || bhi.x <= alo.x || ahi.y <= blo.y || bhi.y <= alo.y
}

/// Area of the intersection of two convex counter-clockwise polygons.
pub fn convex_clip_area(subject: &[Point2], clip: &[Point2]) -> f64 {
    if subject.len() < 3 || clip.len() < 3 || bboxes_disjoint(subject, clip) {
        return 0.0;
    }
    let poly = convex_clip(subject, clip);
    if poly.len() < 3 {
        return 0.0;
    }
    signed_area(&poly).max(0.0)
}

/// Area of `subject ∩ clip` where `subject` is convex and `clip` is any
/// simple polygon. `clip` is ear-clipped and the convex pieces summed.
pub fn polygon_clip_area(subject: &[Point2], clip: &[Point2]) -> Result<f64, GeomError> {
    let tris = triangulate(clip)?;
    Ok(clipped_area_over_triangles(subject, &tris))
}

pub(crate) fn clipped_area_over_triangles(subject: &[Point2], tris: &[[Point2; 3]]) -> f64 {
    tris.iter().map(|t| convex_clip_area(subject, t)).sum()
}
