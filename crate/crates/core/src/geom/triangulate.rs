use super::point::orient;
use super::polygon::signed_area;
use super::{GeomError, Point2};
use crate::scene::GEOM_EPS;

/// Ear-clipping triangulation of a simple polygon in either winding.
///
/// Repeated and collinear vertices are dropped first. Each round clips the
/// lowest-index ear, so the output is deterministic. Triangles come back
/// counter-clockwise.
pub fn triangulate(pts: &[Point2]) -> Result<Vec<[Point2; 3]>, GeomError> {
    let mut ring = prefilter(pts);
    if ring.len() < 3 {
        return Err(GeomError::DegeneratePolygon(format!(
            "{} usable vertices",
            ring.len()
        )));
    }
    let area = signed_area(&ring);
    if area.abs() <= GEOM_EPS {
        return Err(GeomError::DegeneratePolygon(format!("area {area:e}")));
    }
    if area < 0.0 {
        ring.reverse();
    }

    let mut tris = Vec::with_capacity(ring.len() - 2);
    while ring.len() > 3 {
        let n = ring.len();
        let ear = (0..n)
            .find(|&i| is_ear(&ring, i))
            .ok_or(GeomError::NotSimple)?;
        let prev = ring[(ear + n - 1) % n];
        let next = ring[(ear + 1) % n];
        tris.push([prev, ring[ear], next]);
        ring.remove(ear);
        ring = prefilter(&ring);
        if ring.len() < 3 {
            break;
        }
    }
    if ring.len() == 3 {
        tris.push([ring[0], ring[1], ring[2]]);
    }
    Ok(tris)
}

fn is_ear(ring: &[Point2], i: usize) -> bool {
    let n = ring.len();
    let a = ring[(i + n - 1) % n];
    let b = ring[i];
    let c = ring[(i + 1) % n];
    if orient(a, b, c) <= 0.0 {
        return false;
    }
    ring.iter().enumerate().all(|(k, &p)| {
        k == i
            || k == (i + n - 1) % n
            || k == (i + 1) % n
            || p == a
            || p == b
            || p == c
            || !in_closed_triangle(p, a, b, c)
    })
}

fn in_closed_triangle(p: Point2, a: Point2, b: Point2, c: Point2) -> bool {
    orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0
}

/// Drops closing duplicates, repeated vertices and vertices collinear with
/// their neighbours, until none remain.
fn prefilter(pts: &[Point2]) -> Vec<Point2> {
    let mut ring: Vec<Point2> = pts.to_vec();
    loop {
        let n = ring.len();
        if n < 3 {
            return ring;
        }
        let drop = (0..n).find(|&i| {
            let a = ring[(i + n - 1) % n];
            let b = ring[i];
            let c = ring[(i + 1) % n];
            if a.dist(b) <= GEOM_EPS {
                return true;
            }
            let scale = (b - a).norm() * (c - b).norm();
            orient(a, b, c).abs() <= 1e-12 * scale.max(1e-300) && (b - a).dot(c - b) > 0.0
        });
        match drop {
            Some(i) => {
                ring.remove(i);
            }
            None => return ring,
        }
    }
}
