//! Top-down SVG floor plans.

use std::fmt::Write;

use crate::geom::{footprint_of, Point2, ZoneHull};
use crate::scene::Scene;

pub const PX_PER_M: f64 = 100.0;
pub const MARGIN_M: f64 = 0.5;

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
];

struct Frame {
    min_x: f64,
    max_y: f64,
}

impl Frame {
    fn map(&self, p: Point2) -> (f64, f64) {
        (
            (p.x - self.min_x + MARGIN_M) * PX_PER_M,
            (self.max_y + MARGIN_M - p.y) * PX_PER_M,
        )
    }

    fn points(&self, pts: &[Point2]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// Renders the boundary, translucent zone hulls and labeled asset footprints.
/// The view box is the boundary's bounding box plus [`MARGIN_M`] on each side.
pub fn render_svg(scene: &Scene) -> String {
    let boundary: Vec<Point2> = scene.boundary_xy().into_iter().map(Point2::from).collect();
    let fold = |f: fn(&Point2) -> f64, pick: fn(f64, f64) -> f64, init: f64| {
        boundary.iter().map(f).fold(init, pick)
    };
    let (mut min_x, mut max_x) = (
        fold(|p| p.x, f64::min, f64::INFINITY),
        fold(|p| p.x, f64::max, f64::NEG_INFINITY),
    );
    let (mut min_y, mut max_y) = (
        fold(|p| p.y, f64::min, f64::INFINITY),
        fold(|p| p.y, f64::max, f64::NEG_INFINITY),
    );
    if boundary.is_empty() {
        (min_x, max_x, min_y, max_y) = (0.0, 0.0, 0.0, 0.0);
    }
    let frame = Frame { min_x, max_y };
    let width = (max_x - min_x + 2.0 * MARGIN_M) * PX_PER_M;
    let height = (max_y - min_y + 2.0 * MARGIN_M) * PX_PER_M;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.2} {height:.2}" width="{width:.2}" height="{height:.2}">"#
    );
    let _ = writeln!(
        svg,
        r##"<polygon class="boundary" points="{}" fill="none" stroke="#222" stroke-width="3"/>"##,
        frame.points(&boundary)
    );
    for (i, zone) in scene.functional_zones.iter().enumerate() {
        let corners: Vec<Point2> = zone
            .assets
            .iter()
            .flat_map(|a| footprint_of(a).corners)
            .collect();
        if let ZoneHull::Hull(poly) = ZoneHull::of_points(&corners) {
            let _ = writeln!(
                svg,
                r#"<polygon class="zone" data-zone="{}" points="{}" fill="{}" fill-opacity="0.2" stroke="none"/>"#,
                escape(&zone.id),
                frame.points(poly.vertices()),
                PALETTE[i % PALETTE.len()]
            );
        }
    }
    for (i, zone) in scene.functional_zones.iter().enumerate() {
        for a in &zone.assets {
            let fp = footprint_of(a);
            let d: Vec<String> = fp
                .corners
                .iter()
                .enumerate()
                .map(|(k, &p)| {
                    let (x, y) = frame.map(p);
                    format!("{}{x:.2},{y:.2}", if k == 0 { "M" } else { "L" })
                })
                .collect();
            let _ = writeln!(
                svg,
                r##"<path class="asset" data-id="{}" d="{} Z" fill="{}" fill-opacity="0.5" stroke="#333" stroke-width="1"/>"##,
                escape(&a.id),
                d.join(" "),
                PALETTE[i % PALETTE.len()]
            );
            let (x, y) = frame.map(Point2::new(a.pos[0], a.pos[1]));
            let _ = writeln!(
                svg,
                r#"<text class="label" x="{x:.2}" y="{y:.2}" font-size="10" text-anchor="middle">{}</text>"#,
                escape(&a.id)
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{Asset, FunctionalZone};

    fn scene() -> Scene {
        let mut s = Scene::empty_room("t", &[[0., 0.], [4., 0.], [4., 3.], [0., 3.]], 2.8);
        s.push_zone(
            FunctionalZone::new("z1", "sleep")
                .with_asset(Asset::floor_box(
                    "bed",
                    "bed",
                    [1.0, 1.5],
                    [1.6, 0.5, 2.0],
                    0.0,
                ))
                .with_asset(Asset::floor_box(
                    "a<b",
                    "lamp",
                    [2.0, 2.5],
                    [0.3, 1.0, 0.3],
                    0.3,
                )),
        );
        s.push_zone(FunctionalZone::new("z2", "empty"));
        s
    }

    #[test]
    fn one_path_per_asset_and_no_empty_hull() {
        let svg = render_svg(&scene());
        assert_eq!(svg.matches(r#"class="asset""#).count(), 2);
        assert_eq!(svg.matches(r#"class="zone""#).count(), 1);
        assert!(svg.contains("a&lt;b"));
        assert!(svg.contains(r#"viewBox="0 0 500.00 400.00""#));
    }

    #[test]
    fn deterministic_and_y_flipped() {
        let s = scene();
        let svg = render_svg(&s);
        assert_eq!(svg, render_svg(&s));
        // floor origin sits at the bottom-left, inside the margin
        assert!(svg.contains("50.00,350.00"));
    }
}
