//! Parametric floor-plan boundaries for the nine room typologies.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Point2, Polygon};
use crate::scene::{Scene, StructureKind, StructureNode, DEFAULT_ROOM_HEIGHT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForgeError {
    #[error("bad dimensions for {shape}: {reason}")]
    BadDims { shape: Shape, reason: String },
    #[error("unknown shape {0:?}")]
    UnknownShape(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Rectangular,
    LShaped,
    TShaped,
    UShaped,
    HShaped,
    Trapezoidal,
    DiagonalCut,
    Nook,
    Irregular,
}

impl Shape {
    pub const ALL: [Shape; 9] = [
        Shape::Rectangular,
        Shape::LShaped,
        Shape::TShaped,
        Shape::UShaped,
        Shape::HShaped,
        Shape::Trapezoidal,
        Shape::DiagonalCut,
        Shape::Nook,
        Shape::Irregular,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Rectangular => "rectangular",
            Shape::LShaped => "l_shaped",
            Shape::TShaped => "t_shaped",
            Shape::UShaped => "u_shaped",
            Shape::HShaped => "h_shaped",
            Shape::Trapezoidal => "trapezoidal",
            Shape::DiagonalCut => "diagonal_cut",
            Shape::Nook => "nook",
            Shape::Irregular => "irregular",
        }
    }

    pub fn from_name(name: &str) -> Result<Shape, ForgeError> {
        Shape::ALL
            .into_iter()
            .find(|s| s.as_str() == name)
            .ok_or_else(|| ForgeError::UnknownShape(name.to_string()))
    }

    /// Whether every edge of this shape is axis-parallel.
    pub fn is_rectilinear(self) -> bool {
        !matches!(
            self,
            Shape::Trapezoidal | Shape::DiagonalCut | Shape::Irregular
        )
    }

    /// Inclusive bounds on the vertex count of generated polygons.
    pub fn vertex_count(self) -> (usize, usize) {
        match self {
            Shape::Rectangular | Shape::Trapezoidal => (4, 4),
            Shape::LShaped => (6, 6),
            Shape::TShaped | Shape::UShaped | Shape::Nook => (8, 8),
            Shape::HShaped => (12, 12),
            Shape::DiagonalCut => (5, 5),
            Shape::Irregular => (9, 11),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub shape: Shape,
    pub label: &'static str,
    /// Parameter names with their default values in meters.
    pub params: &'static [(&'static str, f64)],
}

const CATALOG: [CatalogEntry; 9] = [
    CatalogEntry {
        shape: Shape::Rectangular,
        label: "Rectangular",
        params: &[("width", 5.0), ("depth", 4.0)],
    },
    CatalogEntry {
        shape: Shape::LShaped,
        label: "L-shaped",
        params: &[
            ("width", 6.0),
            ("depth", 5.0),
            ("notch_width", 2.5),
            ("notch_depth", 2.0),
        ],
    },
    CatalogEntry {
        shape: Shape::TShaped,
        label: "T-shaped",
        params: &[
            ("width", 7.0),
            ("depth", 6.0),
            ("stem_width", 3.0),
            ("bar_depth", 2.5),
        ],
    },
    CatalogEntry {
        shape: Shape::UShaped,
        label: "U-shaped",
        params: &[
            ("width", 7.0),
            ("depth", 6.0),
            ("gap_width", 3.0),
            ("gap_depth", 3.5),
        ],
    },
    CatalogEntry {
        shape: Shape::HShaped,
        label: "H-shaped",
        params: &[
            ("width", 7.0),
            ("depth", 6.0),
            ("notch_width", 3.0),
            ("notch_depth", 1.5),
        ],
    },
    CatalogEntry {
        shape: Shape::Trapezoidal,
        label: "Trapezoidal",
        params: &[("base_bottom", 6.0), ("base_top", 4.0), ("depth", 5.0)],
    },
    CatalogEntry {
        shape: Shape::DiagonalCut,
        label: "Room with a diagonal wall cut",
        params: &[
            ("width", 6.0),
            ("depth", 5.0),
            ("cut_x", 2.0),
            ("cut_y", 1.5),
        ],
    },
    CatalogEntry {
        shape: Shape::Nook,
        label: "Room with a protruding nook/alcove",
        params: &[
            ("width", 6.0),
            ("depth", 5.0),
            ("nook_width", 2.0),
            ("nook_depth", 1.2),
            ("nook_offset", 2.0),
        ],
    },
    CatalogEntry {
        shape: Shape::Irregular,
        label: "Other irregular shapes",
        params: &[("width", 7.0), ("depth", 6.0)],
    },
];

pub fn shape_catalog() -> &'static [CatalogEntry] {
    &CATALOG
}

pub fn catalog_entry(shape: Shape) -> &'static CatalogEntry {
    CATALOG
        .iter()
        .find(|e| e.shape == shape)
        .expect("every shape is cataloged")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    pub shape: Shape,
    /// Overrides for the catalog defaults; absent keys take the default.
    #[serde(default)]
    pub dims: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl ShapeSpec {
    pub fn new(shape: Shape) -> Self {
        ShapeSpec {
            shape,
            dims: BTreeMap::new(),
            seed: 0,
        }
    }

    pub fn dim(mut self, name: &str, value: f64) -> Self {
        self.dims.insert(name.to_string(), value);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Catalog defaults overlaid with `dims`, in catalog order.
    fn resolve(&self) -> Result<Dims, ForgeError> {
        let entry = catalog_entry(self.shape);
        let bad = |reason: String| ForgeError::BadDims {
            shape: self.shape,
            reason,
        };
        for k in self.dims.keys() {
            if !entry.params.iter().any(|(n, _)| n == k) {
                return Err(bad(format!("unknown parameter {k:?}")));
            }
        }
        let mut values = BTreeMap::new();
        for &(name, default) in entry.params {
            let v = self.dims.get(name).copied().unwrap_or(default);
            if !(v.is_finite() && v > 0.0) {
                return Err(bad(format!("{name} must be positive, got {v}")));
            }
            values.insert(name, v);
        }
        Ok(Dims {
            shape: self.shape,
            values,
        })
    }
}

struct Dims {
    shape: Shape,
    values: BTreeMap<&'static str, f64>,
}

impl Dims {
    fn get(&self, name: &str) -> f64 {
        self.values[name]
    }

    fn smaller(&self, part: &str, whole: &str) -> Result<(), ForgeError> {
        self.fits(self.get(part), part, self.get(whole), whole)
    }

    fn fits(
        &self,
        part: f64,
        part_name: &str,
        whole: f64,
        whole_name: &str,
    ) -> Result<(), ForgeError> {
        if part < whole {
            Ok(())
        } else {
            Err(ForgeError::BadDims {
                shape: self.shape,
                reason: format!("{part_name} ({part}) must be smaller than {whole_name} ({whole})"),
            })
        }
    }
}

#[derive(Clone, Copy)]
enum Corner {
    Plain,
    /// Removes an axis-aligned rectangle: `along_in` back along the incoming
    /// edge and `along_out` forward along the outgoing edge.
    Notch {
        along_in: f64,
        along_out: f64,
    },
    Cut {
        along_in: f64,
        along_out: f64,
    },
}

/// Walks the corners of `[0,w]×[0,d]` counter-clockwise from the origin,
/// replacing each corner by its treatment.
fn treated_rectangle(w: f64, d: f64, corners: [Corner; 4]) -> Vec<Point2> {
    let base = [
        Point2::new(0.0, 0.0),
        Point2::new(w, 0.0),
        Point2::new(w, d),
        Point2::new(0.0, d),
    ];
    let mut out = Vec::new();
    for i in 0..4 {
        let c = base[i];
        let prev = base[(i + 3) % 4];
        let next = base[(i + 1) % 4];
        let u_in = (prev - c) * (1.0 / prev.dist(c));
        let u_out = (next - c) * (1.0 / next.dist(c));
        match corners[i] {
            Corner::Plain => out.push(c),
            Corner::Notch {
                along_in,
                along_out,
            } => {
                out.push(c + u_in * along_in);
                out.push(c + u_in * along_in + u_out * along_out);
                out.push(c + u_out * along_out);
            }
            Corner::Cut {
                along_in,
                along_out,
            } => {
                out.push(c + u_in * along_in);
                out.push(c + u_out * along_out);
            }
        }
    }
    out
}

fn irregular(w: f64, d: f64, seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let notches = rng.random_range(2..=3);
    let mut order = [0usize, 1, 2, 3];
    for i in (1..4).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    // Incoming edges run along y at corners 0 and 2, along x at 1 and 3.
    let extent = |i: usize, incoming: bool| {
        if i.is_multiple_of(2) == incoming {
            d
        } else {
            w
        }
    };
    let mut corners = [Corner::Plain; 4];
    for (k, &i) in order.iter().enumerate() {
        if k > notches {
            break;
        }
        let (lo, hi) = if k < notches {
            (0.15, 0.35)
        } else {
            (0.15, 0.3)
        };
        let along_in = rng.random_range(lo..hi) * extent(i, true);
        let along_out = rng.random_range(lo..hi) * extent(i, false);
        corners[i] = if k < notches {
            Corner::Notch {
                along_in,
                along_out,
            }
        } else {
            Corner::Cut {
                along_in,
                along_out,
            }
        };
    }
    treated_rectangle(w, d, corners)
}

/// Builds the counter-clockwise floor polygon for `spec`.
pub fn generate_boundary(spec: &ShapeSpec) -> Result<Polygon, ForgeError> {
    let dims = spec.resolve()?;
    let p = |x: f64, y: f64| Point2::new(x, y);
    let v = |n: &str| dims.get(n);
    let pts = match spec.shape {
        Shape::Rectangular => treated_rectangle(v("width"), v("depth"), [Corner::Plain; 4]),
        Shape::LShaped => {
            dims.smaller("notch_width", "width")?;
            dims.smaller("notch_depth", "depth")?;
            let mut c = [Corner::Plain; 4];
            c[2] = Corner::Notch {
                along_in: v("notch_depth"),
                along_out: v("notch_width"),
            };
            treated_rectangle(v("width"), v("depth"), c)
        }
        Shape::TShaped => {
            dims.smaller("stem_width", "width")?;
            dims.smaller("bar_depth", "depth")?;
            let (w, d) = (v("width"), v("depth"));
            let (x0, x1) = ((w - v("stem_width")) / 2.0, (w + v("stem_width")) / 2.0);
            let yb = d - v("bar_depth");
            vec![
                p(x0, 0.0),
                p(x1, 0.0),
                p(x1, yb),
                p(w, yb),
                p(w, d),
                p(0.0, d),
                p(0.0, yb),
                p(x0, yb),
            ]
        }
        Shape::UShaped => {
            dims.smaller("gap_width", "width")?;
            dims.smaller("gap_depth", "depth")?;
            let (w, d) = (v("width"), v("depth"));
            let (x0, x1) = ((w - v("gap_width")) / 2.0, (w + v("gap_width")) / 2.0);
            let yg = d - v("gap_depth");
            vec![
                p(0.0, 0.0),
                p(w, 0.0),
                p(w, d),
                p(x1, d),
                p(x1, yg),
                p(x0, yg),
                p(x0, d),
                p(0.0, d),
            ]
        }
        Shape::HShaped => {
            dims.smaller("notch_width", "width")?;
            let (w, d, nd) = (v("width"), v("depth"), v("notch_depth"));
            dims.fits(2.0 * nd, "2 * notch_depth", d, "depth")?;
            let (x0, x1) = ((w - v("notch_width")) / 2.0, (w + v("notch_width")) / 2.0);
            vec![
                p(0.0, 0.0),
                p(x0, 0.0),
                p(x0, nd),
                p(x1, nd),
                p(x1, 0.0),
                p(w, 0.0),
                p(w, d),
                p(x1, d),
                p(x1, d - nd),
                p(x0, d - nd),
                p(x0, d),
                p(0.0, d),
            ]
        }
        Shape::Trapezoidal => {
            dims.smaller("base_top", "base_bottom")?;
            let (b, t, h) = (v("base_bottom"), v("base_top"), v("depth"));
            vec![
                p(0.0, 0.0),
                p(b, 0.0),
                p((b + t) / 2.0, h),
                p((b - t) / 2.0, h),
            ]
        }
        Shape::DiagonalCut => {
            dims.smaller("cut_x", "width")?;
            dims.smaller("cut_y", "depth")?;
            let mut c = [Corner::Plain; 4];
            c[2] = Corner::Cut {
                along_in: v("cut_y"),
                along_out: v("cut_x"),
            };
            treated_rectangle(v("width"), v("depth"), c)
        }
        Shape::Nook => {
            let (w, d) = (v("width"), v("depth"));
            let (nw, nd, o) = (v("nook_width"), v("nook_depth"), v("nook_offset"));
            dims.fits(o + nw, "nook_offset + nook_width", w, "width")?;
            dims.smaller("nook_depth", "depth")?;
            vec![
                p(0.0, 0.0),
                p(w, 0.0),
                p(w, d),
                p(o + nw, d),
                p(o + nw, d + nd),
                p(o, d + nd),
                p(o, d),
                p(0.0, d),
            ]
        }
        Shape::Irregular => irregular(v("width"), v("depth"), spec.seed),
    };
    let bad = |reason: String| ForgeError::BadDims {
        shape: spec.shape,
        reason,
    };
    let poly = Polygon::new(pts).map_err(|e| bad(e.to_string()))?;
    if !poly.is_simple() {
        return Err(bad("polygon self-intersects".into()));
    }
    Ok(poly)
}

/// A scene holding only architecture: the boundary, walls along every edge
/// with inward normals, and the given room height.
pub fn boundary_stub_scene(poly: &Polygon, scene_type: &str, height: f64) -> Scene {
    let floor: Vec<[f64; 2]> = poly.vertices().iter().map(|q| [q.x, q.y]).collect();
    let mut scene = Scene::empty_room(scene_type, &floor, height);
    for (i, (a, b)) in poly.edges().enumerate() {
        let e = b - a;
        let len = e.norm();
        scene.architecture.structure_nodes.push(StructureNode {
            id: format!("wall_{:02}", i + 1),
            kind: StructureKind::Wall,
            segment: Some([[a.x, a.y], [b.x, b.y]]),
            normal: Some([-e.y / len, e.x / len, 0.0]),
            pos: None,
            extra: Default::default(),
        });
    }
    scene
}

/// Boundary stub for `spec` at the default room height.
pub fn stub_for(spec: &ShapeSpec) -> Result<Scene, ForgeError> {
    let poly = generate_boundary(spec)?;
    Ok(boundary_stub_scene(
        &poly,
        spec.shape.as_str(),
        DEFAULT_ROOM_HEIGHT,
    ))
}
