mod common;

use proptest::prelude::*;

use zonekit::denoise::{denoise, DenoiseConfig};
use zonekit::forge::{generate_boundary, Shape, ShapeSpec};
use zonekit::geom::{
    box_intersection_volume, convex_iou, polygon_clip_area, triangulate, Footprint, Point2,
    ZoneHull,
};
use zonekit::report::{corpus_report, CorpusReport};
use zonekit::reward::{geometric_terms, RewardConfig};
use zonekit::scene::{extract_answer, serialize, Asset};

fn shape() -> impl Strategy<Value = Shape> {
    (0usize..9).prop_map(|i| Shape::ALL[i])
}

fn footprint() -> impl Strategy<Value = Footprint> {
    (
        -2.0f64..9.0,
        -2.0f64..9.0,
        0.0f64..6.3,
        0.1f64..3.0,
        0.1f64..3.0,
    )
        .prop_map(|(x, y, yaw, w, d)| Footprint::new(Point2::new(x, y), yaw, w, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn clipped_area_is_bounded(s in shape(), seed in 0u64..50, fp in footprint()) {
        let room = generate_boundary(&ShapeSpec::new(s).seed(seed)).unwrap();
        let a = polygon_clip_area(&fp.corners, room.vertices()).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!(a <= fp.area() + 1e-9);
        prop_assert!(a <= room.area() + 1e-9);
    }

    #[test]
    fn triangles_tile_the_room(s in shape(), seed in 0u64..200) {
        let room = generate_boundary(&ShapeSpec::new(s).seed(seed)).unwrap();
        let tris = triangulate(room.vertices()).unwrap();
        let sum: f64 = tris
            .iter()
            .map(|[a, b, c]| ((*b - *a).cross(*c - *a)).abs() / 2.0)
            .sum();
        prop_assert!((sum - room.area()).abs() < 1e-9);
        prop_assert!(tris.len() <= room.len() - 2);
    }

    #[test]
    fn iou_symmetric_and_unit(a in footprint(), b in footprint()) {
        let (ha, hb) = (ZoneHull::of_points(&a.corners), ZoneHull::of_points(&b.corners));
        let ab = convex_iou(&ha, &hb);
        prop_assert!((ab - convex_iou(&hb, &ha)).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!((convex_iou(&ha, &ha) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn box_overlap_symmetric_and_bounded(
        p in (0.0f64..3.0, 0.0f64..3.0, 0.0f64..1.0, 0.0f64..6.3),
        q in (0.0f64..3.0, 0.0f64..3.0, 0.0f64..1.0, 0.0f64..6.3),
    ) {
        let mut a = Asset::floor_box("a", "box", [p.0, p.1], [1.0, 0.8, 1.2], p.3);
        a.pos[2] += p.2;
        let mut b = Asset::floor_box("b", "box", [q.0, q.1], [0.7, 1.1, 0.9], q.3);
        b.pos[2] += q.2;
        let v = box_intersection_volume(&a, &b);
        prop_assert!((v - box_intersection_volume(&b, &a)).abs() < 1e-12);
        prop_assert!(v <= 0.7 * 1.1 * 0.9 + 1e-9);
    }

    #[test]
    fn rewards_translation_invariant(s in shape(), seed in 0u64..40, dx in -50.0f64..50.0, dy in -50.0f64..50.0) {
        let (scene, _) = common::corrupted_scene(s, seed);
        let mut moved = scene.clone();
        for v in &mut moved.architecture.boundary_polygon {
            v[0] += dx;
            v[1] += dy;
        }
        for a in moved.assets_mut() {
            a.pos[0] += dx;
            a.pos[1] += dy;
        }
        let cfg = RewardConfig::default();
        let (t0, t1) = (geometric_terms(&scene, &cfg).unwrap(), geometric_terms(&moved, &cfg).unwrap());
        prop_assert!((t0.r_bound - t1.r_bound).abs() < 1e-6);
        prop_assert!((t0.r_zone - t1.r_zone).abs() < 1e-6);
        prop_assert!((t0.r_col - t1.r_col).abs() < 1e-6);
    }

    #[test]
    fn extraction_is_idempotent(s in shape(), seed in 0u64..20, prefix in "[a-z <>/]{0,20}") {
        let text = format!("{prefix}<answer>{}</answer>", serialize(&common::valid_scene(s, seed).0));
        let once = extract_answer(&text).unwrap();
        prop_assert_eq!(extract_answer(&once).unwrap(), once);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn denoise_conserves_structure(s in shape(), seed in 0u64..100, dseed in 0u64..1000) {
        let (scene, _) = common::corrupted_scene(s, seed);
        let cfg = DenoiseConfig { seed: dseed, max_iters: 2000, ..Default::default() };
        let (out, trace) = denoise(&scene, &RewardConfig::default(), &cfg).unwrap();
        prop_assert_eq!(&out.architecture, &scene.architecture);
        prop_assert_eq!(&out.zone_topology, &scene.zone_topology);
        for (za, zb) in scene.functional_zones.iter().zip(&out.functional_zones) {
            prop_assert_eq!(&za.spatial_graph, &zb.spatial_graph);
            prop_assert_eq!(za.assets.len(), zb.assets.len());
            for (a, b) in za.assets.iter().zip(&zb.assets) {
                prop_assert_eq!((&a.id, &a.category, a.size, a.pos[2]), (&b.id, &b.category, b.size, b.pos[2]));
                prop_assert_eq!((a.rot[0], a.rot[1]), (b.rot[0], b.rot[1]));
            }
        }
        let mut best = f64::NEG_INFINITY;
        for step in &trace.steps {
            prop_assert!(step.best_total >= best);
            best = step.best_total;
        }
    }

    #[test]
    fn report_means_are_count_weighted(split in 1usize..9, seed in 0u64..50) {
        let inputs: Vec<(String, String)> = (0..10u64)
            .map(|i| {
                let text = if i % 4 == 3 {
                    "garbage".to_string()
                } else {
                    serialize(&common::corrupted_scene(Shape::ALL[(i % 9) as usize], seed + i).0)
                };
                (format!("s{i:02}"), text)
            })
            .collect();
        let whole = corpus_report(&inputs).unwrap();
        let (a, b) = inputs.split_at(split);
        let merged = corpus_report(a).unwrap().merge(corpus_report(b).unwrap()).unwrap();
        prop_assert_eq!(&merged, &whole);
        let parsed: Vec<_> = whole.rows.iter().filter(|r| r.parsed).filter_map(|r| r.metrics).collect();
        let hand = parsed.iter().map(|m| m.oob_volume).sum::<f64>() / parsed.len() as f64;
        prop_assert!((whole.mean_oob.unwrap() - hand).abs() < 1e-12);
        prop_assert_eq!(whole.to_csv().unwrap(), CorpusReport::from_rows(whole.rows.clone()).unwrap().to_csv().unwrap());
    }
}
