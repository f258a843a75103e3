use super::*;
use crate::scene::{Asset, FunctionalZone, IntraZoneRelation};

const ROOM4: [[f64; 2]; 4] = [[0., 0.], [4., 0.], [4., 4.], [0., 4.]];
const L_ROOM: [[f64; 2]; 6] = [[0., 0.], [4., 0.], [4., 2.], [2., 2.], [2., 4.], [0., 4.]];

fn cube(id: &str, xy: [f64; 2]) -> Asset {
    Asset::floor_box(id, "box", xy, [1., 1., 1.], 0.0)
}

fn room_with(floor: &[[f64; 2]], zones: Vec<FunctionalZone>) -> Scene {
    let mut s = Scene::empty_room("test", floor, 2.8);
    for z in zones {
        s.push_zone(z);
    }
    s
}

fn cfg() -> RewardConfig {
    RewardConfig::default()
}

#[test]
fn defaults_match_hyperparameter_table() {
    let c = cfg();
    assert_eq!(
        (c.lambda1, c.lambda2, c.lambda3, c.fmt_reward),
        (1.0, 0.5, 2.0, 1.0)
    );
    assert!(!c.ordered_zone_pairs);
}

#[test]
fn config_parsing() {
    let c = RewardConfig::from_json(r#"{"lambda1": 3, "fmt_reward": 0.5}"#).unwrap();
    assert_eq!((c.lambda1, c.lambda2, c.fmt_reward), (3.0, 0.5, 0.5));
    assert!(RewardConfig::from_json(r#"{"lambda2": -1}"#).is_err());
    assert!(RewardConfig::from_json(r#"{"lambda9": 1}"#).is_err());
}

#[test]
fn bound_inside_half_out_and_fully_out() {
    let inside = room_with(
        &ROOM4,
        vec![FunctionalZone::new("z", "z").with_asset(cube("a", [2., 2.]))],
    );
    assert_eq!(r_bound(&inside, &cfg()).unwrap(), 0.0);

    let half = room_with(
        &ROOM4,
        vec![FunctionalZone::new("z", "z").with_asset(cube("a", [4., 2.]))],
    );
    assert_eq!(r_bound(&half, &cfg()).unwrap(), -0.5);

    let out = room_with(
        &ROOM4,
        vec![FunctionalZone::new("z", "z").with_asset(Asset::floor_box(
            "a",
            "x",
            [9., 9.],
            [2., 1., 1.5],
            0.3,
        ))],
    );
    assert!((r_bound(&out, &cfg()).unwrap() - -3.0).abs() < 1e-12);
}

#[test]
fn bound_paths_agree_on_l_room() {
    let s = room_with(
        &L_ROOM,
        vec![FunctionalZone::new("z", "z").with_asset(Asset::floor_box(
            "a",
            "x",
            [2.1, 2.6],
            [1.2, 1., 0.7],
            0.4,
        ))],
    );
    let a = r_bound_via(&s, &cfg(), BoundaryPath::Decomposition).unwrap();
    let b = r_bound_via(&s, &cfg(), BoundaryPath::DirectClip).unwrap();
    assert!(a < 0.0);
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn decomposition_path_rejects_trapezoid() {
    let s = room_with(&[[0., 0.], [4., 0.], [3., 3.], [1., 3.]], vec![]);
    assert!(matches!(
        r_bound_via(&s, &cfg(), BoundaryPath::Decomposition),
        Err(GeomError::NotRectilinear { .. })
    ));
    assert_eq!(r_bound(&s, &cfg()).unwrap(), 0.0);
}

#[test]
fn zone_term() {
    let single = room_with(
        &ROOM4,
        vec![FunctionalZone::new("z", "z").with_asset(cube("a", [1., 1.]))],
    );
    assert_eq!(r_zone(&single, &cfg()).unwrap(), 0.0);

    // IoU of identical hulls is 1
    let twins = room_with(
        &ROOM4,
        vec![
            FunctionalZone::new("z1", "z").with_asset(cube("a", [2., 2.])),
            FunctionalZone::new("z2", "z").with_asset(cube("b", [2., 2.])),
        ],
    );
    assert!((r_zone(&twins, &cfg()).unwrap() - (-0.5 * 1.0)).abs() < 1e-12);
    let ordered = RewardConfig {
        ordered_zone_pairs: true,
        ..cfg()
    };
    assert!((r_zone(&twins, &ordered).unwrap() - (-0.5 * 2.0)).abs() < 1e-12);

    // hull [3, 5] x [1.5, 2.5] = 2 m², straddling the x = 4 wall: 1 m² outside
    let spill = room_with(
        &ROOM4,
        vec![FunctionalZone::new("z", "z")
            .with_asset(Asset::floor_box("a", "x", [3.5, 2.], [1., 1., 1.], 0.0))
            .with_asset(Asset::floor_box("b", "x", [4.5, 2.], [1., 1., 1.], 0.0))],
    );
    assert!((r_zone(&spill, &cfg()).unwrap() - (-0.5 * 1.0)).abs() < 1e-12);
}

#[test]
fn collision_term_and_exemption() {
    let apart = room_with(
        &ROOM4,
        vec![FunctionalZone::new("z", "z")
            .with_asset(cube("a", [1., 1.]))
            .with_asset(cube("b", [3., 3.]))],
    );
    assert_eq!(r_col(&apart, &cfg()), 0.0);

    let coincident = room_with(
        &ROOM4,
        vec![FunctionalZone::new("z", "z")
            .with_asset(cube("a", [2., 2.]))
            .with_asset(cube("b", [2., 2.]))],
    );
    assert_eq!(r_col(&coincident, &cfg()), -2.0 * 1.0);

    let mut lamp = Asset::floor_box("lamp", "lamp", [1., 1.], [0.3, 0.5, 0.3], 0.0);
    lamp.pos[2] = 0.6 + 0.25 - 0.01; // sinks 1 cm into the nightstand top
    let stacked = room_with(
        &ROOM4,
        vec![FunctionalZone::new("z", "z")
            .with_asset(Asset::floor_box(
                "stand",
                "nightstand",
                [1., 1.],
                [0.5, 0.6, 0.4],
                0.0,
            ))
            .with_asset(lamp)
            .with_relation("lamp", "stand", IntraZoneRelation::SupportedBy)],
    );
    assert_eq!(r_col(&stacked, &cfg()), 0.0);
    assert_eq!(geometric_terms(&stacked, &cfg()).unwrap().r_col, 0.0);
}

#[test]
fn format_term() {
    let valid = room_with(
        &ROOM4,
        vec![FunctionalZone::new("z", "z").with_asset(cube("a", [2., 2.]))],
    );
    let report = validate(&valid);
    assert_eq!(r_fmt(Some(&report), &cfg()), 1.0);
    assert_eq!(r_fmt(None, &cfg()), 0.0);

    let dup = room_with(
        &ROOM4,
        vec![
            FunctionalZone::new("z1", "z").with_asset(cube("a", [1., 1.])),
            FunctionalZone::new("z2", "z").with_asset(cube("a", [3., 3.])),
        ],
    );
    let report = validate(&dup);
    assert!(report.has_code("DUP_ASSET_ID"));
    assert_eq!(r_fmt(Some(&report), &cfg()), 0.0);
}

#[test]
fn composite() {
    let clean = room_with(
        &ROOM4,
        vec![FunctionalZone::new("z", "z").with_asset(cube("a", [2., 2.]))],
    );
    let b = composite_reward(RewardInput::Scene(&clean), &cfg());
    assert_eq!(b, RewardBreakdown::new(1.0, 0.0, 0.0, 0.0));
    assert_eq!(b.total, 1.0);

    // half-out asset plus a coincident pair elsewhere, one zone
    let messy = room_with(
        &[[0., 0.], [4., 0.], [4., 4.], [0., 4.]],
        vec![FunctionalZone::new("z", "z")
            .with_asset(cube("half", [4., 2.]))
            .with_asset(cube("p", [1., 1.]))
            .with_asset(cube("q", [1., 1.]))],
    );
    let mut solo = messy.clone();
    // keep the zone hull inside the room so only r_bound and r_col fire
    solo.functional_zones[0].assets[0].pos[0] = 4.0;
    let b = composite_reward(RewardInput::Scene(&solo), &cfg());
    assert_eq!(b.r_bound, -0.5);
    assert_eq!(b.r_col, -2.0);
    assert!((b.total - (b.r_fmt + b.r_bound + b.r_zone + b.r_col)).abs() < 1e-12);

    let garbage = composite_reward(RewardInput::Text("the model rambled"), &cfg());
    assert_eq!(garbage, RewardBreakdown::default());
    assert_eq!(garbage.total, 0.0);
}

#[test]
fn translation_invariance() {
    let s = room_with(
        &L_ROOM,
        vec![
            FunctionalZone::new("z1", "z")
                .with_asset(Asset::floor_box("a", "x", [1.9, 2.5], [1.0, 0.8, 0.6], 0.3))
                .with_asset(Asset::floor_box("b", "x", [1.5, 2.2], [0.7, 0.8, 0.6], 1.1)),
            FunctionalZone::new("z2", "z").with_asset(Asset::floor_box(
                "c",
                "x",
                [3.8, 1.0],
                [0.9, 0.8, 0.9],
                0.0,
            )),
        ],
    );
    let base = geometric_terms(&s, &cfg()).unwrap();
    let mut moved = s.clone();
    let (dx, dy) = (13.25, -7.5);
    for v in &mut moved.architecture.boundary_polygon {
        v[0] += dx;
        v[1] += dy;
    }
    for a in moved.assets_mut() {
        a.pos[0] += dx;
        a.pos[1] += dy;
    }
    let t = geometric_terms(&moved, &cfg()).unwrap();
    assert!((base.r_bound - t.r_bound).abs() < 1e-6);
    assert!((base.r_zone - t.r_zone).abs() < 1e-6);
    assert!((base.r_col - t.r_col).abs() < 1e-6);
    assert!(base.r_bound < 0.0 && base.r_col < 0.0);
}

#[test]
fn incremental_update_matches_full_evaluation() {
    let s = room_with(
        &L_ROOM,
        vec![
            FunctionalZone::new("z1", "z")
                .with_asset(cube("a", [1., 1.]))
                .with_asset(cube("b", [1.4, 1.2])),
            FunctionalZone::new("z2", "z").with_asset(cube("c", [3., 1.])),
        ],
    );
    let ctx = ScoringContext::new(&s, cfg()).unwrap();
    let mut st = ctx.evaluate_scene(&s);
    let before = ctx.terms(&st);
    let pose = Pose {
        x: 3.3,
        y: 1.4,
        yaw: 0.7,
    };
    let undo = ctx.update(&mut st, 1, pose);
    let mut poses = ScoringContext::poses_of(&s);
    poses[1] = pose;
    let full = ctx.evaluate(poses);
    assert_eq!(ctx.terms(&st), ctx.terms(&full));
    ctx.revert(&mut st, undo);
    assert_eq!(ctx.terms(&st), before);
}
