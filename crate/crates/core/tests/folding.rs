//! Folding, inflation and curve tracing on small hand-built strips and on the
//! catalog.

use std::f64::consts::PI;

use paperband::catalog::get_model;
use paperband::curves::inflate;
use paperband::geometry::generic_direction;
use paperband::strip::{develop, max_vertex_deviation};
use paperband::{
    crossing_diagram, extract_curves, Component, EndGluing, Error, Expected, Face, FoldInstruction, InflationParams,
    Model, Side, Stacking, Tolerance, Vec2, Vec3,
};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn two_squares(program: Vec<FoldInstruction>) -> Model {
    let sq = |x: f64, l: &str| Face {
        label: l.into(),
        vertices: vec![Vec2::new(x, 0.0), Vec2::new(x + 1.0, 0.0), Vec2::new(x + 1.0, 1.0), Vec2::new(x, 1.0)],
        front: Side::A,
    };
    let expected = Expected {
        lambda: 2.0,
        abs_linking: 0,
        linking: 0,
        determinant: 1,
        faces: 2,
        plane_groups: 1,
        symmetry_order: 1,
    };
    Model::from_faces("two", 2.0, vec![sq(0.0, "1"), sq(1.0, "2")], EndGluing::Moebius, program, expected).unwrap()
}

#[test]
fn empty_program_leaves_the_strip_flat() {
    let m = two_squares(Vec::new());
    let st = m.fold(&tol()).unwrap();
    assert_eq!(st.plane_groups.len(), 1);
    assert!(max_vertex_deviation(&develop(&st, &tol()).unwrap(), &m.strip) < 1e-12);
    for f in 0..2 {
        for (p, q) in st.face_image(f).iter().zip(&m.strip.faces[f].vertices) {
            assert!((p - Vec3::new(q.x, q.y, 0.0)).norm() < 1e-12);
        }
    }
    // The faces tile the plane without covering each other: one layer, no lift.
    let moved = inflate(&st, &InflationParams::new(0.01), &tol()).unwrap();
    assert!(moved.iter().zip(&st.placements).all(|(a, b)| (a.translation - b.translation).norm() < 1e-12));
}

#[test]
fn one_flat_fold_stacks_two_squares() {
    let m = two_squares(vec![FoldInstruction::flat(0, Stacking::Above)]);
    let st = m.fold(&tol()).unwrap();
    assert_eq!(st.plane_groups.len(), 1);
    assert_eq!(st.layers, vec![1, 2]);
    let (a, b) = (st.face_image(0), st.face_image(1));
    for p in &b {
        assert!(a.iter().any(|q| (p - q).norm() < 1e-12), "{p:?}");
    }
    assert!(st.front_up(0) && !st.front_up(1));
    let below = two_squares(vec![FoldInstruction::flat(0, Stacking::Below)]).fold(&tol()).unwrap();
    assert_eq!(below.layers, vec![2, 1]);
}

#[test]
fn right_angle_fold_makes_two_groups() {
    let m = two_squares(vec![FoldInstruction { crease: 0, angle: PI / 2.0, stacking: Stacking::Above }]);
    let st = m.fold(&tol()).unwrap();
    assert_eq!(st.plane_groups.len(), 2);
    assert!(st.plane_groups[0].normal.dot(&st.plane_groups[1].normal).abs() < 1e-12);
    assert!(max_vertex_deviation(&develop(&st, &tol()).unwrap(), &m.strip) < 1e-12);
}

#[test]
fn bad_programs_are_rejected() {
    for p in [
        vec![FoldInstruction::flat(3, Stacking::Above)],
        vec![FoldInstruction::flat(0, Stacking::Above), FoldInstruction::flat(0, Stacking::Below)],
        vec![FoldInstruction { crease: 0, angle: 0.0, stacking: Stacking::Above }],
    ] {
        assert!(matches!(two_squares(p).fold(&tol()), Err(Error::InvalidInput(_))));
    }
}

#[test]
fn stretched_placement_is_not_developable() {
    let mut st = get_model("crisscross").unwrap().fold(&tol()).unwrap();
    st.placements[2].rotation *= 1.01;
    assert!(!st.check_invariants(&tol()).is_empty());
    assert!(matches!(develop(&st, &tol()), Err(Error::NotDevelopable(_))));
}

#[test]
fn crisscross_layers_sit_at_multiples_of_the_gap() {
    let st = get_model("crisscross").unwrap().fold(&tol()).unwrap();
    let eps = 0.01;
    let moved = inflate(&st, &InflationParams::new(eps), &tol()).unwrap();
    let mut heights = Vec::new();
    for (f, pl) in moved.iter().enumerate() {
        let zs: Vec<f64> = st.strip.faces[f].vertices.iter().map(|v| pl.apply_dev(v).z).collect();
        assert!(zs.iter().all(|z| (z - eps * st.layers[f] as f64).abs() < 1e-12), "{zs:?}");
        heights.push(zs[0]);
    }
    heights.sort_by(f64::total_cmp);
    for (k, h) in heights.iter().enumerate() {
        assert!((h - eps * (k + 1) as f64).abs() < 1e-12);
    }
}

#[test]
fn cup_faces_move_out_along_their_normals() {
    let st = get_model("cup").unwrap().fold(&tol()).unwrap();
    let eps = 0.01;
    let moved = inflate(&st, &InflationParams::new(eps), &tol()).unwrap();
    for (f, pl) in moved.iter().enumerate() {
        let before = st.face_image(f);
        let after: Vec<Vec3> = st.strip.faces[f].vertices.iter().map(|v| pl.apply_dev(v)).collect();
        let d = after[0] - before[0];
        // A pure translation, whose normal part is one gap per layer.
        assert!(after.iter().zip(&before).all(|(a, b)| (a - b - d).norm() < 1e-12));
        let n = st.plane_groups[st.group_of[f]].normal;
        assert!((d.dot(&n) - eps * st.layers[f] as f64).abs() < 1e-12);
    }
}

#[test]
fn crisscross_boundary_follows_the_square() {
    let st = get_model("crisscross").unwrap().fold(&tol()).unwrap();
    for eps in [0.01, 0.001] {
        let curves = extract_curves(&st, &InflationParams::new(eps), &tol()).unwrap();
        assert_eq!(curves.len(), 2);
        let b = &curves[0];
        assert_eq!(b.component, Component::Boundary);
        // Every vertex lies on the unit square's edges, up to the connector offsets.
        let off = |p: &Vec3| p.x.min(1.0 - p.x).abs().min(p.y.min(1.0 - p.y).abs());
        assert!(b.points.iter().all(|p| off(p) <= eps / 2.0 + 1e-12));
        // Six unit edges, the rest is vertical connectors of order ε.
        assert!(b.length() > 6.0 && b.length() < 6.0 + 50.0 * eps, "{}", b.length());
    }
}

#[test]
fn crisscross_crossing_signs_sum_to_minus_six() {
    let st = get_model("crisscross").unwrap().fold(&tol()).unwrap();
    for eps in [0.05, 0.02, 0.01, 0.005] {
        let curves = extract_curves(&st, &InflationParams::new(eps), &tol()).unwrap();
        let d = crossing_diagram(&curves, 0, &tol()).unwrap();
        assert_eq!(d.inter_component_signs(0, 1).sum::<i64>(), -6, "eps {eps}");
    }
}

#[test]
fn projection_direction_is_near_vertical_for_the_crisscross() {
    let st = get_model("crisscross").unwrap().fold(&tol()).unwrap();
    let curves = extract_curves(&st, &InflationParams::new(0.01), &tol()).unwrap();
    let raw: Vec<Vec<Vec3>> = curves.iter().map(|c| c.points.clone()).collect();
    let d = generic_direction(&raw, 0, &tol()).unwrap();
    assert!(d.dot(&Vec3::z()).abs().acos() < 0.2, "{d:?}");
}

#[test]
fn inset_zero_joints_still_clear_each_other() {
    use paperband::smooth::{build_mesh, check_embedded, MeshParams};
    // Joints span exactly their crease and nested half-turns keep their gap,
    // so full-width joints do not collide in this construction.
    let st = get_model("crisscross").unwrap().fold(&tol()).unwrap();
    let params = MeshParams { joint_inset: 0.0, ..MeshParams::new(0.02) };
    let mesh = build_mesh(&st, &params, false, &tol()).unwrap();
    assert!(check_embedded(&mesh, tol().eps_point).embedded());
}
