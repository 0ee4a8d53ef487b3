//! The five reference models through strip validation, folding, curve
//! extraction and invariants.

use std::path::PathBuf;

use paperband::catalog::{all_models, get_model, MODEL_NAMES};
use paperband::curves::extract_curves;
use paperband::folding::symmetry_check;
use paperband::knot::{analyze, Verdict};
use paperband::strip::{develop, max_vertex_deviation, validate_strip};
use paperband::{check_layers, Component, EndGluing, Error, InflationParams, Model, Side, Tolerance, Vec3};

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn unknown_model_is_an_error() {
    assert!(matches!(get_model("hexaflexagon"), Err(Error::UnknownModel(_))));
}

#[test]
fn aspect_ratios_and_their_order() {
    let want = [
        ("triangular", 3f64.sqrt()),
        ("two_twist_cylinder", 2.0),
        ("crisscross", 3.0),
        ("cup", 3.0),
        ("trihexaflexagon", 3.0 * 3f64.sqrt()),
    ];
    for (name, lambda) in want {
        let m = get_model(name).unwrap();
        assert!((m.strip.aspect_ratio - lambda).abs() < 1e-9, "{name}");
        assert!((m.expected.lambda - lambda).abs() < 1e-9, "{name}");
        let area: f64 = m.strip.faces.iter().map(|f| f.area()).sum();
        assert!((area - lambda).abs() < 1e-9, "{name} area {area}");
    }
    let l: Vec<f64> = want.iter().map(|w| w.1).collect();
    assert!(l[0] < l[1] && l[1] < l[2] && l[3] < l[4]);
}

#[test]
fn every_model_validates() {
    for m in all_models() {
        let r = validate_strip(&m.strip, &m.gluing, &tol());
        assert!(r.is_valid(), "{}: {:?}", m.name, r.violations);
        let cycles = if m.gluing.end_gluing == EndGluing::Cylinder { 2 } else { 1 };
        assert_eq!(r.boundary_cycles, cycles, "{}", m.name);
        assert!((r.boundary_length - 2.0 * m.strip.aspect_ratio).abs() < 1e-9, "{}", m.name);
    }
}

#[test]
fn crisscross_has_six_boundary_edges_in_one_cycle() {
    let m = get_model("crisscross").unwrap();
    assert_eq!(m.gluing.boundary_cycle.len(), 6);
    let labels: Vec<&str> = m.gluing.boundary_cycle.iter().map(|b| b.label.as_str()).collect();
    assert_eq!(labels, ["a", "b", "c", "d", "e", "f"]);
    assert_eq!(m.gluing.boundary_cycles(&m.strip, &tol()).len(), 1);
    assert_eq!(m.gluing.side_pairs.len(), 5);
}

#[test]
fn perturbed_face_breaks_tiling() {
    let mut m = get_model("crisscross").unwrap();
    m.strip.faces[2].vertices[1].x += 0.1;
    m.strip.faces[2].vertices[2].x += 0.1;
    let r = validate_strip(&m.strip, &m.gluing, &tol());
    assert!(!r.is_valid());
}

#[test]
fn folds_reproduce_face_and_group_counts() {
    for m in all_models() {
        let st = m.fold(&tol()).unwrap();
        assert_eq!(st.face_count(), m.expected.faces, "{}", m.name);
        assert_eq!(st.plane_groups.len(), m.expected.plane_groups, "{}", m.name);
        assert!(st.check_invariants(&tol()).is_empty(), "{}", m.name);
        assert!(check_layers(&st, &tol()).is_empty(), "{}", m.name);
    }
}

#[test]
fn crisscross_pin_order_and_facing() {
    let m = get_model("crisscross").unwrap();
    let st = m.fold(&tol()).unwrap();
    for (f, face) in m.strip.faces.iter().enumerate() {
        let pin: usize = face.label[..1].parse().unwrap();
        // The pin enters from the top.
        assert_eq!(pin, 6 - st.layers[f], "{}", face.label);
        let a_up = face.label.ends_with('A');
        assert_eq!(st.front_up(f), a_up, "{}", face.label);
    }
}

#[test]
fn develop_inverts_fold() {
    for m in all_models() {
        let st = m.fold(&tol()).unwrap();
        let d = develop(&st, &tol()).unwrap();
        assert!(max_vertex_deviation(&d, &m.strip) < 1e-9, "{}", m.name);
    }
}

#[test]
fn torn_crease_is_not_developable() {
    let m = get_model("crisscross").unwrap();
    let mut st = m.fold(&tol()).unwrap();
    st.placements[2].translation += Vec3::new(0.0, 0.0, 0.01);
    assert!(matches!(develop(&st, &tol()), Err(Error::NotDevelopable(_))));
}

#[test]
fn curves_per_model() {
    for m in all_models() {
        let st = m.fold(&tol()).unwrap();
        let c = extract_curves(&st, &InflationParams::new(0.02), &tol()).unwrap();
        let want: Vec<Component> = if m.gluing.end_gluing == EndGluing::Cylinder {
            vec![Component::Boundary, Component::Boundary2, Component::Midline]
        } else {
            vec![Component::Boundary, Component::Midline]
        };
        assert_eq!(c.iter().map(|c| c.component).collect::<Vec<_>>(), want, "{}", m.name);
    }
}

#[test]
fn pipeline_reproduces_expected_invariants() {
    for m in all_models() {
        let st = m.fold(&tol()).unwrap();
        let r = analyze(&st, &InflationParams::new(0.02), 0, &tol()).unwrap();
        assert_eq!(r.linking_number, m.expected.linking, "{}", m.name);
        assert_eq!(r.twist_count, m.expected.abs_linking, "{}", m.name);
        assert_eq!(r.boundary.determinant, m.expected.determinant, "{}", m.name);
        assert_eq!(r.boundary.alexander_determinant, m.expected.determinant, "{}", m.name);
        assert!(r.embedded, "{}", m.name);
        let v = if m.expected.determinant == 1 { Verdict::UnknotConsistent } else { Verdict::TrefoilConsistent };
        assert_eq!(r.boundary.verdict, v, "{}", m.name);
    }
}

#[test]
fn twist_parity_by_gluing() {
    for m in all_models() {
        let st = m.fold(&tol()).unwrap();
        let r = analyze(&st, &InflationParams::new(0.02), 1, &tol()).unwrap();
        match m.gluing.end_gluing {
            EndGluing::Moebius => assert_eq!(r.twist_count % 2, 1, "{}", m.name),
            // Two half-twists: the two boundary circles link once.
            EndGluing::Cylinder => assert_eq!(r.linking_number.abs(), 1, "{}", m.name),
        }
    }
}

#[test]
fn symmetry_orders() {
    for m in all_models() {
        let st = m.fold(&tol()).unwrap();
        assert!(symmetry_check(&st, 1, &tol()));
        assert!(symmetry_check(&st, m.expected.symmetry_order, &tol()), "{}", m.name);
    }
    let cc = get_model("crisscross").unwrap().fold(&tol()).unwrap();
    assert!(!symmetry_check(&cc, 3, &tol()));
}

#[test]
fn cup_sits_on_a_cube_corner() {
    let m = get_model("cup").unwrap();
    let st = m.fold(&tol()).unwrap();
    assert_eq!(st.plane_groups.len(), 3);
    assert!(st.plane_groups.iter().all(|g| g.faces.len() == 2));
    let mut pts: Vec<Vec3> = Vec::new();
    for f in 0..st.face_count() {
        let img = st.face_image(f);
        assert_eq!(img.len(), 3);
        let mut sides: Vec<f64> = (0..3).map(|i| (img[(i + 1) % 3] - img[i]).norm()).collect();
        sides.sort_by(f64::total_cmp);
        assert!((sides[0] - 1.0).abs() < 1e-9 && (sides[1] - 1.0).abs() < 1e-9);
        assert!((sides[2] - 2f64.sqrt()).abs() < 1e-9);
        for p in img {
            if pts.iter().all(|q| (q - p).norm() > 1e-9) {
                pts.push(p);
            }
        }
    }
    // Four corners: one where three unit legs meet at right angles, and the
    // opposite equilateral face.
    assert_eq!(pts.len(), 4);
    let apex =
        pts.iter().position(|p| pts.iter().filter(|q| ((*q - p).norm() - 1.0).abs() < 1e-9).count() == 3).unwrap();
    let others: Vec<Vec3> = (0..4).filter(|&i| i != apex).map(|i| pts[i]).collect();
    for i in 0..3 {
        let (u, v) = (others[i] - pts[apex], others[(i + 1) % 3] - pts[apex]);
        assert!(u.dot(&v).abs() < 1e-9);
        assert!(((others[i] - others[(i + 1) % 3]).norm() - 2f64.sqrt()).abs() < 1e-9);
    }
    for g in &st.plane_groups {
        for h in &st.plane_groups {
            if !std::ptr::eq(g, h) {
                assert!(g.normal.dot(&h.normal).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn cup_inner_faces_show_side_a_inside() {
    let m = get_model("cup").unwrap();
    let st = m.fold(&tol()).unwrap();
    for (f, face) in m.strip.faces.iter().enumerate() {
        // Group normals point out of the cup.
        let outward = if st.front_up(f) { face.front } else { face.front.other() };
        let inner = matches!(&face.label[..1], "1" | "2" | "3");
        assert_eq!(outward == Side::A, !inner, "{}", face.label);
    }
}

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

#[test]
fn model_files_match_the_catalog() {
    for name in MODEL_NAMES {
        let path = models_dir().join(format!("{name}.toml"));
        let text = std::fs::read_to_string(&path).unwrap();
        let m = get_model(name).unwrap();
        assert_eq!(text, m.to_toml_string(), "{name}.toml has drifted from the catalog");
        let loaded = Model::load(&path).unwrap();
        assert_eq!(loaded.strip, m.strip);
        assert_eq!(loaded.gluing, m.gluing);
        assert_eq!(loaded.program, m.program);
        assert_eq!(loaded.expected, m.expected);
    }
}

#[test]
fn malformed_model_files_are_rejected() {
    assert!(matches!(Model::from_toml_str("name = 3"), Err(Error::ModelFile(_))));
    let m = get_model("triangular").unwrap();
    let broken = m.to_toml_string().replace("face = 3", "face = 9");
    assert!(matches!(Model::from_toml_str(&broken), Err(Error::ModelFile(_))));
}

fn squares(n: usize) -> Model {
    use paperband::strip::Face;
    use paperband::{Expected, Vec2};
    let faces = (0..n)
        .map(|i| {
            let x = i as f64;
            Face {
                label: format!("{}", i + 1),
                vertices: vec![Vec2::new(x, 0.0), Vec2::new(x + 1.0, 0.0), Vec2::new(x + 1.0, 1.0), Vec2::new(x, 1.0)],
                front: Side::A,
            }
        })
        .collect();
    let expected = Expected {
        lambda: n as f64,
        abs_linking: 0,
        linking: 0,
        determinant: 1,
        faces: n,
        plane_groups: 1,
        symmetry_order: 1,
    };
    Model::from_faces("squares", n as f64, faces, EndGluing::Cylinder, Vec::new(), expected).unwrap()
}

fn turn_over(x: f64) -> paperband::RigidPlacement {
    let mut p =
        paperband::RigidPlacement::about_line(Vec3::new(x, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), std::f64::consts::PI);
    p.reflect = true;
    p
}

#[test]
fn interlaced_creases_are_a_taco_taco() {
    use paperband::{FoldedState, LayerViolation, RigidPlacement};
    let m = squares(4);
    let placements = vec![
        RigidPlacement::identity(),
        turn_over(1.0),
        RigidPlacement::translation(Vec3::new(-2.0, 0.0, 0.0)),
        turn_over(2.0),
    ];
    let st = FoldedState::from_parts(m.strip, m.gluing, placements, vec![1, 3, 2, 4], &tol()).unwrap();
    assert_eq!(st.plane_groups.len(), 1);
    let v = check_layers(&st, &tol());
    assert_eq!(v.len(), 1, "{v:?}");
    assert!(matches!(v[0], LayerViolation::TacoTaco { seams: (0, 2), .. }));
}

#[test]
fn nested_creases_are_fine() {
    use paperband::{FoldedState, RigidPlacement};
    let m = squares(4);
    let placements = vec![
        RigidPlacement::identity(),
        turn_over(1.0),
        RigidPlacement::translation(Vec3::new(-2.0, 0.0, 0.0)),
        turn_over(2.0),
    ];
    let st = FoldedState::from_parts(m.strip, m.gluing, placements, vec![1, 4, 3, 2], &tol()).unwrap();
    assert!(check_layers(&st, &tol()).iter().all(|v| !matches!(v, paperband::LayerViolation::TacoTaco { .. })));
}

#[test]
fn face_inside_a_crease_is_a_taco_tortilla() {
    use paperband::{FoldedState, LayerViolation, RigidPlacement};
    let m = squares(3);
    let placements =
        vec![RigidPlacement::identity(), turn_over(1.0), RigidPlacement::translation(Vec3::new(-1.5, 0.0, 0.0))];
    let st = FoldedState::from_parts(m.strip, m.gluing, placements, vec![1, 3, 2], &tol()).unwrap();
    let v = check_layers(&st, &tol());
    assert_eq!(v.len(), 1, "{v:?}");
    assert!(matches!(v[0], LayerViolation::TacoTortilla { seam: 0, face: 2, .. }));
}

#[test]
fn layers_must_be_a_permutation() {
    use paperband::{FoldedState, RigidPlacement};
    let m = squares(2);
    let r = FoldedState::from_parts(
        m.strip,
        m.gluing,
        vec![RigidPlacement::identity(), turn_over(1.0)],
        vec![1, 1],
        &tol(),
    );
    assert!(matches!(r, Err(Error::LayerConflict(_))));
}
