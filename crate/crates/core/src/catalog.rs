//! The five reference models.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::folding::{FoldInstruction, Stacking};
use crate::geometry::{Vec2, Vec3};
use crate::model::{Expected, Model};
use crate::strip::{EndGluing, Face, Side};

pub const MODEL_NAMES: [&str; 5] = ["crisscross", "cup", "triangular", "two_twist_cylinder", "trihexaflexagon"];

pub fn get_model(name: &str) -> Result<Model> {
    match name {
        "crisscross" => crisscross(),
        "cup" => cup(),
        "triangular" => triangular(),
        "two_twist_cylinder" => two_twist_cylinder(),
        "trihexaflexagon" => trihexaflexagon(),
        _ => Err(Error::UnknownModel(name.to_string())),
    }
}

pub fn all_models() -> Vec<Model> {
    MODEL_NAMES.iter().map(|n| get_model(n).expect("built-in models are well formed")).collect()
}

fn face(label: &str, front: Side, pts: &[(f64, f64)]) -> Face {
    Face { label: label.to_string(), front, vertices: pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect() }
}

use Side::{A, B};
use Stacking::{Above, Below};

/// Unit square between two right-isosceles halves on either side, the two
/// diagonals crossing each other across the strip. Flat-folds onto the middle
/// square. Labels give the pin order from the top and the side facing up.
pub fn crisscross() -> Result<Model> {
    let faces = vec![
        face("2A", A, &[(0., 0.), (1., 1.), (0., 1.)]),
        face("1B", B, &[(0., 0.), (1., 0.), (1., 1.)]),
        face("3A", A, &[(1., 0.), (2., 0.), (2., 1.), (1., 1.)]),
        face("5B", B, &[(2., 0.), (3., 0.), (2., 1.)]),
        face("4A", A, &[(3., 0.), (3., 1.), (2., 1.)]),
    ];
    let program = vec![
        FoldInstruction::flat(3, Below),
        FoldInstruction::flat(2, Below),
        FoldInstruction::flat(0, Above),
        FoldInstruction::flat(1, Above),
    ];
    Model::from_faces(
        "crisscross",
        3.0,
        faces,
        EndGluing::Moebius,
        program,
        Expected {
            lambda: 3.0,
            abs_linking: 3,
            linking: -3,
            determinant: 3,
            faces: 5,
            plane_groups: 1,
            symmetry_order: 1,
        },
    )
}

/// Dihedral fold angle between two faces of the cube-corner tetrahedron,
/// measured from the placed support rather than assumed.
pub fn cube_corner_leg_angle() -> f64 {
    let (x, y, z) = (Vec3::x(), Vec3::y(), Vec3::z());
    // Normals of the supports meeting along the leg OX; rotating a face about
    // that leg by the angle between them carries one support onto the other.
    let n_xy = x.cross(&y).normalize();
    let n_zx = z.cross(&x).normalize();
    n_xy.dot(&n_zx).clamp(-1.0, 1.0).acos()
}

/// Six unit right-isosceles triangles from three squares with alternating
/// diagonals, folded onto three faces of the cube-corner tetrahedron. The
/// hypotenuses fold flat around the rim; the legs make the Y of right-angle
/// folds. Faces 1A–3A line the inside, 4A–6A the outside; `front` is the side
/// on the development's upper face.
pub fn cup() -> Result<Model> {
    let faces = vec![
        face("4A", B, &[(0., 0.), (1., 1.), (0., 1.)]),
        face("1A", B, &[(0., 0.), (1., 0.), (1., 1.)]),
        face("5A", A, &[(1., 0.), (2., 0.), (1., 1.)]),
        face("2A", A, &[(2., 0.), (2., 1.), (1., 1.)]),
        face("6A", B, &[(2., 0.), (3., 1.), (2., 1.)]),
        face("3A", B, &[(2., 0.), (3., 0.), (3., 1.)]),
    ];
    let leg = cube_corner_leg_angle();
    let program = vec![
        FoldInstruction::flat(0, Above),
        FoldInstruction { crease: 1, angle: leg, stacking: Above },
        FoldInstruction::flat(2, Below),
        FoldInstruction { crease: 3, angle: 2.0 * PI - leg, stacking: Above },
        FoldInstruction::flat(4, Above),
    ];
    Model::from_faces(
        "cup",
        3.0,
        faces,
        EndGluing::Moebius,
        program,
        Expected {
            lambda: 3.0,
            abs_linking: 3,
            linking: -3,
            determinant: 3,
            faces: 6,
            plane_groups: 3,
            symmetry_order: 3,
        },
    )
}

/// Zigzag of equilateral triangles of height 1 with a half triangle at each
/// end; `full` interior triangles.
fn zigzag_faces(full: usize, fronts: &[Side]) -> (f64, Vec<Face>) {
    let s = 2.0 / 3f64.sqrt();
    let b = |k: usize| (s / 2.0 + k as f64 * s, 0.0);
    let t = |k: usize| (k as f64 * s, 1.0);
    let lambda = (full as f64 + 1.0) * s / 2.0;
    let mut pts: Vec<Vec<(f64, f64)>> = vec![vec![(0.0, 0.0), b(0), t(0)]];
    for i in 0..full {
        let k = i / 2;
        if i % 2 == 0 {
            pts.push(vec![b(k), t(k + 1), t(k)]);
        } else {
            pts.push(vec![b(k), b(k + 1), t(k + 1)]);
        }
    }
    let kb = full / 2;
    pts.push(vec![b(kb), (lambda, 1.0), t(kb)]);
    let faces = pts.iter().enumerate().map(|(i, p)| face(&(i + 1).to_string(), fronts[i % fronts.len()], p)).collect();
    (lambda, faces)
}

/// Strip of length √3 folded flat onto an equilateral triangle of height 1.
pub fn triangular() -> Result<Model> {
    let (lambda, faces) = zigzag_faces(2, &[A]);
    let program =
        vec![FoldInstruction::flat(1, Below), FoldInstruction::flat(0, Above), FoldInstruction::flat(2, Below)];
    Model::from_faces(
        "triangular",
        lambda,
        faces,
        EndGluing::Moebius,
        program,
        Expected {
            lambda: 3f64.sqrt(),
            abs_linking: 1,
            linking: 1,
            determinant: 1,
            faces: 4,
            plane_groups: 1,
            symmetry_order: 1,
        },
    )
}

/// Strip of length 2 wrapped four times around a unit right-isosceles triangle.
pub fn two_twist_cylinder() -> Result<Model> {
    let faces = vec![
        face("1", A, &[(0., 0.), (1., 1.), (0., 1.)]),
        face("2", A, &[(0., 0.), (1., 0.), (1., 1.)]),
        face("3", A, &[(1., 0.), (2., 0.), (1., 1.)]),
        face("4", A, &[(2., 0.), (2., 1.), (1., 1.)]),
    ];
    let program =
        vec![FoldInstruction::flat(0, Below), FoldInstruction::flat(1, Below), FoldInstruction::flat(2, Below)];
    Model::from_faces(
        "two_twist_cylinder",
        2.0,
        faces,
        EndGluing::Cylinder,
        program,
        Expected {
            lambda: 2.0,
            abs_linking: 1,
            linking: 1,
            determinant: 1,
            faces: 4,
            plane_groups: 1,
            symmetry_order: 1,
        },
    )
}

/// Nine-triangle strip (eight whole triangles plus two halves) of length 3√3,
/// wrapped three times around the triangular band's triangle.
pub fn trihexaflexagon() -> Result<Model> {
    let (lambda, faces) = zigzag_faces(8, &[A]);
    // Alternate the first eight folds, then tuck the last half triangle under.
    let program = (0..9).map(|k| FoldInstruction::flat(k, if k % 2 == 0 && k < 8 { Above } else { Below })).collect();
    Model::from_faces(
        "trihexaflexagon",
        lambda,
        faces,
        EndGluing::Moebius,
        program,
        Expected {
            lambda: 3.0 * 3f64.sqrt(),
            abs_linking: 3,
            linking: 3,
            determinant: 3,
            faces: 10,
            plane_groups: 1,
            symmetry_order: 1,
        },
    )
}
