//! Fold programs, layered folded states and their stackability checks.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{project, projection_basis, RigidPlacement, Tolerance, Vec2, Vec3};
use crate::strip::{is_convex_ccw, polygon_area, CreasedStrip, GluingDiagram, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stacking {
    /// Moving faces end up on the front side of the stationary face at the crease.
    Above,
    /// Moving faces end up behind it ("around the back").
    Below,
}

/// Rotate every face after `crease` about the crease line by `angle`
/// (right-hand rule about the crease direction `start → end`). `angle = π`
/// is a flat fold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldInstruction {
    pub crease: usize,
    pub angle: f64,
    pub stacking: Stacking,
}

impl FoldInstruction {
    pub fn flat(crease: usize, stacking: Stacking) -> Self {
        FoldInstruction { crease, angle: PI, stacking }
    }

    pub fn is_flat(&self) -> bool {
        (self.angle - PI).abs() < 1e-12
    }
}

/// Maximal set of coplanar faces, listed bottom to top along `normal`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneGroup {
    pub faces: Vec<usize>,
    pub normal: Vec3,
    pub point: Vec3,
}

#[derive(Clone, Debug)]
pub struct FoldedState {
    pub strip: CreasedStrip,
    pub gluing: GluingDiagram,
    pub placements: Vec<RigidPlacement>,
    pub plane_groups: Vec<PlaneGroup>,
    /// 1-based position of each face within its plane group (the pin order).
    pub layers: Vec<usize>,
    pub group_of: Vec<usize>,
}

fn same_plane(n1: &Vec3, p1: &Vec3, n2: &Vec3, p2: &Vec3, tol: &Tolerance) -> bool {
    n1.cross(n2).norm() <= tol.eps_angle.max(1e-9) && (p2 - p1).dot(n1).abs() <= tol.eps_point
}

impl FoldedState {
    /// Builds a state from explicit placements and per-face layers. Plane
    /// groups are found by coplanarity; layers are read along each group's
    /// canonical normal (see [`canonical_normals`]).
    pub fn from_parts(
        strip: CreasedStrip,
        gluing: GluingDiagram,
        placements: Vec<RigidPlacement>,
        layers: Vec<usize>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let n = strip.faces.len();
        if placements.len() != n || layers.len() != n {
            return Err(Error::InvalidInput("one placement and one layer per face required".into()));
        }
        let mut groups: Vec<PlaneGroup> = Vec::new();
        for f in 0..n {
            let nf = placements[f].front_normal();
            let pf = placements[f].apply_dev(&strip.faces[f].vertices[0]);
            match groups.iter_mut().find(|g| same_plane(&g.normal, &g.point, &nf, &pf, tol)) {
                Some(g) => g.faces.push(f),
                None => groups.push(PlaneGroup { faces: vec![f], normal: nf, point: pf }),
            }
        }
        let mut state = FoldedState { strip, gluing, placements, plane_groups: groups, layers, group_of: vec![0; n] };
        let normals = canonical_normals(&state);
        for (g, nrm) in state.plane_groups.iter_mut().zip(normals) {
            g.normal = nrm;
        }
        for gi in 0..state.plane_groups.len() {
            let mut fs = state.plane_groups[gi].faces.clone();
            fs.sort_by_key(|&f| state.layers[f]);
            let expected: Vec<usize> = (1..=fs.len()).collect();
            let got: Vec<usize> = fs.iter().map(|&f| state.layers[f]).collect();
            if got != expected {
                return Err(Error::LayerConflict(format!("group {gi} layers {got:?} are not 1..{}", fs.len())));
            }
            for &f in &fs {
                state.group_of[f] = gi;
            }
            state.plane_groups[gi].faces = fs;
        }
        Ok(state)
    }

    pub fn face_image(&self, f: usize) -> Vec<Vec3> {
        self.strip.faces[f].vertices.iter().map(|v| self.placements[f].apply_dev(v)).collect()
    }

    pub fn face_count(&self) -> usize {
        self.strip.faces.len()
    }

    /// Whether the face's front (development +z) side faces along its group normal.
    pub fn front_up(&self, f: usize) -> bool {
        self.placements[f].front_normal().dot(&self.plane_groups[self.group_of[f]].normal) > 0.0
    }

    /// Checks congruence, coplanarity, layer permutations and glued-edge
    /// coincidence.
    pub fn check_invariants(&self, tol: &Tolerance) -> Vec<Violation> {
        let mut out = Vec::new();
        for (f, face) in self.strip.faces.iter().enumerate() {
            if !self.placements[f].is_proper(tol) {
                out.push(Violation { invariant: "placement_proper", entity: format!("face {f}") });
            }
            let img = self.face_image(f);
            let m = face.vertices.len();
            for i in 0..m {
                let dev = (face.vertices[(i + 1) % m] - face.vertices[i]).norm();
                let sp = (img[(i + 1) % m] - img[i]).norm();
                if (dev - sp).abs() > tol.eps_point {
                    out.push(Violation { invariant: "face_congruent", entity: format!("face {f} edge {i}") });
                }
            }
        }
        for (gi, g) in self.plane_groups.iter().enumerate() {
            for &f in &g.faces {
                if self.face_image(f).iter().any(|p| (p - g.point).dot(&g.normal).abs() > tol.eps_point) {
                    out.push(Violation { invariant: "group_coplanar", entity: format!("face {f} in group {gi}") });
                }
            }
        }
        for sp in &self.gluing.side_pairs {
            let pa = &self.placements[sp.a.face];
            let pb = &self.placements[sp.b.face];
            let d = (pa.apply_dev(&sp.a.from) - pb.apply_dev(&sp.b.from))
                .norm()
                .max((pa.apply_dev(&sp.a.to) - pb.apply_dev(&sp.b.to)).norm());
            if d > tol.eps_point {
                out.push(Violation {
                    invariant: "glued_edges_coincide",
                    entity: format!("pair {} off by {d:.3e}", sp.label),
                });
            }
        }
        out
    }

    /// Seam `i` (side pair index) as the two faces it joins.
    pub fn seam_faces(&self, i: usize) -> (usize, usize) {
        let sp = &self.gluing.side_pairs[i];
        (sp.a.face, sp.b.face)
    }

    /// Whether seam `i` is a flat fold (both faces in one plane group).
    pub fn seam_is_flat(&self, i: usize) -> bool {
        let (a, b) = self.seam_faces(i);
        self.group_of[a] == self.group_of[b]
    }
}

/// Canonical orientation of every plane group: for a single group the front
/// normal of face 0, otherwise the normal pointing away from the centroid of
/// all face vertices (the outside of a polyhedral support).
pub fn canonical_normals(state: &FoldedState) -> Vec<Vec3> {
    let groups = &state.plane_groups;
    if groups.len() == 1 {
        return vec![state.placements[0].front_normal()];
    }
    let all: Vec<Vec3> = (0..state.face_count()).flat_map(|f| state.face_image(f)).collect();
    let centroid = all.iter().sum::<Vec3>() / all.len() as f64;
    groups
        .iter()
        .map(|g| {
            let s = (g.point - centroid).dot(&g.normal);
            if s.abs() < 1e-12 {
                state.placements[g.faces[0]].front_normal()
            } else if s > 0.0 {
                g.normal
            } else {
                -g.normal
            }
        })
        .collect()
}

struct Stack {
    normal: Vec3,
    point: Vec3,
    faces: Vec<usize>,
}

/// Executes a fold program on a flat strip.
pub fn fold(
    strip: &CreasedStrip,
    gluing: &GluingDiagram,
    program: &[FoldInstruction],
    tol: &Tolerance,
) -> Result<FoldedState> {
    let n = strip.faces.len();
    let mut seen = vec![false; strip.creases.len()];
    for ins in program {
        if ins.crease >= strip.creases.len() {
            return Err(Error::InvalidInput(format!("crease {} does not exist", ins.crease)));
        }
        if std::mem::replace(&mut seen[ins.crease], true) {
            return Err(Error::InvalidInput(format!("crease {} folded twice", ins.crease)));
        }
        if !(ins.angle > 0.0 && ins.angle < 2.0 * PI) {
            return Err(Error::InvalidInput(format!("fold angle {} outside (0, 2π)", ins.angle)));
        }
    }

    let mut placements = vec![RigidPlacement::identity(); n];
    let mut stacks = vec![Stack { normal: Vec3::z(), point: Vec3::zeros(), faces: (0..n).collect() }];

    for ins in program {
        let c = &strip.creases[ins.crease];
        let stationary = c.faces.0;
        let p0 = placements[stationary].apply_dev(&c.start);
        let p1 = placements[stationary].apply_dev(&c.end);
        let rot = RigidPlacement::about_line(p0, p1 - p0, ins.angle);
        let moving = |f: usize| f > stationary;

        let mut carried: Vec<(Vec3, Vec3, Vec<usize>)> = Vec::new();
        for s in stacks.iter_mut() {
            let (mv, stay): (Vec<usize>, Vec<usize>) = s.faces.iter().partition(|&&f| moving(f));
            if !mv.is_empty() {
                carried.push((rot.apply_vector(&s.normal), rot.apply(&s.point), mv));
            }
            s.faces = stay;
        }
        stacks.retain(|s| !s.faces.is_empty());
        for f in (stationary + 1)..n {
            placements[f] = rot.compose(&placements[f]);
            if ins.is_flat() {
                placements[f].reflect = !placements[f].reflect;
            }
        }

        let up = placements[stationary].front_normal();
        for (nrm, pt, mut faces) in carried {
            match stacks.iter_mut().find(|s| same_plane(&s.normal, &s.point, &nrm, &pt, tol)) {
                Some(target) => {
                    if nrm.dot(&target.normal) < 0.0 {
                        faces.reverse();
                    }
                    let side = up.dot(&target.normal);
                    if side.abs() < 0.5 {
                        return Err(Error::LayerConflict(format!(
                            "crease {}: cannot tell above from below in the target plane",
                            ins.crease
                        )));
                    }
                    let on_top = (side > 0.0) == (ins.stacking == Stacking::Above);
                    if on_top {
                        target.faces.extend(faces);
                    } else {
                        faces.append(&mut target.faces);
                        target.faces = faces;
                    }
                }
                None => stacks.push(Stack { normal: nrm, point: pt, faces }),
            }
        }
    }

    // Faces are rigid, so only the flattening of numerical noise is checked here.
    for f in 0..n {
        let img: Vec<Vec3> = strip.faces[f].vertices.iter().map(|v| placements[f].apply_dev(v)).collect();
        let nrm = placements[f].front_normal();
        if img.iter().any(|p| (p - img[0]).dot(&nrm).abs() > tol.eps_point) {
            return Err(Error::NonPlanarFace(f));
        }
    }

    let mut layers = vec![0; n];
    let groups: Vec<PlaneGroup> =
        stacks.into_iter().map(|s| PlaneGroup { faces: s.faces, normal: s.normal, point: s.point }).collect();
    let mut state = FoldedState {
        strip: strip.clone(),
        gluing: gluing.clone(),
        placements,
        plane_groups: groups,
        layers: vec![0; n],
        group_of: vec![0; n],
    };
    let normals = canonical_normals(&state);
    for (gi, (g, nrm)) in state.plane_groups.iter_mut().zip(normals).enumerate() {
        if g.normal.dot(&nrm) < 0.0 {
            g.faces.reverse();
        }
        g.normal = nrm;
        for (pos, &f) in g.faces.iter().enumerate() {
            layers[f] = pos + 1;
            state.group_of[f] = gi;
        }
    }
    state.layers = layers;
    for f in 0..n {
        state.placements[f].reflect = !state.front_up(f);
    }
    Ok(state)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LayerViolation {
    /// Two seams on a common line in one plane with interlaced layer intervals.
    TacoTaco { group: usize, seams: (usize, usize) },
    /// A face strictly between a seam's two layers covering part of that seam.
    TacoTortilla { group: usize, seam: usize, face: usize },
}

impl fmt::Display for LayerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerViolation::TacoTaco { group, seams } => {
                write!(f, "taco-taco in group {group}: seams {} and {} interlace", seams.0, seams.1)
            }
            LayerViolation::TacoTortilla { group, seam, face } => {
                write!(f, "taco-tortilla in group {group}: face {face} pierces seam {seam}")
            }
        }
    }
}

struct FlatSeam {
    index: usize,
    a: Vec2,
    b: Vec2,
    lo: usize,
    hi: usize,
}

/// Length of the part of segment `a`–`b` strictly inside the convex polygon
/// (counter-clockwise) shrunk by `eps`.
fn interior_overlap(a: &Vec2, b: &Vec2, poly: &[Vec2], eps: f64) -> f64 {
    let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
    let d = b - a;
    let n = poly.len();
    for i in 0..n {
        let e = poly[(i + 1) % n] - poly[i];
        let inward = Vec2::new(-e.y, e.x).normalize();
        // Need (a + t d - p_i)·inward > eps.
        let base = (a - poly[i]).dot(&inward) - eps;
        let slope = d.dot(&inward);
        if slope.abs() < 1e-300 {
            if base <= 0.0 {
                return 0.0;
            }
        } else {
            let t = -base / slope;
            if slope > 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    ((t1 - t0) * d.norm()).max(0.0)
}

/// Taco-taco and taco-tortilla conditions within every plane group. An
/// empty result means the stack can be realised without self-intersection.
pub fn check_layers(state: &FoldedState, tol: &Tolerance) -> Vec<LayerViolation> {
    let eps = tol.eps_point;
    let mut out = Vec::new();
    for (gi, g) in state.plane_groups.iter().enumerate() {
        let basis = projection_basis(&g.normal);
        let seams: Vec<FlatSeam> = (0..state.gluing.side_pairs.len())
            .filter(|&i| {
                let (fa, fb) = state.seam_faces(i);
                state.group_of[fa] == gi && state.group_of[fb] == gi
            })
            .map(|i| {
                let sp = &state.gluing.side_pairs[i];
                let pl = &state.placements[sp.a.face];
                let (la, lb) = (state.layers[sp.a.face], state.layers[sp.b.face]);
                FlatSeam {
                    index: i,
                    a: project(&pl.apply_dev(&sp.a.from), &basis),
                    b: project(&pl.apply_dev(&sp.a.to), &basis),
                    lo: la.min(lb),
                    hi: la.max(lb),
                }
            })
            .collect();

        for i in 0..seams.len() {
            for j in (i + 1)..seams.len() {
                let (s, t) = (&seams[i], &seams[j]);
                if shared_length(s, t, eps) <= eps {
                    continue;
                }
                let interlaced =
                    (s.lo < t.lo && t.lo < s.hi && s.hi < t.hi) || (t.lo < s.lo && s.lo < t.hi && t.hi < s.hi);
                if interlaced {
                    out.push(LayerViolation::TacoTaco {
                        group: gi,
                        seams: (s.index.min(t.index), s.index.max(t.index)),
                    });
                }
            }
        }

        for s in &seams {
            for &f in &g.faces {
                let l = state.layers[f];
                if l <= s.lo || l >= s.hi {
                    continue;
                }
                let mut poly: Vec<Vec2> = state.face_image(f).iter().map(|p| project(p, &basis)).collect();
                if polygon_area(&poly) < 0.0 {
                    poly.reverse();
                }
                if !is_convex_ccw(&poly, 0.0) {
                    continue;
                }
                if interior_overlap(&s.a, &s.b, &poly, eps) > eps {
                    out.push(LayerViolation::TacoTortilla { group: gi, seam: s.index, face: f });
                }
            }
        }
    }
    out.sort();
    out
}

fn shared_length(s: &FlatSeam, t: &FlatSeam, eps: f64) -> f64 {
    let d = s.b - s.a;
    let len = d.norm();
    let u = d / len;
    let off = |p: &Vec2| (p - s.a).perp(&u).abs();
    if off(&t.a) > eps || off(&t.b) > eps {
        return 0.0;
    }
    let (p, q) = ((t.a - s.a).dot(&u), (t.b - s.a).dot(&u));
    let (lo, hi) = (p.min(q).max(0.0), p.max(q).min(len));
    (hi - lo).max(0.0)
}

/// Whether a rotation of order `order` about one of `axes` (through `center`)
/// maps the collection of point sets onto itself, each set onto some set.
pub fn has_rotational_symmetry(sets: &[Vec<Vec3>], center: &Vec3, axes: &[Vec3], order: u32, eps: f64) -> bool {
    if order <= 1 {
        return true;
    }
    let angle = 2.0 * PI / order as f64;
    axes.iter().filter(|a| a.norm() > 1e-9).any(|axis| {
        let r = RigidPlacement::about_line(*center, *axis, angle);
        sets.iter().all(|set| {
            let moved: Vec<Vec3> = set.iter().map(|p| r.apply(p)).collect();
            sets.iter().any(|other| {
                other.len() == moved.len() && moved.iter().all(|p| other.iter().any(|q| (p - q).norm() <= eps))
            })
        })
    })
}

/// Candidate symmetry axes: group normals, their pairwise sums and
/// differences, and signed sums of all normals.
pub fn candidate_axes(state: &FoldedState) -> Vec<Vec3> {
    let ns: Vec<Vec3> = state.plane_groups.iter().map(|g| g.normal).collect();
    let mut axes = ns.clone();
    for i in 0..ns.len() {
        for j in (i + 1)..ns.len() {
            axes.push(ns[i] + ns[j]);
            axes.push(ns[i] - ns[j]);
        }
    }
    let k = ns.len().min(10);
    for mask in 0..(1u32 << k) {
        let s: Vec3 = (0..k).map(|i| if mask & (1 << i) != 0 { -ns[i] } else { ns[i] }).sum();
        axes.push(s);
    }
    axes.into_iter().filter(|a| a.norm() > 1e-9).map(|a| a.normalize()).collect()
}

/// Whether the union of face images has `order`-fold rotational symmetry.
pub fn symmetry_check(state: &FoldedState, order: u32, tol: &Tolerance) -> bool {
    if order <= 1 {
        return true;
    }
    let sets: Vec<Vec<Vec3>> = (0..state.face_count()).map(|f| state.face_image(f)).collect();
    let pts: Vec<Vec3> = sets.iter().flatten().copied().collect();
    let center = pts.iter().sum::<Vec3>() / pts.len() as f64;
    has_rotational_symmetry(&sets, &center, &candidate_axes(state), order, tol.eps_point)
}
