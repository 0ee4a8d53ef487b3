//! Tolerance-aware vector, placement and projection primitives.

use nalgebra::{Matrix3, Rotation3, Unit, Vector2, Vector3};

use crate::error::{Error, Result};

pub type Vec2 = Vector2<f64>;
pub type Vec3 = Vector3<f64>;

/// Absolute tolerances in strip-width units (the strip width is always 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps_point: f64,
    pub eps_angle: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps_point: 1e-9, eps_angle: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(eps_point: f64, eps_angle: f64) -> Result<Self> {
        if !(eps_point > 0.0 && eps_angle > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerances must be strictly positive (got {eps_point}, {eps_angle})"
            )));
        }
        Ok(Tolerance { eps_point, eps_angle })
    }

    /// Checks that the tolerance is far below the smallest feature of a model.
    pub fn assert_separated(&self, min_feature: f64) -> Result<()> {
        if self.eps_point * 1e3 > min_feature {
            return Err(Error::InvalidInput(format!(
                "eps_point {} is not small against minimum feature size {}",
                self.eps_point, min_feature
            )));
        }
        Ok(())
    }
}

/// A rigid motion of space. `reflect` records whether the paper has been
/// turned over an odd number of times, i.e. whether the development's front
/// side now faces the opposite way from the reference face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidPlacement {
    pub rotation: Matrix3<f64>,
    pub translation: Vec3,
    pub reflect: bool,
}

impl Default for RigidPlacement {
    fn default() -> Self {
        Self::identity()
    }
}

impl RigidPlacement {
    pub fn identity() -> Self {
        RigidPlacement { rotation: Matrix3::identity(), translation: Vec3::zeros(), reflect: false }
    }

    pub fn translation(t: Vec3) -> Self {
        RigidPlacement { translation: t, ..Self::identity() }
    }

    /// Rotation by `angle` about the line through `point` with direction `axis`
    /// (right-hand rule).
    pub fn about_line(point: Vec3, axis: Vec3, angle: f64) -> Self {
        let rot = Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle).into_inner();
        RigidPlacement { rotation: rot, translation: point - rot * point, reflect: false }
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    pub fn apply_vector(&self, v: &Vec3) -> Vec3 {
        self.rotation * v
    }

    /// Maps a development-plane point (z = 0) into space.
    pub fn apply_dev(&self, p: &Vec2) -> Vec3 {
        self.apply(&Vec3::new(p.x, p.y, 0.0))
    }

    /// Image of the development's front normal (+z).
    pub fn front_normal(&self) -> Vec3 {
        self.rotation.column(2).into_owned()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RigidPlacement) -> RigidPlacement {
        RigidPlacement {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
            reflect: self.reflect ^ other.reflect,
        }
    }

    pub fn inverse(&self) -> RigidPlacement {
        let rt = self.rotation.transpose();
        RigidPlacement { rotation: rt, translation: -(rt * self.translation), reflect: self.reflect }
    }

    pub fn is_proper(&self, tol: &Tolerance) -> bool {
        let should_be_id = self.rotation.transpose() * self.rotation - Matrix3::identity();
        should_be_id.abs().max() < tol.eps_point * 10.0
            && (self.rotation.determinant() - 1.0).abs() < tol.eps_point * 10.0
    }
}

/// Transverse interior crossing of two planar segments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing2 {
    pub point: Vec2,
    /// Parameter along the first segment, in (0, 1).
    pub s: f64,
    /// Parameter along the second segment, in (0, 1).
    pub t: f64,
}

pub fn cross2(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Interior transverse intersection of segments `a0a1` and `b0b1`.
///
/// Disjoint or parallel-disjoint segments give `Ok(None)`. Any incidence that
/// is not a clean transverse interior crossing (endpoint touching, collinear
/// overlap, grazing angle) is reported as `DegenerateCrossing`.
pub fn segment_crossing(a0: &Vec2, a1: &Vec2, b0: &Vec2, b1: &Vec2, tol: &Tolerance) -> Result<Option<Crossing2>> {
    let da = a1 - a0;
    let db = b1 - b0;
    let la = da.norm();
    let lb = db.norm();
    if la <= tol.eps_point || lb <= tol.eps_point {
        return Err(Error::DegenerateCrossing("segment shorter than eps_point".into()));
    }
    let denom = cross2(&da, &db);
    let sin_angle = denom / (la * lb);
    let w = b0 - a0;
    if sin_angle.abs() <= tol.eps_angle {
        // Parallel: degenerate only if collinear and overlapping.
        let offset = cross2(&da, &w).abs() / la;
        if offset > tol.eps_point {
            return Ok(None);
        }
        let ua = da / la;
        let (p, q) = ((b0 - a0).dot(&ua), (b1 - a0).dot(&ua));
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        if hi < -tol.eps_point || lo > la + tol.eps_point {
            return Ok(None);
        }
        return Err(Error::DegenerateCrossing("collinear overlap".into()));
    }
    let s = cross2(&w, &db) / denom;
    let t = cross2(&w, &da) / denom;
    let ea = tol.eps_point / la;
    let eb = tol.eps_point / lb;
    if s < -ea || s > 1.0 + ea || t < -eb || t > 1.0 + eb {
        return Ok(None);
    }
    if s <= ea || s >= 1.0 - ea || t <= eb || t >= 1.0 - eb {
        return Err(Error::DegenerateCrossing("intersection at a segment endpoint".into()));
    }
    Ok(Some(Crossing2 { point: a0 + da * s, s, t }))
}

/// Orthonormal basis (e1, e2) of the plane perpendicular to `d`, chosen so
/// that (e1, e2, d) is right-handed.
pub fn projection_basis(d: &Vec3) -> (Vec3, Vec3) {
    let d = d.normalize();
    let helper = if d.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = (helper - d * helper.dot(&d)).normalize();
    let e2 = d.cross(&e1);
    (e1, e2)
}

pub fn project(p: &Vec3, basis: &(Vec3, Vec3)) -> Vec2 {
    Vec2::new(p.dot(&basis.0), p.dot(&basis.1))
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Number of candidate directions tried before giving up.
pub const DIRECTION_BUDGET: usize = 10_000;

/// The `k`-th candidate of the deterministic direction sequence for `seed`.
///
/// Candidates are Halton points mapped to a spherical cap around +z: the first
/// block stays within 0.15 rad of the axis, later blocks widen to the full
/// upper hemisphere.
pub fn candidate_direction(seed: u64, k: usize) -> Vec3 {
    let idx = 1 + seed.wrapping_mul(7919) + k as u64;
    let h2 = radical_inverse(idx, 2);
    let h3 = radical_inverse(idx, 3);
    let cap = if k < 2_000 { 0.15 } else { 1.5 };
    let theta = cap * h2.sqrt().max(0.05);
    let phi = 2.0 * std::f64::consts::PI * h3;
    Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

/// Margin used when certifying a projection as generic. Kept well above
/// `eps_point` so downstream crossing classification is numerically stable.
fn generic_margin(tol: &Tolerance) -> f64 {
    (tol.eps_point * 1e3).max(1e-7)
}

/// Closest distance between segments `p0p1` and `q0q1`.
pub fn segment_distance(p0: &Vec3, p1: &Vec3, q0: &Vec3, q1: &Vec3) -> f64 {
    let (d1, d2, r) = (p1 - p0, q1 - q0, p0 - q0);
    let (a, e, f) = (d1.norm_squared(), d2.norm_squared(), d2.dot(&r));
    let (s, t) = if a <= 1e-300 && e <= 1e-300 {
        (0.0, 0.0)
    } else if a <= 1e-300 {
        (0.0, (f / e).clamp(0.0, 1.0))
    } else {
        let c = d1.dot(&r);
        if e <= 1e-300 {
            ((-c / a).clamp(0.0, 1.0), 0.0)
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s = if denom > 1e-300 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
            let mut t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            }
            (s, t)
        }
    };
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}

/// Segment list of a closed polyline given as its vertex cycle (last vertex
/// connects back to the first).
pub fn closed_segments(curve: &[Vec3]) -> impl Iterator<Item = (usize, Vec3, Vec3)> + '_ {
    let n = curve.len();
    (0..n).map(move |i| (i, curve[i], curve[(i + 1) % n]))
}

fn point_segment_distance(p: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    let t = if len2 > 0.0 { ((p - a).dot(&d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + d * t)).norm()
}

/// Whether projecting along `dir` gives a regular diagram of `curves`: no
/// vertex lands on a non-incident segment, all crossings are transverse and
/// interior, and no point lies on three strands.
pub fn is_generic(curves: &[Vec<Vec3>], dir: &Vec3, tol: &Tolerance) -> bool {
    let basis = projection_basis(dir);
    let margin = generic_margin(tol);
    let strict = Tolerance { eps_point: margin, eps_angle: (tol.eps_angle * 1e3).max(1e-6) };
    // (curve, segment, a, b)
    let mut segs: Vec<(usize, usize, Vec2, Vec2)> = Vec::new();
    for (c, curve) in curves.iter().enumerate() {
        for (i, a, b) in closed_segments(curve) {
            let (pa, pb) = (project(&a, &basis), project(&b, &basis));
            if (pb - pa).norm() <= margin {
                return false;
            }
            segs.push((c, i, pa, pb));
        }
    }
    let adjacent = |x: &(usize, usize, Vec2, Vec2), y: &(usize, usize, Vec2, Vec2)| -> bool {
        if x.0 != y.0 {
            return false;
        }
        let n = curves[x.0].len();
        (x.1 + 1) % n == y.1 || (y.1 + 1) % n == x.1
    };
    // Vertices must keep clear of every other segment.
    for (c, curve) in curves.iter().enumerate() {
        let n = curve.len();
        for v in 0..n {
            let p = project(&curve[v], &basis);
            for s in &segs {
                if s.0 == c && (s.1 == v || (s.1 + 1) % n == v) {
                    continue;
                }
                if point_segment_distance(&p, &s.2, &s.3) <= margin {
                    return false;
                }
            }
        }
    }
    // Adjacent segments must not fold back onto each other.
    for s in &segs {
        let n = curves[s.0].len();
        let next = &segs[segs.iter().position(|t| t.0 == s.0 && t.1 == (s.1 + 1) % n).unwrap()];
        let u = (s.3 - s.2).normalize();
        let w = (next.3 - next.2).normalize();
        if cross2(&u, &w).abs() <= strict.eps_angle && u.dot(&w) < 0.0 {
            return false;
        }
    }
    let mut points: Vec<(usize, usize, Vec2)> = Vec::new();
    for i in 0..segs.len() {
        for j in (i + 1)..segs.len() {
            if adjacent(&segs[i], &segs[j]) {
                continue;
            }
            match segment_crossing(&segs[i].2, &segs[i].3, &segs[j].2, &segs[j].3, &strict) {
                Ok(Some(x)) => points.push((i, j, x.point)),
                Ok(None) => {}
                Err(_) => return false,
            }
        }
    }
    for a in 0..points.len() {
        for b in (a + 1)..points.len() {
            if (points[a].2 - points[b].2).norm() <= margin {
                return false;
            }
        }
    }
    true
}

/// First direction of the seeded candidate sequence that projects `curves`
/// to a regular diagram.
pub fn generic_direction(curves: &[Vec<Vec3>], seed: u64, tol: &Tolerance) -> Result<Vec3> {
    for curve in curves {
        if curve.len() < 3 {
            return Err(Error::InvalidInput("curves need at least 3 vertices".into()));
        }
    }
    (0..DIRECTION_BUDGET)
        .map(|k| candidate_direction(seed, k))
        .find(|d| is_generic(curves, d, tol))
        .ok_or(Error::NoGenericDirection(DIRECTION_BUDGET))
}
