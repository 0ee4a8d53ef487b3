//! The flat creased strip and its gluing combinatorics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folding::FoldedState;
use crate::geometry::{cross2, RigidPlacement, Tolerance, Vec2, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// One planar piece of the strip between consecutive creases. Vertices are in
/// development coordinates, counter-clockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub label: String,
    pub vertices: Vec<Vec2>,
    /// Colour of the side facing +z in the development; the back carries the other.
    pub front: Side,
}

impl Face {
    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    pub fn centroid(&self) -> Vec2 {
        self.vertices.iter().sum::<Vec2>() / self.vertices.len() as f64
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn vertex_index(&self, p: &Vec2, tol: &Tolerance) -> Option<usize> {
        self.vertices.iter().position(|v| (v - p).norm() <= tol.eps_point)
    }

    /// Whether `a`–`b` (either direction) is an edge of this face.
    pub fn has_edge(&self, a: &Vec2, b: &Vec2, tol: &Tolerance) -> bool {
        let n = self.vertices.len();
        match (self.vertex_index(a, tol), self.vertex_index(b, tol)) {
            (Some(i), Some(j)) => (i + 1) % n == j || (j + 1) % n == i,
            _ => false,
        }
    }

    /// Whether segment `a`–`b` lies on the polygon boundary (inside one edge).
    pub fn contains_boundary_segment(&self, a: &Vec2, b: &Vec2, tol: &Tolerance) -> bool {
        self.edges()
            .any(|(p, q)| point_on_segment(a, &p, &q, tol.eps_point) && point_on_segment(b, &p, &q, tol.eps_point))
    }
}

/// A fold line shared by faces `k` and `k + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Crease {
    pub faces: (usize, usize),
    pub start: Vec2,
    pub end: Vec2,
}

impl Crease {
    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }

    pub fn midpoint(&self) -> Vec2 {
        (self.start + self.end) * 0.5
    }
}

/// The flat `1 × λ` rectangle `[0, λ] × [0, 1]` cut into faces.
#[derive(Clone, Debug, PartialEq)]
pub struct CreasedStrip {
    pub aspect_ratio: f64,
    pub faces: Vec<Face>,
    pub creases: Vec<Crease>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndGluing {
    /// `(λ, y) ~ (0, 1 − y)`
    Moebius,
    /// `(λ, y) ~ (0, y)`
    Cylinder,
}

impl fmt::Display for EndGluing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndGluing::Moebius => "moebius",
            EndGluing::Cylinder => "cylinder",
        })
    }
}

/// A segment on a specific face.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeRef {
    pub face: usize,
    pub from: Vec2,
    pub to: Vec2,
}

impl EdgeRef {
    pub fn length(&self) -> f64 {
        (self.to - self.from).norm()
    }

    pub fn point(&self, t: f64) -> Vec2 {
        self.from + (self.to - self.from) * t
    }
}

/// Identification of two face sides: `a.from ~ b.from`, `a.to ~ b.to`.
#[derive(Clone, Debug, PartialEq)]
pub struct SidePair {
    pub label: String,
    pub a: EdgeRef,
    pub b: EdgeRef,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryEdge {
    pub label: String,
    pub edge: EdgeRef,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GluingDiagram {
    /// Every crease in strip order, then the end identification last.
    pub side_pairs: Vec<SidePair>,
    pub boundary_cycle: Vec<BoundaryEdge>,
    pub midline_segments: Vec<EdgeRef>,
    pub end_gluing: EndGluing,
}

impl GluingDiagram {
    /// The side pair that closes the strip up.
    pub fn end_pair(&self) -> &SidePair {
        self.side_pairs.last().expect("gluing diagram always carries the end pair")
    }

    /// Partition of `boundary_cycle` into closed cycles (indices into it),
    /// following head-to-tail links in listed order.
    pub fn boundary_cycles(&self, strip: &CreasedStrip, tol: &Tolerance) -> Vec<Vec<usize>> {
        let edges = &self.boundary_cycle;
        let mut cycles = Vec::new();
        let mut current = Vec::new();
        for i in 0..edges.len() {
            current.push(i);
            let head = edges[i].edge.to;
            let first_tail = edges[current[0]].edge.from;
            if links(strip, self.end_gluing, &head, &first_tail, tol) {
                cycles.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() {
            cycles.push(current);
        }
        cycles
    }
}

/// Maps a point on the right end `x = λ` to the identified point on `x = 0`.
pub fn glue_map(gluing: EndGluing, p: &Vec2) -> Vec2 {
    match gluing {
        EndGluing::Moebius => Vec2::new(0.0, 1.0 - p.y),
        EndGluing::Cylinder => Vec2::new(0.0, p.y),
    }
}

/// Whether a curve arriving at `head` continues at `tail`, either directly or
/// through the end identification.
pub fn links(strip: &CreasedStrip, gluing: EndGluing, head: &Vec2, tail: &Vec2, tol: &Tolerance) -> bool {
    if (head - tail).norm() <= tol.eps_point {
        return true;
    }
    (head.x - strip.aspect_ratio).abs() <= tol.eps_point && (glue_map(gluing, head) - tail).norm() <= tol.eps_point
}

pub fn polygon_area(vs: &[Vec2]) -> f64 {
    let n = vs.len();
    0.5 * (0..n).map(|i| cross2(&vs[i], &vs[(i + 1) % n])).sum::<f64>()
}

pub fn point_on_segment(p: &Vec2, a: &Vec2, b: &Vec2, eps: f64) -> bool {
    let d = b - a;
    let len = d.norm();
    if len <= eps {
        return (p - a).norm() <= eps;
    }
    let t = (p - a).dot(&d) / (len * len);
    t >= -eps / len && t <= 1.0 + eps / len && cross2(&d, &(p - a)).abs() / len <= eps
}

pub fn is_convex_ccw(vs: &[Vec2], eps: f64) -> bool {
    let n = vs.len();
    n >= 3
        && (0..n).all(|i| {
            let (a, b, c) = (vs[i], vs[(i + 1) % n], vs[(i + 2) % n]);
            cross2(&(b - a), &(c - b)) > eps
        })
}

/// Whether two convex polygons share interior area (separating axis test with
/// a tolerance band so that shared edges do not count).
pub fn convex_interiors_overlap(p: &[Vec2], q: &[Vec2], eps: f64) -> bool {
    for poly in [p, q] {
        let n = poly.len();
        for i in 0..n {
            let e = poly[(i + 1) % n] - poly[i];
            let axis = Vec2::new(-e.y, e.x).normalize();
            let range = |vs: &[Vec2]| {
                vs.iter().map(|v| v.dot(&axis)).fold((f64::MAX, f64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)))
            };
            let (a0, a1) = range(p);
            let (b0, b1) = range(q);
            if a1 <= b0 + eps || b1 <= a0 + eps {
                return false;
            }
        }
    }
    true
}

/// One violated invariant and the entity that violates it.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub invariant: &'static str,
    pub entity: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.entity)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub boundary_cycles: usize,
    pub boundary_length: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, invariant: &'static str, entity: impl Into<String>) {
        self.violations.push(Violation { invariant, entity: entity.into() });
    }
}

fn on_rect_boundary(p: &Vec2, lambda: f64, eps: f64) -> bool {
    let inside = p.x >= -eps && p.x <= lambda + eps && p.y >= -eps && p.y <= 1.0 + eps;
    inside && (p.x.abs() <= eps || (p.x - lambda).abs() <= eps || p.y.abs() <= eps || (p.y - 1.0).abs() <= eps)
}

/// Checks every strip and gluing invariant and lists what fails.
pub fn validate_strip(strip: &CreasedStrip, gluing: &GluingDiagram, tol: &Tolerance) -> ValidationReport {
    let mut report = ValidationReport::default();
    let eps = tol.eps_point;
    let lambda = strip.aspect_ratio;
    if !(lambda > 0.0) {
        report.push("aspect_ratio", format!("{lambda}"));
        return report;
    }

    // Tiling.
    for (i, f) in strip.faces.iter().enumerate() {
        if !is_convex_ccw(&f.vertices, eps) {
            report.push("face_convex_ccw", format!("face {i} ({})", f.label));
        }
        for v in &f.vertices {
            if v.x < -eps || v.x > lambda + eps || v.y < -eps || v.y > 1.0 + eps {
                report.push("face_inside_rectangle", format!("face {i} vertex ({}, {})", v.x, v.y));
            }
        }
    }
    let area: f64 = strip.faces.iter().map(Face::area).sum();
    if (area - lambda).abs() > eps * 10.0 * strip.faces.len().max(1) as f64 {
        report.push("tiling_area", format!("sum of face areas {area} != aspect ratio {lambda}"));
    }
    for i in 0..strip.faces.len() {
        for j in (i + 1)..strip.faces.len() {
            if convex_interiors_overlap(&strip.faces[i].vertices, &strip.faces[j].vertices, eps) {
                report.push("faces_interior_disjoint", format!("faces {i} and {j}"));
            }
        }
    }

    // Creases form a path through the faces in strip order.
    if strip.creases.len() + 1 != strip.faces.len() {
        report.push("crease_path", format!("{} creases for {} faces", strip.creases.len(), strip.faces.len()));
    }
    for (k, c) in strip.creases.iter().enumerate() {
        if c.faces != (k, k + 1) {
            report.push("crease_path", format!("crease {k} joins faces {:?}", c.faces));
            continue;
        }
        for f in [c.faces.0, c.faces.1] {
            if f >= strip.faces.len() || !strip.faces[f].has_edge(&c.start, &c.end, tol) {
                report.push("crease_shared_edge", format!("crease {k} is not an edge of face {f}"));
            }
        }
        for p in [c.start, c.end] {
            if !on_rect_boundary(&p, lambda, eps) {
                report.push("crease_endpoint_on_boundary", format!("crease {k} endpoint ({}, {})", p.x, p.y));
            }
        }
    }

    // Side pairs.
    if gluing.side_pairs.len() != strip.creases.len() + 1 {
        report
            .push("side_pairs", format!("{} side pairs for {} creases", gluing.side_pairs.len(), strip.creases.len()));
    }
    for sp in &gluing.side_pairs {
        if (sp.a.length() - sp.b.length()).abs() > eps {
            report.push("side_pair_length", format!("pair {}", sp.label));
        }
        for e in [&sp.a, &sp.b] {
            if e.face >= strip.faces.len() || !strip.faces[e.face].has_edge(&e.from, &e.to, tol) {
                report.push("side_pair_edge", format!("pair {} on face {}", sp.label, e.face));
            }
        }
    }
    if let Some(end) = gluing.side_pairs.last() {
        let ok = (end.a.from.x - lambda).abs() <= eps
            && (end.a.to.x - lambda).abs() <= eps
            && (glue_map(gluing.end_gluing, &end.a.from) - end.b.from).norm() <= eps
            && (glue_map(gluing.end_gluing, &end.a.to) - end.b.to).norm() <= eps;
        if !ok {
            report.push("end_gluing", format!("pair {} does not realise {} gluing", end.label, gluing.end_gluing));
        }
    }

    // Boundary cycle.
    let mut length = 0.0;
    for be in &gluing.boundary_cycle {
        let e = &be.edge;
        length += e.length();
        let on_long_edge = (e.from.y.abs() <= eps && e.to.y.abs() <= eps)
            || ((e.from.y - 1.0).abs() <= eps && (e.to.y - 1.0).abs() <= eps);
        if !on_long_edge {
            report.push("boundary_on_long_edge", format!("edge {}", be.label));
        }
        if e.face >= strip.faces.len() || !strip.faces[e.face].contains_boundary_segment(&e.from, &e.to, tol) {
            report.push("boundary_on_face", format!("edge {} on face {}", be.label, e.face));
        }
    }
    let expected_length = 2.0 * lambda + 2.0 - 2.0 * 1.0;
    if (length - expected_length).abs() > eps * 10.0 {
        report.push("boundary_length", format!("{length} != {expected_length}"));
    }
    let cycles = gluing.boundary_cycles(strip, tol);
    for cyc in &cycles {
        for w in 0..cyc.len() {
            let a = &gluing.boundary_cycle[cyc[w]];
            let b = &gluing.boundary_cycle[cyc[(w + 1) % cyc.len()]];
            if !links(strip, gluing.end_gluing, &a.edge.to, &b.edge.from, tol) {
                report.push("boundary_head_to_tail", format!("{} does not run into {}", a.label, b.label));
            }
        }
    }
    let expected_cycles = match gluing.end_gluing {
        EndGluing::Moebius => 1,
        EndGluing::Cylinder => 2,
    };
    if cycles.len() != expected_cycles {
        report.push("boundary_cycle_count", format!("{} cycles for {} gluing", cycles.len(), gluing.end_gluing));
    }
    report.boundary_cycles = cycles.len();
    report.boundary_length = length;

    // Midline.
    let m = &gluing.midline_segments;
    if m.is_empty() {
        report.push("midline_closed", "no midline segments");
    }
    for (i, seg) in m.iter().enumerate() {
        if (seg.from.y - 0.5).abs() > eps || (seg.to.y - 0.5).abs() > eps {
            report.push("midline_height", format!("segment {i}"));
        }
        let next = &m[(i + 1) % m.len()];
        if !links(strip, gluing.end_gluing, &seg.to, &next.from, tol) {
            report.push("midline_closed", format!("segment {i} does not reach segment {}", (i + 1) % m.len()));
        }
    }
    report
}

/// Midline pieces: the `y = 1/2` chord of every face, oriented along +x.
pub fn midline_segments(strip: &CreasedStrip) -> Vec<EdgeRef> {
    strip
        .faces
        .iter()
        .enumerate()
        .filter_map(|(i, f)| {
            let mut xs: Vec<f64> = f
                .edges()
                .filter_map(|(a, b)| {
                    if (a.y - 0.5) * (b.y - 0.5) > 0.0 || (a.y - b.y).abs() < 1e-15 {
                        return None;
                    }
                    let t = (0.5 - a.y) / (b.y - a.y);
                    Some(a.x + t * (b.x - a.x))
                })
                .collect();
            xs.sort_by(f64::total_cmp);
            let (lo, hi) = (*xs.first()?, *xs.last()?);
            (hi - lo > 1e-12).then(|| EdgeRef { face: i, from: Vec2::new(lo, 0.5), to: Vec2::new(hi, 0.5) })
        })
        .collect()
}

/// Boundary edges of the two long sides, cut at face vertices, in cycle order.
///
/// The bottom side is walked left to right; a Moebius band continues with the
/// top side left to right, a cylinder's second cycle is the top side walked
/// left to right as well.
pub fn boundary_edges(strip: &CreasedStrip, tol: &Tolerance) -> Vec<EdgeRef> {
    let mut out = Vec::new();
    for y in [0.0, 1.0] {
        let mut pieces: Vec<EdgeRef> = Vec::new();
        for (i, f) in strip.faces.iter().enumerate() {
            for (a, b) in f.edges() {
                if (a.y - y).abs() <= tol.eps_point && (b.y - y).abs() <= tol.eps_point {
                    let (from, to) = if a.x < b.x { (a, b) } else { (b, a) };
                    pieces.push(EdgeRef { face: i, from, to });
                }
            }
        }
        pieces.sort_by(|p, q| p.from.x.total_cmp(&q.from.x));
        out.extend(pieces);
    }
    out
}

/// Unfolds a folded state back into the plane, face by face along the strip,
/// and returns the developed strip.
pub fn develop(state: &FoldedState, tol: &Tolerance) -> Result<CreasedStrip> {
    let strip = &state.strip;
    let images: Vec<Vec<Vec3>> = (0..strip.faces.len()).map(|i| state.face_image(i)).collect();
    let mut developed: Vec<Vec<Vec2>> = Vec::with_capacity(images.len());
    let first = state.placements[0].inverse();
    developed.push(images[0].iter().map(|p| first.apply(p).xy()).collect());

    for (k, c) in strip.creases.iter().enumerate() {
        let (fa, fb) = c.faces;
        let face_a = &strip.faces[fa];
        let face_b = &strip.faces[fb];
        let (ia0, ia1) = (idx(face_a, &c.start, tol, k)?, idx(face_a, &c.end, tol, k)?);
        let (ib0, ib1) = (idx(face_b, &c.start, tol, k)?, idx(face_b, &c.end, tol, k)?);
        let (a0, a1) = (images[fa][ia0], images[fa][ia1]);
        let (b0, b1) = (images[fb][ib0], images[fb][ib1]);
        if (a0 - b0).norm() > tol.eps_point || (a1 - b1).norm() > tol.eps_point {
            return Err(Error::NotDevelopable(format!(
                "faces {fa} and {fb} disagree across crease {k} by {:.3e}",
                (a0 - b0).norm().max((a1 - b1).norm())
            )));
        }
        // Intrinsic frame of face b: x along the crease, y into the face.
        let ex = (b1 - b0).normalize();
        let centroid: Vec3 = images[fb].iter().sum::<Vec3>() / images[fb].len() as f64;
        let to_c = centroid - b0;
        let ey = (to_c - ex * to_c.dot(&ex)).normalize();
        let nrm = ex.cross(&ey);
        if images[fb].iter().any(|p| (p - b0).dot(&nrm).abs() > tol.eps_point) {
            return Err(Error::NotDevelopable(format!("face {fb} is not planar")));
        }
        // Developed frame: same crease, y pointing away from face a.
        let d0 = developed[fa][ia0];
        let d1 = developed[fa][ia1];
        let dx = (d1 - d0).normalize();
        let ca: Vec2 = developed[fa].iter().sum::<Vec2>() / developed[fa].len() as f64;
        let mut dy = Vec2::new(-dx.y, dx.x);
        if (ca - d0).dot(&dy) > 0.0 {
            dy = -dy;
        }
        developed.push(
            images[fb]
                .iter()
                .map(|p| {
                    let r = p - b0;
                    d0 + dx * r.dot(&ex) + dy * r.dot(&ey)
                })
                .collect(),
        );
    }

    let faces = strip
        .faces
        .iter()
        .zip(developed)
        .map(|(f, vs)| Face { label: f.label.clone(), vertices: vs, front: f.front })
        .collect::<Vec<_>>();
    let creases = strip
        .creases
        .iter()
        .map(|c| {
            let f = &faces[c.faces.0];
            let i0 = strip.faces[c.faces.0].vertex_index(&c.start, tol).unwrap();
            let i1 = strip.faces[c.faces.0].vertex_index(&c.end, tol).unwrap();
            Crease { faces: c.faces, start: f.vertices[i0], end: f.vertices[i1] }
        })
        .collect();
    Ok(CreasedStrip { aspect_ratio: strip.aspect_ratio, faces, creases })
}

fn idx(face: &Face, p: &Vec2, tol: &Tolerance, crease: usize) -> Result<usize> {
    face.vertex_index(p, tol)
        .ok_or_else(|| Error::InvalidInput(format!("crease {crease} endpoint is not a vertex of face {}", face.label)))
}

/// Largest vertex displacement between two strips with the same face structure.
pub fn max_vertex_deviation(a: &CreasedStrip, b: &CreasedStrip) -> f64 {
    a.faces
        .iter()
        .zip(&b.faces)
        .flat_map(|(f, g)| f.vertices.iter().zip(&g.vertices).map(|(p, q)| (p - q).norm()))
        .fold(0.0, f64::max)
}

/// Placement taking development coordinates of `face` onto its image in a
/// developed strip (used when rebuilding states from developments).
pub fn planar_placement(from: &Face, to: &Face) -> RigidPlacement {
    let (p0, p1) = (from.vertices[0], from.vertices[1]);
    let (q0, q1) = (to.vertices[0], to.vertices[1]);
    let a = (p1 - p0).y.atan2((p1 - p0).x);
    let b = (q1 - q0).y.atan2((q1 - q0).x);
    let rot = RigidPlacement::about_line(Vec3::zeros(), Vec3::z(), b - a);
    let moved = rot.apply_dev(&p0);
    RigidPlacement::translation(Vec3::new(q0.x, q0.y, 0.0) - moved).compose(&rot)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x0: f64) -> Vec<Vec2> {
        vec![Vec2::new(x0, 0.), Vec2::new(x0 + 1., 0.), Vec2::new(x0 + 1., 1.), Vec2::new(x0, 1.)]
    }

    #[test]
    fn overlapping_squares_detected() {
        assert!(convex_interiors_overlap(&sq(0.), &sq(0.5), 1e-9));
        assert!(!convex_interiors_overlap(&sq(0.), &sq(1.), 1e-9));
    }

    #[test]
    fn polygon_area_of_unit_square() {
        assert!((polygon_area(&sq(3.)) - 1.0).abs() < 1e-15);
    }
}
