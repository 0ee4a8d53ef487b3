//! Boundary and midline loops of an inflated folded state, and their signed
//! crossing diagram under a generic projection.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::folding::{check_layers, FoldedState};
use crate::geometry::{
    closed_segments, cross2, generic_direction, project, projection_basis, segment_crossing, segment_distance,
    RigidPlacement, Tolerance, Vec2, Vec3,
};
use crate::report::fmt9;
use crate::strip::{convex_interiors_overlap, glue_map, point_on_segment, EdgeRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    Boundary,
    Boundary2,
    Midline,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::Boundary => "boundary",
            Component::Boundary2 => "boundary2",
            Component::Midline => "midline",
        }
    }

    pub fn parse(s: &str) -> Option<Component> {
        match s {
            "boundary" => Some(Component::Boundary),
            "boundary2" => Some(Component::Boundary2),
            "midline" => Some(Component::Midline),
            _ => None,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Closed polyline; the last vertex connects back to the first.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceCurve {
    pub component: Component,
    pub points: Vec<Vec3>,
}

impl SpaceCurve {
    pub fn reversed(&self) -> SpaceCurve {
        let mut points = self.points.clone();
        points.reverse();
        SpaceCurve { component: self.component, points }
    }

    /// Same loop starting at vertex `k`.
    pub fn rotated(&self, k: usize) -> SpaceCurve {
        let mut points = self.points.clone();
        let n = points.len().max(1);
        points.rotate_left(k % n);
        SpaceCurve { component: self.component, points }
    }

    pub fn length(&self) -> f64 {
        closed_segments(&self.points).map(|(_, a, b)| (b - a).norm()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InflationParams {
    /// Gap between consecutive layers.
    pub eps: f64,
    /// Distance along a crease, measured from its end, at which a boundary
    /// loop crosses from one layer to the next.
    pub connector_inset: f64,
}

impl InflationParams {
    pub fn new(eps: f64) -> Self {
        InflationParams { eps, connector_inset: 0.5 * eps }
    }

    pub fn validate(&self, min_feature: f64) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 0.25 * min_feature) {
            return Err(Error::InvalidInput(format!("layer gap {} outside (0, {})", self.eps, 0.25 * min_feature)));
        }
        if !(self.connector_inset >= 0.0 && self.connector_inset < self.eps) {
            return Err(Error::InvalidInput(format!("connector inset {} outside [0, eps)", self.connector_inset)));
        }
        Ok(())
    }

    /// Setback of face edges from the corner line at a non-flat seam.
    pub fn bend_setback(&self) -> f64 {
        0.5 * self.eps
    }
}

/// Outward unit direction (in space) across the edge `from`–`to` of face `f`.
pub fn outward(state: &FoldedState, f: usize, from: &Vec2, to: &Vec2) -> Vec3 {
    let e = (to - from).normalize();
    let mut n = Vec2::new(e.y, -e.x);
    if (state.strip.faces[f].centroid() - from).dot(&n) > 0.0 {
        n = -n;
    }
    state.placements[f].apply_vector(&Vec3::new(n.x, n.y, 0.0))
}

/// Placements of the faces after separating layers by `eps` along each plane
/// group's normal. At a non-flat seam both faces also slide within their
/// planes so that their edges sit a fixed setback from the line where the two
/// offset planes meet.
pub fn inflate(state: &FoldedState, params: &InflationParams, tol: &Tolerance) -> Result<Vec<RigidPlacement>> {
    let violations = check_layers(state, tol);
    if !violations.is_empty() {
        return Err(Error::LayerViolations(violations));
    }
    let n = state.face_count();
    let lifted = stacked_groups(state, tol);
    let height = |f: usize| layer_height(state, &lifted, params, f);
    let normal = |f: usize| state.plane_groups[state.group_of[f]].normal;
    let mut shift: Vec<Vec3> = (0..n).map(|f| normal(f) * height(f)).collect();
    // In-plane move each face needs across its non-flat seam: (direction, amount).
    let mut need: Vec<Option<(Vec3, f64)>> = vec![None; n];
    for (i, sp) in state.gluing.side_pairs.iter().enumerate() {
        if state.seam_is_flat(i) {
            continue;
        }
        let q = bend_corner(state, &lifted, params, i);
        for e in [&sp.a, &sp.b] {
            let f = e.face;
            if need[f].is_some() {
                return Err(Error::InvalidInput(format!("face {f} has more than one non-flat seam")));
            }
            let c = state.placements[f].apply_dev(&e.from);
            let m = outward(state, f, &e.from, &e.to);
            // Edge point after the normal offset, moved to sit `setback` from q.
            let along = (q - (c + shift[f])).dot(&m);
            need[f] = Some((m, along - params.bend_setback()));
        }
    }
    // Two faces folded flat onto each other take one common move when both
    // need one, so the flat seam between them is not sheared.
    let mut done = vec![false; n];
    for (i, sp) in state.gluing.side_pairs.iter().enumerate() {
        let (a, b) = (sp.a.face, sp.b.face);
        if !state.seam_is_flat(i) || done[a] || done[b] {
            continue;
        }
        if let (Some((ma, da)), Some((mb, db))) = (need[a], need[b]) {
            let k = ma.dot(&mb);
            if 1.0 - k * k > 1e-6 {
                let x = (da - k * db) / (1.0 - k * k);
                let y = (db - k * da) / (1.0 - k * k);
                let v = ma * x + mb * y;
                shift[a] += v;
                shift[b] += v;
                done[a] = true;
                done[b] = true;
            }
        }
    }
    for f in 0..n {
        if let (false, Some((m, d))) = (done[f], need[f]) {
            shift[f] += m * d;
        }
    }
    Ok((0..n).map(|f| RigidPlacement::translation(shift[f]).compose(&state.placements[f])).collect())
}

/// Whether each plane group has faces lying over one another. A group whose
/// faces only tile the plane is a single layer and stays where it is.
fn stacked_groups(state: &FoldedState, tol: &Tolerance) -> Vec<bool> {
    state
        .plane_groups
        .iter()
        .map(|g| {
            let basis = projection_basis(&g.normal);
            let polys: Vec<Vec<Vec2>> =
                g.faces.iter().map(|&f| state.face_image(f).iter().map(|p| project(p, &basis)).collect()).collect();
            (0..polys.len())
                .any(|i| (i + 1..polys.len()).any(|j| convex_interiors_overlap(&polys[i], &polys[j], tol.eps_point)))
        })
        .collect()
}

fn layer_height(state: &FoldedState, lifted: &[bool], params: &InflationParams, f: usize) -> f64 {
    if lifted[state.group_of[f]] {
        state.layers[f] as f64 * params.eps
    } else {
        0.0
    }
}

/// Point where the two offset planes of non-flat seam `i` meet, taken in the
/// cross-section through the seam's `a.from` end.
fn bend_corner(state: &FoldedState, lifted: &[bool], params: &InflationParams, i: usize) -> Vec3 {
    let sp = &state.gluing.side_pairs[i];
    let (fa, fb) = (sp.a.face, sp.b.face);
    let na = state.plane_groups[state.group_of[fa]].normal;
    let nb = state.plane_groups[state.group_of[fb]].normal;
    let (ha, hb) = (layer_height(state, lifted, params, fa), layer_height(state, lifted, params, fb));
    let c = state.placements[fa].apply_dev(&sp.a.from);
    let k = na.dot(&nb);
    let det = 1.0 - k * k;
    let alpha = (ha - k * hb) / det;
    let beta = (hb - k * ha) / det;
    c + na * alpha + nb * beta
}

fn dedup_push(points: &mut Vec<Vec3>, p: Vec3) {
    if points.last().is_none_or(|q| (q - p).norm() > 1e-12) {
        points.push(p);
    }
}

struct Tracer<'a> {
    state: &'a FoldedState,
    placed: &'a [RigidPlacement],
    params: &'a InflationParams,
    tol: &'a Tolerance,
}

impl Tracer<'_> {
    fn at(&self, f: usize, p: &Vec2) -> Vec3 {
        self.placed[f].apply_dev(p)
    }

    /// Seam joining faces `f` and `g` whose `f` side contains `p`; returns the
    /// seam index, the `f`-side edge and the `g`-side edge.
    fn seam(&self, f: usize, g: usize, p: &Vec2) -> Option<(usize, EdgeRef, EdgeRef)> {
        let eps = self.tol.eps_point;
        self.state.gluing.side_pairs.iter().enumerate().find_map(|(i, sp)| {
            if sp.a.face == f && sp.b.face == g && point_on_segment(p, &sp.a.from, &sp.a.to, eps) {
                Some((i, sp.a.clone(), sp.b.clone()))
            } else if sp.b.face == f && sp.a.face == g && point_on_segment(p, &sp.b.from, &sp.b.to, eps) {
                Some((i, sp.b.clone(), sp.a.clone()))
            } else {
                None
            }
        })
    }

    /// Straight connector across seam `i` at parameter `t` of the `f`-side edge.
    fn connector(&self, i: usize, ef: &EdgeRef, eg: &EdgeRef, t: f64, out: &mut Vec<Vec3>) {
        let a = self.at(ef.face, &ef.point(t));
        let b = self.at(eg.face, &eg.point(t));
        let ma = outward(self.state, ef.face, &ef.from, &ef.to);
        let mb = outward(self.state, eg.face, &eg.from, &eg.to);
        dedup_push(out, a);
        if self.state.seam_is_flat(i) {
            let depth = 0.5 * (b - a).norm();
            dedup_push(out, a + ma * depth);
            dedup_push(out, b + mb * depth);
        } else {
            dedup_push(out, a + ma * self.params.bend_setback());
        }
        dedup_push(out, b);
    }

    fn param(e: &EdgeRef, p: &Vec2) -> f64 {
        let d = e.to - e.from;
        (p - e.from).dot(&d) / d.norm_squared()
    }

    /// Path from `p` on face `f` across the faces sharing vertex `p` to face
    /// `g`, where the curve continues at `q` (`p` itself or its glued image).
    /// Each crossing happens `connector_inset` along the seam away from `p`.
    fn through_vertex(&self, f: usize, p: &Vec2, g: usize, q: &Vec2, out: &mut Vec<Vec3>) -> Result<()> {
        let n = self.state.face_count();
        for step in [1isize, -1] {
            let mut path = Vec::new();
            let (mut face, mut point) = (f, *p);
            let mut ok = false;
            for _ in 0..=n {
                if face == g && (point - q).norm() <= self.tol.eps_point {
                    ok = true;
                    break;
                }
                let next = (face as isize + step).rem_euclid(n as isize) as usize;
                match self.seam(face, next, &point) {
                    Some((i, ef, eg)) => {
                        let t = Self::param(&ef, &point);
                        let len = ef.length();
                        let inset = (self.params.connector_inset / len).min(0.5);
                        let ti = if t < 0.5 { t + inset } else { t - inset };
                        path.push((i, ef.clone(), eg.clone(), t, ti));
                        point = eg.point(t);
                        face = next;
                    }
                    None => break,
                }
            }
            if ok {
                for (i, ef, eg, t, ti) in path {
                    dedup_push(out, self.at(ef.face, &ef.point(t)));
                    self.connector(i, &ef, &eg, ti, out);
                    dedup_push(out, self.at(eg.face, &eg.point(t)));
                }
                return Ok(());
            }
        }
        Err(Error::OpenCurve(format!("no face chain from face {f} to face {g} at ({}, {})", p.x, p.y)))
    }
}

/// Boundary loop(s) and midline as closed space curves.
pub fn extract_curves(state: &FoldedState, params: &InflationParams, tol: &Tolerance) -> Result<Vec<SpaceCurve>> {
    let placed = inflate(state, params, tol)?;
    let tracer = Tracer { state, placed: &placed, params, tol };
    let gluing = &state.gluing;
    let strip = &state.strip;
    let lambda = strip.aspect_ratio;
    let continuation = |head: &Vec2, tail: &Vec2| -> Option<Vec2> {
        if (head - tail).norm() <= tol.eps_point {
            Some(*head)
        } else if (head.x - lambda).abs() <= tol.eps_point
            && (glue_map(gluing.end_gluing, head) - tail).norm() <= tol.eps_point
        {
            Some(*tail)
        } else {
            None
        }
    };

    let mut curves = Vec::new();
    let cycles = gluing.boundary_cycles(strip, tol);
    for (ci, cyc) in cycles.iter().enumerate() {
        let mut pts = Vec::new();
        for w in 0..cyc.len() {
            let e = &gluing.boundary_cycle[cyc[w]].edge;
            let next = &gluing.boundary_cycle[cyc[(w + 1) % cyc.len()]].edge;
            dedup_push(&mut pts, tracer.at(e.face, &e.from));
            dedup_push(&mut pts, tracer.at(e.face, &e.to));
            let q = continuation(&e.to, &next.from)
                .ok_or_else(|| Error::OpenCurve(format!("boundary edge {} does not reach the next edge", cyc[w])))?;
            if e.face != next.face || (e.to - q).norm() > tol.eps_point {
                tracer.through_vertex(e.face, &e.to, next.face, &q, &mut pts)?;
            }
        }
        close(&mut pts);
        let component = if ci == 0 { Component::Boundary } else { Component::Boundary2 };
        curves.push(SpaceCurve { component, points: pts });
    }

    let mid = &gluing.midline_segments;
    let mut pts = Vec::new();
    for w in 0..mid.len() {
        let s = &mid[w];
        let next = &mid[(w + 1) % mid.len()];
        dedup_push(&mut pts, tracer.at(s.face, &s.from));
        dedup_push(&mut pts, tracer.at(s.face, &s.to));
        let q = continuation(&s.to, &next.from)
            .ok_or_else(|| Error::OpenCurve(format!("midline segment {w} does not reach the next one")))?;
        let (i, ef, eg) = tracer
            .seam(s.face, next.face, &s.to)
            .ok_or_else(|| Error::OpenCurve(format!("midline crosses no seam after segment {w}")))?;
        let t = Tracer::param(&ef, &s.to);
        if (eg.point(t) - q).norm() > tol.eps_point {
            return Err(Error::OpenCurve(format!("midline seam {i} misroutes")));
        }
        tracer.connector(i, &ef, &eg, t, &mut pts);
    }
    close(&mut pts);
    curves.push(SpaceCurve { component: Component::Midline, points: pts });

    for c in &curves {
        if c.points.len() < 3 {
            return Err(Error::OpenCurve(format!("{} has fewer than 3 vertices", c.component)));
        }
    }
    Ok(curves)
}

fn close(pts: &mut Vec<Vec3>) {
    while pts.len() > 1 && (pts[0] - pts[pts.len() - 1]).norm() <= 1e-12 {
        pts.pop();
    }
}

/// Smallest distance between non-adjacent segments of the curves; curves are
/// embedded when this is positive.
pub fn min_separation(curves: &[SpaceCurve]) -> f64 {
    let segs: Vec<(usize, usize, usize, Vec3, Vec3)> = curves
        .iter()
        .enumerate()
        .flat_map(|(c, cu)| closed_segments(&cu.points).map(move |(i, a, b)| (c, i, cu.points.len(), a, b)))
        .collect();
    let mut best = f64::INFINITY;
    for i in 0..segs.len() {
        for j in (i + 1)..segs.len() {
            let (x, y) = (&segs[i], &segs[j]);
            if x.0 == y.0 && ((x.1 + 1) % x.2 == y.1 || (y.1 + 1) % y.2 == x.1) {
                continue;
            }
            best = best.min(segment_distance(&x.3, &x.4, &y.3, &y.4));
        }
    }
    best
}

/// Position on a curve: segment index and parameter along it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrandPoint {
    pub curve: usize,
    pub segment: usize,
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Crossing {
    pub over: StrandPoint,
    pub under: StrandPoint,
    pub sign: i8,
    pub point: Vec2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Visit {
    pub crossing: usize,
    pub over: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossingDiagram {
    pub direction: Vec3,
    pub components: Vec<Component>,
    pub crossings: Vec<Crossing>,
    /// Crossing visits along each curve in order.
    pub gauss: Vec<Vec<Visit>>,
}

impl CrossingDiagram {
    /// Signs of crossings between two distinct components.
    pub fn inter_component_signs(&self, a: usize, b: usize) -> impl Iterator<Item = i64> + '_ {
        self.crossings.iter().filter_map(move |c| {
            let pair = (c.over.curve, c.under.curve);
            (pair == (a, b) || pair == (b, a)).then_some(c.sign as i64)
        })
    }

    pub fn component_index(&self, c: Component) -> Option<usize> {
        self.components.iter().position(|&x| x == c)
    }

    /// Line-oriented text dump: direction, crossings and Gauss sequences.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let d = self.direction;
        let _ = writeln!(s, "direction {} {} {}", fmt9(d.x), fmt9(d.y), fmt9(d.z));
        for (i, c) in self.crossings.iter().enumerate() {
            let _ = writeln!(
                s,
                "crossing {i} {} {} {:+}",
                self.components[c.over.curve], self.components[c.under.curve], c.sign
            );
        }
        for (k, g) in self.gauss.iter().enumerate() {
            let seq: Vec<String> =
                g.iter().map(|v| format!("{}{}", if v.over { 'O' } else { 'U' }, v.crossing)).collect();
            let _ = writeln!(s, "gauss {} {}", self.components[k], seq.join(" "));
        }
        s
    }

    /// Reads the `to_text` format back. Strand positions are not stored, so
    /// only the combinatorics survive.
    pub fn from_text(text: &str) -> Result<CrossingDiagram> {
        let bad = |line: &str| Error::InvalidInput(format!("diagram line {line:?}"));
        let mut direction = Vec3::z();
        let mut raw: Vec<(Component, Component, i8)> = Vec::new();
        let mut components = Vec::new();
        let mut gauss = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let w: Vec<&str> = line.split_whitespace().collect();
            match w[0] {
                "direction" if w.len() == 4 => {
                    let v: Vec<f64> = w[1..]
                        .iter()
                        .map(|x| x.parse())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| bad(line))?;
                    direction = Vec3::new(v[0], v[1], v[2]);
                }
                "crossing" if w.len() == 5 => {
                    let id: usize = w[1].parse().map_err(|_| bad(line))?;
                    if id != raw.len() {
                        return Err(bad(line));
                    }
                    let over = Component::parse(w[2]).ok_or_else(|| bad(line))?;
                    let under = Component::parse(w[3]).ok_or_else(|| bad(line))?;
                    let sign = match w[4] {
                        "+1" | "1" => 1,
                        "-1" => -1,
                        _ => return Err(bad(line)),
                    };
                    raw.push((over, under, sign));
                }
                "gauss" if w.len() >= 2 => {
                    components.push(Component::parse(w[1]).ok_or_else(|| bad(line))?);
                    let mut seq = Vec::new();
                    for tok in &w[2..] {
                        let over = match tok.as_bytes()[0] {
                            b'O' => true,
                            b'U' => false,
                            _ => return Err(bad(line)),
                        };
                        let crossing: usize = tok[1..].parse().map_err(|_| bad(line))?;
                        seq.push(Visit { crossing, over });
                    }
                    gauss.push(seq);
                }
                _ => return Err(bad(line)),
            }
        }
        let index = |c: Component| {
            components.iter().position(|&x| x == c).ok_or_else(|| Error::InvalidInput(format!("no gauss line for {c}")))
        };
        let mut crossings = Vec::with_capacity(raw.len());
        for &(o, u, sign) in &raw {
            let at = |curve| StrandPoint { curve, segment: 0, t: 0.0 };
            crossings.push(Crossing { over: at(index(o)?), under: at(index(u)?), sign, point: Vec2::zeros() });
        }
        for (i, c) in crossings.iter().enumerate() {
            let count = |k: usize, over: bool| gauss[k].iter().filter(|v| v.crossing == i && v.over == over).count();
            if count(c.over.curve, true) != 1 || count(c.under.curve, false) != 1 {
                return Err(Error::InvalidInput(format!("crossing {i} is not visited once over and once under")));
            }
        }
        if gauss.iter().flatten().any(|v| v.crossing >= crossings.len()) {
            return Err(Error::InvalidInput("gauss sequence names an unknown crossing".into()));
        }
        Ok(CrossingDiagram { direction, components, crossings, gauss })
    }
}

/// Signed crossing diagram of the curves under the seeded generic projection.
pub fn crossing_diagram(curves: &[SpaceCurve], seed: u64, tol: &Tolerance) -> Result<CrossingDiagram> {
    let raw: Vec<Vec<Vec3>> = curves.iter().map(|c| c.points.clone()).collect();
    let dir = generic_direction(&raw, seed, tol)?;
    diagram_along(curves, &dir, tol)
}

/// Crossing diagram for a given (assumed generic) projection direction.
pub fn diagram_along(curves: &[SpaceCurve], dir: &Vec3, tol: &Tolerance) -> Result<CrossingDiagram> {
    let basis = projection_basis(dir);
    let segs: Vec<(usize, usize, Vec3, Vec3)> = curves
        .iter()
        .enumerate()
        .flat_map(|(c, cu)| closed_segments(&cu.points).map(move |(i, a, b)| (c, i, a, b)))
        .collect();
    let mut crossings = Vec::new();
    for i in 0..segs.len() {
        for j in (i + 1)..segs.len() {
            let (x, y) = (&segs[i], &segs[j]);
            if x.0 == y.0 {
                let n = curves[x.0].points.len();
                if (x.1 + 1) % n == y.1 || (y.1 + 1) % n == x.1 {
                    continue;
                }
            }
            let (xa, xb) = (project(&x.2, &basis), project(&x.3, &basis));
            let (ya, yb) = (project(&y.2, &basis), project(&y.3, &basis));
            let Some(c) = segment_crossing(&xa, &xb, &ya, &yb, tol)? else { continue };
            let hx = (x.2 + (x.3 - x.2) * c.s).dot(dir);
            let hy = (y.2 + (y.3 - y.2) * c.t).dot(dir);
            if (hx - hy).abs() <= tol.eps_point {
                return Err(Error::DegenerateCrossing("strands meet in space".into()));
            }
            let px = StrandPoint { curve: x.0, segment: x.1, t: c.s };
            let py = StrandPoint { curve: y.0, segment: y.1, t: c.t };
            let (over, under, to, tu) = if hx > hy { (px, py, xb - xa, yb - ya) } else { (py, px, yb - ya, xb - xa) };
            let sign = if cross2(&to, &tu) > 0.0 { 1 } else { -1 };
            crossings.push(Crossing { over, under, sign, point: c.point });
        }
    }
    let mut gauss = Vec::new();
    for k in 0..curves.len() {
        let mut visits: Vec<(usize, f64, Visit)> = Vec::new();
        for (id, c) in crossings.iter().enumerate() {
            if c.over.curve == k {
                visits.push((c.over.segment, c.over.t, Visit { crossing: id, over: true }));
            }
            if c.under.curve == k {
                visits.push((c.under.segment, c.under.t, Visit { crossing: id, over: false }));
            }
        }
        visits.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        gauss.push(visits.into_iter().map(|v| v.2).collect());
    }
    Ok(CrossingDiagram { direction: *dir, components: curves.iter().map(|c| c.component).collect(), crossings, gauss })
}

/// Polyline text export: one `component x y z` line per vertex.
pub fn curves_to_text(curves: &[SpaceCurve]) -> String {
    let mut s = String::new();
    for c in curves {
        for p in &c.points {
            let _ = writeln!(s, "{} {} {} {}", c.component, fmt9(p.x), fmt9(p.y), fmt9(p.z));
        }
    }
    s
}
