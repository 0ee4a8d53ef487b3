//! Triangle mesh of the smooth approximation: offset faces joined by ruled
//! sweeps of fold profiles, with a development in the plane.

use crate::curves::{inflate, outward, Component, InflationParams, SpaceCurve};
use crate::error::{Error, Result};
use crate::folding::FoldedState;
use crate::geometry::{cross2, RigidPlacement, Tolerance, Vec2, Vec3};
use crate::strip::{midline_segments, point_on_segment, CreasedStrip, EdgeRef};

use super::checks::check_embedded;
use super::profile::{bend_pieces, u_pieces, z_pieces, Profile};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshParams {
    /// Layer gap.
    pub eps: f64,
    /// Distance kept clear at each end of a crease; joints span the rest.
    pub joint_inset: f64,
    /// Arclength of each profile turn as a multiple of `eps`.
    pub smoothness: f64,
    /// Chords per profile turn.
    pub samples: usize,
    /// Shorter straight run of a half-turn as a multiple of its rise.
    pub run: f64,
}

impl MeshParams {
    pub fn new(eps: f64) -> Self {
        MeshParams { eps, joint_inset: 0.05, smoothness: 0.25, samples: 16, run: 0.02 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || !(self.smoothness > 0.0) || !(self.run >= 0.0) || !(self.joint_inset >= 0.0) {
            return Err(Error::InvalidInput(format!("bad mesh parameters {self:?}")));
        }
        if self.samples < 16 {
            return Err(Error::InvalidInput(format!("{} samples per turn; at least 16 needed", self.samples)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Face(usize),
    Joint(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Joint {
    pub seam: usize,
    pub flat: bool,
    /// Developed width of the sweep across the crease.
    pub length: f64,
    /// Offset along the crease between the two welded face edges.
    pub shear: f64,
    pub profile: Profile,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StripMesh {
    pub vertices: Vec<Vec3>,
    /// Development coordinates of each vertex.
    pub dev: Vec<Vec2>,
    pub triangles: Vec<[usize; 3]>,
    pub provenance: Vec<Provenance>,
    /// Vertices that are one point of the surface but carry two development
    /// positions (both ends of the strip).
    pub welds: Vec<(usize, usize)>,
    pub joints: Vec<Joint>,
    /// Midline as a vertex path from the start of the strip to its end; on a
    /// glued strip the last vertex is welded to the first.
    pub midline: Vec<usize>,
    pub params: MeshParams,
}

impl StripMesh {
    /// Representative vertex of each weld class.
    pub fn canonical(&self) -> Vec<usize> {
        let mut rep: Vec<usize> = (0..self.vertices.len()).collect();
        for &(a, b) in &self.welds {
            let (x, y) = (rep[a], rep[b]);
            let m = x.min(y);
            for r in rep.iter_mut() {
                if *r == x || *r == y {
                    *r = m;
                }
            }
        }
        rep
    }

    /// Total development length along the midline.
    pub fn aspect_ratio(&self) -> f64 {
        self.midline.windows(2).map(|w| (self.dev[w[1]] - self.dev[w[0]]).norm()).sum()
    }

    pub fn midline_points(&self) -> Vec<Vec3> {
        let n = self.midline.len();
        self.midline[..n - 1].iter().map(|&v| self.vertices[v]).collect()
    }
}

pub fn aspect_ratio(mesh: &StripMesh) -> f64 {
    mesh.aspect_ratio()
}

struct Seam {
    fa: usize,
    fb: usize,
    ea: EdgeRef,
    eb: EdgeRef,
    len: f64,
    cols: [f64; 3],
    e1: Vec3,
    e2: Vec3,
    g: Vec3,
    n_dev: Vec2,
    g_dev: Vec2,
    joint: Joint,
}

fn face_vertex(list: &[(Vec2, usize)], p: &Vec2) -> Option<usize> {
    list.iter().find(|(q, _)| (q - p).norm() <= 1e-9).map(|&(_, i)| i)
}

/// Builds the mesh without checking for collisions.
pub fn assemble_mesh(state: &FoldedState, params: &MeshParams, tol: &Tolerance) -> Result<StripMesh> {
    params.validate()?;
    let placed = inflate(state, &InflationParams::new(params.eps), tol)?;
    let n = state.face_count();
    let pairs = &state.gluing.side_pairs;
    if pairs.len() != n {
        return Err(Error::InvalidInput(format!("{} side pairs for {n} faces", pairs.len())));
    }
    let width = params.smoothness * params.eps;
    let mut seams = Vec::with_capacity(n);
    for (i, sp) in pairs.iter().enumerate() {
        let (fa, fb) = (sp.a.face, sp.b.face);
        if fa != i || fb != (i + 1) % n {
            return Err(Error::InvalidInput(format!("side pair {i} does not join faces {i} and {}", (i + 1) % n)));
        }
        let len = sp.a.length();
        let (t0, t1) = (params.joint_inset, len - params.joint_inset);
        if t0 >= 0.5 * len {
            return Err(Error::InvalidInput(format!("joint inset {t0} leaves nothing of seam {i}")));
        }
        let at = |t: f64| placed[fa].apply_dev(&sp.a.point(t / len));
        let bt = |t: f64| placed[fb].apply_dev(&sp.b.point(t / len));
        let g = (at(len) - at(0.0)).normalize();
        let d = bt(0.0) - at(0.0);
        if ((bt(len) - at(len)) - d).norm() > 1e-9 {
            return Err(Error::NotDevelopable(format!("seam {i} edges are not parallel translates")));
        }
        let shear = d.dot(&g);
        let dperp = d - g * shear;
        let ma = outward(state, fa, &sp.a.from, &sp.a.to);
        let mb = outward(state, fb, &sp.b.from, &sp.b.to);
        let flat = state.seam_is_flat(i);
        let e1 = ma;
        let (e2, pieces) = if flat {
            let up = dperp - e1 * dperp.dot(&e1);
            let rise = up.norm();
            if rise <= tol.eps_point {
                return Err(Error::DegenerateProfile(format!("seam {i} joins faces on one layer")));
            }
            let e2 = up / rise;
            let dx = dperp.dot(&e1);
            // A flat seam either folds the strip back over itself or, where the
            // strip runs straight on at another layer, steps between layers.
            let pieces = if ma.dot(&mb) > 0.0 {
                u_pieces(dx, rise, params.run * rise, width, params.samples)?
            } else {
                z_pieces(dx, rise, params.run * rise, width, params.samples)?
            };
            (e2, pieces)
        } else {
            let target = -mb;
            let side = target - e1 * target.dot(&e1);
            let e2 = side.normalize();
            let delta = target.dot(&e2).atan2(target.dot(&e1));
            (e2, bend_pieces(delta, dperp.dot(&e1), dperp.dot(&e2), width, params.samples)?)
        };
        let profile = Profile::trace(Vec2::zeros(), 0.0, &pieces, params.samples, params.smoothness);
        let end = e1 * profile.end().x + e2 * profile.end().y;
        if (end - dperp).norm() > 1e-9 {
            return Err(Error::DegenerateProfile(format!(
                "seam {i} profile misses its far edge by {}",
                (end - dperp).norm()
            )));
        }
        let dir = (sp.a.to - sp.a.from) / len;
        let mut n_dev = Vec2::new(dir.y, -dir.x);
        if (state.strip.faces[fa].centroid() - sp.a.from).dot(&n_dev) > 0.0 {
            n_dev = -n_dev;
        }
        let length = profile.length;
        seams.push(Seam {
            fa,
            fb,
            ea: sp.a.clone(),
            eb: sp.b.clone(),
            len,
            cols: [t0, 0.5 * len, t1],
            e1,
            e2,
            g,
            n_dev,
            g_dev: dir,
            joint: Joint { seam: i, flat, length, shear, profile },
        });
    }

    // Development offsets: each face is a translate of its strip position.
    let mut off = vec![Vec2::zeros(); n];
    for k in 0..n - 1 {
        let s = &seams[k];
        off[k + 1] = off[k] + s.n_dev * s.joint.length + s.g_dev * s.joint.shear;
    }

    let mut mesh = StripMesh {
        vertices: Vec::new(),
        dev: Vec::new(),
        triangles: Vec::new(),
        provenance: Vec::new(),
        welds: Vec::new(),
        joints: Vec::new(),
        midline: Vec::new(),
        params: *params,
    };
    let add = |mesh: &mut StripMesh, p: Vec3, d: Vec2| {
        mesh.vertices.push(p);
        mesh.dev.push(d);
        mesh.vertices.len() - 1
    };

    let mut face_lists: Vec<Vec<(Vec2, usize)>> = vec![Vec::new(); n];
    for f in 0..n {
        let face = &state.strip.faces[f];
        let mut extra: Vec<Vec2> = Vec::new();
        for s in &seams {
            for &c in &s.cols {
                if s.fa == f {
                    extra.push(s.ea.point(c / s.len));
                }
                if s.fb == f {
                    extra.push(s.eb.point(c / s.len));
                }
            }
        }
        let mut ring: Vec<Vec2> = Vec::new();
        for (a, b) in face.edges() {
            ring.push(a);
            let mut on: Vec<(f64, Vec2)> = extra
                .iter()
                .filter(|p| point_on_segment(p, &a, &b, tol.eps_point))
                .map(|p| ((p - a).norm(), *p))
                .filter(|(t, p)| *t > 1e-9 && (p - b).norm() > 1e-9)
                .collect();
            on.sort_by(|x, y| x.0.total_cmp(&y.0));
            on.dedup_by(|x, y| (x.0 - y.0).abs() <= 1e-9);
            ring.extend(on.into_iter().map(|(_, p)| p));
        }
        let centre = face.centroid();
        let pl: &RigidPlacement = &placed[f];
        let ci = add(&mut mesh, pl.apply_dev(&centre), centre + off[f]);
        let ids: Vec<usize> = ring.iter().map(|p| add(&mut mesh, pl.apply_dev(p), p + off[f])).collect();
        face_lists[f] = ring.iter().copied().zip(ids.iter().copied()).collect();
        for j in 0..ids.len() {
            mesh.triangles.push([ci, ids[j], ids[(j + 1) % ids.len()]]);
            mesh.provenance.push(Provenance::Face(f));
        }
    }

    let mut columns: Vec<[Vec<usize>; 3]> = Vec::with_capacity(n);
    for (i, s) in seams.iter().enumerate() {
        let prof = &s.joint.profile;
        let kn = prof.points.len();
        let mut cols: [Vec<usize>; 3] = Default::default();
        for (ci, &c) in s.cols.iter().enumerate() {
            let pa = s.ea.point(c / s.len);
            let pb = s.eb.point(c / s.len);
            let va = face_vertex(&face_lists[s.fa], &pa).expect("seam points were inserted");
            let vb = face_vertex(&face_lists[s.fb], &pb).expect("seam points were inserted");
            let base3 = mesh.vertices[va];
            let base_dev = pa + off[s.fa];
            let mut col = vec![va];
            for k in 1..kn {
                let q = prof.points[k];
                let drift = s.joint.shear * prof.arclength[k] / s.joint.length;
                let p3 = base3 + s.e1 * q.x + s.e2 * q.y + s.g * drift;
                let pd = base_dev + s.n_dev * prof.arclength[k] + s.g_dev * drift;
                if k + 1 < kn {
                    col.push(add(&mut mesh, p3, pd));
                } else if i + 1 < n {
                    if (p3 - mesh.vertices[vb]).norm() > 1e-9 || (pd - mesh.dev[vb]).norm() > 1e-9 {
                        return Err(Error::NotDevelopable(format!("seam {i} sweep does not land on face {}", s.fb)));
                    }
                    col.push(vb);
                } else {
                    if (p3 - mesh.vertices[vb]).norm() > 1e-9 {
                        return Err(Error::NotDevelopable("end sweep does not land on the first face".into()));
                    }
                    let at = mesh.vertices[vb];
                    let dup = add(&mut mesh, at, pd);
                    mesh.welds.push((vb, dup));
                    col.push(dup);
                }
            }
            cols[ci] = col;
        }
        for pair in [(0, 1), (1, 2)] {
            let (l, r) = (&cols[pair.0], &cols[pair.1]);
            for k in 0..kn - 1 {
                for tri in [[l[k], l[k + 1], r[k + 1]], [l[k], r[k + 1], r[k]]] {
                    let (a, b, c) = (mesh.dev[tri[0]], mesh.dev[tri[1]], mesh.dev[tri[2]]);
                    let t = if cross2(&(b - a), &(c - a)) >= 0.0 { tri } else { [tri[0], tri[2], tri[1]] };
                    mesh.triangles.push(t);
                    mesh.provenance.push(Provenance::Joint(i));
                }
            }
        }
        columns.push(cols);
    }

    // Midline: start of the first face, then through each face and sweep.
    let glue = &seams[n - 1];
    let start = face_vertex(&face_lists[0], &glue.eb.point(0.5)).expect("glue midpoint is a vertex");
    mesh.midline.push(start);
    for cols in &columns {
        mesh.midline.extend(cols[1].iter().copied());
    }
    mesh.joints = seams.into_iter().map(|s| s.joint).collect();
    Ok(mesh)
}

/// Boundary loops of the welded mesh as canonical vertex cycles. The first
/// starts at the strip corner (0, 0) and the second, if any, at (0, 1); both
/// leave along the strip edge towards increasing x.
pub fn boundary_loops(mesh: &StripMesh) -> Result<Vec<Vec<usize>>> {
    use std::collections::BTreeMap;
    let rep = mesh.canonical();
    let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for t in &mesh.triangles {
        for j in 0..3 {
            let (a, b) = (rep[t[j]], rep[t[(j + 1) % 3]]);
            *count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&(a, b), &c) in &count {
        if c == 1 {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        } else if c > 2 {
            return Err(Error::NotDevelopable(format!("mesh edge {a}-{b} is shared by {c} triangles")));
        }
    }
    if adj.values().any(|v| v.len() != 2) {
        return Err(Error::OpenCurve("mesh boundary is not a union of loops".into()));
    }
    let mut loops = Vec::new();
    let mut used = std::collections::BTreeSet::new();
    for corner in [Vec2::new(0.0, 0.0), Vec2::new(0.0, 1.0)] {
        let Some(start) = (0..mesh.dev.len()).find(|&v| (mesh.dev[v] - corner).norm() <= 1e-9) else {
            continue;
        };
        let start = rep[start];
        if used.contains(&start) {
            continue;
        }
        let nb = adj.get(&start).ok_or_else(|| Error::OpenCurve("strip corner is not on the boundary".into()))?;
        let mut next = if mesh.dev[nb[0]].x >= mesh.dev[nb[1]].x { nb[0] } else { nb[1] };
        let mut cycle = vec![start];
        let mut prev = start;
        while next != start {
            cycle.push(next);
            let n = &adj[&next];
            let after = if n[0] == prev { n[1] } else { n[0] };
            prev = next;
            next = after;
        }
        used.extend(cycle.iter().copied());
        loops.push(cycle);
    }
    if used.len() != adj.len() {
        return Err(Error::OpenCurve("mesh boundary has a loop away from the strip corners".into()));
    }
    Ok(loops)
}

/// Boundary and midline of the mesh as space curves.
pub fn mesh_curves(mesh: &StripMesh) -> Result<Vec<SpaceCurve>> {
    let loops = boundary_loops(mesh)?;
    let mut out: Vec<SpaceCurve> = loops
        .iter()
        .enumerate()
        .map(|(i, l)| SpaceCurve {
            component: if i == 0 { Component::Boundary } else { Component::Boundary2 },
            points: l.iter().map(|&v| mesh.vertices[v]).collect(),
        })
        .collect();
    out.push(SpaceCurve { component: Component::Midline, points: mesh.midline_points() });
    Ok(out)
}

/// Straight-run ratios tried, shortest first, when looking for a collision
/// free mesh.
pub const RUN_LADDER: [f64; 8] = [0.02, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2];

/// Builds the mesh and rejects it if any two non-adjacent triangles touch.
/// With `auto_run`, runs from `RUN_LADDER` no shorter than `params.run` are
/// tried in turn and the first embedded mesh wins.
pub fn build_mesh(state: &FoldedState, params: &MeshParams, auto_run: bool, tol: &Tolerance) -> Result<StripMesh> {
    let runs: Vec<f64> = if auto_run {
        std::iter::once(params.run).chain(RUN_LADDER.into_iter().filter(|&r| r > params.run)).collect()
    } else {
        vec![params.run]
    };
    let mut last = String::new();
    for run in runs {
        let p = MeshParams { run, ..*params };
        let mesh = assemble_mesh(state, &p, tol)?;
        let emb = check_embedded(&mesh, tol.eps_point);
        match emb.collision {
            None => return Ok(mesh),
            Some((a, b)) => {
                last = format!(
                    "triangles {a} ({:?}) and {b} ({:?}) touch at run {run}",
                    mesh.provenance[a], mesh.provenance[b]
                )
            }
        }
    }
    Err(Error::JointCollision(last))
}

/// The developed strip itself, lying in z = 0 with no joints and its ends
/// left open.
pub fn flat_mesh(strip: &CreasedStrip, params: &MeshParams, tol: &Tolerance) -> StripMesh {
    let mid = midline_segments(strip);
    let mut mesh = StripMesh {
        vertices: Vec::new(),
        dev: Vec::new(),
        triangles: Vec::new(),
        provenance: Vec::new(),
        welds: Vec::new(),
        joints: Vec::new(),
        midline: Vec::new(),
        params: *params,
    };
    let index = |mesh: &mut StripMesh, p: Vec2| match mesh.dev.iter().position(|q| (q - p).norm() <= tol.eps_point) {
        Some(i) => i,
        None => {
            mesh.vertices.push(Vec3::new(p.x, p.y, 0.0));
            mesh.dev.push(p);
            mesh.dev.len() - 1
        }
    };
    for (f, face) in strip.faces.iter().enumerate() {
        let mut ring = Vec::new();
        for (a, b) in face.edges() {
            ring.push(a);
            for m in mid.iter().flat_map(|s| [s.from, s.to]) {
                let fresh = ring.iter().all(|q: &Vec2| (q - m).norm() > tol.eps_point);
                if fresh && point_on_segment(&m, &a, &b, tol.eps_point) && (m - b).norm() > tol.eps_point {
                    ring.push(m);
                }
            }
        }
        let c = index(&mut mesh, face.centroid());
        let ids: Vec<usize> = ring.iter().map(|&p| index(&mut mesh, p)).collect();
        for j in 0..ids.len() {
            let (p, q) = (ids[j], ids[(j + 1) % ids.len()]);
            let ccw = cross2(&(mesh.dev[p] - mesh.dev[c]), &(mesh.dev[q] - mesh.dev[c])) >= 0.0;
            mesh.triangles.push(if ccw { [c, p, q] } else { [c, q, p] });
            mesh.provenance.push(Provenance::Face(f));
        }
    }
    let mut xs: Vec<Vec2> = mid.iter().flat_map(|s| [s.from, s.to]).collect();
    xs.sort_by(|a, b| a.x.total_cmp(&b.x));
    xs.dedup_by(|a, b| (*a - *b).norm() <= tol.eps_point);
    mesh.midline = xs.into_iter().map(|p| index(&mut mesh, p)).collect();
    mesh
}
