//! Developability and embedding checks for strip meshes.

use std::f64::consts::TAU;

use crate::geometry::{cross2, segment_distance, Vec3};

use super::mesh::StripMesh;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Developability {
    /// Largest relative difference between an edge's length in space and in
    /// the plane.
    pub edge_distortion: f64,
    /// Largest angle defect at an interior vertex.
    pub angle_defect: f64,
    /// Triangles whose development is not counterclockwise.
    pub inverted: usize,
}

impl Developability {
    pub fn holds(&self, tol: f64) -> bool {
        self.edge_distortion < tol && self.angle_defect < tol && self.inverted == 0
    }
}

fn angle(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let (u, v) = (b - a, c - a);
    u.cross(&v).norm().atan2(u.dot(&v))
}

pub fn check_developable(mesh: &StripMesh) -> Developability {
    let rep = mesh.canonical();
    let lift = |p: &crate::geometry::Vec2| Vec3::new(p.x, p.y, 0.0);
    let mut edge_distortion: f64 = 0.0;
    let mut inverted = 0;
    let mut sum3 = vec![0.0; mesh.vertices.len()];
    let mut sum2 = vec![0.0; mesh.vertices.len()];
    for t in &mesh.triangles {
        let (d0, d1, d2) = (mesh.dev[t[0]], mesh.dev[t[1]], mesh.dev[t[2]]);
        if cross2(&(d1 - d0), &(d2 - d0)) <= 0.0 {
            inverted += 1;
        }
        for j in 0..3 {
            let (a, b, c) = (t[j], t[(j + 1) % 3], t[(j + 2) % 3]);
            let l3 = (mesh.vertices[b] - mesh.vertices[a]).norm();
            let l2 = (mesh.dev[b] - mesh.dev[a]).norm();
            edge_distortion = edge_distortion.max((l3 - l2).abs() / l2);
            sum3[rep[a]] += angle(&mesh.vertices[a], &mesh.vertices[b], &mesh.vertices[c]);
            sum2[rep[a]] += angle(&lift(&mesh.dev[a]), &lift(&mesh.dev[b]), &lift(&mesh.dev[c]));
        }
    }
    // Interior vertices are the ones whose developed angles close up.
    let angle_defect = (0..mesh.vertices.len())
        .filter(|&v| rep[v] == v && (sum2[v] - TAU).abs() < 1e-6)
        .map(|v| (TAU - sum3[v]).abs())
        .fold(0.0, f64::max);
    Developability { edge_distortion, angle_defect, inverted }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Embedding {
    /// First pair of triangles found touching without sharing a vertex.
    pub collision: Option<(usize, usize)>,
    pub pairs_tested: usize,
}

impl Embedding {
    pub fn embedded(&self) -> bool {
        self.collision.is_none()
    }
}

/// Whether segment `pq` passes through the interior of triangle `t`, its
/// endpoints lying strictly on opposite sides of the triangle's plane.
fn segment_hits_triangle(p: &Vec3, q: &Vec3, t: &[Vec3; 3]) -> bool {
    let n = (t[1] - t[0]).cross(&(t[2] - t[0]));
    let nn = n.norm();
    if nn <= 1e-300 {
        return false;
    }
    let n = n / nn;
    let (dp, dq) = ((p - t[0]).dot(&n), (q - t[0]).dot(&n));
    if dp * dq >= 0.0 {
        return false;
    }
    let x = p + (q - p) * (dp / (dp - dq));
    (0..3).all(|j| (t[(j + 1) % 3] - t[j]).cross(&(x - t[j])).dot(&n) >= 0.0)
}

fn point_triangle_distance(p: &Vec3, t: &[Vec3; 3]) -> f64 {
    let n = (t[1] - t[0]).cross(&(t[2] - t[0]));
    let nn = n.norm();
    if nn > 1e-300 {
        let n = n / nn;
        let h = (p - t[0]).dot(&n);
        let f = p - n * h;
        let inside = (0..3).all(|j| (t[(j + 1) % 3] - t[j]).cross(&(f - t[j])).dot(&n) >= 0.0);
        if inside {
            return h.abs();
        }
    }
    (0..3).map(|j| segment_distance(p, p, &t[j], &t[(j + 1) % 3])).fold(f64::INFINITY, f64::min)
}

/// Closest distance between two triangles (zero when they cross).
pub fn triangle_distance(a: &[Vec3; 3], b: &[Vec3; 3]) -> f64 {
    for j in 0..3 {
        if segment_hits_triangle(&a[j], &a[(j + 1) % 3], b) || segment_hits_triangle(&b[j], &b[(j + 1) % 3], a) {
            return 0.0;
        }
    }
    let mut d = f64::INFINITY;
    for i in 0..3 {
        for j in 0..3 {
            d = d.min(segment_distance(&a[i], &a[(i + 1) % 3], &b[j], &b[(j + 1) % 3]));
        }
        d = d.min(point_triangle_distance(&a[i], b)).min(point_triangle_distance(&b[i], a));
    }
    d
}

/// Tests every pair of triangles that share no (welded) vertex for contact
/// closer than `clearance`.
pub fn check_embedded(mesh: &StripMesh, clearance: f64) -> Embedding {
    let rep = mesh.canonical();
    let tris: Vec<[Vec3; 3]> = mesh.triangles.iter().map(|t| t.map(|v| mesh.vertices[v])).collect();
    let boxes: Vec<(Vec3, Vec3)> = tris
        .iter()
        .map(|t| {
            let lo = t[0].inf(&t[1]).inf(&t[2]).add_scalar(-clearance);
            let hi = t[0].sup(&t[1]).sup(&t[2]).add_scalar(clearance);
            (lo, hi)
        })
        .collect();
    let ids: Vec<[usize; 3]> = mesh.triangles.iter().map(|t| t.map(|v| rep[v])).collect();
    let mut order: Vec<usize> = (0..tris.len()).collect();
    order.sort_by(|&a, &b| boxes[a].0.x.total_cmp(&boxes[b].0.x));
    let mut pairs_tested = 0;
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if boxes[j].0.x > boxes[i].1.x {
                break;
            }
            let overlap = (1..3).all(|c| boxes[j].0[c] <= boxes[i].1[c] && boxes[i].0[c] <= boxes[j].1[c]);
            if !overlap || ids[i].iter().any(|v| ids[j].contains(v)) {
                continue;
            }
            pairs_tested += 1;
            if triangle_distance(&tris[i], &tris[j]) <= clearance {
                return Embedding { collision: Some((i.min(j), i.max(j))), pairs_tested };
            }
        }
    }
    Embedding { collision: None, pairs_tested }
}

/// Whether the mesh boundary, as a point set, has `order`-fold rotational
/// symmetry about an axis from `axes` through its vertex centroid.
pub fn boundary_symmetry(mesh: &StripMesh, axes: &[Vec3], order: u32, eps: f64) -> crate::error::Result<bool> {
    let sets: Vec<Vec<Vec3>> =
        super::mesh::boundary_loops(mesh)?.iter().map(|l| l.iter().map(|&v| mesh.vertices[v]).collect()).collect();
    let pts: Vec<&Vec3> = sets.iter().flatten().collect();
    let center = pts.iter().copied().sum::<Vec3>() / pts.len() as f64;
    let all = vec![sets.concat()];
    Ok(crate::folding::has_rotational_symmetry(&all, &center, axes, order, eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use crate::smooth::mesh::MeshParams;
    use approx::assert_relative_eq;

    fn tri(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> [Vec3; 3] {
        [Vec3::from(a), Vec3::from(b), Vec3::from(c)]
    }

    #[test]
    fn parallel_triangles_are_their_gap_apart() {
        let a = tri([0., 0., 0.], [1., 0., 0.], [0., 1., 0.]);
        let b = tri([0., 0., 0.3], [1., 0., 0.3], [0., 1., 0.3]);
        assert_relative_eq!(triangle_distance(&a, &b), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn piercing_triangles_touch() {
        let a = tri([0., 0., 0.], [2., 0., 0.], [0., 2., 0.]);
        let b = tri([0.5, 0.5, -1.], [0.5, 0.5, 1.], [3., 3., 0.5]);
        assert_eq!(triangle_distance(&a, &b), 0.0);
    }

    #[test]
    fn coplanar_neighbours_keep_their_gap() {
        let a = tri([0., 0., 0.], [1., 0., 0.], [0., 1., 0.]);
        let b = tri([1.1, 0., 0.], [2., 0., 0.], [1.1, 1., 0.]);
        assert_relative_eq!(triangle_distance(&a, &b), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn edge_to_edge_distance() {
        let a = tri([0., 0., 0.], [1., 0., 0.], [0., -1., 0.]);
        let b = tri([0.5, 0.2, -1.], [0.5, 0.2, 1.], [0.5, 1., 0.]);
        assert_relative_eq!(triangle_distance(&a, &b), 0.2, epsilon = 1e-12);
    }

    fn mesh(vertices: Vec<Vec3>, dev: Vec<Vec2>, triangles: Vec<[usize; 3]>) -> StripMesh {
        let n = triangles.len();
        StripMesh {
            vertices,
            dev,
            triangles,
            provenance: vec![crate::smooth::Provenance::Face(0); n],
            welds: Vec::new(),
            joints: Vec::new(),
            midline: vec![0, 1],
            params: MeshParams::new(0.02),
        }
    }

    #[test]
    fn bent_square_is_developable() {
        // Two unit squares meeting at a right angle.
        let dev = vec![
            Vec2::new(0., 0.),
            Vec2::new(1., 0.),
            Vec2::new(1., 1.),
            Vec2::new(0., 1.),
            Vec2::new(0., 2.),
            Vec2::new(1., 2.),
        ];
        let v = vec![
            Vec3::new(0., 0., 0.),
            Vec3::new(1., 0., 0.),
            Vec3::new(1., 1., 0.),
            Vec3::new(0., 1., 0.),
            Vec3::new(0., 1., 1.),
            Vec3::new(1., 1., 1.),
        ];
        let m = mesh(v, dev, vec![[0, 1, 2], [0, 2, 3], [3, 2, 5], [3, 5, 4]]);
        let d = check_developable(&m);
        assert!(d.holds(1e-12), "{d:?}");
        assert!(check_embedded(&m, 1e-9).embedded());
    }

    #[test]
    fn stretched_mesh_is_not_developable() {
        let dev = vec![Vec2::new(0., 0.), Vec2::new(1., 0.), Vec2::new(0., 1.)];
        let v = vec![Vec3::new(0., 0., 0.), Vec3::new(1.5, 0., 0.), Vec3::new(0., 1., 0.)];
        let d = check_developable(&mesh(v, dev, vec![[0, 1, 2]]));
        assert_relative_eq!(d.edge_distortion, 0.5, epsilon = 1e-12);
        assert!(d.angle_defect == 0.0);
        let flipped = mesh(
            vec![Vec3::new(0., 0., 0.), Vec3::new(1., 0., 0.), Vec3::new(0., 1., 0.)],
            vec![Vec2::new(0., 0.), Vec2::new(0., 1.), Vec2::new(1., 0.)],
            vec![[0, 1, 2]],
        );
        assert_eq!(check_developable(&flipped).inverted, 1);
    }

    #[test]
    fn cone_point_has_a_defect() {
        // Four right triangles around a raised apex: flat in the plane,
        // pointed in space.
        let dev = vec![Vec2::new(0., 0.), Vec2::new(1., 0.), Vec2::new(0., 1.), Vec2::new(-1., 0.), Vec2::new(0., -1.)];
        let h = 0.5f64;
        let r = (1.0 - h * h).sqrt();
        let v = vec![
            Vec3::new(0., 0., h),
            Vec3::new(r, 0., 0.),
            Vec3::new(0., r, 0.),
            Vec3::new(-r, 0., 0.),
            Vec3::new(0., -r, 0.),
        ];
        let m = mesh(v, dev, vec![[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1]]);
        let d = check_developable(&m);
        assert!(d.angle_defect > 0.1);
    }

    #[test]
    fn crossing_sheets_are_caught() {
        let v = vec![
            Vec3::new(0., 0., 0.),
            Vec3::new(2., 0., 0.),
            Vec3::new(0., 2., 0.),
            Vec3::new(0.5, 0.5, -1.),
            Vec3::new(0.5, 0.5, 1.),
            Vec3::new(3., 3., 0.5),
        ];
        let dev = vec![
            Vec2::new(0., 0.),
            Vec2::new(2., 0.),
            Vec2::new(0., 2.),
            Vec2::new(5., 0.),
            Vec2::new(7., 0.),
            Vec2::new(5., 2.),
        ];
        let e = check_embedded(&mesh(v, dev, vec![[0, 1, 2], [3, 4, 5]]), 1e-9);
        assert_eq!(e.collision, Some((0, 1)));
    }
}
