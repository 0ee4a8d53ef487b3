//! Wavefront OBJ output.

use std::fmt::Write;

use crate::report::fmt9;

use super::mesh::StripMesh;

/// Positions as `v`, development coordinates as `vt`, triangles as `f v/vt`.
pub fn to_obj(mesh: &StripMesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# paperband mesh: {} vertices, {} triangles", mesh.vertices.len(), mesh.triangles.len());
    for p in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", fmt9(p.x), fmt9(p.y), fmt9(p.z));
    }
    for d in &mesh.dev {
        let _ = writeln!(out, "vt {} {}", fmt9(d.x), fmt9(d.y));
    }
    for t in &mesh.triangles {
        let _ = writeln!(out, "f {0}/{0} {1}/{1} {2}/{2}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    out
}
