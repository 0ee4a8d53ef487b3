//! Smooth developable approximations of folded strips.

pub mod checks;
pub mod export;
pub mod mesh;
pub mod profile;

pub use checks::{boundary_symmetry, check_developable, check_embedded, Developability, Embedding};
pub use export::to_obj;
pub use mesh::{
    aspect_ratio, assemble_mesh, boundary_loops, build_mesh, flat_mesh, mesh_curves, MeshParams, Provenance, StripMesh,
};
pub use profile::{smooth_step, u_profile, Profile};
