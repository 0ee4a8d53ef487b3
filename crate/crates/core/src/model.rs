//! Declarative model files: strip, gluing, fold program and expected invariants.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folding::{fold, FoldInstruction, FoldedState};
use crate::geometry::{Tolerance, Vec2};
use crate::strip::{
    boundary_edges, glue_map, midline_segments, BoundaryEdge, Crease, CreasedStrip, EdgeRef, EndGluing, Face,
    GluingDiagram, Side, SidePair,
};

/// Values the full pipeline must reproduce for a model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub lambda: f64,
    pub abs_linking: i64,
    /// Signed linking number under the stored orientations.
    pub linking: i64,
    pub determinant: u64,
    pub faces: usize,
    pub plane_groups: usize,
    pub symmetry_order: u32,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub strip: CreasedStrip,
    pub gluing: GluingDiagram,
    pub program: Vec<FoldInstruction>,
    pub expected: Expected,
}

impl Model {
    /// Assembles a model from its faces, deriving creases (shared edges of
    /// consecutive faces), side pairs, boundary cycle and midline.
    pub fn from_faces(
        name: &str,
        aspect_ratio: f64,
        faces: Vec<Face>,
        end_gluing: EndGluing,
        program: Vec<FoldInstruction>,
        expected: Expected,
    ) -> Result<Model> {
        let tol = Tolerance::default();
        let mut creases = Vec::new();
        for k in 0..faces.len().saturating_sub(1) {
            let shared: Vec<Vec2> =
                faces[k].vertices.iter().filter(|v| faces[k + 1].vertex_index(v, &tol).is_some()).copied().collect();
            if shared.len() != 2 {
                return Err(Error::ModelFile(format!("faces {k} and {} do not share an edge", k + 1)));
            }
            creases.push(Crease { faces: (k, k + 1), start: shared[0], end: shared[1] });
        }
        let strip = CreasedStrip { aspect_ratio, faces, creases };
        let gluing = derive_gluing(&strip, end_gluing, &tol)?;
        Ok(Model { name: name.to_string(), strip, gluing, program, expected })
    }

    pub fn fold(&self, tol: &Tolerance) -> Result<FoldedState> {
        fold(&self.strip, &self.gluing, &self.program, tol)
    }

    pub fn from_toml_str(s: &str) -> Result<Model> {
        let file: ModelFile = toml::from_str(s).map_err(|e| Error::ModelFile(e.to_string()))?;
        file.into_model()
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&ModelFile::from_model(self)).expect("model files always serialise")
    }

    pub fn load(path: &Path) -> Result<Model> {
        Model::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string())?;
        Ok(())
    }
}

fn letter(i: usize, upper: bool) -> String {
    let base = if upper { b'A' } else { b'a' };
    if i < 26 {
        ((base + i as u8) as char).to_string()
    } else {
        format!("{}{}", (base + (i % 26) as u8) as char, i / 26)
    }
}

/// Side pairs for every crease plus the end identification, boundary edges in
/// cycle order and the midline.
pub fn derive_gluing(strip: &CreasedStrip, end_gluing: EndGluing, tol: &Tolerance) -> Result<GluingDiagram> {
    let mut side_pairs: Vec<SidePair> = strip
        .creases
        .iter()
        .enumerate()
        .map(|(k, c)| SidePair {
            label: letter(k, true),
            a: EdgeRef { face: c.faces.0, from: c.start, to: c.end },
            b: EdgeRef { face: c.faces.1, from: c.start, to: c.end },
        })
        .collect();
    let lambda = strip.aspect_ratio;
    let last = strip.faces.len() - 1;
    let (r0, r1) = (Vec2::new(lambda, 0.0), Vec2::new(lambda, 1.0));
    if !strip.faces[last].has_edge(&r0, &r1, tol)
        || !strip.faces[0].has_edge(&Vec2::new(0.0, 0.0), &Vec2::new(0.0, 1.0), tol)
    {
        return Err(Error::ModelFile("first and last faces must carry the strip ends".into()));
    }
    side_pairs.push(SidePair {
        label: letter(strip.creases.len(), true),
        a: EdgeRef { face: last, from: r0, to: r1 },
        b: EdgeRef { face: 0, from: glue_map(end_gluing, &r0), to: glue_map(end_gluing, &r1) },
    });
    let boundary_cycle = boundary_edges(strip, tol)
        .into_iter()
        .enumerate()
        .map(|(i, edge)| BoundaryEdge { label: letter(i, false), edge })
        .collect();
    Ok(GluingDiagram { side_pairs, boundary_cycle, midline_segments: midline_segments(strip), end_gluing })
}

#[derive(Serialize, Deserialize)]
struct FaceFile {
    label: String,
    front: Side,
    vertices: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct CreaseFile {
    start: [f64; 2],
    end: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct EdgeFile {
    face: usize,
    from: [f64; 2],
    to: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct SidePairFile {
    label: String,
    a: EdgeFile,
    b: EdgeFile,
}

#[derive(Serialize, Deserialize)]
struct BoundaryFile {
    label: String,
    face: usize,
    from: [f64; 2],
    to: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    name: String,
    aspect_ratio: f64,
    end_gluing: EndGluing,
    expected: Expected,
    faces: Vec<FaceFile>,
    creases: Vec<CreaseFile>,
    side_pairs: Vec<SidePairFile>,
    boundary: Vec<BoundaryFile>,
    fold: Vec<FoldInstruction>,
}

fn v(p: [f64; 2]) -> Vec2 {
    Vec2::new(p[0], p[1])
}

fn a(p: &Vec2) -> [f64; 2] {
    [p.x, p.y]
}

fn edge_file(e: &EdgeRef) -> EdgeFile {
    EdgeFile { face: e.face, from: a(&e.from), to: a(&e.to) }
}

fn edge_ref(e: &EdgeFile) -> EdgeRef {
    EdgeRef { face: e.face, from: v(e.from), to: v(e.to) }
}

impl ModelFile {
    fn from_model(m: &Model) -> ModelFile {
        ModelFile {
            name: m.name.clone(),
            aspect_ratio: m.strip.aspect_ratio,
            end_gluing: m.gluing.end_gluing,
            expected: m.expected.clone(),
            faces: m
                .strip
                .faces
                .iter()
                .map(|f| FaceFile {
                    label: f.label.clone(),
                    front: f.front,
                    vertices: f.vertices.iter().map(a).collect(),
                })
                .collect(),
            creases: m.strip.creases.iter().map(|c| CreaseFile { start: a(&c.start), end: a(&c.end) }).collect(),
            side_pairs: m
                .gluing
                .side_pairs
                .iter()
                .map(|s| SidePairFile { label: s.label.clone(), a: edge_file(&s.a), b: edge_file(&s.b) })
                .collect(),
            boundary: m
                .gluing
                .boundary_cycle
                .iter()
                .map(|b| BoundaryFile {
                    label: b.label.clone(),
                    face: b.edge.face,
                    from: a(&b.edge.from),
                    to: a(&b.edge.to),
                })
                .collect(),
            fold: m.program.clone(),
        }
    }

    fn into_model(self) -> Result<Model> {
        if self.faces.is_empty() {
            return Err(Error::ModelFile("model has no faces".into()));
        }
        let faces: Vec<Face> = self
            .faces
            .into_iter()
            .map(|f| Face { label: f.label, front: f.front, vertices: f.vertices.into_iter().map(v).collect() })
            .collect();
        let nf = faces.len();
        let creases = self
            .creases
            .iter()
            .enumerate()
            .map(|(k, c)| Crease { faces: (k, k + 1), start: v(c.start), end: v(c.end) })
            .collect();
        let check_face = |f: usize| -> Result<()> {
            if f >= nf {
                return Err(Error::ModelFile(format!("face index {f} out of range")));
            }
            Ok(())
        };
        for sp in &self.side_pairs {
            check_face(sp.a.face)?;
            check_face(sp.b.face)?;
        }
        for b in &self.boundary {
            check_face(b.face)?;
        }
        if self.side_pairs.is_empty() {
            return Err(Error::ModelFile("model has no side pairs".into()));
        }
        let strip = CreasedStrip { aspect_ratio: self.aspect_ratio, faces, creases };
        let gluing = GluingDiagram {
            side_pairs: self
                .side_pairs
                .iter()
                .map(|s| SidePair { label: s.label.clone(), a: edge_ref(&s.a), b: edge_ref(&s.b) })
                .collect(),
            boundary_cycle: self
                .boundary
                .iter()
                .map(|b| BoundaryEdge {
                    label: b.label.clone(),
                    edge: EdgeRef { face: b.face, from: v(b.from), to: v(b.to) },
                })
                .collect(),
            midline_segments: midline_segments(&strip),
            end_gluing: self.end_gluing,
        };
        Ok(Model { name: self.name, strip, gluing, program: self.fold, expected: self.expected })
    }
}
