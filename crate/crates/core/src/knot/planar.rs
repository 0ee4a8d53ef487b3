//! Combinatorial planar structure of a signed Gauss code: the 4-valent graph
//! with the cyclic order at each crossing read off from its sign.

use crate::error::{Error, Result};

use super::code::GaussCode;

/// Half-edge `h` is one end of arc `h / 2`; even ids leave a crossing, odd ids
/// enter one. `twin(h) = h ^ 1`.
#[derive(Clone, Debug)]
pub struct PlanarDiagram {
    /// Crossing at which each half-edge sits.
    pub vertex: Vec<usize>,
    /// Counter-clockwise half-edges around each crossing, starting at the
    /// outgoing over half-edge.
    pub rotation: Vec<[usize; 4]>,
    /// Position of each half-edge in its crossing's rotation.
    pub slot: Vec<usize>,
    pub face_of: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
    /// Checkerboard colour of each face (`false` = white).
    pub black: Vec<bool>,
}

const O_OUT: usize = 0;
const U_OUT: usize = 1;
const O_IN: usize = 2;
const U_IN: usize = 3;

impl PlanarDiagram {
    pub fn arcs(&self) -> usize {
        self.vertex.len() / 2
    }

    pub fn succ(&self, h: usize) -> usize {
        self.rotation[self.vertex[h]][(self.slot[h] + 1) % 4]
    }

    /// Face holding the corner between `h` and its counter-clockwise successor.
    pub fn corner_face(&self, h: usize) -> usize {
        self.face_of[self.succ(h)]
    }

    /// Builds the structure for a code with at least one crossing whose
    /// diagram is connected; fails if the signs do not describe a sphere.
    pub fn new(code: &GaussCode) -> Result<PlanarDiagram> {
        code.validate()?;
        let n = code.crossing_count();
        if n == 0 {
            return Err(Error::InvalidCode("planar structure needs at least one crossing".into()));
        }
        // Per crossing: [o_out, u_out, o_in, u_in] half-edge ids.
        let mut ends = vec![[usize::MAX; 4]; n];
        let mut vertex = Vec::new();
        for comp in &code.components {
            let m = comp.len();
            for j in 0..m {
                let (a, b) = (comp[j], comp[(j + 1) % m]);
                let arc = vertex.len() / 2;
                vertex.push(a.crossing);
                vertex.push(b.crossing);
                ends[a.crossing][if a.over { O_OUT } else { U_OUT }] = 2 * arc;
                ends[b.crossing][if b.over { O_IN } else { U_IN }] = 2 * arc + 1;
            }
        }
        let rotation: Vec<[usize; 4]> =
            ends.iter()
                .zip(&code.signs)
                .map(|(e, &s)| {
                    if s > 0 {
                        [e[O_OUT], e[U_OUT], e[O_IN], e[U_IN]]
                    } else {
                        [e[O_OUT], e[U_IN], e[O_IN], e[U_OUT]]
                    }
                })
                .collect();
        let mut slot = vec![0; vertex.len()];
        for r in &rotation {
            for (k, &h) in r.iter().enumerate() {
                slot[h] = k;
            }
        }
        let mut pd =
            PlanarDiagram { vertex, rotation, slot, face_of: Vec::new(), faces: Vec::new(), black: Vec::new() };
        let hn = pd.vertex.len();
        pd.face_of = vec![usize::MAX; hn];
        for start in 0..hn {
            if pd.face_of[start] != usize::MAX {
                continue;
            }
            let id = pd.faces.len();
            let mut face = Vec::new();
            let mut h = start;
            while pd.face_of[h] == usize::MAX {
                pd.face_of[h] = id;
                face.push(h);
                h = pd.succ(h ^ 1);
            }
            if h != start {
                return Err(Error::InvalidCode("face tracing did not close".into()));
            }
            pd.faces.push(face);
        }
        let (v, e, f) = (n as i64, (hn / 2) as i64, pd.faces.len() as i64);
        if v - e + f != 2 {
            return Err(Error::InvalidCode(format!("signs do not give a planar diagram (V-E+F = {})", v - e + f)));
        }
        pd.black = pd.colour()?;
        Ok(pd)
    }

    fn colour(&self) -> Result<Vec<bool>> {
        let nf = self.faces.len();
        let mut colour: Vec<Option<bool>> = vec![None; nf];
        colour[0] = Some(false);
        let mut stack = vec![0];
        while let Some(f) = stack.pop() {
            let c = colour[f].expect("pushed faces are coloured");
            for &h in &self.faces[f] {
                let g = self.face_of[h ^ 1];
                match colour[g] {
                    None => {
                        colour[g] = Some(!c);
                        stack.push(g);
                    }
                    Some(d) if d == c => return Err(Error::InvalidCode("faces are not 2-colourable".into())),
                    _ => {}
                }
            }
        }
        colour.into_iter().map(|c| c.ok_or_else(|| Error::InvalidCode("diagram is disconnected".into()))).collect()
    }
}
