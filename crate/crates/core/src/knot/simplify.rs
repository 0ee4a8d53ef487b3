//! Reidemeister I and II reductions on one-component codes.

use super::code::GaussCode;
use super::planar::PlanarDiagram;

fn remove(code: &GaussCode, gone: &[usize]) -> GaussCode {
    let comp: Vec<_> = code.components[0].iter().filter(|v| !gone.contains(&v.crossing)).copied().collect();
    GaussCode { components: vec![comp], signs: code.signs.clone() }.compact()
}

impl GaussCode {
    /// Drops ids that no longer occur and renumbers in first-visit order.
    fn compact(&self) -> GaussCode {
        let mut used = vec![false; self.signs.len()];
        for v in self.components.iter().flatten() {
            used[v.crossing] = true;
        }
        let mut map = vec![usize::MAX; self.signs.len()];
        let mut signs = Vec::new();
        for (c, &u) in used.iter().enumerate() {
            if u {
                map[c] = signs.len();
                signs.push(self.signs[c]);
            }
        }
        let components = self
            .components
            .iter()
            .map(|comp| comp.iter().map(|v| crate::curves::Visit { crossing: map[v.crossing], over: v.over }).collect())
            .collect();
        GaussCode { components, signs }.canonical()
    }
}

fn r1(code: &GaussCode) -> Option<GaussCode> {
    let seq = &code.components[0];
    let m = seq.len();
    (0..m).find(|&k| seq[k].crossing == seq[(k + 1) % m].crossing).map(|k| remove(code, &[seq[k].crossing]))
}

fn r2(code: &GaussCode) -> Option<GaussCode> {
    let pd = PlanarDiagram::new(code).ok()?;
    let seq = &code.components[0];
    let m = seq.len();
    for face in pd.faces.iter().filter(|f| f.len() == 2) {
        let (c, d) = (pd.vertex[face[0]], pd.vertex[face[1]]);
        if c == d || code.signs[c] == code.signs[d] {
            continue;
        }
        // Both arcs of the bigon must pass over at both ends, or under at both.
        let ok = face.iter().all(|&h| {
            let arc = h / 2;
            let (a, b) = (seq[arc], seq[(arc + 1) % m]);
            a.over == b.over
        });
        if ok {
            return Some(remove(code, &[c, d]));
        }
    }
    None
}

/// Applies R1 and R2 reductions until neither applies. Codes with more than
/// one component are returned unchanged.
pub fn simplify(code: &GaussCode) -> GaussCode {
    if code.components.len() != 1 {
        return code.clone();
    }
    let mut cur = code.canonical();
    loop {
        if cur.crossing_count() == 0 {
            return cur;
        }
        if let Some(next) = r1(&cur) {
            cur = next;
            continue;
        }
        match r2(&cur) {
            Some(next) => cur = next,
            None => return cur,
        }
    }
}
