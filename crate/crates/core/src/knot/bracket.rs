//! Writhe-normalised Kauffman bracket by the full state sum.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

use super::code::GaussCode;
use super::planar::PlanarDiagram;

pub const MAX_BRACKET_CROSSINGS: usize = 24;

/// Integer Laurent polynomial in `A`: exponent → coefficient, no zero terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent(pub BTreeMap<i32, i64>);

impl Laurent {
    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i32, coeff: i64) -> Self {
        let mut m = BTreeMap::new();
        if coeff != 0 {
            m.insert(exp, coeff);
        }
        Laurent(m)
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        let e = self.0.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn add(&mut self, other: &Laurent) {
        for (&e, &c) in &other.0 {
            self.add_term(e, c);
        }
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::default();
        for (&e1, &c1) in &self.0 {
            for (&e2, &c2) in &other.0 {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Substitutes `A → A⁻¹`.
    pub fn invert_variable(&self) -> Laurent {
        Laurent(self.0.iter().map(|(&e, &c)| (-e, c)).collect())
    }

    pub fn terms(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        *self == Laurent::one()
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (&e, &c)) in self.0.iter().enumerate() {
            let (neg, mag) = (c < 0, c.unsigned_abs());
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (_, 1) => write!(f, "A^{e}")?,
                (_, m) => write!(f, "{m}A^{e}")?,
            }
        }
        Ok(())
    }
}

fn find(parent: &mut [u8], mut x: usize) -> usize {
    while parent[x] as usize != x {
        parent[x] = parent[parent[x] as usize];
        x = parent[x] as usize;
    }
    x
}

/// Loop count for every state, indexed by the state's B-smoothing mask.
fn loop_counts(pd: &PlanarDiagram) -> Vec<(u32, u32)> {
    let n = pd.rotation.len();
    let arcs = pd.arcs();
    // Per crossing, the two arc pairs joined by the A and by the B smoothing.
    let joins: Vec<[[(usize, usize); 2]; 2]> = pd
        .rotation
        .iter()
        .map(|r| {
            let pair = |x: usize, y: usize| (r[x] / 2, r[y] / 2);
            // Rotation is o_out, u_*, o_in, u_*: A joins each under end to its
            // counter-clockwise successor, B each over end.
            [[pair(1, 2), pair(3, 0)], [pair(0, 1), pair(2, 3)]]
        })
        .collect();
    let mut out = Vec::with_capacity(1 << n);
    let mut parent = vec![0u8; arcs];
    for state in 0u64..(1u64 << n) {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i as u8;
        }
        let mut loops = arcs as u32;
        for (c, j) in joins.iter().enumerate() {
            for &(x, y) in &j[((state >> c) & 1) as usize] {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx] = ry as u8;
                    loops -= 1;
                }
            }
        }
        out.push((state.count_ones(), loops));
    }
    out
}

/// Unnormalised bracket ⟨K⟩ with ⟨O⟩ = 1.
pub fn raw_bracket(code: &GaussCode) -> Result<Laurent> {
    let n = code.crossing_count();
    if n > MAX_BRACKET_CROSSINGS {
        return Err(Error::TooManyCrossings(n, MAX_BRACKET_CROSSINGS));
    }
    code.validate()?;
    if n == 0 {
        return Ok(Laurent::one());
    }
    let pd = PlanarDiagram::new(code)?;
    // d = −A² − A⁻², cached powers.
    let mut d = Laurent::monomial(2, -1);
    d.add_term(-2, -1);
    let mut dpow = vec![Laurent::one()];
    for k in 1..=2 * n {
        dpow.push(dpow[k - 1].mul(&d));
    }
    let mut hist: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for s in loop_counts(&pd) {
        *hist.entry(s).or_insert(0) += 1;
    }
    let mut total = Laurent::default();
    for ((b, loops), count) in hist {
        let a = n as i32 - b as i32;
        let mut term = dpow[loops as usize - 1].mul(&Laurent::monomial(a - b as i32, count));
        std::mem::swap(&mut term, &mut total);
        total.add(&term);
    }
    Ok(total)
}

/// (−A³)^(−w) ⟨K⟩.
pub fn bracket(code: &GaussCode) -> Result<Laurent> {
    code.single()?;
    let raw = raw_bracket(code)?;
    let w = code.writhe() as i32;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    Ok(raw.mul(&Laurent::monomial(-3 * w, sign)))
}
