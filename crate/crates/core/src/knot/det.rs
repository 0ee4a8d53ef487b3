//! Knot determinant |Δ(−1)| by two independent routes: the Goeritz matrix of
//! a checkerboard colouring, and the Fox colouring matrix of the arcs.

use crate::error::{Error, Result};

use super::code::GaussCode;
use super::planar::PlanarDiagram;

/// Exact integer determinant by fraction-free elimination.
pub fn bareiss(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn minor(m: &[Vec<i128>], skip: usize) -> Vec<Vec<i128>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &x)| x).collect())
        .collect()
}

/// Goeritz matrix over the white faces, in face-index order, with the face
/// index of each row.
pub fn goeritz_matrix(pd: &PlanarDiagram) -> (Vec<usize>, Vec<Vec<i128>>) {
    let white: Vec<usize> = (0..pd.faces.len()).filter(|&f| !pd.black[f]).collect();
    let row = |f: usize| white.iter().position(|&w| w == f).expect("white face");
    let mut g = vec![vec![0i128; white.len()]; white.len()];
    for r in &pd.rotation {
        // The corner counter-clockwise after the outgoing over half-edge.
        let after_over = pd.corner_face(r[0]);
        let (eta, i, j) = if !pd.black[after_over] {
            (1, after_over, pd.corner_face(r[2]))
        } else {
            (-1, pd.corner_face(r[1]), pd.corner_face(r[3]))
        };
        if i == j {
            continue;
        }
        let (i, j) = (row(i), row(j));
        g[i][j] -= eta;
        g[j][i] -= eta;
        g[i][i] += eta;
        g[j][j] += eta;
    }
    (white, g)
}

fn knot_code(code: &GaussCode) -> Result<()> {
    code.validate()?;
    code.single()?;
    Ok(())
}

/// |Δ(−1)| from the Goeritz matrix with one white face deleted.
pub fn determinant(code: &GaussCode) -> Result<u64> {
    knot_code(code)?;
    if code.crossing_count() == 0 {
        return Ok(1);
    }
    let pd = PlanarDiagram::new(code)?;
    let (_, g) = goeritz_matrix(&pd);
    let d = if g.len() <= 1 { 1 } else { bareiss(minor(&g, 0)) };
    Ok(d.unsigned_abs() as u64)
}

/// |Δ(−1)| from the Fox colouring matrix: one row per crossing, one column
/// per arc between consecutive under-passes.
pub fn alexander_determinant(code: &GaussCode) -> Result<u64> {
    knot_code(code)?;
    let seq = code.single()?;
    let n = code.crossing_count();
    if n == 0 {
        return Ok(1);
    }
    // arc_at[k]: arc running into visit k; a new arc starts after each under-pass.
    let first_under = seq.iter().position(|v| !v.over).ok_or_else(|| Error::InvalidCode("no under-pass".into()))?;
    let m = seq.len();
    let mut arc_at = vec![0usize; m];
    let mut arc = 0usize;
    for step in 1..=m {
        let k = (first_under + step) % m;
        arc_at[k] = arc;
        if !seq[k].over {
            arc = (arc + 1) % n;
        }
    }
    let mut a = vec![vec![0i128; n]; n];
    for (k, v) in seq.iter().enumerate() {
        if v.over {
            continue;
        }
        let c = v.crossing;
        let over_k = seq.iter().position(|w| w.crossing == c && w.over).expect("validated code");
        let incoming = arc_at[k];
        let outgoing = (arc_at[k] + 1) % n;
        a[c][arc_at[over_k]] += 2;
        a[c][incoming] -= 1;
        a[c][outgoing] -= 1;
    }
    Ok(bareiss(minor(&a, 0)).unsigned_abs() as u64)
}
