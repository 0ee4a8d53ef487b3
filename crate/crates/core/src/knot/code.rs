//! Gauss codes: crossing visits along each component plus crossing signs.

use std::fmt;

use crate::curves::{CrossingDiagram, Visit};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussCode {
    pub components: Vec<Vec<Visit>>,
    /// Sign of each crossing, indexed by crossing id.
    pub signs: Vec<i8>,
}

impl GaussCode {
    pub fn unknot() -> Self {
        GaussCode { components: vec![Vec::new()], signs: Vec::new() }
    }

    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    /// Each crossing visited exactly once over and once under, signs ±1.
    pub fn validate(&self) -> Result<()> {
        let n = self.signs.len();
        let mut seen = vec![(0u32, 0u32); n];
        for v in self.components.iter().flatten() {
            let slot = seen
                .get_mut(v.crossing)
                .ok_or_else(|| Error::InvalidCode(format!("crossing {} has no sign", v.crossing)))?;
            if v.over {
                slot.0 += 1;
            } else {
                slot.1 += 1;
            }
        }
        for (c, &(o, u)) in seen.iter().enumerate() {
            if (o, u) != (1, 1) {
                return Err(Error::InvalidCode(format!("crossing {c} visited {o} times over and {u} times under")));
            }
            if self.signs[c].abs() != 1 {
                return Err(Error::InvalidCode(format!("crossing {c} has sign {}", self.signs[c])));
            }
        }
        Ok(())
    }

    pub fn single(&self) -> Result<&[Visit]> {
        match self.components.as_slice() {
            [one] => Ok(one),
            _ => Err(Error::InvalidCode(format!("expected one component, found {}", self.components.len()))),
        }
    }

    /// Self-crossings of one diagram component, renumbered in order of first visit.
    pub fn of_component(diagram: &CrossingDiagram, k: usize) -> GaussCode {
        let mut map = vec![usize::MAX; diagram.crossings.len()];
        let mut signs = Vec::new();
        let mut seq = Vec::new();
        for v in &diagram.gauss[k] {
            let c = &diagram.crossings[v.crossing];
            if c.over.curve != k || c.under.curve != k {
                continue;
            }
            if map[v.crossing] == usize::MAX {
                map[v.crossing] = signs.len();
                signs.push(c.sign);
            }
            seq.push(Visit { crossing: map[v.crossing], over: v.over });
        }
        GaussCode { components: vec![seq], signs }
    }

    /// Mirror image: the diagram reflected in a line, which flips every sign.
    pub fn mirror(&self) -> GaussCode {
        GaussCode { components: self.components.clone(), signs: self.signs.iter().map(|s| -s).collect() }
    }

    /// Renumbers crossings in order of first appearance.
    pub fn canonical(&self) -> GaussCode {
        let mut map = vec![usize::MAX; self.signs.len()];
        let mut signs = Vec::new();
        let components = self
            .components
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|v| {
                        if map[v.crossing] == usize::MAX {
                            map[v.crossing] = signs.len();
                            signs.push(self.signs[v.crossing]);
                        }
                        Visit { crossing: map[v.crossing], over: v.over }
                    })
                    .collect()
            })
            .collect();
        GaussCode { components, signs }
    }

    /// Parses `O1+ U2- ...`, components separated by `|`; ids may be any
    /// non-negative integers and are renumbered.
    pub fn parse(s: &str) -> Result<GaussCode> {
        let mut ids: Vec<usize> = Vec::new();
        let mut signs: Vec<i8> = Vec::new();
        let mut components = Vec::new();
        for part in s.split('|') {
            let mut comp = Vec::new();
            for tok in part.split_whitespace() {
                let bad = || Error::InvalidCode(format!("bad token {tok:?}"));
                let over = match tok.as_bytes().first() {
                    Some(b'O') | Some(b'o') => true,
                    Some(b'U') | Some(b'u') => false,
                    _ => return Err(bad()),
                };
                let sign = match tok.as_bytes().last() {
                    Some(b'+') => 1i8,
                    Some(b'-') => -1,
                    _ => return Err(bad()),
                };
                let id: usize = tok[1..tok.len() - 1].parse().map_err(|_| bad())?;
                let idx = match ids.iter().position(|&x| x == id) {
                    Some(i) => {
                        if signs[i] != sign {
                            return Err(Error::InvalidCode(format!("crossing {id} has inconsistent signs")));
                        }
                        i
                    }
                    None => {
                        ids.push(id);
                        signs.push(sign);
                        ids.len() - 1
                    }
                };
                comp.push(Visit { crossing: idx, over });
            }
            components.push(comp);
        }
        let code = GaussCode { components, signs };
        code.validate()?;
        Ok(code)
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|v| {
                        format!(
                            "{}{}{}",
                            if v.over { 'O' } else { 'U' },
                            v.crossing,
                            if self.signs[v.crossing] > 0 { '+' } else { '-' }
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        f.write_str(&parts.join(" | "))
    }
}

/// Linking number of two diagram components: half their signed crossing sum.
pub fn linking_number(diagram: &CrossingDiagram, a: usize, b: usize) -> Result<i64> {
    if a == b || a >= diagram.components.len() || b >= diagram.components.len() {
        return Err(Error::InvalidInput(format!("components {a} and {b} are not two distinct curves")));
    }
    let sum: i64 = diagram.inter_component_signs(a, b).sum();
    if sum % 2 != 0 {
        return Err(Error::OddCrossingSum(sum));
    }
    Ok(sum / 2)
}
