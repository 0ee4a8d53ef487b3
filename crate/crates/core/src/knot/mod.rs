//! Linking number, knot determinant, bracket and the combined report.

mod bracket;
mod code;
mod det;
mod planar;
mod simplify;

use std::fmt;

pub use bracket::{bracket, raw_bracket, Laurent, MAX_BRACKET_CROSSINGS};
pub use code::{linking_number, GaussCode};
pub use det::{alexander_determinant, bareiss, determinant, goeritz_matrix};
pub use planar::PlanarDiagram;
pub use simplify::simplify;

use crate::curves::{
    crossing_diagram, extract_curves, min_separation, Component, CrossingDiagram, InflationParams, SpaceCurve,
};
use crate::error::{Error, Result};
use crate::folding::FoldedState;
use crate::geometry::Tolerance;
use crate::report::{fmt9, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    UnknotConsistent,
    TrefoilConsistent,
    Other,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::UnknotConsistent => "unknot-consistent",
            Verdict::TrefoilConsistent => "trefoil-consistent",
            Verdict::Other => "other",
        })
    }
}

/// Writhe-normalised bracket of the right-handed trefoil under the sign
/// convention used here.
pub fn trefoil_bracket() -> Laurent {
    let mut p = Laurent::monomial(-16, -1);
    p.add_term(-12, 1);
    p.add_term(-4, 1);
    p
}

pub fn verdict(det: u64, bracket: Option<&Laurent>) -> Verdict {
    let t = trefoil_bracket();
    match (det, bracket) {
        (1, None) => Verdict::UnknotConsistent,
        (1, Some(b)) if b.is_one() => Verdict::UnknotConsistent,
        (3, None) => Verdict::TrefoilConsistent,
        (3, Some(b)) if *b == t || *b == t.invert_variable() => Verdict::TrefoilConsistent,
        _ => Verdict::Other,
    }
}

/// Knot invariants of one closed curve of a diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotSummary {
    pub raw: GaussCode,
    pub reduced: GaussCode,
    pub determinant: u64,
    pub alexander_determinant: u64,
    pub bracket: Option<Laurent>,
    pub verdict: Verdict,
}

pub fn knot_summary(code: &GaussCode) -> Result<KnotSummary> {
    let reduced = simplify(code);
    let determinant = determinant(&reduced)?;
    let alexander = alexander_determinant(&reduced)?;
    let bracket = match bracket(&reduced) {
        Ok(b) => Some(b),
        Err(Error::TooManyCrossings(..)) => None,
        Err(e) => return Err(e),
    };
    let verdict = verdict(determinant, bracket.as_ref());
    Ok(KnotSummary { raw: code.clone(), reduced, determinant, alexander_determinant: alexander, bracket, verdict })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    pub aspect_ratio: f64,
    pub eps: f64,
    pub seed: u64,
    /// Boundary against midline for bands with one boundary curve, boundary
    /// against boundary for cylinders.
    pub linking_number: i64,
    pub linking_pair: (Component, Component),
    pub twist_count: i64,
    pub crossings: usize,
    pub boundary: KnotSummary,
    pub embedded: bool,
    pub min_separation: f64,
}

impl InvariantReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.num("aspect_ratio", self.aspect_ratio)
            .num("eps", self.eps)
            .push("seed", self.seed)
            .push("linking_pair", format!("{}/{}", self.linking_pair.0, self.linking_pair.1))
            .push("linking_number", self.linking_number)
            .push("twist_count", self.twist_count)
            .push("crossings", self.crossings)
            .push("gauss_code", &self.boundary.raw)
            .push("reduced_gauss_code", &self.boundary.reduced)
            .push("determinant", self.boundary.determinant)
            .push("determinant_alexander", self.boundary.alexander_determinant)
            .push("bracket", self.boundary.bracket.as_ref().map_or("n/a".to_string(), |b| b.to_string()))
            .push("verdict", self.boundary.verdict)
            .push("embedded", self.embedded)
            .push("min_separation", fmt9(self.min_separation));
        r
    }
}

/// Invariants from an already computed diagram.
pub fn analyze_diagram(diagram: &CrossingDiagram) -> Result<(i64, (Component, Component), KnotSummary)> {
    let b = diagram
        .component_index(Component::Boundary)
        .ok_or_else(|| Error::InvalidInput("diagram has no boundary curve".into()))?;
    let (other, pair) = match diagram.component_index(Component::Boundary2) {
        Some(b2) => (b2, (Component::Boundary, Component::Boundary2)),
        None => {
            let m = diagram
                .component_index(Component::Midline)
                .ok_or_else(|| Error::InvalidInput("diagram has no midline".into()))?;
            (m, (Component::Boundary, Component::Midline))
        }
    };
    let lk = linking_number(diagram, b, other)?;
    let summary = knot_summary(&GaussCode::of_component(diagram, b))?;
    Ok((lk, pair, summary))
}

pub fn analyze_curves(
    curves: &[SpaceCurve],
    seed: u64,
    tol: &Tolerance,
) -> Result<(CrossingDiagram, i64, (Component, Component), KnotSummary)> {
    let diagram = crossing_diagram(curves, seed, tol)?;
    let (lk, pair, summary) = analyze_diagram(&diagram)?;
    Ok((diagram, lk, pair, summary))
}

/// Curves, diagram, linking number and boundary invariants of a folded state.
pub fn analyze(state: &FoldedState, params: &InflationParams, seed: u64, tol: &Tolerance) -> Result<InvariantReport> {
    let curves = extract_curves(state, params, tol)?;
    let sep = min_separation(&curves);
    let (diagram, lk, pair, boundary) = analyze_curves(&curves, seed, tol)?;
    Ok(InvariantReport {
        aspect_ratio: state.strip.aspect_ratio,
        eps: params.eps,
        seed,
        linking_number: lk,
        linking_pair: pair,
        twist_count: lk.abs(),
        crossings: diagram.crossings.len(),
        boundary,
        embedded: sep > tol.eps_point,
        min_separation: sep,
    })
}
