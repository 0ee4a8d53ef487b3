//! Folded polygonal Moebius bands: flat and non-flat layered folding,
//! boundary/midline curve extraction, linking and knot invariants, and
//! smooth developable approximations.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod catalog;
pub mod curves;
pub mod error;
pub mod folding;
pub mod geometry;
pub mod knot;
pub mod model;
pub mod report;
pub mod smooth;
pub mod strip;

pub use curves::{crossing_diagram, extract_curves, Component, CrossingDiagram, InflationParams, SpaceCurve};
pub use error::{Error, Result};
pub use folding::{check_layers, fold, FoldInstruction, FoldedState, LayerViolation, PlaneGroup, Stacking};
pub use geometry::{RigidPlacement, Tolerance, Vec2, Vec3};
pub use model::{Expected, Model};
pub use strip::{CreasedStrip, EndGluing, Face, GluingDiagram, Side};
