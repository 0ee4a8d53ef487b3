use thiserror::Error;

use crate::folding::LayerViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no generic projection direction among {0} candidates")]
    NoGenericDirection(usize),
    #[error("degenerate crossing: {0}")]
    DegenerateCrossing(String),
    #[error("state is not developable: {0}")]
    NotDevelopable(String),
    #[error("layer conflict: {0}")]
    LayerConflict(String),
    #[error("face {0} is not planar after folding")]
    NonPlanarFace(usize),
    #[error("layer ordering has {} violation(s)", .0.len())]
    LayerViolations(Vec<LayerViolation>),
    #[error("curve does not close: {0}")]
    OpenCurve(String),
    #[error("odd inter-component crossing sum {0}")]
    OddCrossingSum(i64),
    #[error("invalid Gauss code: {0}")]
    InvalidCode(String),
    #[error("{0} crossings exceed the state-sum limit of {1}")]
    TooManyCrossings(usize, usize),
    #[error("degenerate U-profile: {0}")]
    DegenerateProfile(String),
    #[error("joint sweeps collide: {0}")]
    JointCollision(String),
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("model file: {0}")]
    ModelFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
