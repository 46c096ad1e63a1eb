use thiserror::Error;

use crate::oracle::PointWitness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("charts differ: `{0}` vs `{1}`")]
    ChartMismatch(String, String),

    #[error("coordinate index {index} out of range for chart of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("point arity {got} does not match chart dimension {dim}")]
    PointArity { got: usize, dim: usize },

    #[error("coordinate {name} = {value} outside chart domain [{lo}, {hi}]")]
    OutsideDomain {
        name: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("evaluation failed at {point:?}: {kind}")]
    Eval { point: Vec<f64>, kind: EvalKind },

    #[error("form degree {degree} out of range 0..={max}")]
    FormDegree { degree: usize, max: usize },

    #[error("2-form is not closed: d_D omega has component {component} = {value:.3e} at {point:?}")]
    NotClosed {
        point: Vec<f64>,
        component: String,
        value: f64,
    },

    #[error("frame is not isotropic: <<a_{i}, a_{j}>> = {value:.3e} at {point:?}")]
    NonIsotropic {
        i: usize,
        j: usize,
        point: Vec<f64>,
        value: f64,
    },

    #[error("connection is not flat: curvature d_{i}Gamma_{j} - d_{j}Gamma_{i} = {value:.3e} at {point:?}")]
    NonFlat {
        i: usize,
        j: usize,
        point: Vec<f64>,
        value: f64,
    },

    #[error("{0}")]
    NotDiracJacobi(String),

    #[error("symbolic elimination failed: {0}")]
    Elimination(String),

    #[error("clean intersection fails: rank of the intersection is {ranks:?} over the sampled points")]
    CleanIntersection { ranks: Vec<usize> },

    #[error("pivot below tolerance at point {point:?} during pointwise normalization")]
    PivotFailure { point: Vec<f64> },

    #[error("witness derivation is not a Hamiltonian for the section: {0}")]
    BadWitness(PointWitness),

    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Error)]
pub enum EvalKind {
    #[error("division by near-zero denominator ({denom:.3e})")]
    DivisionNearZero { denom: f64 },
    #[error("coordinate index {index} out of range for {dim} values")]
    CoordOutOfRange { index: usize, dim: usize },
}

impl Error {
    pub(crate) fn chart_mismatch(a: &crate::chart::Chart, b: &crate::chart::Chart) -> Error {
        Error::ChartMismatch(a.describe(), b.describe())
    }
}
