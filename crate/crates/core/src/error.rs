use std::fmt;

use thiserror::Error;

/// Processing stage of the separation pipeline, attached to propagated errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Validation,
    Projection,
    Knots,
    Dictionary,
    Solver,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Validation => "validation",
            Stage::Projection => "noise projection",
            Stage::Knots => "knot selection",
            Stage::Dictionary => "dictionary construction",
            Stage::Solver => "FOCUSS solver",
        };
        f.write_str(name)
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("signal too short: need at least {needed} samples, got {found}")]
    Size { needed: usize, found: usize },

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("aliasing: highest Fourier index {n_max} must be below length/2 for length {length}")]
    Aliasing { n_max: usize, length: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("index {index} out of range for {len} basis functions")]
    Index { index: usize, len: usize },

    #[error("abscissa {x} outside the interval [{c}, {d}]")]
    Domain { x: f64, c: f64, d: f64 },

    #[error("literal curvature undefined: |f'| >= 1 at sample {index}")]
    CurvatureDomain { index: usize },

    #[error("knot target {target} is smaller than the {critical_points} detected curvature critical points")]
    Capacity {
        critical_points: usize,
        target: usize,
    },

    #[error("every atom fell below the rank tolerance; subspace has rank zero")]
    RankZero,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("linear system not positive definite at lambda = {lambda:e}")]
    Conditioning { lambda: f64 },

    #[error("dictionary column {column} is identically zero")]
    Dictionary { column: usize },

    #[error("every q in the sweep failed")]
    SweepFailed,

    #[error("{stage} stage: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, stage: Stage) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
