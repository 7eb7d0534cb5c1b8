use thiserror::Error;

use crate::specialfns::SpecialFnError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("special function evaluation failed: {0}")]
    Evaluation(#[from] SpecialFnError),
    #[error("window [{e_min}, {e_max}] holds {found} of the {requested} requested roots")]
    WindowTooNarrow { e_min: f64, e_max: f64, found: usize, requested: usize },
    #[error("energy {energy} is not an eigenvalue (continuity residual {residual:e})")]
    NotAnEigenvalue { energy: f64, residual: f64 },
    #[error("integration overflowed at energy {energy}")]
    Overflow { energy: f64 },
    #[error("grid does not resolve the step at r = {a}")]
    GridTooCoarse { a: f64 },
    #[error("fields live on different grids")]
    GridMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
