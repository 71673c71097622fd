//! Builders that turn multigeometric series and planar IFS projections into
//! digit-set problems, and the search for positive-measure sets without
//! complete residues.

mod ifs;
mod multigeo;
mod search;

pub use ifs::{ifs_project, ifs_sweep, stern_brocot, PlanarIFS, Projection, SweepEntry};
pub use multigeo::{
    build_sigma, nitecki_classify, reduce_multigeometric, BuiltSigma, Multigeometric, NiteckiOutcome,
};
pub use search::counterexample_search;

use thiserror::Error;

use crate::decide::DecideError;
use crate::levelsets::LevelError;
use crate::numeric::NumericError;
use crate::sigma::SigmaError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Sigma(#[from] SigmaError),
    #[error(transparent)]
    Decide(#[from] DecideError),
    #[error(transparent)]
    Level(#[from] LevelError),
}
