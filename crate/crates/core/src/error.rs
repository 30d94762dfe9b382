use thiserror::Error;

use crate::series::TropicalSeries;

#[derive(Debug, Error)]
pub enum TropicalError {
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("point {0} is not in the open unit square")]
    BoundaryPoint(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no fixpoint after {passes} passes ({shrinks} shrinks)")]
    NonTermination {
        passes: usize,
        shrinks: usize,
        partial: Box<TropicalSeries>,
    },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl TropicalError {
    /// True for errors caused by user input rather than solver state.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            TropicalError::InvalidSeries(_)
                | TropicalError::BoundaryPoint(_)
                | TropicalError::Input(_)
                | TropicalError::Parse(_)
        )
    }
}

pub type Result<T, E = TropicalError> = std::result::Result<T, E>;
