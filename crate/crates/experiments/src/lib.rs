//! Seeded Monte Carlo experiments: random lattice point sets, the invariants
//! of their minimal series, and aggregate statistics over many trials.

use thiserror::Error;

pub mod diagnostics;
pub mod sampling;
pub mod stats;
pub mod sweep;
pub mod trial;

pub use diagnostics::{discussion_diagnostics, DiscussionReport};
pub use sampling::{sample_points, trial_seed};
pub use stats::{aggregate, AggregateStats};
pub use sweep::{sweep, write_csv, SweepConfig, SweepResult};
pub use trial::{run_trial, TrialOptions, TrialRecord};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("trial with seed {seed}: {source}")]
    Solver {
        seed: u64,
        #[source]
        source: tropical_core::TropicalError,
    },
    #[error(transparent)]
    Tropical(#[from] tropical_core::TropicalError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl ExperimentError {
    pub fn is_input_error(&self) -> bool {
        match self {
            ExperimentError::Config(_) => true,
            ExperimentError::Tropical(e) => e.is_input_error(),
            _ => false,
        }
    }
}
