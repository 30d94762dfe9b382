//! Abelian sandpile on the lattice `{0..=s}²` as a discrete stand-in for the
//! exact tropical solver: relaxing `3 + Σδ_p` yields a toppling function that
//! approximates `s·f` and a deviation set that traces the curve of `f`.

use thiserror::Error;

pub mod compare;
pub mod grid;

pub use compare::{compare_with_exact, coverage, rasterize_curve, DeviationReport};
pub use grid::{lattice_coords, Policy, SandpileGrid};

#[derive(Debug, Error)]
pub enum SandpileError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("grid is not stable")]
    Unstable,
    #[error("toppling count {0} does not fit in 32 bits")]
    Overflow(u64),
    #[error(transparent)]
    Tropical(#[from] tropical_core::TropicalError),
}

impl SandpileError {
    pub fn is_input_error(&self) -> bool {
        match self {
            SandpileError::Input(_) => true,
            SandpileError::Tropical(e) => e.is_input_error(),
            _ => false,
        }
    }
}
