//! Exact tropical series on the unit square.
//!
//! A series `f = min(c + i·x + j·y)` with rational coefficients, vanishing on
//! the boundary of the square, together with the face-shrinking solver that
//! computes the smallest such series whose curve passes through given points.

pub mod arrangement;
pub mod curve;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod rational;
pub mod series;
pub mod solver;

pub use arrangement::{
    boundary_zero_check, build_arrangement, canonical_coefficient, canonicalize, CurveEdge, Face,
    FaceArrangement,
};
pub use curve::{curve_graph, euler_characteristic, genus, is_generic_tree, CurveGraph};
pub use error::{Result, TropicalError};
pub use geometry::RPoint;
pub use oracle::brute_force_gp;
pub use rational::Rational;
pub use series::{Exponent, Monomial, TropicalSeries};
pub use solver::{competitor_bound, default_max_passes, shrink_step, solve_gp, GpState, ShrinkOutcome, SolveTrace};
