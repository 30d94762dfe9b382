//! Grid-restricted reference solver, kept independent of [`crate::solver`].
//!
//! Works over the fixed exponent set `|i| + |j| <= degree_cap` with every
//! coefficient on the grid `lo + k·step`, where `lo = max over corners of
//! -(i·x + j·y)` is the smallest coefficient keeping the monomial
//! nonnegative on the square. Starting from all coefficients at `lo` (the zero
//! function), it repeatedly bumps by one grid step the unique monomial that
//! is minimal at any point off the curve. Any valid series in this family
//! dominates every intermediate state coefficient-wise, so the fixpoint is the
//! pointwise-smallest valid series of the family: an exhaustive search of the
//! coefficient grid without enumerating it.

use thiserror::Error;

use crate::arrangement::{boundary_zero_check, canonicalize};
use crate::geometry::RPoint;
use crate::rational::Rational;
use crate::series::{Exponent, TropicalSeries};

#[derive(Debug, Error)]
pub enum OracleFailure {
    #[error("no valid series within degree cap {cap} (coefficient grid exhausted)")]
    Infeasible { cap: u64 },
    #[error("oracle preconditions: {0}")]
    Precondition(String),
}

/// Largest coefficient raise explored before declaring the cap infeasible.
const MAX_RAISE: i64 = 4;

pub fn brute_force_gp(
    points: &[RPoint],
    degree_cap: u64,
    step: &Rational,
) -> Result<TropicalSeries, OracleFailure> {
    if points.len() > 3 || degree_cap > 2 {
        return Err(OracleFailure::Precondition(format!(
            "|P| = {} (max 3), cap = {degree_cap} (max 2)",
            points.len()
        )));
    }
    grid_least_fixpoint(points, degree_cap, step)
}

/// The fixpoint search without the size limits of [`brute_force_gp`]; cost
/// grows with the number of monomials times the number of grid steps.
pub fn grid_least_fixpoint(
    points: &[RPoint],
    degree_cap: u64,
    step: &Rational,
) -> Result<TropicalSeries, OracleFailure> {
    if !step.is_positive() {
        return Err(OracleFailure::Precondition("grid step must be positive".into()));
    }
    if points.iter().any(|p| !p.is_interior()) {
        return Err(OracleFailure::Precondition("points must be interior".into()));
    }
    let cap = degree_cap as i64;
    let mut g = TropicalSeries::new();
    for i in -cap..=cap {
        for j in -cap..=cap {
            if i.abs() + j.abs() <= cap {
                let lo = (-i).max(0) + (-j).max(0);
                g.insert(Exponent::new(i, j), Rational::from_integer(lo));
            }
        }
    }
    let ceiling = Rational::from_integer(MAX_RAISE);

    loop {
        let mut bumped = false;
        for p in points {
            let mins = g.min_monomials(p).expect("nonempty, in square");
            if mins.len() == 1 {
                let e = mins[0];
                let c = g.get(&e).expect("stored") + step;
                let lo = Rational::from_integer((-e.i).max(0) + (-e.j).max(0));
                if &c - &lo > ceiling {
                    return Err(OracleFailure::Infeasible { cap: degree_cap });
                }
                g.insert(e, c);
                bumped = true;
            }
        }
        if !bumped {
            break;
        }
    }
    if !boundary_zero_check(&g) {
        return Err(OracleFailure::Infeasible { cap: degree_cap });
    }
    canonicalize(&g).map_err(|_| OracleFailure::Infeasible { cap: degree_cap })
}
