use std::time::Instant;

use serde::Serialize;
use tropical_core::arrangement::FaceArrangement;
use tropical_core::curve::{curve_graph_of, is_generic_tree_graph};
use tropical_core::{build_arrangement, default_max_passes, solve_gp, Exponent, Rational, TropicalSeries};

use crate::sampling::sample_points;
use crate::ExperimentError;

/// Canonical coefficients for `-2 <= i, j <= 2`, indexed `[i + 2][j + 2]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientWindow(pub [[Rational; 5]; 5]);

impl CoefficientWindow {
    pub fn of_arrangement(arr: &FaceArrangement) -> Self {
        CoefficientWindow(std::array::from_fn(|a| {
            std::array::from_fn(|b| arr.canonical_coefficient(&Exponent::new(a as i64 - 2, b as i64 - 2)))
        }))
    }

    pub fn of_series(f: &TropicalSeries) -> Result<Self, ExperimentError> {
        Ok(Self::of_arrangement(&build_arrangement(f)?))
    }

    pub fn get(&self, i: i64, j: i64) -> &Rational {
        &self.0[(i + 2) as usize][(j + 2) as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub s: u32,
    pub n: usize,
    pub seed: u64,
    pub degree: u64,
    pub genus: usize,
    /// The curve minus the points and the boundary is a single tree.
    pub generic_tree: bool,
    pub c00: Rational,
    pub c01: Rational,
    pub c10: Rational,
    pub c11: Rational,
    pub shrinks: usize,
    pub passes: usize,
    /// Solve time, or 0 when timing is off so outputs stay reproducible.
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<CoefficientWindow>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TrialOptions {
    pub max_passes: Option<usize>,
    pub timing: bool,
    /// Also record the 5×5 coefficient window.
    pub extended: bool,
}

pub fn run_trial(s: u32, n: usize, seed: u64, opts: &TrialOptions) -> Result<TrialRecord, ExperimentError> {
    let points = sample_points(s, n, seed)?;
    let start = Instant::now();
    let (f, trace) = solve_gp(&points, opts.max_passes.unwrap_or_else(|| default_max_passes(n)))
        .map_err(|e| ExperimentError::Solver { seed, source: e })?;
    let ms = if opts.timing { start.elapsed().as_millis() as u64 } else { 0 };

    let arr = build_arrangement(&f)?;
    let graph = curve_graph_of(&arr, &f, &points)?;
    let coefficient = |i, j| arr.canonical_coefficient(&Exponent::new(i, j));
    Ok(TrialRecord {
        s,
        n,
        seed,
        degree: f.degree(),
        genus: arr.bounded_face_count(),
        generic_tree: is_generic_tree_graph(&graph),
        c00: coefficient(0, 0),
        c01: coefficient(0, 1),
        c10: coefficient(1, 0),
        c11: coefficient(1, 1),
        shrinks: trace.total_shrinks,
        passes: trace.passes,
        ms,
        window: opts.extended.then(|| CoefficientWindow::of_arrangement(&arr)),
    })
}
