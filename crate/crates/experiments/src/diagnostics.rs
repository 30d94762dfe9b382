//! Diagnostics for the conjectured grid structure of the coefficients; they
//! are reported, never judged.

use serde::Serialize;
use tropical_core::Rational;

use crate::stats::{mean_sd, MeanSd};
use crate::trial::{CoefficientWindow, TrialRecord};

pub const REPORT_SCHEMA: &str = "tropical-diagnostics/1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub i: i64,
    pub j: i64,
    /// `c̄(i,j) + c̄(i+1,j+1) − c̄(i+1,j) − c̄(i,j+1)`, exact.
    pub exact: Rational,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscussionReport {
    pub schema: &'static str,
    pub trials: usize,
    /// Trials without a coefficient window, left out of the residuals.
    pub skipped: usize,
    pub residuals: Vec<IdentityResidual>,
    /// Per-trial `c00 / degree` (degree-zero trials are left out).
    pub c00_over_degree: MeanSd,
    /// The two competing heuristic scales for `c00`, averaged over trials:
    /// `(d + 1) / 2` and `d`.
    pub mean_half_degree_plus_half: f64,
    pub mean_degree: f64,
}

/// Identity residuals of a single coefficient window.
pub fn window_residuals(w: &CoefficientWindow) -> Vec<IdentityResidual> {
    mean_residuals(std::slice::from_ref(w))
}

fn mean_residuals(windows: &[CoefficientWindow]) -> Vec<IdentityResidual> {
    let count = Rational::from_integer(windows.len().max(1) as i64);
    let mean = |i: i64, j: i64| -> Rational {
        windows.iter().map(|w| w.get(i, j)).sum::<Rational>() / &count
    };
    let mut out = Vec::new();
    for i in -1..=1 {
        for j in -1..=1 {
            let exact = &(&mean(i, j) + &mean(i + 1, j + 1)) - &(&mean(i + 1, j) + &mean(i, j + 1));
            out.push(IdentityResidual { i, j, value: exact.to_f64(), exact });
        }
    }
    out
}

pub fn discussion_diagnostics(records: &[TrialRecord]) -> DiscussionReport {
    let windows: Vec<CoefficientWindow> = records.iter().filter_map(|r| r.window.clone()).collect();
    let ratios: Vec<Rational> = records
        .iter()
        .filter(|r| r.degree > 0)
        .map(|r| &r.c00 / &Rational::from_integer(r.degree as i64))
        .collect();
    let count = records.len().max(1) as f64;
    DiscussionReport {
        schema: REPORT_SCHEMA,
        trials: records.len(),
        skipped: records.len() - windows.len(),
        residuals: mean_residuals(&windows),
        c00_over_degree: mean_sd(&ratios),
        mean_half_degree_plus_half: records.iter().map(|r| (r.degree as f64 + 1.0) / 2.0).sum::<f64>()
            / count,
        mean_degree: records.iter().map(|r| r.degree as f64).sum::<f64>() / count,
    }
}
