use serde::Serialize;
use tropical_core::Rational;

use crate::trial::TrialRecord;

/// Exponents tried for the `n^α` normalizations.
pub const ALPHAS: [f64; 3] = [0.45, 0.5, 0.55];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanSd {
    /// Exact mean as `num/den`.
    pub exact_mean: Rational,
    pub mean: f64,
    pub sd: f64,
}

/// Exact mean over rationals, population standard deviation in `f64`.
pub fn mean_sd(values: &[Rational]) -> MeanSd {
    let count = values.len().max(1) as i64;
    let exact_mean: Rational = values.iter().sum::<Rational>() / &Rational::from_integer(count);
    let mean = exact_mean.to_f64();
    let var = values
        .iter()
        .map(|v| (v.to_f64() - mean).powi(2))
        .sum::<f64>()
        / count as f64;
    MeanSd { exact_mean, mean, sd: var.sqrt() }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Normalized {
    pub alpha: f64,
    pub mean_degree: f64,
    pub min_degree: f64,
    pub c00: f64,
    pub c01: f64,
    pub c10: f64,
    pub c11: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateStats {
    pub s: u32,
    pub n: usize,
    pub trials: usize,
    pub degree_min: u64,
    pub degree: MeanSd,
    pub genus: MeanSd,
    /// Fraction of trials with genus equal to the number of points.
    pub genus_rate: f64,
    pub generic_tree_rate: f64,
    /// Among generic-tree trials, the fraction with genus equal to `n`;
    /// 1 when there are none.
    pub genus_rate_given_tree: f64,
    pub c00: MeanSd,
    pub c01: MeanSd,
    pub c10: MeanSd,
    pub c11: MeanSd,
    /// Coefficients are in continuous units on the unit square, so these are
    /// the lattice-unit quantities divided by `s`.
    pub normalized: Vec<Normalized>,
    /// `SD(c00) / n`.
    pub c00_sd_over_n: f64,
    /// `mean c00 + mean c11 − mean c10 − mean c01`, exact.
    pub residual_exact: Rational,
    pub residual: f64,
    pub residual_over_sqrt_n: f64,
    pub shrinks_mean: f64,
}

pub fn aggregate(records: &[TrialRecord], s: u32, n: usize) -> AggregateStats {
    let trials = records.len();
    let col = |get: fn(&TrialRecord) -> Rational| -> MeanSd {
        mean_sd(&records.iter().map(get).collect::<Vec<_>>())
    };
    let degree = col(|r| Rational::from_integer(r.degree as i64));
    let genus = col(|r| Rational::from_integer(r.genus as i64));
    let c00 = col(|r| r.c00.clone());
    let c01 = col(|r| r.c01.clone());
    let c10 = col(|r| r.c10.clone());
    let c11 = col(|r| r.c11.clone());
    let degree_min = records.iter().map(|r| r.degree).min().unwrap_or(0);

    let rate = |hits: usize, of: usize| if of == 0 { 1.0 } else { hits as f64 / of as f64 };
    let genus_hits = records.iter().filter(|r| r.genus == r.n).count();
    let trees: Vec<_> = records.iter().filter(|r| r.generic_tree).collect();
    let tree_hits = trees.iter().filter(|r| r.genus == r.n).count();

    let nf = (n.max(1)) as f64;
    let normalized = ALPHAS
        .iter()
        .map(|&alpha| {
            let scale = nf.powf(alpha);
            Normalized {
                alpha,
                mean_degree: degree.mean / scale,
                min_degree: degree_min as f64 / scale,
                c00: c00.mean / scale,
                c01: c01.mean / scale,
                c10: c10.mean / scale,
                c11: c11.mean / scale,
            }
        })
        .collect();

    let residual_exact = &(&c00.exact_mean + &c11.exact_mean) - &(&c10.exact_mean + &c01.exact_mean);
    let residual = residual_exact.to_f64();
    AggregateStats {
        s,
        n,
        trials,
        degree_min,
        genus_rate: rate(genus_hits, trials),
        generic_tree_rate: rate(trees.len(), trials),
        genus_rate_given_tree: rate(tree_hits, trees.len()),
        c00_sd_over_n: c00.sd / nf,
        residual_over_sqrt_n: residual / nf.sqrt(),
        residual,
        residual_exact,
        shrinks_mean: records.iter().map(|r| r.shrinks as f64).sum::<f64>() / trials.max(1) as f64,
        degree,
        genus,
        c00,
        c01,
        c10,
        c11,
        normalized,
    }
}

/// For each `α`, the spread `max/min` of `mean_degree / n^α` across the
/// given cells (all at one `s`); the flattest exponent has the smallest spread.
pub fn degree_flatness(cells: &[&AggregateStats]) -> Vec<(f64, f64)> {
    ALPHAS
        .iter()
        .enumerate()
        .map(|(k, &alpha)| {
            let vals: Vec<f64> = cells.iter().map(|c| c.normalized[k].mean_degree).collect();
            let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            (alpha, if min > 0.0 { max / min } else { f64::INFINITY })
        })
        .collect()
}
