use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::sampling::{trial_seed, RNG_NAME, SEED_MIX_NAME};
use crate::stats::{aggregate, degree_flatness, AggregateStats};
use crate::trial::{run_trial, TrialOptions, TrialRecord};
use crate::ExperimentError;

pub const CSV_SCHEMA: &str = "tropical-trials/1";
pub const REPORT_SCHEMA: &str = "tropical-sweep/1";

/// A grid of `(s, n)` cells, each run for `trials` seeded trials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub s: Vec<u32>,
    pub n: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    #[serde(default)]
    pub max_passes: Option<usize>,
    /// Record solve times; makes output nondeterministic.
    #[serde(default)]
    pub timing: bool,
    /// Record the 5×5 coefficient window for the diagnostics report.
    #[serde(default)]
    pub extended: bool,
}

fn default_jobs() -> usize {
    1
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let err = |m: String| Err(ExperimentError::Config(m));
        if self.s.is_empty() || self.n.is_empty() {
            return err("empty s or n grid".into());
        }
        if self.trials == 0 {
            return err("trials must be at least 1".into());
        }
        if self.jobs == 0 {
            return err("jobs must be at least 1".into());
        }
        for &s in &self.s {
            if s < 4 {
                return err(format!("s = {s} is below the minimum of 4"));
            }
            for &n in &self.n {
                let room = (s as usize - 1).pow(2);
                if n == 0 || n > room {
                    return err(format!("n = {n} is outside 1..={room} for s = {s}"));
                }
            }
        }
        if self.max_passes == Some(0) {
            return err("max_passes must be positive".into());
        }
        Ok(())
    }

    pub fn options(&self) -> TrialOptions {
        TrialOptions {
            max_passes: self.max_passes,
            timing: self.timing,
            extended: self.extended,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialFailure {
    pub s: u32,
    pub n: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub records: Vec<TrialRecord>,
    pub failures: Vec<TrialFailure>,
    pub aggregates: Vec<AggregateStats>,
}

/// Runs every `(s, n, trial)` combination. Results are ordered by cell and
/// trial index, so they do not depend on `jobs`.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepResult, ExperimentError> {
    cfg.validate()?;
    let opts = cfg.options();
    let tasks: Vec<(u32, usize, u64)> = cfg
        .s
        .iter()
        .flat_map(|&s| {
            cfg.n.iter().flat_map(move |&n| {
                (0..cfg.trials).map(move |k| (s, n, trial_seed(cfg.seed, s, n, k)))
            })
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| ExperimentError::Config(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<TrialRecord, TrialFailure>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(s, n, seed)| {
                run_trial(s, n, seed, &opts).map_err(|e| TrialFailure {
                    s,
                    n,
                    seed,
                    error: e.to_string(),
                })
            })
            .collect()
    });

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }
    let mut aggregates = Vec::new();
    for &s in &cfg.s {
        for &n in &cfg.n {
            let cell: Vec<TrialRecord> = records
                .iter()
                .filter(|r| r.s == s && r.n == n)
                .cloned()
                .collect();
            if !cell.is_empty() {
                aggregates.push(aggregate(&cell, s, n));
            }
        }
    }
    Ok(SweepResult { records, failures, aggregates })
}

/// Decimal rendering with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// One row per trial, after a `#` comment line naming the schema, the
/// generator and the coefficient units.
pub fn write_csv<W: Write>(records: &[TrialRecord], mut out: W) -> Result<(), ExperimentError> {
    writeln!(
        out,
        "# schema={CSV_SCHEMA} rng={RNG_NAME} seed_mix={SEED_MIX_NAME} units=continuous(lattice/s)"
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "s", "n", "seed", "degree", "genus", "c00", "c01", "c10", "c11", "shrinks", "ms",
        "c00_exact", "c01_exact", "c10_exact", "c11_exact", "generic_tree",
    ])?;
    for r in records {
        let cs = [&r.c00, &r.c01, &r.c10, &r.c11];
        let mut row = vec![
            r.s.to_string(),
            r.n.to_string(),
            r.seed.to_string(),
            r.degree.to_string(),
            r.genus.to_string(),
        ];
        row.extend(cs.iter().map(|c| sig12(c.to_f64())));
        row.push(r.shrinks.to_string());
        row.push(r.ms.to_string());
        row.extend(cs.iter().map(|c| c.to_string()));
        row.push(r.generic_tree.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessEntry {
    pub s: u32,
    /// `(α, max/min of mean_degree/n^α across n)`.
    pub spread: Vec<(f64, f64)>,
    pub flattest_alpha: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport<'a> {
    pub schema: &'static str,
    pub rng: &'static str,
    pub seed_mix: &'static str,
    pub config: &'a SweepConfig,
    pub aggregates: &'a [AggregateStats],
    pub degree_flatness: Vec<FlatnessEntry>,
    pub failures: &'a [TrialFailure],
}

impl SweepResult {
    pub fn report<'a>(&'a self, cfg: &'a SweepConfig) -> SweepReport<'a> {
        let degree_flatness = cfg
            .s
            .iter()
            .filter_map(|&s| {
                let cells: Vec<&AggregateStats> = self.aggregates.iter().filter(|a| a.s == s).collect();
                if cells.is_empty() {
                    return None;
                }
                let spread = degree_flatness(&cells);
                let flattest_alpha = spread
                    .iter()
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|e| e.0)
                    .unwrap_or(0.5);
                Some(FlatnessEntry { s, spread, flattest_alpha })
            })
            .collect();
        SweepReport {
            schema: REPORT_SCHEMA,
            rng: RNG_NAME,
            seed_mix: SEED_MIX_NAME,
            config: cfg,
            aggregates: &self.aggregates,
            degree_flatness,
            failures: &self.failures,
        }
    }
}
