//! End-to-end acceptance checks. Each test prints one `criterion N: PASS|FAIL`
//! line with the measured values and fails when its threshold is missed.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropical_core::geometry::area;
use tropical_core::*;
use tropical_experiments::{sweep, SweepConfig};
use tropical_sandpile::{compare_with_exact, Policy, SandpileGrid};

const SINGLE_POINT_TRIALS: usize = 50;
const SINGLE_POINT_BUDGET: Duration = Duration::from_secs(1);

const GENUS_MIN_RATE: f64 = 0.90;
const GENUS_TREE_RATE: f64 = 1.0;

const DEGREE_BAND: (f64, f64) = (0.5, 2.5);
const DEGREE_MAX_SPREAD: f64 = 1.5;

const IDENTITY_TRIALS: usize = 200;
const IDENTITY_TOLERANCE: f64 = 0.1;

const ORDER_SETS: usize = 50;
const ORDER_PERMUTATIONS: usize = 10;

const ORACLE_INPUTS: usize = 20;
const ORACLE_SAMPLES: usize = 200;
const ORACLE_CAP: u64 = 2;
const ORACLE_STEP_DEN: i64 = 64;

const SANDPILE_SIZES: [u32; 3] = [16, 32, 64];
const SANDPILE_SETS_PER_SIZE: usize = 4;
const GAP_NOISE_FACTOR: f64 = 1.2;
const COVERAGE_RADIUS: usize = 3;
const COVERAGE_MIN: f64 = 0.95;

const INVARIANT_INSTANCES: usize = 100;

fn verdict(criterion: u32, pass: bool, detail: String) {
    println!("criterion {criterion}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_lattice_set(rng: &mut ChaCha8Rng, s: i64, n: usize) -> Vec<RPoint> {
    let mut cells: Vec<(i64, i64)> = Vec::with_capacity(n);
    while cells.len() < n {
        let c = (rng.random_range(1..s), rng.random_range(1..s));
        if !cells.contains(&c) {
            cells.push(c);
        }
    }
    cells.into_iter().map(|(x, y)| RPoint::lattice(x, y, s)).collect()
}

fn solve(points: &[RPoint]) -> TropicalSeries {
    solve_gp(points, default_max_passes(points.len())).expect("solver converges").0
}

#[test]
fn criterion_1_single_point_closed_form() {
    let s = 64;
    let mut r = rng(1);
    let mut mismatches = 0;
    let start = Instant::now();
    for _ in 0..SINGLE_POINT_TRIALS {
        let (x, y) = (r.random_range(1..s), r.random_range(1..s));
        let f = solve(&[RPoint::lattice(x, y, s)]);
        let plateau = Rational::new(x.min(y).min(s - x).min(s - y), s);
        if f != TropicalSeries::plateau(plateau) {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        mismatches == 0 && elapsed < SINGLE_POINT_BUDGET,
        format!("{mismatches}/{SINGLE_POINT_TRIALS} mismatches, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_2_genus_equals_point_count() {
    let cfg = SweepConfig {
        s: vec![64],
        n: (1..=8).collect(),
        trials: 100,
        seed: 2024,
        jobs: 1,
        max_passes: None,
        timing: false,
        extended: false,
    };
    let result = sweep(&cfg).expect("sweep runs");
    let mut pass = result.failures.is_empty();
    let mut rows = Vec::new();
    for a in &result.aggregates {
        pass &= a.genus_rate >= GENUS_MIN_RATE && a.genus_rate_given_tree >= GENUS_TREE_RATE;
        rows.push(format!(
            "n={} genus={:.2} tree={:.2} genus|tree={:.2}",
            a.n, a.genus_rate, a.generic_tree_rate, a.genus_rate_given_tree
        ));
    }
    verdict(2, pass, rows.join("; "));
}

#[test]
fn criterion_3_degree_scales_like_sqrt_n() {
    let cfg = SweepConfig {
        s: vec![32, 64],
        n: vec![4, 16, 64],
        trials: 50,
        seed: 2024,
        jobs: 1,
        max_passes: None,
        timing: false,
        extended: false,
    };
    let result = sweep(&cfg).expect("sweep runs");
    let mut pass = result.failures.is_empty();
    let mut rows = Vec::new();
    for &s in &cfg.s {
        let ratios: Vec<f64> = result
            .aggregates
            .iter()
            .filter(|a| a.s == s)
            .map(|a| a.degree.mean / (a.n as f64).sqrt())
            .collect();
        let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        pass &= ratios.len() == cfg.n.len();
        pass &= ratios.iter().all(|r| (DEGREE_BAND.0..=DEGREE_BAND.1).contains(r));
        pass &= max / min <= DEGREE_MAX_SPREAD;
        rows.push(format!("s={s} deg/sqrt(n)={ratios:.3?} spread={:.3}", max / min));
    }
    verdict(3, pass, rows.join("; "));
}

#[test]
fn criterion_4_mean_coefficient_identity() {
    let cfg = SweepConfig {
        s: vec![64],
        n: vec![16],
        trials: IDENTITY_TRIALS,
        seed: 7,
        jobs: 1,
        max_passes: None,
        timing: false,
        extended: false,
    };
    let result = sweep(&cfg).expect("sweep runs");
    let a = &result.aggregates[0];
    let scaled = a.residual.abs() / (a.n as f64).sqrt();
    verdict(
        4,
        result.failures.is_empty() && a.trials == IDENTITY_TRIALS && scaled <= IDENTITY_TOLERANCE,
        format!("residual={} |residual|/sqrt(n)={scaled:.4}", a.residual_exact),
    );
}

#[test]
fn criterion_5_sweep_order_invariance() {
    let mut r = rng(5);
    let mut differing = 0;
    for _ in 0..ORDER_SETS {
        let n = r.random_range(1..=6);
        let mut points = random_lattice_set(&mut r, 64, n);
        let reference = solve(&points);
        for _ in 0..ORDER_PERMUTATIONS {
            points.shuffle(&mut r);
            if solve(&points) != reference {
                differing += 1;
            }
        }
    }
    verdict(
        5,
        differing == 0,
        format!("{differing} of {} permuted solves differ", ORDER_SETS * ORDER_PERMUTATIONS),
    );
}

#[test]
fn criterion_6_matches_grid_oracle() {
    let mut r = rng(6);
    let step = Rational::new(1, ORACLE_STEP_DEN);
    let tolerance = step.to_f64();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for k in 0..ORACLE_INPUTS {
        let n = 1 + k % 2;
        let points = random_lattice_set(&mut r, ORACLE_STEP_DEN, n);
        let f = solve(&points);
        let g = match brute_force_gp(&points, ORACLE_CAP, &step) {
            Ok(g) => g,
            Err(e) => {
                failures.push(format!("{points:?}: {e}"));
                continue;
            }
        };
        for _ in 0..ORACLE_SAMPLES {
            let q = RPoint::lattice(r.random_range(1..1009), r.random_range(1..1009), 1009);
            let gap = (&f.evaluate(&q).unwrap() - &g.evaluate(&q).unwrap()).abs().to_f64();
            worst = worst.max(gap);
        }
    }
    verdict(
        6,
        failures.is_empty() && worst <= tolerance,
        format!("max |solver - oracle| = {worst:.5} (tolerance {tolerance:.5}); oracle errors {failures:?}"),
    );
}

#[test]
fn criterion_7_sandpile_cross_validation() {
    let mut r = rng(7);
    let mut abelian_failures = 0;
    let mut gap_failures = Vec::new();
    let mut worst_coverage = f64::INFINITY;
    for size in 1..=3 {
        for _ in 0..SANDPILE_SETS_PER_SIZE {
            // Points on the coarsest grid are lattice points at every size.
            let points = random_lattice_set(&mut r, SANDPILE_SIZES[0] as i64, size);
            let f = solve(&points);
            let mut gaps = Vec::new();
            for &s in &SANDPILE_SIZES {
                let s = s as usize;
                let initial = SandpileGrid::tropical_state(s, &points).unwrap();
                let relaxed: Vec<SandpileGrid> = Policy::ALL
                    .iter()
                    .map(|&policy| {
                        let mut g = initial.clone();
                        g.relax_with(policy);
                        g
                    })
                    .collect();
                if relaxed.windows(2).any(|w| w[0].grains() != w[1].grains() || w[0].topplings() != w[1].topplings()) {
                    abelian_failures += 1;
                }
                let report = compare_with_exact(&f, &relaxed[0], COVERAGE_RADIUS).unwrap();
                gaps.push(report.sup_norm_gap);
                if s == 64 {
                    worst_coverage = worst_coverage.min(report.symmetric_coverage());
                }
            }
            if gaps.windows(2).any(|w| w[1] > GAP_NOISE_FACTOR * w[0]) {
                gap_failures.push(format!("{points:?}: {gaps:?}"));
            }
        }
    }
    verdict(
        7,
        abelian_failures == 0 && gap_failures.is_empty() && worst_coverage >= COVERAGE_MIN,
        format!(
            "abelian failures {abelian_failures}, gap increases {gap_failures:?}, min coverage at s=64 {worst_coverage:.3}"
        ),
    );
}

/// Nonnegative monomials added to the plateau; boundary zero holds, canonical
/// form usually does not.
fn random_raw_series(r: &mut ChaCha8Rng) -> TropicalSeries {
    let mut f = TropicalSeries::plateau(Rational::new(r.random_range(1..40), 20));
    for _ in 0..r.random_range(0..8) {
        let e = Exponent::new(r.random_range(-3..=3), r.random_range(-3..=3));
        if f.contains(&e) {
            continue;
        }
        let lo = (-e.i).max(0) + (-e.j).max(0);
        f.insert(e, &Rational::from_integer(lo) + &Rational::new(r.random_range(0..40), r.random_range(1..200)));
    }
    f
}

#[test]
fn criterion_8_exactness_invariants() {
    let mut r = rng(8);
    let mut broken = Vec::new();

    for _ in 0..INVARIANT_INSTANCES {
        let n = r.random_range(1..=6);
        let points = random_lattice_set(&mut r, 64, n);
        let mut state = GpState::zero();
        'passes: for _ in 0..default_max_passes(points.len()) {
            let mut changed = false;
            for p in &points {
                let out = state.shrink(p).unwrap();
                if !boundary_zero_check(state.series()) {
                    broken.push("boundary zero after shrink");
                    break 'passes;
                }
                changed |= out.raise_amount.is_positive();
            }
            if !changed {
                break;
            }
        }
    }

    for _ in 0..INVARIANT_INSTANCES {
        let f = random_raw_series(&mut r);
        let g = canonicalize(&f).unwrap();
        if canonicalize(&g).unwrap() != g {
            broken.push("canonical idempotence");
        }
        let arr = build_arrangement(&g).unwrap();
        if arr.faces.iter().map(|face| area(&face.polygon)).sum::<Rational>() != Rational::one() {
            broken.push("area partition");
        }
        if euler_characteristic(&arr) != 2 {
            broken.push("euler characteristic");
        }
    }

    for _ in 0..INVARIANT_INSTANCES {
        let s = r.random_range(4..40usize);
        let grains: Vec<u32> = (0..(s + 1) * (s + 1)).map(|_| r.random_range(0..8)).collect();
        let initial = SandpileGrid::from_grains(s, grains).unwrap();
        if !initial.clone().relaxed().conservation_holds(&initial) {
            broken.push("sandpile conservation");
        }
    }

    verdict(8, broken.is_empty(), format!("{} instances per check, violations {broken:?}", INVARIANT_INSTANCES));
}
