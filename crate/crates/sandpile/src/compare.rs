//! Deviation set versus exact curve.

use std::collections::BTreeSet;

use serde::Serialize;
use tropical_core::{build_arrangement, FaceArrangement, RPoint, Rational, TropicalSeries};

use crate::grid::SandpileGrid;
use crate::SandpileError;

pub const REPORT_SCHEMA: &str = "tropical-deviation-report/1";

pub type Cell = (usize, usize);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationReport {
    pub schema: &'static str,
    pub s: usize,
    /// `max |h(v)/s − f(v/s)|` over all lattice vertices.
    pub sup_norm_gap: f64,
    pub sup_gap_vertex: Cell,
    pub radius: usize,
    pub deviation_cells: Vec<Cell>,
    pub curve_cells: usize,
    /// Fraction of deviation cells within `radius` of a curve cell.
    pub deviation_covered: f64,
    /// Fraction of curve cells within `radius` of a deviation cell.
    pub curve_covered: f64,
}

impl DeviationReport {
    pub fn symmetric_coverage(&self) -> f64 {
        self.deviation_covered.min(self.curve_covered)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Compares a relaxed `3 + Σδ_p` state against the exact solution `f` for
/// the same points, at Chebyshev cell radius `radius`.
pub fn compare_with_exact(
    f: &TropicalSeries,
    stable: &SandpileGrid,
    radius: usize,
) -> Result<DeviationReport, SandpileError> {
    let deviation = stable.deviation_set()?;
    let s = stable.s();
    let arr = build_arrangement(f)?;
    let curve = rasterize_curve(&arr, s);

    let (sup_norm_gap, sup_gap_vertex) = sup_gap(f, stable);
    let dev_set: BTreeSet<Cell> = deviation.iter().copied().collect();
    Ok(DeviationReport {
        schema: REPORT_SCHEMA,
        s,
        sup_norm_gap,
        sup_gap_vertex,
        radius,
        curve_cells: curve.len(),
        deviation_covered: coverage(&dev_set, &curve, s, radius),
        curve_covered: coverage(&curve, &dev_set, s, radius),
        deviation_cells: deviation,
    })
}

fn sup_gap(f: &TropicalSeries, grid: &SandpileGrid) -> (f64, Cell) {
    let s = grid.s();
    let scale = Rational::from_integer(s as i64);
    let mut best = (Rational::zero(), (0, 0));
    for y in 0..=s {
        for x in 0..=s {
            let p = RPoint::lattice(x as i64, y as i64, s as i64);
            let h = Rational::from_integer(grid.topplings_at(x, y) as i64) / &scale;
            let gap = (&h - &f.evaluate(&p).expect("lattice vertex lies in the square")).abs();
            if gap > best.0 {
                best = (gap, (x, y));
            }
        }
    }
    (best.0.to_f64(), best.1)
}

/// Fraction of `from` cells with some `to` cell at Chebyshev distance
/// `<= radius`; an empty `from` is fully covered.
pub fn coverage(from: &BTreeSet<Cell>, to: &BTreeSet<Cell>, s: usize, radius: usize) -> f64 {
    if from.is_empty() {
        return 1.0;
    }
    let w = s + 1;
    let mut near = vec![false; w * w];
    for &(x, y) in to {
        for yy in y.saturating_sub(radius)..=(y + radius).min(s) {
            for xx in x.saturating_sub(radius)..=(x + radius).min(s) {
                near[yy * w + xx] = true;
            }
        }
    }
    let hit = from.iter().filter(|&&(x, y)| near[y * w + x]).count();
    hit as f64 / from.len() as f64
}

/// Lattice cells `[a ± 1/2] × [b ± 1/2]` (in units of `1/s`) met by any
/// closed curve edge, decided exactly.
pub fn rasterize_curve(arr: &FaceArrangement, s: usize) -> BTreeSet<Cell> {
    let mut cells = BTreeSet::new();
    let scale = Rational::from_integer(s as i64);
    let half = Rational::new(1, 2);
    for e in &arr.curve_edges {
        let a = (&e.a.x * &scale, &e.a.y * &scale);
        let b = (&e.b.x * &scale, &e.b.y * &scale);
        let (x_lo, x_hi) = (a.0.clone().min(b.0.clone()), a.0.clone().max(b.0.clone()));
        let first = floor_usize(&(&x_lo + &half), s);
        let last = floor_usize(&(&x_hi + &half), s);
        for col in first..=last {
            let c = Rational::from_integer(col as i64);
            let strip = (&c - &half, &c + &half);
            let Some((y_lo, y_hi)) = clip_to_strip(&a, &b, &strip) else {
                continue;
            };
            let lo = ceil_usize(&(&y_lo - &half), s);
            let hi = floor_usize(&(&y_hi + &half), s);
            for row in lo..=hi {
                cells.insert((col, row));
            }
        }
    }
    cells
}

/// y-range of the segment `a→b` inside the closed strip `lo <= x <= hi`.
fn clip_to_strip(
    a: &(Rational, Rational),
    b: &(Rational, Rational),
    strip: &(Rational, Rational),
) -> Option<(Rational, Rational)> {
    let dx = &b.0 - &a.0;
    let (mut t0, mut t1) = (Rational::zero(), Rational::one());
    if dx.is_zero() {
        if a.0 < strip.0 || a.0 > strip.1 {
            return None;
        }
    } else {
        let ta = &(&strip.0 - &a.0) / &dx;
        let tb = &(&strip.1 - &a.0) / &dx;
        let (lo, hi) = if ta < tb { (ta, tb) } else { (tb, ta) };
        t0 = t0.max(lo);
        t1 = t1.min(hi);
        if t0 > t1 {
            return None;
        }
    }
    let dy = &b.1 - &a.1;
    let y0 = &a.1 + &(&dy * &t0);
    let y1 = &a.1 + &(&dy * &t1);
    Some(if y0 <= y1 { (y0, y1) } else { (y1, y0) })
}

/// `floor(v)` clamped to `[0, s]`.
fn floor_usize(v: &Rational, s: usize) -> usize {
    clamp(v.floor().try_into().unwrap_or(i64::MAX), s)
}

fn ceil_usize(v: &Rational, s: usize) -> usize {
    clamp(v.ceil().try_into().unwrap_or(i64::MAX), s)
}

fn clamp(v: i64, s: usize) -> usize {
    v.clamp(0, s as i64) as usize
}

/// Connected components of a cell set under 8-adjacency.
pub fn component_count(cells: &BTreeSet<Cell>) -> usize {
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &start in cells {
        if !seen.insert(start) {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        while let Some((x, y)) = stack.pop() {
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if nx < 0 || ny < 0 {
                        continue;
                    }
                    let n = (nx as usize, ny as usize);
                    if cells.contains(&n) && seen.insert(n) {
                        stack.push(n);
                    }
                }
            }
        }
    }
    count
}
