use std::collections::VecDeque;
use std::fmt::Write as _;

use tropical_core::RPoint;

use crate::SandpileError;

/// Order in which unstable vertices are toppled. All give the same result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Work queue, first in first out, toppling each vertex fully at once.
    Fifo,
    /// Work stack, last in first out, toppling each vertex fully at once.
    Lifo,
    /// Repeated raster sweeps toppling each unstable vertex once per visit.
    Sweep,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::Fifo, Policy::Lifo, Policy::Sweep];
}

/// Grain counts and toppling counts on the vertices `{0..=s}²`, stored row
/// by row with `y` as the row index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandpileGrid {
    s: usize,
    grains: Vec<u32>,
    topplings: Vec<u64>,
}

impl SandpileGrid {
    pub fn constant(s: usize, grains: u32) -> Self {
        let n = (s + 1) * (s + 1);
        SandpileGrid {
            s,
            grains: vec![grains; n],
            topplings: vec![0; n],
        }
    }

    /// Three grains everywhere plus one at each `s·p`.
    pub fn tropical_state(s: usize, points: &[RPoint]) -> Result<Self, SandpileError> {
        if s < 2 {
            return Err(SandpileError::Input(format!("lattice scale {s} is too small")));
        }
        let mut grid = SandpileGrid::constant(s, 3);
        for p in points {
            let (x, y) = lattice_coords(p, s)?;
            let k = grid.index(x, y);
            grid.grains[k] += 1;
        }
        Ok(grid)
    }

    pub fn from_grains(s: usize, grains: Vec<u32>) -> Result<Self, SandpileError> {
        let n = (s + 1) * (s + 1);
        if grains.len() != n {
            return Err(SandpileError::Input(format!(
                "expected {n} grain counts, got {}",
                grains.len()
            )));
        }
        Ok(SandpileGrid {
            s,
            grains,
            topplings: vec![0; n],
        })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Vertices per row.
    pub fn width(&self) -> usize {
        self.s + 1
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * (self.s + 1) + x
    }

    pub fn grains(&self) -> &[u32] {
        &self.grains
    }

    pub fn topplings(&self) -> &[u64] {
        &self.topplings
    }

    pub fn grains_at(&self, x: usize, y: usize) -> u32 {
        self.grains[self.index(x, y)]
    }

    pub fn topplings_at(&self, x: usize, y: usize) -> u64 {
        self.topplings[self.index(x, y)]
    }

    pub fn is_stable(&self) -> bool {
        self.grains.iter().all(|&g| g <= 3)
    }

    pub fn total_grains(&self) -> u64 {
        self.grains.iter().map(|&g| g as u64).sum()
    }

    fn neighbours(&self, k: usize) -> impl Iterator<Item = usize> {
        let w = self.s + 1;
        let (x, y) = (k % w, k / w);
        let left = (x > 0).then(|| k - 1);
        let right = (x + 1 < w).then(|| k + 1);
        let down = (y > 0).then(|| k - w);
        let up = (y + 1 < w).then(|| k + w);
        [left, right, down, up].into_iter().flatten()
    }

    /// Topples until stable; grains sent off the grid are lost.
    pub fn relax(&mut self) {
        self.relax_with(Policy::Fifo);
    }

    pub fn relaxed(mut self) -> Self {
        self.relax();
        self
    }

    pub fn relax_with(&mut self, policy: Policy) {
        match policy {
            Policy::Fifo | Policy::Lifo => self.relax_queue(policy == Policy::Lifo),
            Policy::Sweep => self.relax_sweep(),
        }
    }

    fn relax_queue(&mut self, lifo: bool) {
        let mut queued = vec![false; self.grains.len()];
        let mut work: VecDeque<usize> = VecDeque::new();
        for (k, &g) in self.grains.iter().enumerate() {
            if g >= 4 {
                queued[k] = true;
                work.push_back(k);
            }
        }
        while let Some(k) = if lifo { work.pop_back() } else { work.pop_front() } {
            queued[k] = false;
            let times = self.grains[k] / 4;
            if times == 0 {
                continue;
            }
            self.grains[k] -= 4 * times;
            self.topplings[k] += times as u64;
            let w = self.s + 1;
            let (x, y) = (k % w, k / w);
            let mut give = |n: usize| {
                self.grains[n] += times;
                if self.grains[n] >= 4 && !queued[n] {
                    queued[n] = true;
                    work.push_back(n);
                }
            };
            if x > 0 {
                give(k - 1);
            }
            if x + 1 < w {
                give(k + 1);
            }
            if y > 0 {
                give(k - w);
            }
            if y + 1 < w {
                give(k + w);
            }
        }
    }

    /// Deliberately plain: one toppling per unstable vertex per sweep.
    fn relax_sweep(&mut self) {
        loop {
            let mut any = false;
            for k in 0..self.grains.len() {
                if self.grains[k] >= 4 {
                    any = true;
                    self.grains[k] -= 4;
                    self.topplings[k] += 1;
                    let ns: Vec<usize> = self.neighbours(k).collect();
                    for n in ns {
                        self.grains[n] += 1;
                    }
                }
            }
            if !any {
                break;
            }
        }
    }

    /// Checks `final = initial + Σ neighbour topplings − 4·own topplings` at
    /// every vertex with all four neighbours on the grid.
    pub fn conservation_holds(&self, initial: &SandpileGrid) -> bool {
        if initial.s != self.s || initial.topplings.iter().any(|&t| t != 0) {
            return false;
        }
        let w = self.s + 1;
        for y in 1..self.s {
            for x in 1..self.s {
                let k = y * w + x;
                let inflow: i128 = self.neighbours(k).map(|n| self.topplings[n] as i128).sum();
                let expected =
                    initial.grains[k] as i128 + inflow - 4 * self.topplings[k] as i128;
                if expected != self.grains[k] as i128 {
                    return false;
                }
            }
        }
        true
    }

    /// Vertices whose grain count differs from three.
    pub fn deviation_set(&self) -> Result<Vec<(usize, usize)>, SandpileError> {
        if !self.is_stable() {
            return Err(SandpileError::Unstable);
        }
        let w = self.s + 1;
        Ok(self
            .grains
            .iter()
            .enumerate()
            .filter(|(_, &g)| g != 3)
            .map(|(k, _)| (k % w, k / w))
            .collect())
    }

    /// Binary PGM of the grain counts with gray levels 0–3; the first image
    /// row is `y = s`, so the picture has the usual orientation.
    pub fn to_pgm(&self) -> Result<Vec<u8>, SandpileError> {
        if !self.is_stable() {
            return Err(SandpileError::Unstable);
        }
        let w = self.s + 1;
        let mut out = format!("P5\n{w} {w}\n3\n").into_bytes();
        for y in (0..w).rev() {
            out.extend(self.grains[y * w..(y + 1) * w].iter().map(|&g| g as u8));
        }
        Ok(out)
    }

    /// Toppling counts as unsigned 32-bit little-endian integers, row-major
    /// with row `y = 0` first.
    pub fn topplings_le_u32(&self) -> Result<Vec<u8>, SandpileError> {
        let mut out = Vec::with_capacity(self.topplings.len() * 4);
        for &t in &self.topplings {
            let t = u32::try_from(t).map_err(|_| SandpileError::Overflow(t))?;
            out.extend_from_slice(&t.to_le_bytes());
        }
        Ok(out)
    }

    /// Grain counts as text, top row first; for debugging small grids.
    pub fn render_ascii(&self) -> String {
        let w = self.s + 1;
        let mut out = String::new();
        for y in (0..w).rev() {
            for x in 0..w {
                let _ = write!(out, "{}", self.grains[y * w + x]);
            }
            out.push('\n');
        }
        out
    }
}

/// `(x, y)` with `p = (x/s, y/s)` and `1 <= x, y <= s - 1`.
pub fn lattice_coords(p: &RPoint, s: usize) -> Result<(usize, usize), SandpileError> {
    let scale = tropical_core::Rational::from_integer(s as i64);
    let (x, y) = (&p.x * &scale, &p.y * &scale);
    let inside = |v: &tropical_core::Rational| {
        v.is_integer() && v.is_positive() && *v < scale
    };
    if !inside(&x) || !inside(&y) {
        return Err(SandpileError::Input(format!(
            "point {p} is not an interior lattice point for s = {s}"
        )));
    }
    let to = |v: &tropical_core::Rational| v.to_f64() as usize;
    Ok((to(&x), to(&y)))
}
