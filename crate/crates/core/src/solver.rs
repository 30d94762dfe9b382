//! The face-shrink operator and its fixpoint over a finite point set.
//!
//! A shrink at `p` raises the coefficient of the unique monomial that is
//! minimal at `p` by the smallest amount `t` that makes some other exponent
//! tie with it there. Every other exponent `(k,l)` enters at its canonical
//! coefficient `max (f - k·x - l·y)`, so the result is
//!
//! ```text
//! g = min(m0 + t, min_{(k,l) ≠ e0} ĉ_kl + k·x + l·y)
//! ```
//!
//! which differs from `f` only inside the old face of `m0`. That face is
//! re-subdivided locally; exponents that newly appear there are found by an
//! exhaustive search around each new vertex, bounded using `f >= 0` and
//! `f = 0` on the boundary of the square.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arrangement::{build_arrangement, canonicalize, face_polygon, max_shifted, FaceArrangement, Face};
use crate::error::{Result, TropicalError};
use crate::geometry::{
    convex_hull, has_interior, strictly_inside, AffineForm, RPoint,
};
use crate::rational::Rational;
use crate::series::{Exponent, TropicalSeries};

/// Result of one face shrink.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShrinkOutcome {
    /// Exponent whose coefficient was raised (the minimal one at `p`).
    pub raised_exponent: Exponent,
    /// Zero iff `p` was already on the curve.
    pub raise_amount: Rational,
    /// Exponents tying with the raised monomial at `p` after the shrink.
    pub new_competitors: Vec<Exponent>,
    /// Exponents that were not in the input series but are in the result.
    pub inserted: Vec<Exponent>,
    /// True if the raised monomial lost all its area and was dropped.
    pub raised_dropped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShrinkRecord {
    pub pass: usize,
    pub point_index: usize,
    pub raised_exponent: Exponent,
    pub raise_amount: Rational,
}

/// Diagnostics of a fixpoint solve.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveTrace {
    /// Full sweeps over the point set, including the final quiet one.
    pub passes: usize,
    pub total_shrinks: usize,
    pub shrinks: Vec<ShrinkRecord>,
}

/// `10·n + 100`.
pub fn default_max_passes(n: usize) -> usize {
    10 * n + 100
}

/// A canonical series together with its faces, updated in place by shrinks.
#[derive(Clone, Debug)]
pub struct GpState {
    series: TropicalSeries,
    faces: BTreeMap<Exponent, Vec<RPoint>>,
    vertex_values: Vec<(RPoint, Rational)>,
}

impl GpState {
    /// State for the zero series.
    pub fn zero() -> Self {
        Self::from_series(&TropicalSeries::zero()).expect("zero series is valid")
    }

    /// Canonicalizes `f` and builds its faces.
    pub fn from_series(f: &TropicalSeries) -> Result<Self> {
        let f = canonicalize(f)?;
        let arr = build_arrangement(&f)?;
        let faces = arr.faces.iter().map(|face| (face.exponent, face.polygon.clone())).collect();
        Ok(GpState {
            series: f,
            faces,
            vertex_values: arr.vertex_values().to_vec(),
        })
    }

    pub fn series(&self) -> &TropicalSeries {
        &self.series
    }

    pub fn into_series(self) -> TropicalSeries {
        self.series
    }

    pub fn arrangement(&self) -> FaceArrangement {
        let faces = self
            .faces
            .iter()
            .map(|(e, poly)| Face {
                exponent: *e,
                polygon: poly.clone(),
            })
            .collect();
        FaceArrangement::from_faces(&self.series, faces)
    }

    /// Canonical coefficient of `e` for the current series.
    fn chat(&self, e: &Exponent) -> Rational {
        match self.series.get(e) {
            Some(c) => c.clone(),
            None => max_shifted(&self.vertex_values, e),
        }
    }

    fn refresh_vertices(&mut self) {
        let mut values: BTreeMap<RPoint, Rational> = BTreeMap::new();
        for (e, poly) in &self.faces {
            for p in poly {
                if !values.contains_key(p) {
                    let v = self.series.monomial_value(e, p).expect("face exponent stored");
                    values.insert(p.clone(), v);
                }
            }
        }
        self.vertex_values = values.into_iter().collect();
    }

    /// Applies the face-shrink operator at `p`.
    pub fn shrink(&mut self, p: &RPoint) -> Result<ShrinkOutcome> {
        if !p.is_interior() {
            return Err(TropicalError::BoundaryPoint(format!("{p:?}")));
        }
        let (fp, mins) = self.series.argmin_unchecked(p);
        let e0 = mins[0];
        if mins.len() >= 2 {
            return Ok(ShrinkOutcome {
                raised_exponent: e0,
                raise_amount: Rational::zero(),
                new_competitors: Vec::new(),
                inserted: Vec::new(),
                raised_dropped: false,
            });
        }
        let c0 = self.series.get(&e0).expect("argmin is stored").clone();
        let phi = self
            .faces
            .get(&e0)
            .cloned()
            .ok_or_else(|| TropicalError::Internal(format!("no face for {e0:?}")))?;

        let (raise, ties) = self.cheapest_competitors(p, &fp, &e0, &phi)?;
        let c0_new = &c0 + &raise;
        let m0_old = AffineForm::new(e0.i, e0.j, c0.clone());
        let m0_new = AffineForm::new(e0.i, e0.j, c0_new.clone());

        let mut added: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for e in &ties {
            added.insert(*e, self.chat(e));
        }
        for e in boundary_successors(&e0, &phi) {
            if !self.series.contains(&e) {
                added.insert(e, self.chat(&e));
            }
        }

        let mut pieces;
        let mut rounds = 0usize;
        loop {
            rounds += 1;
            if rounds > 10_000 {
                return Err(TropicalError::Internal(format!(
                    "local repair at {p:?} did not settle"
                )));
            }
            let mut g = self.series.clone();
            g.insert(e0, c0_new.clone());
            for (e, c) in &added {
                g.insert(*e, c.clone());
            }
            pieces = local_pieces(&g, &e0, &m0_new, &phi);

            let mut probes: BTreeMap<RPoint, Rational> = BTreeMap::new();
            for (q, poly) in &pieces {
                for v in poly {
                    if !probes.contains_key(v) && strictly_inside(&phi, v) {
                        probes.insert(v.clone(), g.monomial_value(q, v).expect("stored"));
                    }
                }
            }

            let mut found: BTreeMap<Exponent, Rational> = BTreeMap::new();
            for (v, gv) in &probes {
                let excess = gv - &m0_old.eval(v);
                if !excess.is_positive() {
                    continue;
                }
                for e in lattice_candidates(v, gv, false) {
                    if e == e0 || g.contains(&e) || found.contains_key(&e) {
                        continue;
                    }
                    if local_lower_bound(&e, &e0, v, &phi) >= excess {
                        continue;
                    }
                    let c = self.chat(&e);
                    if &(&c + &e.dot(v)) < gv {
                        found.insert(e, c);
                    }
                }
            }
            if found.is_empty() {
                break;
            }
            added.extend(found);
        }

        // Commit.
        let mut inserted = Vec::new();
        let mut raised_dropped = false;
        for (q, poly) in pieces {
            let area = has_interior(&poly);
            if q == e0 {
                if area {
                    self.faces.insert(e0, poly);
                } else {
                    self.faces.remove(&e0);
                    raised_dropped = true;
                }
            } else if let Some(old) = self.faces.get_mut(&q) {
                if area {
                    old.extend(poly);
                    *old = convex_hull(old);
                }
            } else if area {
                self.faces.insert(q, poly);
                self.series.insert(q, added[&q].clone());
                inserted.push(q);
            }
        }
        if raised_dropped {
            self.series.remove(&e0);
        } else {
            self.series.insert(e0, c0_new);
        }
        self.refresh_vertices();

        let new_competitors = ties.into_iter().filter(|e| self.series.contains(e)).collect();
        Ok(ShrinkOutcome {
            raised_exponent: e0,
            raise_amount: raise,
            new_competitors,
            inserted,
            raised_dropped,
        })
    }

    /// Smallest raise of the monomial `e0` (minimal at `p`) that makes another
    /// exponent tie with it at `p`, and all exponents achieving it.
    fn cheapest_competitors(
        &self,
        p: &RPoint,
        fp: &Rational,
        e0: &Exponent,
        phi: &[RPoint],
    ) -> Result<(Rational, Vec<Exponent>)> {
        let gap = |e: &Exponent| &(&self.chat(e) + &e.dot(p)) - fp;
        let t_cap = unit_neighbours(e0)
            .iter()
            .map(&gap)
            .min()
            .expect("four neighbours");

        let bound = fp + &t_cap;
        let mut best: Option<Rational> = None;
        let mut ties = Vec::new();
        for e in lattice_candidates(p, &bound, true) {
            if &e == e0 {
                continue;
            }
            if local_lower_bound(&e, e0, p, phi) > t_cap {
                continue;
            }
            let t = gap(&e);
            match best.as_ref().map(|b| t.cmp(b)) {
                None | Some(std::cmp::Ordering::Less) => {
                    best = Some(t);
                    ties.clear();
                    ties.push(e);
                }
                Some(std::cmp::Ordering::Equal) => ties.push(e),
                Some(std::cmp::Ordering::Greater) => {}
            }
        }
        let t = best.ok_or_else(|| {
            TropicalError::Internal(format!("competitor enumeration at {p:?} came up empty"))
        })?;
        if !t.is_positive() || t > t_cap {
            return Err(TropicalError::Internal(format!(
                "competitor raise {t} outside (0, {t_cap}] at {p:?}"
            )));
        }
        Ok((t, ties))
    }
}

fn unit_neighbours(e: &Exponent) -> [Exponent; 4] {
    [e.offset(1, 0), e.offset(-1, 0), e.offset(0, 1), e.offset(0, -1)]
}

/// Exponents that keep the boundary at zero once `e0` is raised: for every
/// side of the square along which the face of `e0` runs, the monomial
/// vanishes there, and its neighbour one step steeper into the square takes over.
fn boundary_successors(e0: &Exponent, phi: &[RPoint]) -> Vec<Exponent> {
    let (z, o) = (Rational::zero(), Rational::one());
    let n = phi.len();
    let mut out = BTreeSet::new();
    for k in 0..n {
        let (a, b) = (&phi[k], &phi[(k + 1) % n]);
        if a.x == z && b.x == z {
            out.insert(e0.offset(1, 0));
        }
        if a.x == o && b.x == o {
            out.insert(e0.offset(-1, 0));
        }
        if a.y == z && b.y == z {
            out.insert(e0.offset(0, 1));
        }
        if a.y == o && b.y == o {
            out.insert(e0.offset(0, -1));
        }
    }
    out.into_iter().collect()
}

/// Lower bound on `ĉ_e + e·v - (c0 + e0·v)` valid for `v` in the face `phi`
/// of `e0`: `max_{w ∈ phi} (e - e0)·(v - w)`.
fn local_lower_bound(e: &Exponent, e0: &Exponent, v: &RPoint, phi: &[RPoint]) -> Rational {
    let d = Exponent::new(e.i - e0.i, e.j - e0.j);
    let dv = d.dot(v);
    phi.iter()
        .map(|w| &dv - &d.dot(w))
        .max()
        .expect("face has vertices")
}

/// All exponents `(k,l)` with `|k|·a + |l|·b <= bound` (or `< bound` when
/// `inclusive` is false), where `a`, `b` are the distances from `v` to the
/// sides of the square facing the signs of `k`, `l`. Since `f >= 0` and
/// `f = 0` on the boundary, `ĉ_kl + k·v.x + l·v.y` is at least that sum, so
/// no exponent outside this set can go below `bound` at `v`.
fn lattice_candidates(v: &RPoint, bound: &Rational, inclusive: bool) -> Vec<Exponent> {
    let one = Rational::one();
    let margins = [v.x.clone(), &one - &v.x, v.y.clone(), &one - &v.y];
    // Largest m with m·margin (<|<=) bound.
    let reach = |margin: &Rational| -> i64 {
        let q = bound / margin;
        let m = if inclusive || !q.is_integer() { q.floor() } else { q.floor() - 1 };
        m.to_i64().unwrap_or(i64::MAX).max(0)
    };
    let (kp, kn, lp, ln) = (reach(&margins[0]), reach(&margins[1]), reach(&margins[2]), reach(&margins[3]));
    let within = |s: &Rational| if inclusive { s <= bound } else { s < bound };

    let mut out = Vec::new();
    for k in -kn..=kp {
        let kx = if k >= 0 { margins[0].mul_int(k) } else { margins[1].mul_int(-k) };
        if !within(&kx) {
            continue;
        }
        for l in -ln..=lp {
            let ly = if l >= 0 { margins[2].mul_int(l) } else { margins[3].mul_int(-l) };
            if within(&(&kx + &ly)) {
                out.push(Exponent::new(k, l));
            }
        }
    }
    out
}

/// Subdivides `phi` (the old face of `e0`) under the working series `g`.
fn local_pieces(
    g: &TropicalSeries,
    e0: &Exponent,
    m0_new: &AffineForm,
    phi: &[RPoint],
) -> Vec<(Exponent, Vec<RPoint>)> {
    // Only monomials dipping below the raised one somewhere on phi can own area there.
    let kept: Vec<Exponent> = g
        .iter()
        .filter(|(e, c)| {
            *e == e0 || {
                let form = AffineForm::new(e.i - e0.i, e.j - e0.j, *c - &m0_new.c);
                phi.iter().any(|w| form.eval(w).is_negative())
            }
        })
        .map(|(e, _)| *e)
        .collect();
    kept.iter()
        .map(|q| (*q, face_polygon(g, q, phi.to_vec(), kept.iter())))
        .collect()
}

/// Norm bound beyond which no exponent can compete at `p`: every `(i,j)`
/// with `dist∞(p, ∂Ω)·‖(i,j)‖ > f(p) + t_cap` is irrelevant, so returns
/// `ceil((f(p) + t_cap) / dist∞)` (at least 1).
pub fn competitor_bound(f: &TropicalSeries, p: &RPoint, t_cap: &Rational) -> Result<u64> {
    if !p.is_interior() {
        return Err(TropicalError::BoundaryPoint(format!("{p:?}")));
    }
    if t_cap.is_negative() {
        return Err(TropicalError::Input(format!("negative raise cap {t_cap}")));
    }
    let fp = f.evaluate(p)?;
    let q = (&fp + t_cap) / &p.linf_boundary_distance();
    Ok(q.ceil().to_u64().unwrap_or(u64::MAX).max(1))
}

/// One application of the face-shrink operator to a standalone series.
pub fn shrink_step(f: &TropicalSeries, p: &RPoint) -> Result<(TropicalSeries, ShrinkOutcome)> {
    if !p.is_interior() {
        return Err(TropicalError::BoundaryPoint(format!("{p:?}")));
    }
    let mut state = GpState::from_series(f)?;
    let outcome = state.shrink(p)?;
    Ok((state.into_series(), outcome))
}

fn validate_points(points: &[RPoint]) -> Result<()> {
    if let Some(p) = points.iter().find(|p| !p.is_interior()) {
        return Err(TropicalError::BoundaryPoint(format!("{p:?}")));
    }
    let mut seen = BTreeSet::new();
    for p in points {
        if !seen.insert(p) {
            return Err(TropicalError::Input(format!("duplicate point {p:?}")));
        }
    }
    Ok(())
}

/// The smallest series above zero whose curve passes through every point,
/// found by sweeping the points cyclically and shrinking until quiet.
pub fn solve_gp(points: &[RPoint], max_passes: usize) -> Result<(TropicalSeries, SolveTrace)> {
    let (state, trace) = solve_gp_state(points, max_passes)?;
    Ok((state.into_series(), trace))
}

/// As [`solve_gp`], keeping the faces.
pub fn solve_gp_state(points: &[RPoint], max_passes: usize) -> Result<(GpState, SolveTrace)> {
    if max_passes == 0 {
        return Err(TropicalError::Input("max_passes must be positive".into()));
    }
    validate_points(points)?;
    let mut state = GpState::zero();
    let mut trace = SolveTrace::default();
    for pass in 1..=max_passes {
        trace.passes = pass;
        let mut changed = false;
        for (k, p) in points.iter().enumerate() {
            let out = state.shrink(p)?;
            if out.raise_amount.is_positive() {
                changed = true;
                trace.total_shrinks += 1;
                trace.shrinks.push(ShrinkRecord {
                    pass,
                    point_index: k,
                    raised_exponent: out.raised_exponent,
                    raise_amount: out.raise_amount,
                });
            }
        }
        if !changed {
            return Ok((state, trace));
        }
    }
    Err(TropicalError::NonTermination {
        passes: max_passes,
        shrinks: trace.total_shrinks,
        partial: Box::new(state.into_series()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::boundary_zero_check;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn pt(x: (i64, i64), y: (i64, i64)) -> RPoint {
        RPoint::new(r(x.0, x.1), r(y.0, y.1))
    }

    #[test]
    fn competitor_bound_examples() {
        let z = TropicalSeries::zero();
        assert_eq!(competitor_bound(&z, &pt((1, 2), (1, 2)), &r(1, 2)).unwrap(), 1);
        assert_eq!(competitor_bound(&z, &pt((1, 10), (1, 2)), &r(1, 10)).unwrap(), 1);
        let f = TropicalSeries::plateau(r(1, 3));
        // f(p) = 1/3 at the centre, dist 1/2 → ceil(2/3) = 1
        assert_eq!(competitor_bound(&f, &pt((1, 2), (1, 2)), &Rational::zero()).unwrap(), 1);
        assert!(competitor_bound(&z, &pt((0, 1), (1, 2)), &r(1, 2)).is_err());
    }

    #[test]
    fn single_shrink_gives_plateau() {
        let (g, out) = shrink_step(&TropicalSeries::zero(), &pt((1, 3), (1, 2))).unwrap();
        assert_eq!(g, TropicalSeries::plateau(r(1, 3)));
        assert_eq!(out.raised_exponent, Exponent::ZERO);
        assert_eq!(out.raise_amount, r(1, 3));
        assert_eq!(out.new_competitors, vec![Exponent::new(1, 0)]);
        assert!(boundary_zero_check(&g));
    }

    #[test]
    fn shrink_on_curve_is_identity() {
        let f = TropicalSeries::plateau(r(1, 3));
        let (g, out) = shrink_step(&f, &pt((1, 3), (1, 3))).unwrap();
        assert_eq!(g, f);
        assert!(out.raise_amount.is_zero());
    }

    #[test]
    fn centre_shrink_is_four_way_tie() {
        let (g, out) = shrink_step(&TropicalSeries::zero(), &pt((1, 2), (1, 2))).unwrap();
        assert_eq!(out.raise_amount, r(1, 2));
        assert_eq!(out.new_competitors.len(), 4);
        // The flat top collapses to a point; only the four sides remain.
        assert!(out.raised_dropped);
        assert_eq!(g.len(), 4);
        assert_eq!(g.evaluate(&pt((1, 2), (1, 2))).unwrap(), r(1, 2));
    }

    #[test]
    fn solve_examples() {
        let (f, trace) = solve_gp(&[], 5).unwrap();
        assert_eq!(f, TropicalSeries::zero());
        assert_eq!(trace.total_shrinks, 0);

        let (f, trace) = solve_gp(&[pt((1, 3), (1, 2))], 5).unwrap();
        assert_eq!(f, TropicalSeries::plateau(r(1, 3)));
        assert_eq!(trace.total_shrinks, 1);
        assert_eq!(trace.passes, 2);
    }

    #[test]
    fn solve_input_errors() {
        let p = pt((1, 3), (1, 2));
        assert!(matches!(solve_gp(&[p.clone(), p.clone()], 5), Err(TropicalError::Input(_))));
        assert!(matches!(solve_gp(&[pt((0, 1), (1, 2))], 5), Err(TropicalError::BoundaryPoint(_))));
        assert!(matches!(solve_gp(&[p], 0), Err(TropicalError::Input(_))));
    }

    #[test]
    fn lattice_candidates_cover_unit_steps() {
        let c = lattice_candidates(&pt((1, 2), (1, 2)), &r(1, 2), true);
        for e in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)] {
            assert!(c.contains(&Exponent::from(e)));
        }
        assert!(!c.contains(&Exponent::new(1, 1)));
        let strict = lattice_candidates(&pt((1, 2), (1, 2)), &r(1, 2), false);
        assert_eq!(strict, vec![Exponent::ZERO]);
    }
}
