//! The polygonal subdivision of the unit square induced by a series.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Result, TropicalError};
use crate::geometry::{clip_convex, has_interior, segment_on_omega_boundary, unit_square, RPoint};
use crate::rational::Rational;
use crate::series::{Exponent, TropicalSeries};

/// The region of the square where one monomial is minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub exponent: Exponent,
    /// Convex, counter-clockwise, without repeated or collinear vertices.
    pub polygon: Vec<RPoint>,
}

impl Face {
    /// True iff the closed face meets the boundary of the square.
    pub fn touches_boundary(&self) -> bool {
        // A convex polygon inside the square meets its boundary iff a vertex does.
        self.polygon.iter().any(RPoint::on_omega_boundary)
    }
}

/// A maximal segment of the curve separating two faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveEdge {
    /// Endpoints with `a < b` in lexicographic order.
    pub a: RPoint,
    pub b: RPoint,
    pub left: Exponent,
    /// `None` only if the subdivision is inconsistent; never for canonical input.
    pub right: Option<Exponent>,
}

impl CurveEdge {
    /// Edges with an endpoint on the boundary of the square.
    pub fn is_leg(&self) -> bool {
        self.a.on_omega_boundary() || self.b.on_omega_boundary()
    }
}

#[derive(Clone, Debug, Default)]
pub struct FaceArrangement {
    pub faces: Vec<Face>,
    /// Curve vertices strictly inside the square.
    pub curve_vertices: Vec<RPoint>,
    pub curve_edges: Vec<CurveEdge>,
    /// Every distinct face corner with the series value there.
    vertex_values: Vec<(RPoint, Rational)>,
}

impl FaceArrangement {
    /// Assembles an arrangement from precomputed faces of `f`.
    pub fn from_faces(f: &TropicalSeries, mut faces: Vec<Face>) -> Self {
        faces.sort_by_key(|face| face.exponent);

        let mut edge_faces: BTreeMap<(RPoint, RPoint), Vec<Exponent>> = BTreeMap::new();
        let mut values: BTreeMap<RPoint, Rational> = BTreeMap::new();
        for face in &faces {
            let n = face.polygon.len();
            for (k, p) in face.polygon.iter().enumerate() {
                if !values.contains_key(p) {
                    let v = f
                        .monomial_value(&face.exponent, p)
                        .expect("face exponent is stored in the series");
                    values.insert(p.clone(), v);
                }
                let q = &face.polygon[(k + 1) % n];
                if segment_on_omega_boundary(p, q) {
                    continue;
                }
                let key = if p < q { (p.clone(), q.clone()) } else { (q.clone(), p.clone()) };
                edge_faces.entry(key).or_default().push(face.exponent);
            }
        }

        let mut curve_vertices = BTreeSet::new();
        let curve_edges = edge_faces
            .into_iter()
            .map(|((a, b), owners)| {
                for p in [&a, &b] {
                    if p.is_interior() {
                        curve_vertices.insert(p.clone());
                    }
                }
                CurveEdge {
                    a,
                    b,
                    left: owners[0],
                    right: owners.get(1).copied(),
                }
            })
            .collect();

        FaceArrangement {
            faces,
            curve_vertices: curve_vertices.into_iter().collect(),
            curve_edges,
            vertex_values: values.into_iter().collect(),
        }
    }

    pub fn face(&self, e: &Exponent) -> Option<&Face> {
        self.faces
            .binary_search_by_key(e, |face| face.exponent)
            .ok()
            .map(|k| &self.faces[k])
    }

    /// All distinct face corners, boundary ones included, with series values.
    pub fn vertex_values(&self) -> &[(RPoint, Rational)] {
        &self.vertex_values
    }

    pub fn vertices(&self) -> impl Iterator<Item = &RPoint> {
        self.vertex_values.iter().map(|(p, _)| p)
    }

    /// `max` over the square of `f(x,y) - i·x - j·y`.
    ///
    /// The integrand is linear on each face, so the maximum sits at a face corner.
    pub fn canonical_coefficient(&self, e: &Exponent) -> Rational {
        max_shifted(&self.vertex_values, e)
    }

    /// Number of faces whose closure avoids the boundary of the square.
    pub fn bounded_face_count(&self) -> usize {
        self.faces.iter().filter(|face| !face.touches_boundary()).count()
    }
}

pub(crate) fn max_shifted(vertex_values: &[(RPoint, Rational)], e: &Exponent) -> Rational {
    vertex_values
        .iter()
        .map(|(p, v)| v - &e.dot(p))
        .max()
        .expect("arrangement has vertices")
}

/// Clips the square down to the region where `q` is minimal among `others`.
pub(crate) fn face_polygon<'a>(
    f: &TropicalSeries,
    q: &Exponent,
    region: Vec<RPoint>,
    others: impl Iterator<Item = &'a Exponent>,
) -> Vec<RPoint> {
    let mut poly = region;
    for r in others {
        if r == q {
            continue;
        }
        poly = clip_convex(&poly, &f.difference_form(q, r));
        if !has_interior(&poly) {
            return Vec::new();
        }
    }
    poly
}

/// Computes every face with nonempty interior by exact half-plane clipping.
pub fn build_arrangement(f: &TropicalSeries) -> Result<FaceArrangement> {
    if f.is_empty() {
        return Err(TropicalError::InvalidSeries("series has no monomials".into()));
    }
    let faces = f
        .exponents()
        .filter_map(|q| {
            let poly = face_polygon(f, q, unit_square(), f.exponents());
            has_interior(&poly).then_some(Face {
                exponent: *q,
                polygon: poly,
            })
        })
        .collect();
    Ok(FaceArrangement::from_faces(f, faces))
}

/// Removes every monomial that is not uniquely minimal on an open set.
/// Kept coefficients are unchanged.
pub fn canonicalize(f: &TropicalSeries) -> Result<TropicalSeries> {
    if !boundary_zero_check(f) {
        return Err(TropicalError::InvalidSeries(
            "series is not zero on the boundary of the square".into(),
        ));
    }
    let arr = build_arrangement(f)?;
    let mut out = TropicalSeries::new();
    for face in &arr.faces {
        out.insert(face.exponent, f.get(&face.exponent).expect("stored").clone());
    }
    Ok(out)
}

/// `max` over the square of `f - i·x - j·y`: the smallest coefficient for
/// which `(i,j)` can be added to `f` without changing it.
pub fn canonical_coefficient(f: &TropicalSeries, i: i64, j: i64) -> Result<Rational> {
    Ok(build_arrangement(f)?.canonical_coefficient(&Exponent::new(i, j)))
}

/// True iff `f` vanishes identically on the boundary of the square.
///
/// Each side restriction is a concave piecewise-linear function of one
/// variable; it is identically zero iff it is nonnegative at both ends and the
/// sets where individual monomials are `<= 0` cover the side. Nonnegativity on
/// the whole square then follows from concavity, since the minimum of a concave
/// function on a polygon is attained at a corner.
pub fn boundary_zero_check(f: &TropicalSeries) -> bool {
    if f.is_empty() {
        return false;
    }
    let corners = unit_square();
    for k in 0..4 {
        let (a, b) = (&corners[k], &corners[(k + 1) % 4]);
        if !side_is_zero(f, a, b) {
            return false;
        }
    }
    true
}

/// Checks `f ≡ 0` on the segment `a + t(b - a)`, `t ∈ [0,1]`.
fn side_is_zero(f: &TropicalSeries, a: &RPoint, b: &RPoint) -> bool {
    let (one, zero) = (Rational::one(), Rational::zero());
    if f.value_unchecked(a) != zero || f.value_unchecked(b) != zero {
        return false;
    }
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    // Along the side each monomial is `v0 + t·slope`; collect the t-interval where it is <= 0.
    let mut intervals: Vec<(Rational, Rational)> = Vec::new();
    for (e, c) in f.iter() {
        let v0 = c + &e.dot(a);
        let slope = &dx.mul_int(e.i) + &dy.mul_int(e.j);
        let (lo, hi) = match slope.signum() {
            0 => {
                if v0.is_positive() {
                    continue;
                }
                (zero.clone(), one.clone())
            }
            1 => {
                // v0 + t·slope <= 0  ⇔  t <= -v0/slope
                let root = -&v0 / &slope;
                (zero.clone(), root.min(one.clone()))
            }
            _ => {
                let root = -&v0 / &slope;
                (root.max(zero.clone()), one.clone())
            }
        };
        if lo <= hi {
            intervals.push((lo, hi));
        }
    }
    intervals.sort();
    let mut reach = zero;
    for (lo, hi) in intervals {
        if lo > reach {
            return false;
        }
        if hi > reach {
            reach = hi;
        }
    }
    reach >= one
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{area, normalize};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn fig1() -> TropicalSeries {
        TropicalSeries::plateau(r(1, 3))
    }

    #[test]
    fn fig1_faces_edges_vertices() {
        let arr = build_arrangement(&fig1()).unwrap();
        assert_eq!(arr.faces.len(), 5);
        let center = arr.face(&Exponent::ZERO).unwrap();
        assert_eq!(
            normalize(&center.polygon),
            vec![
                RPoint::lattice(1, 1, 3),
                RPoint::lattice(2, 1, 3),
                RPoint::lattice(2, 2, 3),
                RPoint::lattice(1, 2, 3),
            ]
        );
        assert_eq!(arr.curve_edges.len(), 8);
        assert_eq!(arr.curve_edges.iter().filter(|e| e.is_leg()).count(), 4);
        assert!(arr.curve_edges.iter().all(|e| e.right.is_some()));
        assert_eq!(arr.curve_vertices.len(), 4);
        let total: Rational = arr.faces.iter().map(|face| area(&face.polygon)).sum();
        assert_eq!(total, Rational::one());
        assert_eq!(arr.bounded_face_count(), 1);
    }

    #[test]
    fn zero_series_is_one_face() {
        let arr = build_arrangement(&TropicalSeries::zero()).unwrap();
        assert_eq!(arr.faces.len(), 1);
        assert_eq!(area(&arr.faces[0].polygon), Rational::one());
        assert!(arr.curve_edges.is_empty());
        assert!(arr.curve_vertices.is_empty());
    }

    #[test]
    fn canonicalize_examples() {
        let f = TropicalSeries::from_triples(&[(0, 0, r(0, 1)), (1, 1, r(5, 1))]);
        assert_eq!(canonicalize(&f).unwrap(), TropicalSeries::zero());

        let mut g = fig1();
        g.insert(Exponent::new(1, 1), r(1, 1));
        assert_eq!(canonicalize(&g).unwrap(), fig1());
        assert_eq!(canonicalize(&fig1()).unwrap(), fig1());
    }

    #[test]
    fn canonicalize_rejects_nonzero_boundary() {
        let f = TropicalSeries::from_triples(&[(0, 0, r(1, 3))]);
        assert!(matches!(canonicalize(&f), Err(TropicalError::InvalidSeries(_))));
    }

    #[test]
    fn segment_only_monomial_is_pruned() {
        // x + y >= min(x, y), with equality only on the axes.
        let mut f = fig1();
        f.insert(Exponent::new(1, 1), Rational::zero());
        assert_eq!(canonicalize(&f).unwrap(), fig1());
    }

    #[test]
    fn canonical_coefficient_examples() {
        let z = TropicalSeries::zero();
        assert_eq!(canonical_coefficient(&z, 1, 0).unwrap(), Rational::zero());
        assert_eq!(canonical_coefficient(&z, -1, -1).unwrap(), r(2, 1));
        // Stored coefficients of a canonical series are already minimal.
        let f = fig1();
        for (e, c) in f.iter() {
            assert_eq!(&canonical_coefficient(&f, e.i, e.j).unwrap(), c);
        }
    }

    #[test]
    fn boundary_zero_examples() {
        assert!(boundary_zero_check(&TropicalSeries::zero()));
        assert!(boundary_zero_check(&fig1()));
        assert!(!boundary_zero_check(&TropicalSeries::from_triples(&[(0, 0, r(1, 3))])));
        // Zero at the corners but positive in the middle of the bottom side.
        let tent = TropicalSeries::from_triples(&[(1, 0, r(0, 1)), (-1, 0, r(1, 1))]);
        assert!(!boundary_zero_check(&tent));
        assert!(!boundary_zero_check(&TropicalSeries::new()));
    }
}
