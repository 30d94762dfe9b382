//! Exact points, affine forms and convex polygon operations on rationals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TropicalError};
use crate::rational::Rational;

/// A point with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        RPoint { x, y }
    }

    /// The lattice point `(x/s, y/s)`.
    pub fn lattice(x: i64, y: i64, s: i64) -> Self {
        RPoint::new(Rational::new(x, s), Rational::new(y, s))
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RPoint::new(Rational::from_integer(x), Rational::from_integer(y))
    }

    /// `0 <= x, y <= 1`.
    pub fn in_omega(&self) -> bool {
        let (z, o) = (Rational::zero(), Rational::one());
        self.x >= z && self.x <= o && self.y >= z && self.y <= o
    }

    /// `0 < x, y < 1`.
    pub fn is_interior(&self) -> bool {
        let (z, o) = (Rational::zero(), Rational::one());
        self.x > z && self.x < o && self.y > z && self.y < o
    }

    /// In the square and on one of its four sides.
    pub fn on_omega_boundary(&self) -> bool {
        self.in_omega() && !self.is_interior()
    }

    /// Distances to the side each coordinate sign "looks at": for a slope
    /// component `k`, the weight is `x` if `k > 0` and `1 - x` otherwise.
    /// Used to lower-bound `max_q (k,l)·(p - q)` over the square.
    pub fn directional_margins(&self, k: i64, l: i64) -> (Rational, Rational) {
        let one = Rational::one();
        let a = if k >= 0 { self.x.clone() } else { &one - &self.x };
        let b = if l >= 0 { self.y.clone() } else { &one - &self.y };
        (a, b)
    }

    /// `min(x, 1-x, y, 1-y)`.
    pub fn linf_boundary_distance(&self) -> Rational {
        let one = Rational::one();
        let a = self.x.clone().min(&one - &self.x);
        let b = self.y.clone().min(&one - &self.y);
        a.min(b)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    fn sub(&self, o: &RPoint) -> (Rational, Rational) {
        (&self.x - &o.x, &self.y - &o.y)
    }
}

impl fmt::Debug for RPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for RPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

/// Parses `x,y` where both coordinates are exact rationals.
impl FromStr for RPoint {
    type Err = TropicalError;

    fn from_str(s: &str) -> Result<Self> {
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| TropicalError::Parse(format!("expected `x,y`, got {s:?}")))?;
        Ok(RPoint::new(x.parse()?, y.parse()?))
    }
}

/// `c + a·x + b·y` with integer `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub a: i64,
    pub b: i64,
    pub c: Rational,
}

impl AffineForm {
    pub fn new(a: i64, b: i64, c: Rational) -> Self {
        AffineForm { a, b, c }
    }

    pub fn eval(&self, p: &RPoint) -> Rational {
        let mut v = self.c.clone();
        if self.a != 0 {
            v += &p.x.mul_int(self.a);
        }
        if self.b != 0 {
            v += &p.y.mul_int(self.b);
        }
        v
    }
}

/// Twice the signed area `(a - o) × (b - o)`.
pub fn cross(o: &RPoint, a: &RPoint, b: &RPoint) -> Rational {
    let (ax, ay) = a.sub(o);
    let (bx, by) = b.sub(o);
    &ax * &by - &ay * &bx
}

/// True iff `p` lies on the closed segment `[a, b]`.
pub fn on_segment(p: &RPoint, a: &RPoint, b: &RPoint) -> bool {
    if !cross(a, b, p).is_zero() {
        return false;
    }
    let (lox, hix) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (loy, hiy) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    &p.x >= lox && &p.x <= hix && &p.y >= loy && &p.y <= hiy
}

/// Corners of the unit square in counter-clockwise order.
pub fn unit_square() -> Vec<RPoint> {
    vec![
        RPoint::from_ints(0, 0),
        RPoint::from_ints(1, 0),
        RPoint::from_ints(1, 1),
        RPoint::from_ints(0, 1),
    ]
}

/// Twice the signed (shoelace) area.
pub fn area2(poly: &[RPoint]) -> Rational {
    let n = poly.len();
    if n < 3 {
        return Rational::zero();
    }
    let mut acc = Rational::zero();
    for i in 0..n {
        let (p, q) = (&poly[i], &poly[(i + 1) % n]);
        acc += &(&p.x * &q.y - &q.x * &p.y);
    }
    acc
}

pub fn area(poly: &[RPoint]) -> Rational {
    area2(poly) / Rational::from_integer(2)
}

pub fn has_interior(poly: &[RPoint]) -> bool {
    poly.len() >= 3 && area2(poly).is_positive()
}

/// Drops repeated and collinear vertices of a convex polygon.
pub fn simplify(mut poly: Vec<RPoint>) -> Vec<RPoint> {
    poly.dedup();
    while poly.len() > 1 && poly.first() == poly.last() {
        poly.pop();
    }
    if poly.len() < 3 {
        return poly;
    }
    loop {
        let n = poly.len();
        if n < 3 {
            return poly;
        }
        let drop = (0..n).find(|&i| {
            let prev = &poly[(i + n - 1) % n];
            let next = &poly[(i + 1) % n];
            cross(prev, &poly[i], next).is_zero()
        });
        match drop {
            Some(i) => {
                poly.remove(i);
            }
            None => return poly,
        }
    }
}

/// Intersects a convex polygon with the half-plane `form <= 0`.
pub fn clip_convex(poly: &[RPoint], form: &AffineForm) -> Vec<RPoint> {
    let n = poly.len();
    if n == 0 {
        return Vec::new();
    }
    let vals: Vec<Rational> = poly.iter().map(|p| form.eval(p)).collect();
    if vals.iter().all(|v| !v.is_positive()) {
        return poly.to_vec();
    }
    if vals.iter().all(|v| !v.is_negative()) {
        // At most the zero-set boundary survives; no interior.
        return poly
            .iter()
            .zip(&vals)
            .filter(|(_, v)| v.is_zero())
            .map(|(p, _)| p.clone())
            .collect();
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (vi, vj) = (&vals[i], &vals[j]);
        if !vi.is_positive() {
            out.push(poly[i].clone());
        }
        if (vi.is_negative() && vj.is_positive()) || (vi.is_positive() && vj.is_negative()) {
            let t = vi / &(vi - vj);
            let (dx, dy) = poly[j].sub(&poly[i]);
            out.push(RPoint::new(&poly[i].x + &(&t * &dx), &poly[i].y + &(&t * &dy)));
        }
    }
    simplify(out)
}

/// Convex hull (counter-clockwise, no collinear vertices).
pub fn convex_hull(points: &[RPoint]) -> Vec<RPoint> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<RPoint> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<RPoint> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Rotates a counter-clockwise polygon to start at its lexicographically
/// smallest vertex, so equal polygons compare equal.
pub fn normalize(poly: &[RPoint]) -> Vec<RPoint> {
    match poly.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)) {
        Some((k, _)) => poly[k..].iter().chain(&poly[..k]).cloned().collect(),
        None => Vec::new(),
    }
}

/// True iff `p` is strictly inside the convex counter-clockwise polygon.
pub fn strictly_inside(poly: &[RPoint], p: &RPoint) -> bool {
    let n = poly.len();
    n >= 3 && (0..n).all(|i| cross(&poly[i], &poly[(i + 1) % n], p).is_positive())
}

/// True iff `p` lies on the boundary of the polygon.
pub fn on_polygon_boundary(poly: &[RPoint], p: &RPoint) -> bool {
    let n = poly.len();
    (0..n).any(|i| on_segment(p, &poly[i], &poly[(i + 1) % n]))
}

/// True iff the segment lies along one side of the unit square.
pub fn segment_on_omega_boundary(a: &RPoint, b: &RPoint) -> bool {
    let (z, o) = (Rational::zero(), Rational::one());
    (a.x == z && b.x == z) || (a.x == o && b.x == o) || (a.y == z && b.y == z) || (a.y == o && b.y == o)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64, s: i64) -> RPoint {
        RPoint::lattice(x, y, s)
    }

    #[test]
    fn clip_square_by_diagonal() {
        // x + y - 1 <= 0
        let tri = clip_convex(&unit_square(), &AffineForm::new(1, 1, Rational::from_integer(-1)));
        assert_eq!(normalize(&tri), vec![p(0, 0, 1), p(1, 0, 1), p(0, 1, 1)]);
        assert_eq!(area(&tri), Rational::new(1, 2));
    }

    #[test]
    fn clip_to_segment_has_no_interior() {
        // x <= 0 keeps only the left side
        let seg = clip_convex(&unit_square(), &AffineForm::new(1, 0, Rational::zero()));
        assert!(!has_interior(&seg));
        assert_eq!(seg.len(), 2);
    }

    #[test]
    fn clip_through_edges() {
        // 3x - 1 <= 0 keeps the strip x <= 1/3
        let part = clip_convex(&unit_square(), &AffineForm::new(3, 0, Rational::from_integer(-1)));
        assert_eq!(area(&part), Rational::new(1, 3));
    }

    #[test]
    fn hull_drops_collinear_and_interior() {
        let pts = vec![p(0, 0, 2), p(1, 0, 2), p(2, 0, 2), p(2, 2, 2), p(0, 2, 2), p(1, 1, 2)];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert_eq!(area(&h), Rational::one());
    }

    #[test]
    fn point_parse() {
        let q: RPoint = "1/3,1/2".parse().unwrap();
        assert_eq!(q, RPoint::new(Rational::new(1, 3), Rational::new(1, 2)));
        assert!("0.3,0.5".parse::<RPoint>().is_err());
        assert!("1/3".parse::<RPoint>().is_err());
    }

    #[test]
    fn inside_and_boundary() {
        let sq = unit_square();
        assert!(strictly_inside(&sq, &p(1, 1, 2)));
        assert!(!strictly_inside(&sq, &p(0, 1, 2)));
        assert!(on_polygon_boundary(&sq, &p(0, 1, 2)));
        assert!(p(0, 1, 2).on_omega_boundary());
        assert!(!p(1, 1, 2).on_omega_boundary());
    }
}
