//! Min-plus series `f(x,y) = min c_ij + i·x + j·y` on the unit square.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TropicalError};
use crate::geometry::{AffineForm, RPoint};
use crate::rational::Rational;

/// Integer exponent pair `(i, j)` of a monomial, i.e. its slope.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exponent {
    pub i: i64,
    pub j: i64,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent { i: 0, j: 0 };

    pub const fn new(i: i64, j: i64) -> Self {
        Exponent { i, j }
    }

    /// `|i| + |j|`.
    pub fn l1(&self) -> u64 {
        self.i.unsigned_abs() + self.j.unsigned_abs()
    }

    /// `i·x + j·y`.
    pub fn dot(&self, p: &RPoint) -> Rational {
        AffineForm::new(self.i, self.j, Rational::zero()).eval(p)
    }

    pub fn offset(&self, di: i64, dj: i64) -> Self {
        Exponent::new(self.i + di, self.j + dj)
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl From<(i64, i64)> for Exponent {
    fn from((i, j): (i64, i64)) -> Self {
        Exponent::new(i, j)
    }
}

/// A single min-plus monomial `c + i·x + j·y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub i: i64,
    pub j: i64,
    pub c: Rational,
}

impl Monomial {
    pub fn new(i: i64, j: i64, c: Rational) -> Self {
        Monomial { i, j, c }
    }

    pub fn exponent(&self) -> Exponent {
        Exponent::new(self.i, self.j)
    }

    pub fn value(&self, p: &RPoint) -> Rational {
        AffineForm::new(self.i, self.j, self.c.clone()).eval(p)
    }
}

/// Finite min-plus series over the unit square: at most one coefficient per exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TropicalSeries {
    monomials: BTreeMap<Exponent, Rational>,
}

impl TropicalSeries {
    /// A series with no monomials (not itself a valid function).
    pub fn new() -> Self {
        Self::default()
    }

    /// The identically zero series `{(0,0) ↦ 0}`.
    pub fn zero() -> Self {
        let mut f = Self::new();
        f.insert(Exponent::ZERO, Rational::zero());
        f
    }

    /// `min(c, x, y, 1 - x, 1 - y)`: a flat top at height `c` over the
    /// four boundary-zero side monomials.
    pub fn plateau(c: Rational) -> Self {
        let one = Rational::one();
        Self::from_triples(&[
            (0, 0, c),
            (1, 0, Rational::zero()),
            (0, 1, Rational::zero()),
            (-1, 0, one.clone()),
            (0, -1, one),
        ])
    }

    /// Builds from monomials, rejecting repeated exponents.
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(monomials: I) -> Result<Self> {
        let mut f = Self::new();
        for m in monomials {
            if f.insert(m.exponent(), m.c).is_some() {
                return Err(TropicalError::InvalidSeries(format!(
                    "duplicate exponent ({},{})",
                    m.i, m.j
                )));
            }
        }
        Ok(f)
    }

    /// Convenience constructor from `(i, j, c)` triples; panics on duplicates.
    pub fn from_triples(triples: &[(i64, i64, Rational)]) -> Self {
        Self::from_monomials(triples.iter().map(|(i, j, c)| Monomial::new(*i, *j, c.clone())))
            .expect("duplicate exponent")
    }

    pub fn insert(&mut self, e: Exponent, c: Rational) -> Option<Rational> {
        self.monomials.insert(e, c)
    }

    pub fn remove(&mut self, e: &Exponent) -> Option<Rational> {
        self.monomials.remove(e)
    }

    pub fn get(&self, e: &Exponent) -> Option<&Rational> {
        self.monomials.get(e)
    }

    pub fn contains(&self, e: &Exponent) -> bool {
        self.monomials.contains_key(e)
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.monomials.iter()
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> {
        self.monomials.keys()
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.monomials.iter().map(|(e, c)| Monomial::new(e.i, e.j, c.clone()))
    }

    /// Value of the monomial with exponent `e` at `p`, if stored.
    pub fn monomial_value(&self, e: &Exponent, p: &RPoint) -> Option<Rational> {
        self.get(e).map(|c| AffineForm::new(e.i, e.j, c.clone()).eval(p))
    }

    /// Affine form `m_q - m_r` between two stored monomials.
    pub fn difference_form(&self, q: &Exponent, r: &Exponent) -> AffineForm {
        let cq = &self.monomials[q];
        let cr = &self.monomials[r];
        AffineForm::new(q.i - r.i, q.j - r.j, cq - cr)
    }

    fn check_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(TropicalError::InvalidSeries("series has no monomials".into()))
        } else {
            Ok(())
        }
    }

    fn check_in_omega(p: &RPoint) -> Result<()> {
        if p.in_omega() {
            Ok(())
        } else {
            Err(TropicalError::Input(format!("point {p:?} is outside the unit square")))
        }
    }

    /// `min` over stored monomials of `c + i·x + j·y`, exactly.
    pub fn evaluate(&self, p: &RPoint) -> Result<Rational> {
        self.check_nonempty()?;
        Self::check_in_omega(p)?;
        Ok(self.value_unchecked(p))
    }

    pub(crate) fn value_unchecked(&self, p: &RPoint) -> Rational {
        self.monomials
            .iter()
            .map(|(e, c)| AffineForm::new(e.i, e.j, c.clone()).eval(p))
            .min()
            .expect("nonempty series")
    }

    /// All stored exponents attaining the minimum at `p`, in exponent order.
    pub fn min_monomials(&self, p: &RPoint) -> Result<Vec<Exponent>> {
        self.check_nonempty()?;
        Self::check_in_omega(p)?;
        Ok(self.argmin_unchecked(p).1)
    }

    pub(crate) fn argmin_unchecked(&self, p: &RPoint) -> (Rational, Vec<Exponent>) {
        let mut best: Option<Rational> = None;
        let mut arg = Vec::new();
        for (e, c) in &self.monomials {
            let v = AffineForm::new(e.i, e.j, c.clone()).eval(p);
            match best.as_ref().map(|b| v.cmp(b)) {
                None | Some(std::cmp::Ordering::Less) => {
                    best = Some(v);
                    arg.clear();
                    arg.push(*e);
                }
                Some(std::cmp::Ordering::Equal) => arg.push(*e),
                Some(std::cmp::Ordering::Greater) => {}
            }
        }
        (best.expect("nonempty series"), arg)
    }

    /// True iff at least two monomials attain the minimum at `p`.
    ///
    /// For a canonical series this is exactly membership in the corner locus.
    pub fn is_on_curve(&self, p: &RPoint) -> Result<bool> {
        Ok(self.min_monomials(p)?.len() >= 2)
    }

    /// `max |i| + |j|` over stored monomials.
    pub fn degree(&self) -> u64 {
        self.monomials.keys().map(Exponent::l1).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeriesJson::from(self)).expect("series serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&SeriesJson::from(self)).expect("series serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: SeriesJson = serde_json::from_str(s).map_err(|e| TropicalError::Parse(e.to_string()))?;
        raw.try_into()
    }
}

pub const OMEGA_UNIT_SQUARE: &str = "unit-square";

/// Interchange form: `{"omega":"unit-square","monomials":[{"i":..,"j":..,"c":"n/d"}]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesJson {
    omega: String,
    monomials: Vec<Monomial>,
}

impl From<&TropicalSeries> for SeriesJson {
    fn from(f: &TropicalSeries) -> Self {
        SeriesJson {
            omega: OMEGA_UNIT_SQUARE.to_string(),
            monomials: f.monomials().collect(),
        }
    }
}

impl TryFrom<SeriesJson> for TropicalSeries {
    type Error = TropicalError;

    fn try_from(raw: SeriesJson) -> Result<Self> {
        if raw.omega != OMEGA_UNIT_SQUARE {
            return Err(TropicalError::InvalidSeries(format!(
                "unsupported omega {:?}",
                raw.omega
            )));
        }
        TropicalSeries::from_monomials(raw.monomials)
    }
}

impl Serialize for TropicalSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TropicalSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SeriesJson::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> TropicalSeries {
        TropicalSeries::plateau(Rational::new(1, 3))
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn pt(x: (i64, i64), y: (i64, i64)) -> RPoint {
        RPoint::new(r(x.0, x.1), r(y.0, y.1))
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(TropicalSeries::zero().evaluate(&pt((1, 2), (1, 2))).unwrap(), Rational::zero());
        let f = fig1();
        assert_eq!(f.evaluate(&pt((1, 2), (1, 2))).unwrap(), r(1, 3));
        assert_eq!(f.evaluate(&pt((1, 10), (1, 2))).unwrap(), r(1, 10));
    }

    #[test]
    fn evaluate_empty_is_invalid() {
        let err = TropicalSeries::new().evaluate(&pt((1, 2), (1, 2))).unwrap_err();
        assert!(matches!(err, TropicalError::InvalidSeries(_)));
        assert!(TropicalSeries::zero().evaluate(&pt((3, 2), (1, 2))).is_err());
    }

    #[test]
    fn min_monomials_examples() {
        let f = fig1();
        let e = |i, j| Exponent::new(i, j);
        let mut m = f.min_monomials(&pt((1, 3), (1, 2))).unwrap();
        m.sort();
        assert_eq!(m, vec![e(0, 0), e(1, 0)]);
        assert_eq!(f.min_monomials(&pt((1, 2), (1, 2))).unwrap(), vec![e(0, 0)]);
        let mut m = f.min_monomials(&pt((1, 3), (1, 3))).unwrap();
        m.sort();
        assert_eq!(m, vec![e(0, 0), e(0, 1), e(1, 0)]);
    }

    #[test]
    fn on_curve_examples() {
        let f = fig1();
        assert!(f.is_on_curve(&pt((1, 3), (1, 2))).unwrap());
        assert!(!f.is_on_curve(&pt((1, 2), (1, 2))).unwrap());
        assert!(!TropicalSeries::zero().is_on_curve(&pt((1, 7), (3, 5))).unwrap());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(TropicalSeries::zero().degree(), 0);
        assert_eq!(fig1().degree(), 1);
        let f = TropicalSeries::from_triples(&[
            (0, 0, Rational::zero()),
            (2, 1, Rational::zero()),
            (-1, -1, Rational::from_integer(2)),
        ]);
        assert_eq!(f.degree(), 3);
    }

    #[test]
    fn json_format_is_exact() {
        let f = fig1();
        let s = f.to_json();
        assert!(s.starts_with(r#"{"omega":"unit-square","monomials":[{"i":-1,"j":0,"c":"1/1"}"#));
        assert!(s.contains(r#"{"i":0,"j":0,"c":"1/3"}"#));
        assert_eq!(TropicalSeries::from_json(&s).unwrap(), f);
    }

    #[test]
    fn json_rejects_bad_input() {
        assert!(TropicalSeries::from_json(r#"{"omega":"disk","monomials":[]}"#).is_err());
        let dup = r#"{"omega":"unit-square","monomials":[{"i":0,"j":0,"c":"0"},{"i":0,"j":0,"c":"1"}]}"#;
        assert!(TropicalSeries::from_json(dup).is_err());
        let dec = r#"{"omega":"unit-square","monomials":[{"i":0,"j":0,"c":"0.5"}]}"#;
        assert!(TropicalSeries::from_json(dec).is_err());
    }
}
