//! Exact scalars and the small amount of linear algebra the rest of the crate
//! needs.
//!
//! Subdivision only ever halves, so every coordinate produced by this crate
//! is a [`Dyadic`] number `m / 2^e`. Quantities derived from coordinates
//! (squared lengths, Gram determinants, barycentric coordinates) are general
//! rationals and use [`BigRational`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Squared lengths, squared volumes and squared flatness values.
pub type RationalSq = BigRational;

/// A coordinate vector with general rational entries.
pub type RationalPoint = Vec<BigRational>;

/// An exact number `mantissa / 2^exponent`, always kept in canonical form:
/// either the exponent is zero or the mantissa is odd.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: u32,
}

impl Dyadic {
    pub fn new(mantissa: impl Into<BigInt>, exponent: u32) -> Self {
        Self::normalized(mantissa.into(), exponent)
    }

    pub fn zero() -> Self {
        Self { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(value: i64) -> Self {
        Self { mantissa: BigInt::from(value), exponent: 0 }
    }

    fn normalized(mut mantissa: BigInt, mut exponent: u32) -> Self {
        if mantissa.is_zero() {
            return Self { mantissa, exponent: 0 };
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        let shift = tz.min(u64::from(exponent)) as u32;
        if shift > 0 {
            mantissa >>= shift;
            exponent -= shift;
        }
        Self { mantissa, exponent }
    }

    /// Re-normalizes; a no-op on values built through the public API.
    pub fn normalize(&self) -> Self {
        Self::normalized(self.mantissa.clone(), self.exponent)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_canonical(&self) -> bool {
        self.exponent == 0 || self.mantissa.bit(0)
    }

    pub fn halve(&self) -> Self {
        Self::normalized(self.mantissa.clone(), self.exponent + 1)
    }

    /// Mantissa rescaled to the common exponent `exponent >= self.exponent`.
    fn scaled_to(&self, exponent: u32) -> BigInt {
        &self.mantissa << (exponent - self.exponent) as usize
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.exponent as usize)
    }

    /// Returns `Some` iff the rational has a power-of-two denominator.
    pub fn from_rational(value: &BigRational) -> Option<Self> {
        let denom = value.denom();
        let tz = denom.trailing_zeros().unwrap_or(0);
        if denom != &(BigInt::one() << tz as usize) {
            return None;
        }
        Some(Self::new(value.numer().clone(), u32::try_from(tz).ok()?))
    }

    /// Exact conversion; every finite `f64` is dyadic.
    pub fn from_f64(value: f64) -> Option<Self> {
        if !value.is_finite() {
            return None;
        }
        if value == 0.0 {
            return Some(Self::zero());
        }
        let bits = value.to_bits();
        let negative = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
        let mut m = BigInt::from(mant);
        if negative {
            m = -m;
        }
        if exp >= 0 {
            Some(Self::new(m << exp as usize, 0))
        } else {
            Some(Self::new(m, (-exp) as u32))
        }
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mantissa.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(-(self.exponent as i32))
    }

    /// Exact decimal expansion (always finite for a dyadic number).
    pub fn to_decimal_string(&self) -> String {
        let e = self.exponent as usize;
        if e == 0 {
            return self.mantissa.to_string();
        }
        let digits = (self.mantissa.abs() * num_traits::pow(BigInt::from(5), e)).to_string();
        let digits = format!("{digits:0>width$}", width = e + 1);
        let (int_part, frac_part) = digits.split_at(digits.len() - e);
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        format!("{sign}{int_part}.{}", frac_part.trim_end_matches('0'))
    }

    /// Parses a plain decimal literal such as `-0.375`; fails unless the
    /// value is exactly dyadic.
    pub fn from_decimal_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::Parse(format!("not an exact dyadic decimal: {text:?}"));
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_part = frac_part.trim_end_matches('0');
        let k = frac_part.len();
        let mut n: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
        let five = BigInt::from(5);
        for _ in 0..k {
            if !(&n % &five).is_zero() {
                return Err(bad());
            }
            n /= &five;
        }
        if negative {
            n = -n;
        }
        Ok(Self::new(n, k as u32))
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(value: i64) -> Self {
        Self::from_int(value)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.scaled_to(e).cmp(&other.scaled_to(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::normalized(self.scaled_to(e) + rhs.scaled_to(e), e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::normalized(self.scaled_to(e) - rhs.scaled_to(e), e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::normalized(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

/// Renders as `m` for integers and `m/2^e` otherwise.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/2^{}", self.mantissa, self.exponent)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("malformed dyadic {s:?}, expected \"m\" or \"m/2^e\""));
        match s.split_once('/') {
            None => Ok(Self::new(s.parse::<BigInt>().map_err(|_| bad())?, 0)),
            Some((m, e)) => {
                let e = e.strip_prefix("2^").ok_or_else(bad)?;
                let m = m.parse::<BigInt>().map_err(|_| bad())?;
                let e = e.parse::<u32>().map_err(|_| bad())?;
                Ok(Self::new(m, e))
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DyadicOp {
    Add,
    Sub,
    Mul,
    /// Halves the first operand; the second is ignored.
    Halve,
}

pub fn dyadic_arith(a: &Dyadic, b: &Dyadic, op: DyadicOp) -> Dyadic {
    match op {
        DyadicOp::Add => a + b,
        DyadicOp::Sub => a - b,
        DyadicOp::Mul => a * b,
        DyadicOp::Halve => a.halve(),
    }
}

/// A point (or vector) with dyadic coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<Dyadic>);

impl Point {
    pub fn new(coords: Vec<Dyadic>) -> Self {
        Self(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| Dyadic::from_int(c)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![Dyadic::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Dyadic] {
        &self.0
    }

    pub fn add(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &Dyadic) -> Point {
        Point(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn halve(&self) -> Point {
        Point(self.0.iter().map(Dyadic::halve).collect())
    }

    pub fn midpoint(a: &Point, b: &Point) -> Point {
        a.add(b).halve()
    }

    pub fn squared_norm(&self) -> Dyadic {
        self.0.iter().fold(Dyadic::zero(), |acc, c| &acc + &(c * c))
    }

    /// Largest exponent among the coordinates.
    pub fn max_exponent(&self) -> u32 {
        self.0.iter().map(Dyadic::exponent).max().unwrap_or(0)
    }

    pub fn to_rational(&self) -> RationalPoint {
        self.0.iter().map(Dyadic::to_rational).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Dyadic::to_f64).collect()
    }
}

impl From<Vec<Dyadic>> for Point {
    fn from(coords: Vec<Dyadic>) -> Self {
        Self(coords)
    }
}

pub(crate) fn rational_sub(a: &[BigRational], b: &[BigRational]) -> RationalPoint {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Determinant by Gaussian elimination over the rationals.
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&row| !m[row][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        let (top, bottom) = m.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in bottom.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &p;
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * y;
            }
        }
    }
    det
}

/// Inverse of a square matrix, `None` when singular.
pub fn invert(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&row| !aug[row][col].is_zero())?;
        aug.swap(pivot, col);
        let p = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x /= &p;
        }
        let pivot_row = aug[col].clone();
        for (row, entries) in aug.iter_mut().enumerate() {
            if row == col || entries[col].is_zero() {
                continue;
            }
            let factor = entries[col].clone();
            for (x, y) in entries.iter_mut().zip(&pivot_row) {
                *x -= &factor * y;
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn gram_matrix(vectors: &[RationalPoint]) -> Vec<Vec<BigRational>> {
    vectors.iter().map(|a| vectors.iter().map(|b| dot(a, b)).collect()).collect()
}

fn check_common_dim(dims: impl Iterator<Item = usize>) -> Result<usize> {
    let mut expected = None;
    for d in dims {
        match expected {
            None => expected = Some(d),
            Some(e) if e != d => return Err(Error::DimensionMismatch { expected: e, found: d }),
            _ => {}
        }
    }
    Ok(expected.unwrap_or(0))
}

/// `det(GᵀG)` for vectors with general rational coordinates.
pub fn gram_det_rational(vectors: &[RationalPoint]) -> Result<RationalSq> {
    let d = check_common_dim(vectors.iter().map(Vec::len))?;
    if vectors.len() > d {
        // more vectors than dimensions: always dependent
        return Ok(BigRational::zero());
    }
    Ok(determinant(gram_matrix(vectors)))
}

/// `det(GᵀG)` where `G` has the given vectors as columns. Zero iff the
/// vectors are linearly dependent.
pub fn gram_det(vectors: &[Point]) -> Result<RationalSq> {
    let rational: Vec<_> = vectors.iter().map(Point::to_rational).collect();
    gram_det_rational(&rational)
}

/// Result of expressing a point in barycentric coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Barycentric {
    Coordinates(Vec<BigRational>),
    /// The point lies outside the affine hull of the simplex.
    NotRepresentable,
}

/// A simplex prepared for repeated barycentric solves.
#[derive(Debug, Clone)]
pub struct BarycentricFrame {
    origin: RationalPoint,
    edges: Vec<RationalPoint>,
    /// `r × d` left inverse of the edge matrix.
    solver: Vec<Vec<BigRational>>,
    full_dimensional: bool,
}

impl BarycentricFrame {
    pub fn new(vertices: &[RationalPoint]) -> Result<Self> {
        let d = check_common_dim(vertices.iter().map(Vec::len))?;
        let (origin, rest) = vertices.split_first().ok_or(Error::Degenerate)?;
        let edges: Vec<RationalPoint> = rest.iter().map(|v| rational_sub(v, origin)).collect();
        let r = edges.len();
        if r > d {
            return Err(Error::Degenerate);
        }
        let solver = if r == d {
            // rows of G are coordinates, columns are edges
            let g: Vec<Vec<BigRational>> = (0..d).map(|row| edges.iter().map(|e| e[row].clone()).collect()).collect();
            invert(&g).ok_or(Error::Degenerate)?
        } else {
            let inv = invert(&gram_matrix(&edges)).ok_or(Error::Degenerate)?;
            (0..r)
                .map(|i| {
                    (0..d).map(|c| (0..r).fold(BigRational::zero(), |acc, k| acc + &inv[i][k] * &edges[k][c])).collect()
                })
                .collect()
        };
        Ok(Self { origin: origin.clone(), edges, solver, full_dimensional: r == d })
    }

    pub fn from_points(vertices: &[Point]) -> Result<Self> {
        let rational: Vec<_> = vertices.iter().map(Point::to_rational).collect();
        Self::new(&rational)
    }

    pub fn simplex_dim(&self) -> usize {
        self.edges.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.len()
    }

    /// Barycentric coordinates of `p`, or `None` when `p` is off the affine hull.
    pub fn locate(&self, p: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(p.len(), self.origin.len(), "point dimension mismatch");
        let rel = rational_sub(p, &self.origin);
        let mu: Vec<BigRational> = self.solver.iter().map(|row| dot(row, &rel)).collect();
        if !self.full_dimensional {
            for (c, target) in rel.iter().enumerate() {
                let recon = mu.iter().zip(&self.edges).fold(BigRational::zero(), |acc, (m, e)| acc + m * &e[c]);
                if &recon != target {
                    return None;
                }
            }
        }
        let first = mu.iter().fold(BigRational::one(), |acc, m| acc - m);
        let mut lambda = Vec::with_capacity(mu.len() + 1);
        lambda.push(first);
        lambda.extend(mu);
        Some(lambda)
    }

    pub fn locate_point(&self, p: &Point) -> Option<Vec<BigRational>> {
        self.locate(&p.to_rational())
    }
}

/// Exact barycentric coordinates of `p` with respect to the simplex.
pub fn solve_barycentric(p: &Point, simplex: &[Point]) -> Result<Barycentric> {
    let frame = BarycentricFrame::from_points(simplex)?;
    if p.dim() != frame.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: frame.ambient_dim(), found: p.dim() });
    }
    Ok(match frame.locate_point(p) {
        Some(lambda) => Barycentric::Coordinates(lambda),
        None => Barycentric::NotRepresentable,
    })
}

/// Integer square root floor for display helpers.
pub(crate) fn isqrt(n: &BigInt) -> BigInt {
    if n.sign() != Sign::Plus {
        return BigInt::zero();
    }
    n.sqrt()
}

/// Decimal approximation of `sqrt(value)` truncated to `digits` places.
pub fn sqrt_decimal(value: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), 2 * digits);
    let scaled = value.numer() * scale / value.denom();
    let root = isqrt(&scaled).to_string();
    if digits == 0 {
        return root;
    }
    let root = format!("{root:0>width$}", width = digits + 1);
    let (i, f) = root.split_at(root.len() - digits);
    format!("{i}.{f}")
}

/// Decimal approximation of a rational truncated to `digits` places.
pub fn rational_decimal(value: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (value.numer().abs() * scale) / value.denom();
    let s = format!("{scaled:0>width$}", width = digits + 1);
    let sign = if value.is_negative() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{s}");
    }
    let (i, f) = s.split_at(s.len() - digits);
    format!("{sign}{i}.{f}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn d(m: i64, e: u32) -> Dyadic {
        Dyadic::new(m, e)
    }

    #[test]
    fn arith_examples() {
        let half = d(1, 1);
        let sum = dyadic_arith(&half, &half, DyadicOp::Add);
        assert_eq!(sum, Dyadic::one());
        assert_eq!(sum.exponent(), 0);
        assert_eq!(dyadic_arith(&Dyadic::from_int(3), &Dyadic::zero(), DyadicOp::Halve), d(3, 1));
        assert_eq!(dyadic_arith(&d(3, 2), &half, DyadicOp::Mul), d(3, 3));
        assert_eq!(dyadic_arith(&d(3, 2), &half, DyadicOp::Sub), d(1, 2));
    }

    #[test]
    fn canonical_form() {
        let x = Dyadic::new(12, 3);
        assert_eq!((x.mantissa().clone(), x.exponent()), (BigInt::from(3), 1));
        assert_eq!(Dyadic::new(0, 9).exponent(), 0);
        assert_eq!(Dyadic::new(8, 0).exponent(), 0);
    }

    #[test]
    fn text_forms() {
        assert_eq!(d(3, 3).to_string(), "3/2^3");
        assert_eq!(d(-5, 0).to_string(), "-5");
        assert_eq!("3/2^3".parse::<Dyadic>().unwrap(), d(3, 3));
        assert_eq!("6/2^4".parse::<Dyadic>().unwrap(), d(3, 3));
        assert!("3/4".parse::<Dyadic>().is_err());
        assert_eq!(d(3, 3).to_decimal_string(), "0.375");
        assert_eq!(d(-1, 1).to_decimal_string(), "-0.5");
        assert_eq!(d(13, 2).to_decimal_string(), "3.25");
        assert_eq!(Dyadic::from_decimal_str("-0.375").unwrap(), d(-3, 3));
        assert_eq!(Dyadic::from_decimal_str("2").unwrap(), Dyadic::from_int(2));
        assert!(Dyadic::from_decimal_str("0.1").is_err());
        assert_eq!(Dyadic::from_f64(0.375).unwrap(), d(3, 3));
        assert_eq!(Dyadic::from_f64(-6.0).unwrap(), Dyadic::from_int(-6));
    }

    #[test]
    fn gram_det_examples() {
        let v = |a: i64, b: i64| Point::from_ints(&[a, b]);
        assert_eq!(gram_det(&[v(1, 0), v(0, 1)]).unwrap(), q(1, 1));
        assert_eq!(gram_det(&[v(1, 0), v(1, 0)]).unwrap(), q(0, 1));
        // G = [[1,1],[1,2]] → det 1
        assert_eq!(gram_det(&[v(1, 0), v(1, 1)]).unwrap(), q(1, 1));
        assert!(matches!(gram_det(&[v(1, 0), Point::from_ints(&[1, 0, 0])]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn gram_det_in_higher_ambient_dimension() {
        // triangle edge vectors in the plane z = 0 of R^3
        let a = Point::from_ints(&[2, 0, 0]);
        let b = Point::from_ints(&[0, 3, 0]);
        assert_eq!(gram_det(&[a, b]).unwrap(), q(36, 1));
    }

    #[test]
    fn barycentric_examples() {
        let tri = [Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0]), Point::from_ints(&[1, 1])];
        let Barycentric::Coordinates(l) = solve_barycentric(&tri[0], &tri).unwrap() else { panic!() };
        assert_eq!(l, vec![q(1, 1), q(0, 1), q(0, 1)]);

        let p = Point::new(vec![d(3, 2), d(1, 2)]);
        let Barycentric::Coordinates(l) = solve_barycentric(&p, &tri).unwrap() else { panic!() };
        assert_eq!(l, vec![q(1, 4), q(1, 2), q(1, 4)]);
    }

    #[test]
    fn barycentric_centroid_is_symmetric() {
        // centroid of (0,0),(3,0),(0,3) is (1,1)
        let tri = [Point::from_ints(&[0, 0]), Point::from_ints(&[3, 0]), Point::from_ints(&[0, 3])];
        let Barycentric::Coordinates(l) = solve_barycentric(&Point::from_ints(&[1, 1]), &tri).unwrap() else {
            panic!()
        };
        assert_eq!(l, vec![q(1, 3); 3]);
    }

    #[test]
    fn barycentric_off_hull_and_degenerate() {
        let seg = [Point::from_ints(&[0, 0]), Point::from_ints(&[2, 2])];
        assert_eq!(solve_barycentric(&Point::from_ints(&[1, 0]), &seg).unwrap(), Barycentric::NotRepresentable);
        let Barycentric::Coordinates(l) = solve_barycentric(&Point::from_ints(&[1, 1]), &seg).unwrap() else {
            panic!()
        };
        assert_eq!(l, vec![q(1, 2), q(1, 2)]);
        let flat = [Point::from_ints(&[0, 0]), Point::from_ints(&[1, 1]), Point::from_ints(&[2, 2])];
        assert_eq!(solve_barycentric(&flat[0], &flat), Err(Error::Degenerate));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        assert_eq!(determinant(m.clone()), q(1, 1));
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![q(1, 1), q(-1, 1)], vec![q(-1, 1), q(2, 1)]]);
        assert!(invert(&[vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]).is_none());
    }

    #[test]
    fn decimal_helpers() {
        assert_eq!(sqrt_decimal(&q(16, 1), 3), "4.000");
        assert_eq!(sqrt_decimal(&q(2, 1), 4), "1.4142");
        assert_eq!(rational_decimal(&q(16, 3), 3), "5.333");
        assert_eq!(rational_decimal(&q(-1, 8), 2), "-0.12");
    }

    fn dyadic_strategy() -> impl Strategy<Value = Dyadic> {
        (-1000i64..1000, 0u32..12).prop_map(|(m, e)| Dyadic::new(m, e))
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(m in -100_000i64..100_000, e in 0u32..40) {
            let raw = Dyadic { mantissa: BigInt::from(m), exponent: e };
            let once = raw.normalize();
            prop_assert!(once.is_canonical());
            prop_assert_eq!(once.normalize(), once.clone());
            prop_assert_eq!(once.to_rational(), raw.to_rational());
        }

        #[test]
        fn ops_agree_with_rationals(a in dyadic_strategy(), b in dyadic_strategy()) {
            prop_assert_eq!((&a + &b).to_rational(), a.to_rational() + b.to_rational());
            prop_assert_eq!((&a - &b).to_rational(), a.to_rational() - b.to_rational());
            prop_assert_eq!((&a * &b).to_rational(), a.to_rational() * b.to_rational());
            prop_assert_eq!(a.halve().to_rational(), a.to_rational() / q(2, 1));
            prop_assert_eq!(a.cmp(&b), a.to_rational().cmp(&b.to_rational()));
        }

        #[test]
        fn text_round_trips(a in dyadic_strategy()) {
            prop_assert_eq!(a.to_string().parse::<Dyadic>().unwrap(), a.clone());
            prop_assert_eq!(Dyadic::from_decimal_str(&a.to_decimal_string()).unwrap(), a.clone());
            prop_assert_eq!(Dyadic::from_f64(a.to_f64()).unwrap(), a);
        }

        #[test]
        fn gram_det_is_permutation_invariant(
            coords in proptest::collection::vec(-4i64..5, 9),
            swap in 0usize..3,
        ) {
            let vs: Vec<Point> = coords.chunks(3).map(Point::from_ints).collect();
            let mut permuted = vs.clone();
            permuted.swap(swap, (swap + 1) % 3);
            prop_assert_eq!(gram_det(&vs).unwrap(), gram_det(&permuted).unwrap());
            prop_assert!(gram_det(&vs).unwrap() >= BigRational::zero());
        }

        #[test]
        fn barycentric_reconstructs(
            weights in proptest::collection::vec(1i64..50, 3),
            which in 0usize..3,
        ) {
            let tri = [Point::from_ints(&[0, 0, 1]), Point::from_ints(&[4, 1, 0]), Point::from_ints(&[1, 5, 2])];
            // vertex k maps to the k-th unit vector
            let Barycentric::Coordinates(unit) = solve_barycentric(&tri[which], &tri).unwrap() else {
                panic!()
            };
            for (k, l) in unit.iter().enumerate() {
                prop_assert_eq!(l.is_one(), k == which);
            }
            // dyadic convex combination with weights summing to a power of two
            let total: i64 = weights.iter().sum();
            let scale = 1i64 << 7;
            let ws: Vec<Dyadic> = vec![
                Dyadic::new(weights[0], 7),
                Dyadic::new(weights[1], 7),
                Dyadic::new(scale - weights[0] - weights[1], 7),
            ];
            prop_assume!(total < scale && weights[0] + weights[1] < scale);
            let p = tri.iter().zip(&ws).fold(Point::origin(3), |acc, (v, w)| acc.add(&v.scale(w)));
            let Barycentric::Coordinates(l) = solve_barycentric(&p, &tri).unwrap() else { panic!() };
            let expected: Vec<_> = ws.iter().map(Dyadic::to_rational).collect();
            prop_assert_eq!(l, expected);
        }
    }
}
