//! Planar point sequences and the divided-difference sign predicate.
//!
//! The k-th divided difference of k+1 points is the leading coefficient of
//! their interpolating polynomial of degree at most k. Its sign decides
//! whether the tuple is positive or negative of order k.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{serde_rational, Rational};
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanarPoint {
    #[serde(with = "serde_rational")]
    pub x: Rational,
    #[serde(with = "serde_rational")]
    pub y: Rational,
}

impl PlanarPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        PlanarPoint { x, y }
    }
}

/// Points with strictly increasing x-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSequence", into = "RawSequence")]
pub struct PointSequence {
    points: Vec<PlanarPoint>,
}

#[derive(Serialize, Deserialize)]
struct RawSequence {
    points: Vec<PlanarPoint>,
}

impl TryFrom<RawSequence> for PointSequence {
    type Error = Error;

    fn try_from(raw: RawSequence) -> Result<Self> {
        PointSequence::new(raw.points)
    }
}

impl From<PointSequence> for RawSequence {
    fn from(seq: PointSequence) -> Self {
        RawSequence { points: seq.points }
    }
}

impl PointSequence {
    pub fn new(points: Vec<PlanarPoint>) -> Result<Self> {
        if let Some(i) = points.windows(2).position(|w| w[0].x >= w[1].x) {
            return Err(Error::NotIncreasing(i + 1));
        }
        Ok(PointSequence { points })
    }

    /// Convenience constructor from `(x, y)` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(x, y)| PlanarPoint::new(x, y)).collect())
    }

    pub fn points(&self) -> &[PlanarPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, index: usize) -> &PlanarPoint {
        &self.points[index]
    }

    /// The points at `indices`, in the order given.
    pub fn select(&self, indices: &[usize]) -> Vec<PlanarPoint> {
        indices.iter().map(|&i| self.points[i].clone()).collect()
    }

    /// Subsequence at increasing `indices`.
    pub fn subsequence(&self, indices: &[usize]) -> Result<PointSequence> {
        for &i in indices {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange { index: i, n: self.len() });
            }
        }
        PointSequence::new(self.select(indices))
    }

    pub fn into_points(self) -> Vec<PlanarPoint> {
        self.points
    }
}

/// Sign of a tuple; `Zero` exactly when its divided difference vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum TupleSign {
    Negative,
    Zero,
    Positive,
}

impl TupleSign {
    pub fn value(self) -> i8 {
        match self {
            TupleSign::Negative => -1,
            TupleSign::Zero => 0,
            TupleSign::Positive => 1,
        }
    }

    pub fn of(value: &Rational) -> Self {
        match value.cmp(&Rational::zero()) {
            std::cmp::Ordering::Less => TupleSign::Negative,
            std::cmp::Ordering::Equal => TupleSign::Zero,
            std::cmp::Ordering::Greater => TupleSign::Positive,
        }
    }

    pub fn from_ordering(ord: std::cmp::Ordering) -> Self {
        match ord {
            std::cmp::Ordering::Less => TupleSign::Negative,
            std::cmp::Ordering::Equal => TupleSign::Zero,
            std::cmp::Ordering::Greater => TupleSign::Positive,
        }
    }

    /// `(-1)^exponent`.
    pub fn alternating(exponent: usize) -> Self {
        if exponent.is_multiple_of(2) {
            TupleSign::Positive
        } else {
            TupleSign::Negative
        }
    }

    pub fn negate(self) -> Self {
        match self {
            TupleSign::Negative => TupleSign::Positive,
            TupleSign::Zero => TupleSign::Zero,
            TupleSign::Positive => TupleSign::Negative,
        }
    }
}

impl From<TupleSign> for i8 {
    fn from(sign: TupleSign) -> i8 {
        sign.value()
    }
}

impl TryFrom<i8> for TupleSign {
    type Error = String;

    fn try_from(value: i8) -> std::result::Result<Self, String> {
        match value {
            -1 => Ok(TupleSign::Negative),
            0 => Ok(TupleSign::Zero),
            1 => Ok(TupleSign::Positive),
            other => Err(format!("invalid sign {other}")),
        }
    }
}

impl fmt::Display for TupleSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

fn check_distinct_x(points: &[PlanarPoint]) -> Result<()> {
    for j in 1..points.len() {
        for i in 0..j {
            if points[i].x == points[j].x {
                return Err(Error::DuplicateX(i, j));
            }
        }
    }
    Ok(())
}

/// All leading divided differences `∇(p_0..p_i)` for `i = 0..len`, computed
/// with the usual triangular scheme.
fn newton_coefficients(points: &[PlanarPoint]) -> Vec<Rational> {
    let mut column: Vec<Rational> = points.iter().map(|p| p.y.clone()).collect();
    let mut leading = Vec::with_capacity(points.len());
    for order in 0..points.len() {
        leading.push(column[0].clone());
        let next: Vec<Rational> = (0..column.len() - 1)
            .map(|i| (&column[i + 1] - &column[i]) / (&points[i + order + 1].x - &points[i].x))
            .collect();
        column = next;
    }
    leading
}

/// The k-th divided difference of exactly `k + 1` points with distinct
/// (not necessarily increasing) x-coordinates.
pub fn divided_difference(points: &[PlanarPoint], k: usize) -> Result<Rational> {
    if points.len() != k + 1 {
        return Err(Error::Arity { expected: k + 1, got: points.len() });
    }
    check_distinct_x(points)?;
    Ok(newton_coefficients(points).pop().expect("at least one point"))
}

/// The unique polynomial of degree at most `points.len() - 1` through all
/// points, expanded from its Newton form.
pub fn newton_interpolate(points: &[PlanarPoint]) -> Result<Polynomial> {
    check_distinct_x(points)?;
    let coeffs = newton_coefficients(points);
    // Horner on the Newton form: f = c0 + (x - x0)(c1 + (x - x1)(c2 + ...)).
    let mut acc: Vec<Rational> = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        // acc := acc * (x - x_i) + c
        let shift = &points[i].x;
        let mut next = vec![Rational::zero(); acc.len() + 1];
        for (power, a) in acc.iter().enumerate() {
            next[power + 1] += a;
            next[power] -= a * shift;
        }
        next[0] += c;
        acc = next;
    }
    Ok(Polynomial::new(acc))
}

/// Sign of the `(k+1)`-tuple, which must have strictly increasing x.
pub fn tuple_sign(points: &[PlanarPoint], k: usize) -> Result<TupleSign> {
    if points.len() != k + 1 {
        return Err(Error::Arity { expected: k + 1, got: points.len() });
    }
    if let Some(i) = points.windows(2).position(|w| w[0].x >= w[1].x) {
        return Err(Error::NotIncreasing(i + 1));
    }
    Ok(lagrange_sign(points))
}

/// Sign of `∇_k` from the Lagrange form, without any rational reduction.
///
/// `∇_k = Σ_i y_i / Π_{j≠i} (x_i - x_j)`. Multiplying by the (positive)
/// Vandermonde product `Π_{a<b} (x_b - x_a)` leaves
/// `Σ_i (-1)^{k-i} y_i V_i`, where `V_i` is the Vandermonde product of the
/// points other than `i`. Coordinates are first cleared of denominators by
/// positive scale factors, which do not change the sign either.
fn lagrange_sign(points: &[PlanarPoint]) -> TupleSign {
    let xs = integerize(points.iter().map(|p| &p.x));
    let ys = integerize(points.iter().map(|p| &p.y));
    let m = points.len();
    let mut total = BigInt::zero();
    for (i, y) in ys.iter().enumerate() {
        if y.is_zero() {
            continue;
        }
        let mut term = y.clone();
        for a in (0..m).filter(|&a| a != i) {
            for b in (a + 1..m).filter(|&b| b != i) {
                term *= &xs[b] - &xs[a];
            }
        }
        if (m - 1 - i) % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    TupleSign::from_ordering(total.cmp(&BigInt::zero()))
}

/// Numerators after multiplying every value by the product of all
/// denominators.
fn integerize<'a>(values: impl Iterator<Item = &'a Rational>) -> Vec<BigInt> {
    let values: Vec<&Rational> = values.collect();
    (0..values.len())
        .map(|i| {
            let mut v = values[i].numer().clone();
            for (j, other) in values.iter().enumerate() {
                if j != i {
                    v *= other.denom();
                }
            }
            v
        })
        .collect()
}

/// Lexicographically first `(k+1)`-tuple of indices with vanishing k-th
/// divided difference, if any.
pub fn find_degenerate_tuple(seq: &PointSequence, k: usize) -> Option<Vec<usize>> {
    if k == 0 {
        return None;
    }
    match crate::signs::SignTable::build(seq, k) {
        Ok(table) => table.first_zero(),
        Err(_) => {
            let mut found = None;
            crate::combin::for_each_combination(seq.len(), k + 1, |t| {
                let zero = divided_difference(&seq.select(t), k).is_ok_and(|v| v.is_zero());
                if zero {
                    found = Some(t.to_vec());
                }
                !zero
            });
            found
        }
    }
}

/// True iff no `k + 1` points lie on the graph of a polynomial of degree
/// below `k`.
pub fn is_k_general_position(seq: &PointSequence, k: usize) -> bool {
    find_degenerate_tuple(seq, k).is_none()
}

/// Decides the sign of a tuple from which side of the interpolant through
/// the other `k` points the point at position `i` (0-based) lies on.
///
/// With 0-based `i`, lying below gives `(-1)^(k+1-i)` and lying above gives
/// `(-1)^(k-i)`.
pub fn side_of_interpolant(tuple: &[PlanarPoint], i: usize) -> Result<TupleSign> {
    let k = tuple
        .len()
        .checked_sub(1)
        .filter(|&k| k >= 1)
        .ok_or(Error::Arity { expected: 2, got: tuple.len() })?;
    if i > k {
        return Err(Error::IndexOutOfRange { index: i, n: tuple.len() });
    }
    if let Some(j) = tuple.windows(2).position(|w| w[0].x >= w[1].x) {
        return Err(Error::NotIncreasing(j + 1));
    }
    let rest: Vec<PlanarPoint> = tuple
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, p)| p.clone())
        .collect();
    let f = newton_interpolate(&rest)?;
    let on_curve = f.eval(&tuple[i].x);
    match tuple[i].y.cmp(&on_curve) {
        std::cmp::Ordering::Less => Ok(TupleSign::alternating(k + 1 - i)),
        std::cmp::Ordering::Greater => Ok(TupleSign::alternating(k - i)),
        std::cmp::Ordering::Equal => Err(Error::Degenerate((0..=k).collect())),
    }
}

/// `x^power` as a rational, for tests and lifts.
pub(crate) fn power(x: &Rational, exponent: usize) -> Rational {
    (0..exponent).fold(Rational::one(), |acc, _| acc * x)
}
