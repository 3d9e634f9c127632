//! Lifting planar sequences to R^d, orientation signs, and the hyperplane
//! families whose one-sided subfamilies are higher-order monotone sets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{color_of_sign, ColorId, Coloring, NEGATIVE_COLOR, POSITIVE_COLOR};
use crate::combin::{binomial, for_each_combination, validate_subset};
use crate::construction::VerifyMode;
use crate::error::{Error, Result};
use crate::geometry::{power, tuple_sign, PlanarPoint, PointSequence, TupleSign};
use crate::matrix::{solve_linear, Matrix};
use crate::numeric::{serde_rational, serde_rational_vec, Rational};
use crate::par::{self, Exec};
use crate::search::{largest_homogeneous_bruteforce, longest_kth_order_monotone, SearchResult};

/// Most tuples an exhaustive lift check will visit.
pub const MAX_LIFT_TUPLES: u128 = 10_000_000;

/// Ground-set cap for order-type brute force.
pub const ORDER_TYPE_CAP: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedPoint {
    #[serde(with = "serde_rational_vec")]
    pub coords: Vec<Rational>,
}

impl LiftedPoint {
    pub fn dimension(&self) -> usize {
        self.coords.len()
    }
}

/// `(x, x², …, x^{d-1}, y)`.
pub fn lift_point(p: &PlanarPoint, d: usize) -> Result<LiftedPoint> {
    if d == 0 {
        return Err(Error::InvalidParameter("lift dimension must be at least 1".into()));
    }
    let mut coords: Vec<Rational> = (1..d).map(|e| power(&p.x, e)).collect();
    coords.push(p.y.clone());
    Ok(LiftedPoint { coords })
}

/// Sign of the determinant whose j-th column is `(1, q_j)`.
pub fn order_type_sign(points: &[LiftedPoint]) -> Result<TupleSign> {
    let d = points.len().saturating_sub(1);
    if points.is_empty() {
        return Err(Error::Arity { expected: 1, got: 0 });
    }
    if let Some(p) = points.iter().find(|p| p.dimension() != d) {
        return Err(Error::Dimension { expected: d, got: p.dimension() });
    }
    let mut entries = Vec::with_capacity((d + 1) * (d + 1));
    entries.extend(std::iter::repeat_n(Rational::from_integer(1.into()), d + 1));
    for row in 0..d {
        entries.extend(points.iter().map(|p| p.coords[row].clone()));
    }
    let m = Matrix::new(d + 1, d + 1, entries)?;
    Ok(TupleSign::of(&m.determinant()?))
}

/// Whether the divided-difference sign of a `(d+1)`-tuple equals the
/// orientation of its lift to R^d.
pub fn verify_lift_identity(seq: &PointSequence, d: usize, tuple: &[usize]) -> Result<bool> {
    validate_subset(tuple, d + 1, seq.len())?;
    let points = seq.select(tuple);
    let lifted = points.iter().map(|p| lift_point(p, d)).collect::<Result<Vec<_>>>()?;
    Ok(tuple_sign(&points, d)? == order_type_sign(&lifted)?)
}

/// `Σ_j coeffs[j] ξ_j = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    #[serde(with = "serde_rational_vec")]
    pub coeffs: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub rhs: Rational,
}

/// `Σ_{j=1}^{d} x^{j-1} ξ_j = y`.
pub fn hyperplane_from_point(p: &PlanarPoint, d: usize) -> Result<Hyperplane> {
    if d < 2 {
        return Err(Error::InvalidParameter("hyperplanes need dimension d >= 2".into()));
    }
    Ok(Hyperplane { coeffs: (0..d).map(|e| power(&p.x, e)).collect(), rhs: p.y.clone() })
}

/// Common point of `d` hyperplanes in R^d.
pub fn vertex_of_hyperplanes(hs: &[&Hyperplane]) -> Result<Vec<Rational>> {
    let d = hs.len();
    if let Some(h) = hs.iter().find(|h| h.coeffs.len() != d) {
        return Err(Error::Dimension { expected: d, got: h.coeffs.len() });
    }
    let m = Matrix::from_rows(hs.iter().map(|h| h.coeffs.clone()).collect())?;
    let rhs: Vec<Rational> = hs.iter().map(|h| h.rhs.clone()).collect();
    solve_linear(&m, &rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneFamily {
    pub hyperplanes: Vec<Hyperplane>,
    /// Sequence the hyperplanes were built from, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<PointSequence>,
}

impl HyperplaneFamily {
    pub fn from_sequence(seq: &PointSequence, d: usize) -> Result<Self> {
        let hyperplanes = seq.points().iter().map(|p| hyperplane_from_point(p, d)).collect::<Result<_>>()?;
        Ok(HyperplaneFamily { hyperplanes, source: Some(seq.clone()) })
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.hyperplanes.first().map(|h| h.coeffs.len())
    }

    fn dim(&self) -> Result<usize> {
        let d = self.dimension().ok_or_else(|| Error::InvalidParameter("empty hyperplane family".into()))?;
        if let Some(h) = self.hyperplanes.iter().find(|h| h.coeffs.len() != d) {
            return Err(Error::Dimension { expected: d, got: h.coeffs.len() });
        }
        Ok(d)
    }

    /// Vertex of the hyperplanes at the given `d` indices.
    pub fn vertex(&self, indices: &[usize]) -> Result<Vec<Rational>> {
        let d = self.dim()?;
        validate_subset(indices, d, self.len())?;
        vertex_of_hyperplanes(&indices.iter().map(|&i| &self.hyperplanes[i]).collect::<Vec<_>>())
    }

    /// Every `d` of the hyperplanes meet in a single point.
    pub fn is_general_position(&self) -> Result<bool> {
        let d = self.dim()?;
        let mut ok = true;
        for_each_combination(self.len(), d, |t| {
            ok = self.vertex(t).is_ok();
            ok
        });
        Ok(ok)
    }

    /// Side of `ξ_d = 0` on which the vertex at `indices` lies.
    pub fn vertex_side(&self, indices: &[usize]) -> Result<TupleSign> {
        let v = self.vertex(indices)?;
        Ok(TupleSign::of(v.last().expect("d >= 1")))
    }

    /// Coloring of `d`-subsets by vertex side; a vertex on `ξ_d = 0` is an error.
    pub fn vertex_coloring(&self) -> Result<Coloring> {
        let d = self.dim()?;
        let mut failure = None;
        let c = Coloring::from_fn(self.len(), d, |t| {
            let side = self.vertex_side(t);
            match side.as_ref().ok().and_then(|&s| color_of_sign(s)) {
                Some(color) => color,
                None => {
                    if failure.is_none() {
                        failure = Some(match side {
                            Err(e) => e,
                            Ok(_) => Error::Degenerate(t.to_vec()),
                        });
                    }
                    POSITIVE_COLOR
                }
            }
        })?;
        match failure {
            Some(e) => Err(e),
            None => Ok(c),
        }
    }
}

/// Whether every vertex of the subfamily at `subset` lies strictly on one
/// side of `ξ_d = 0`, by enumerating all of its vertices. Returns the side.
pub fn one_sided_side(family: &HyperplaneFamily, subset: &[usize]) -> Result<Option<ColorId>> {
    let d = family.dim()?;
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedIndices(subset.to_vec()));
    }
    let mut side: Option<TupleSign> = None;
    let mut result = Ok(true);
    let mut buf = vec![0; d];
    for_each_combination(subset.len(), d, |t| {
        for (b, &i) in buf.iter_mut().zip(t) {
            *b = subset[i];
        }
        match family.vertex_side(&buf) {
            Ok(TupleSign::Zero) => result = Err(Error::Degenerate(buf.clone())),
            Ok(s) if side.is_none_or(|prev| prev == s) => side = Some(s),
            Ok(_) => result = Ok(false),
            Err(e) => result = Err(e),
        }
        matches!(result, Ok(true))
    });
    Ok(result?.then_some(match side {
        Some(TupleSign::Negative) => NEGATIVE_COLOR,
        _ => POSITIVE_COLOR,
    }))
}

/// Largest one-sided subfamily of a family built from a sequence, through
/// the sequence's (d-1)st-order monotone subsets.
pub fn max_one_sided_subset(family: &HyperplaneFamily) -> Result<SearchResult> {
    let d = family.dim()?;
    let source = family
        .source
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("family has no source sequence".into()))?;
    if source.len() != family.len() {
        return Err(Error::InvalidParameter("source sequence does not match the family".into()));
    }
    longest_kth_order_monotone(source, d - 1)
}

/// Largest one-sided subfamily by enumerating subfamilies, for small families.
pub fn max_one_sided_bruteforce(family: &HyperplaneFamily, cap: Option<usize>) -> Result<SearchResult> {
    largest_homogeneous_bruteforce(&family.vertex_coloring()?, cap)
}

/// Largest subsequence of points in R^d all of whose `(d+1)`-tuples have
/// the same nonzero orientation. Order-type colorings need not be
/// transitive, so this enumerates subsets; capped at [`ORDER_TYPE_CAP`].
pub fn max_order_type_homogeneous(points: &[LiftedPoint]) -> Result<SearchResult> {
    if points.len() > ORDER_TYPE_CAP {
        return Err(Error::SizeCap {
            what: "order-type search",
            size: points.len() as u128,
            cap: ORDER_TYPE_CAP as u128,
        });
    }
    let d = points.first().map_or(0, LiftedPoint::dimension);
    let mut failure = None;
    let c = Coloring::from_fn(points.len(), d + 1, |t| {
        let tuple: Vec<LiftedPoint> = t.iter().map(|&i| points[i].clone()).collect();
        let sign = order_type_sign(&tuple);
        match sign.as_ref().ok().and_then(|&s| color_of_sign(s)) {
            Some(color) => color,
            None => {
                failure.get_or_insert(match sign {
                    Err(e) => e,
                    Ok(_) => Error::Degenerate(t.to_vec()),
                });
                POSITIVE_COLOR
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    largest_homogeneous_bruteforce(&c, Some(ORDER_TYPE_CAP))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftCheckReport {
    pub passed: bool,
    pub d: usize,
    pub points: usize,
    pub mode: String,
    pub seed: Option<u64>,
    pub checked_tuples: u64,
    pub failures: u64,
    pub first_failure: Option<Vec<usize>>,
}

/// Checks the lift identity on every `(d+1)`-tuple of `seq`, or on a seeded
/// sample of them.
pub fn check_lift_identity(seq: &PointSequence, d: usize, mode: VerifyMode, exec: Exec) -> Result<LiftCheckReport> {
    if d == 0 {
        return Err(Error::InvalidParameter("lift dimension must be at least 1".into()));
    }
    let n = seq.len();
    let tuples: Vec<Vec<usize>> = match mode {
        VerifyMode::Exhaustive => {
            let total = binomial(n as u64, d as u64 + 1);
            if total > MAX_LIFT_TUPLES {
                return Err(Error::SizeCap { what: "exhaustive lift check", size: total, cap: MAX_LIFT_TUPLES });
            }
            crate::combin::combinations(n, d + 1)
        }
        VerifyMode::Sampled { count, seed } if n > d => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let mut t = rand::seq::index::sample(&mut rng, n, d + 1).into_vec();
                    t.sort_unstable();
                    t
                })
                .collect()
        }
        VerifyMode::Sampled { .. } => Vec::new(),
    };
    let results = par::map_slice(exec, &tuples, |t| verify_lift_identity(seq, d, t));
    let mut failures = 0;
    let mut first_failure = None;
    for (t, r) in tuples.iter().zip(results) {
        if !r? {
            failures += 1;
            first_failure.get_or_insert_with(|| t.clone());
        }
    }
    Ok(LiftCheckReport {
        passed: failures == 0,
        d,
        points: n,
        mode: match mode {
            VerifyMode::Exhaustive => "exhaustive".into(),
            VerifyMode::Sampled { .. } => "sampled".into(),
        },
        seed: match mode {
            VerifyMode::Sampled { seed, .. } => Some(seed),
            VerifyMode::Exhaustive => None,
        },
        checked_tuples: tuples.len() as u64,
        failures,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{divided_difference, is_k_general_position};
    use crate::numeric::{int, rat};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: i64, y: i64) -> PlanarPoint {
        PlanarPoint::new(int(x), int(y))
    }

    fn lifted(coords: &[i64]) -> LiftedPoint {
        LiftedPoint { coords: coords.iter().map(|&c| int(c)).collect() }
    }

    fn ints(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_point(&p(2, 5), 3).unwrap().coords, ints(&[2, 4, 5]));
        assert_eq!(lift_point(&p(3, 7), 2).unwrap().coords, ints(&[3, 7]));
        assert_eq!(lift_point(&p(2, 5), 4).unwrap().coords, ints(&[2, 4, 8, 5]));
        assert!(lift_point(&p(2, 5), 0).is_err());
    }

    #[test]
    fn orientation_examples() {
        let tri = [lifted(&[0, 0]), lifted(&[1, 0]), lifted(&[0, 1])];
        assert_eq!(order_type_sign(&tri).unwrap(), TupleSign::Positive);
        let collinear = [lifted(&[0, 0]), lifted(&[1, 1]), lifted(&[2, 2])];
        assert_eq!(order_type_sign(&collinear).unwrap(), TupleSign::Zero);
        let swapped = [lifted(&[1, 0]), lifted(&[0, 0]), lifted(&[0, 1])];
        assert_eq!(order_type_sign(&swapped).unwrap(), TupleSign::Negative);
        let pts = [p(0, 0), p(1, 1), p(2, 4), p(3, 27)];
        let l: Vec<LiftedPoint> = pts.iter().map(|q| lift_point(q, 3).unwrap()).collect();
        assert_eq!(divided_difference(&pts, 3).unwrap(), int(3));
        assert_eq!(order_type_sign(&l).unwrap(), TupleSign::Positive);
        assert!(order_type_sign(&[lifted(&[0, 0]), lifted(&[1])]).is_err());
    }

    #[test]
    fn identity_on_moment_curve() {
        for d in 2..6 {
            let pts: Vec<(Rational, Rational)> =
                (0..d + 3).map(|x| (int(x as i64), power(&int(x as i64), d))).collect();
            let up = PointSequence::from_pairs(pts.clone()).unwrap();
            let down = PointSequence::from_pairs(pts.into_iter().map(|(x, y)| (x, -y))).unwrap();
            let tuple: Vec<usize> = (1..d + 2).collect();
            assert!(verify_lift_identity(&up, d, &tuple).unwrap());
            assert!(verify_lift_identity(&down, d, &tuple).unwrap());
        }
    }

    #[test]
    fn whole_sequence_lift_checks() {
        let s = PointSequence::from_pairs((0..9).map(|x| (int(x), int((x * 7) % 5 - x)))).unwrap();
        let full = check_lift_identity(&s, 2, VerifyMode::Exhaustive, Exec::default()).unwrap();
        assert!(full.passed);
        assert_eq!(full.checked_tuples, 84);
        let sampled = check_lift_identity(&s, 3, VerifyMode::Sampled { count: 50, seed: 4 }, Exec::Sequential).unwrap();
        assert!(sampled.passed);
        assert_eq!(sampled, check_lift_identity(&s, 3, VerifyMode::Sampled { count: 50, seed: 4 }, Exec::default()).unwrap());
    }

    #[test]
    fn hyperplane_examples() {
        let h = hyperplane_from_point(&p(2, 3), 2).unwrap();
        assert_eq!((h.coeffs.clone(), h.rhs.clone()), (ints(&[1, 2]), int(3)));
        assert_eq!(hyperplane_from_point(&p(2, 3), 3).unwrap().coeffs, ints(&[1, 2, 4]));
        assert_eq!(hyperplane_from_point(&p(0, 9), 2).unwrap().coeffs, ints(&[1, 0]));
        assert!(hyperplane_from_point(&p(0, 9), 1).is_err());

        let (a, b) = (hyperplane_from_point(&p(1, 1), 2).unwrap(), hyperplane_from_point(&p(2, 4), 2).unwrap());
        assert_eq!(vertex_of_hyperplanes(&[&a, &b]).unwrap(), ints(&[-2, 3]));
        let (a, b) = (hyperplane_from_point(&p(1, 5), 2).unwrap(), hyperplane_from_point(&p(4, 5), 2).unwrap());
        assert_eq!(vertex_of_hyperplanes(&[&a, &b]).unwrap()[1], int(0));
        let hs: Vec<Hyperplane> = [p(0, 0), p(1, 1), p(2, 4)].iter().map(|q| hyperplane_from_point(q, 3).unwrap()).collect();
        assert_eq!(vertex_of_hyperplanes(&hs.iter().collect::<Vec<_>>()).unwrap()[2], int(1));
        assert!(matches!(vertex_of_hyperplanes(&[&a, &a]), Err(Error::Singular)));
    }

    #[test]
    fn one_sided_examples() {
        let rising = PointSequence::from_pairs((0..6).map(|x| (int(x), int(3 * x + 1)))).unwrap();
        let lines = HyperplaneFamily::from_sequence(&rising, 2).unwrap();
        assert!(lines.is_general_position().unwrap());
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(one_sided_side(&lines, &all).unwrap(), Some(POSITIVE_COLOR));
        assert_eq!(max_one_sided_subset(&lines).unwrap().length, 6);

        let convex = PointSequence::from_pairs((0..5).map(|x| (int(x), int(x * x)))).unwrap();
        let planes = HyperplaneFamily::from_sequence(&convex, 3).unwrap();
        assert_eq!(max_one_sided_subset(&planes).unwrap().length, 5);
        assert_eq!(max_one_sided_bruteforce(&planes, None).unwrap().length, 5);

        let json = serde_json::to_string(&planes).unwrap();
        assert!(json.contains("\"coeffs\":[\"1\",\"2\",\"4\"]"));
        assert_eq!(serde_json::from_str::<HyperplaneFamily>(&json).unwrap(), planes);
    }

    fn random_sequence(rng: &mut ChaCha8Rng, n: usize, k: usize) -> PointSequence {
        loop {
            let s = PointSequence::from_pairs(
                (0..n).map(|i| (rat(3 * i as i64 + rng.random_range(0..3), 2), rat(rng.random_range(-30..30), rng.random_range(1..4)))),
            )
            .unwrap();
            if is_k_general_position(&s, k) {
                return s;
            }
        }
    }

    #[test]
    fn reduction_matches_subfamily_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..12 {
            let d = 2 + trial % 3;
            let s = random_sequence(&mut rng, 6 + trial % 4, d - 1);
            let family = HyperplaneFamily::from_sequence(&s, d).unwrap();
            let reduced = max_one_sided_subset(&family).unwrap();
            let brute = max_one_sided_bruteforce(&family, None).unwrap();
            assert_eq!(reduced.length, brute.length);
            assert_eq!(one_sided_side(&family, &reduced.indices).unwrap(), Some(reduced.color));
            // Cramer: last vertex coordinate is the (d-1)st divided difference
            for_each_combination(s.len(), d, |t| {
                let v = family.vertex(t).unwrap();
                assert_eq!(v[d - 1], divided_difference(&s.select(t), d - 1).unwrap());
                true
            });
        }
    }

    #[test]
    fn order_type_search() {
        // convex position, counterclockwise
        let square = [lifted(&[0, 0]), lifted(&[2, 0]), lifted(&[3, 2]), lifted(&[1, 3]), lifted(&[-1, 2])];
        assert_eq!(max_order_type_homogeneous(&square).unwrap().length, 5);
        let with_center = [lifted(&[0, 0]), lifted(&[4, 0]), lifted(&[2, 1]), lifted(&[2, 4])];
        assert_eq!(max_order_type_homogeneous(&with_center).unwrap().length, 3);
        let many: Vec<LiftedPoint> = (0..15).map(|i| lifted(&[i, i * i])).collect();
        assert!(matches!(max_order_type_homogeneous(&many), Err(Error::SizeCap { .. })));
        let degenerate = [lifted(&[0, 0]), lifted(&[1, 1]), lifted(&[2, 2])];
        assert!(matches!(max_order_type_homogeneous(&degenerate), Err(Error::Degenerate(_))));
    }

    fn tuple_strategy() -> impl Strategy<Value = (usize, Vec<PlanarPoint>)> {
        (2usize..7).prop_flat_map(|d| {
            (
                Just(d),
                proptest::collection::btree_set(-40i64..40, d + 1),
                proptest::collection::vec((-40i64..40, 1i64..6), d + 1),
            )
                .prop_map(|(d, xs, ys)| {
                    (d, xs.into_iter().zip(ys).map(|(x, (a, b))| PlanarPoint::new(rat(x, 5), rat(a, b))).collect())
                })
        })
    }

    proptest! {
        #[test]
        fn lift_identity_holds((d, points) in tuple_strategy()) {
            let seq = PointSequence::new(points).unwrap();
            let tuple: Vec<usize> = (0..=d).collect();
            prop_assert!(verify_lift_identity(&seq, d, &tuple).unwrap());
        }

        #[test]
        fn orientation_is_alternating((d, points) in tuple_strategy()) {
            let mut l: Vec<LiftedPoint> = points.iter().map(|q| lift_point(q, d).unwrap()).collect();
            let before = order_type_sign(&l).unwrap();
            l.swap(0, d);
            prop_assert_eq!(order_type_sign(&l).unwrap(), before.negate());
        }
    }
}
