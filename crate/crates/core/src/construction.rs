//! Recursive sequences without large third-order monotone subsets.
//!
//! Generation n+1 replaces every point p of generation n by a cluster: a
//! copy of the whole set squeezed into an ε × ε² box with lower left corner
//! at p, then bent upward by the parabola `A (x² - x(p)²)`. The result is
//! renormalised into `[1, 19/10] × [0, 1]`. For A large enough the sign of
//! every 4-tuple is fixed by how it splits across clusters; "large enough"
//! is settled here by exact verification, doubling A until it passes.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::geometry::{is_k_general_position, tuple_sign, PlanarPoint, PointSequence, TupleSign};
use crate::numeric::{common_denominator, int, rat, serde_rational_opt, serde_rational_vec, Rational};
use crate::par::{self, Exec};
use crate::signs::{for_each_with_first, SignTable};

/// Largest generation size built without an explicit budget override.
pub const DEFAULT_MAX_POINTS: usize = 256;
/// Starting value of the bending parameter.
pub const INITIAL_A: u64 = 1 << 10;
/// Exhaustive checks up to this many 4-tuples use exact divided differences
/// per tuple; larger ones go through a [`SignTable`].
pub const DIRECT_TUPLE_LIMIT: u128 = 100_000;
/// Above this many points, secant slopes are checked on sampled pairs.
pub const SLOPE_PAIR_POINT_LIMIT: usize = 4096;

const SCREEN_SAMPLES: usize = 20_000;
const SCREEN_SEED: u64 = 0x5eed;
const SLOPE_SAMPLES: usize = 200_000;

/// The default four-point seed configuration.
pub fn default_base_set() -> PointSequence {
    PointSequence::from_pairs([
        (int(1), int(0)),
        (rat(13, 10), int(1)),
        (rat(8, 5), rat(1, 10)),
        (rat(19, 10), rat(9, 10)),
    ])
    .expect("increasing x")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub generation: u32,
    /// Bending parameter of the last step; absent for the seed generation.
    #[serde(with = "serde_rational_opt")]
    pub a: Option<Rational>,
    /// `1 / A²`.
    #[serde(with = "serde_rational_opt")]
    pub epsilon: Option<Rational>,
    /// A used at generations 3, 4, ….
    #[serde(with = "serde_rational_vec")]
    pub a_by_generation: Vec<Rational>,
    pub base_set: Vec<PlanarPoint>,
}

/// Ordered composition of 4 describing how a 4-tuple meets the clusters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleType {
    parts: Vec<u8>,
}

impl TupleType {
    pub fn new(parts: Vec<u8>) -> Result<Self> {
        if parts.contains(&0) || parts.iter().map(|&p| p as u32).sum::<u32>() != 4 {
            return Err(Error::InvalidParameter(format!("{parts:?} is not a composition of 4")));
        }
        Ok(TupleType { parts })
    }

    pub fn parts(&self) -> &[u8] {
        &self.parts
    }

    /// From the three "cluster changes here" flags between neighbours.
    fn from_breaks(breaks: u8) -> Self {
        let mut parts = Vec::with_capacity(4);
        let mut run = 1;
        for i in 0..3 {
            if breaks & (1 << i) != 0 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        TupleType { parts }
    }

    fn breaks(&self) -> u8 {
        let mut acc = 0u8;
        let mut pos = 0;
        for &p in &self.parts[..self.parts.len() - 1] {
            pos += p as usize;
            acc |= 1 << (pos - 1);
        }
        acc
    }
}

impl fmt::Display for TupleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self.parts.iter().map(u8::to_string).collect();
        f.write_str(&text.join("+"))
    }
}

impl std::str::FromStr for TupleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split('+')
            .map(|p| p.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad tuple type {s:?}"))))
            .collect::<Result<Vec<u8>>>()?;
        TupleType::new(parts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedSign {
    Fixed(TupleSign),
    /// Same as the corresponding 4-tuple one generation up.
    Inherited,
}

/// Sign forced on a 4-tuple by its type.
pub fn expected_sign_by_type(t: &TupleType) -> ExpectedSign {
    expected_by_breaks(t.breaks())
}

#[inline]
fn expected_by_breaks(breaks: u8) -> ExpectedSign {
    use TupleSign::{Negative, Positive};
    match breaks {
        0b000 | 0b111 => ExpectedSign::Inherited,
        0b100 | 0b001 | 0b101 => ExpectedSign::Fixed(Negative), // 3+1, 1+3, 1+2+1
        0b011 | 0b110 | 0b010 => ExpectedSign::Fixed(Positive), // 1+1+2, 2+1+1, 2+2
        _ => unreachable!("three flags"),
    }
}

/// A generation of the construction with its cluster structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ClusteredSetFile", into = "ClusteredSetFile")]
pub struct ClusteredSet {
    points: PointSequence,
    cluster_of: Vec<usize>,
    cluster_start: Vec<usize>,
    anchors: PointSequence,
    params: ConstructionParams,
}

#[derive(Serialize, Deserialize)]
struct ClusteredSetFile {
    points: Vec<PlanarPoint>,
    cluster_of: Vec<usize>,
    /// Anchor of cluster c is the previous-generation point c.
    cluster_anchor: Vec<PlanarPoint>,
    params: ConstructionParams,
}

impl TryFrom<ClusteredSetFile> for ClusteredSet {
    type Error = Error;

    fn try_from(f: ClusteredSetFile) -> Result<Self> {
        ClusteredSet::from_parts(
            PointSequence::new(f.points)?,
            f.cluster_of,
            PointSequence::new(f.cluster_anchor)?,
            f.params,
        )
    }
}

impl From<ClusteredSet> for ClusteredSetFile {
    fn from(cs: ClusteredSet) -> Self {
        ClusteredSetFile {
            points: cs.points.into_points(),
            cluster_of: cs.cluster_of,
            cluster_anchor: cs.anchors.into_points(),
            params: cs.params,
        }
    }
}

impl ClusteredSet {
    /// Checks that clusters are contiguous index blocks of equal size, one
    /// per anchor, each either a single point or a full copy of the anchors.
    pub fn from_parts(
        points: PointSequence,
        cluster_of: Vec<usize>,
        anchors: PointSequence,
        params: ConstructionParams,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::Construction(msg));
        if cluster_of.len() != points.len() {
            return bad(format!("{} cluster labels for {} points", cluster_of.len(), points.len()));
        }
        let mut cluster_start = Vec::new();
        for (i, &c) in cluster_of.iter().enumerate() {
            if c == cluster_start.len() {
                cluster_start.push(i);
            } else if c + 1 != cluster_start.len() {
                return bad(format!("cluster labels are not contiguous at index {i}"));
            }
        }
        if cluster_start.len() != anchors.len() {
            return bad(format!("{} clusters but {} anchors", cluster_start.len(), anchors.len()));
        }
        let size = points.len() / anchors.len().max(1);
        if size * anchors.len() != points.len()
            || cluster_start.iter().enumerate().any(|(c, &s)| s != c * size)
            || (size != 1 && size != anchors.len())
        {
            return bad("clusters must all have the size of the anchor set (or 1)".into());
        }
        Ok(ClusteredSet { points, cluster_of, cluster_start, anchors, params })
    }

    /// The seed generation, every point its own cluster.
    pub fn base(base_set: PointSequence) -> Result<Self> {
        validate_base_set(&base_set)?;
        let n = base_set.len();
        let params = ConstructionParams {
            generation: 2,
            a: None,
            epsilon: None,
            a_by_generation: Vec::new(),
            base_set: base_set.points().to_vec(),
        };
        ClusteredSet::from_parts(base_set.clone(), (0..n).collect(), base_set, params)
    }

    pub fn points(&self) -> &PointSequence {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn cluster_of(&self, index: usize) -> usize {
        self.cluster_of[index]
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_start.len()
    }

    /// Previous generation; cluster c sits at anchor point c.
    pub fn anchors(&self) -> &PointSequence {
        &self.anchors
    }

    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    /// Copy with one point replaced, keeping the cluster labels.
    pub fn with_point(&self, index: usize, point: PlanarPoint) -> Result<Self> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange { index, n: self.len() });
        }
        let mut points = self.points.points().to_vec();
        points[index] = point;
        ClusteredSet::from_parts(
            PointSequence::new(points)?,
            self.cluster_of.clone(),
            self.anchors.clone(),
            self.params.clone(),
        )
    }

    #[inline]
    fn breaks(&self, t: &[usize]) -> u8 {
        let c = &self.cluster_of;
        (c[t[0]] != c[t[1]]) as u8 | ((c[t[1]] != c[t[2]]) as u8) << 1 | ((c[t[2]] != c[t[3]]) as u8) << 2
    }

    /// Corresponding 4-tuple one generation up, for the inherited types.
    #[inline]
    fn parent_tuple(&self, t: &[usize], breaks: u8) -> [usize; 4] {
        let c = &self.cluster_of;
        if breaks == 0 {
            let s = self.cluster_start[c[t[0]]];
            [t[0] - s, t[1] - s, t[2] - s, t[3] - s]
        } else {
            [c[t[0]], c[t[1]], c[t[2]], c[t[3]]]
        }
    }
}

fn validate_base_set(base: &PointSequence) -> Result<()> {
    if base.len() != 4 {
        return Err(Error::Construction(format!("seed set needs 4 points, got {}", base.len())));
    }
    let (lo_x, hi_x, hi_y) = (int(1), rat(19, 10), int(1));
    if base.points().iter().any(|p| p.x < lo_x || p.x > hi_x || p.y < Rational::zero() || p.y > hi_y) {
        return Err(Error::Construction("seed set must lie in [1, 19/10] x [0, 1]".into()));
    }
    if !is_k_general_position(base, 3) {
        return Err(Error::Construction("seed set is not in 3-general position".into()));
    }
    Ok(())
}

/// Composition of 4 induced by the clusters of a 4-tuple.
pub fn tuple_type(cs: &ClusteredSet, indices: &[usize]) -> Result<TupleType> {
    crate::combin::validate_subset(indices, 4, cs.len())?;
    Ok(TupleType::from_breaks(cs.breaks(indices)))
}

#[derive(Clone, Debug)]
pub struct GenerationConfig {
    /// Seed generation: 4 points in `[1, 19/10] × [0, 1]`, 3-general.
    pub base_set: PointSequence,
    pub initial_a: Rational,
    /// Doublings of A tried per generation before giving up.
    pub max_doublings: u32,
    pub max_points: usize,
    pub exec: Exec,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            base_set: default_base_set(),
            initial_a: Rational::from_integer(BigInt::from(INITIAL_A)),
            max_doublings: 256,
            max_points: DEFAULT_MAX_POINTS,
            exec: Exec::default(),
        }
    }
}

/// Number of points of generation `n`: `2^(2^(n-1))`.
pub fn generation_size(n: u32) -> Option<u128> {
    if n < 2 {
        return None;
    }
    1u128.checked_shl(1u32.checked_shl(n - 1)?)
}

pub fn generate_extremal(n: u32) -> Result<ClusteredSet> {
    generate_extremal_with(n, &GenerationConfig::default())
}

pub fn generate_extremal_with(n: u32, config: &GenerationConfig) -> Result<ClusteredSet> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("generation must be at least 2, got {n}")));
    }
    let size = generation_size(n).unwrap_or(u128::MAX);
    if size > config.max_points as u128 {
        return Err(Error::SizeCap { what: "construction points", size, cap: config.max_points as u128 });
    }
    let mut current = ClusteredSet::base(config.base_set.clone())?;
    let mut history = Vec::new();
    for generation in 3..=n {
        let mut a = config.initial_a.clone();
        let mut accepted = None;
        for _ in 0..=config.max_doublings {
            let candidate = step(current.points(), &a, generation, &history, &config.base_set);
            if let Ok(cs) = candidate {
                if accept(&cs, config.exec) {
                    accepted = Some(cs);
                    break;
                }
            }
            a *= int(2);
        }
        current = accepted.ok_or_else(|| {
            Error::Construction(format!(
                "generation {generation} failed verification for every A up to {a}"
            ))
        })?;
        history = current.params.a_by_generation.clone();
    }
    Ok(current)
}

/// One refinement step with a fixed A.
fn step(
    parent: &PointSequence,
    a: &Rational,
    generation: u32,
    history: &[Rational],
    base_set: &PointSequence,
) -> Result<ClusteredSet> {
    let eps = (a * a).recip();
    let eps2 = &eps * &eps;
    let one = Rational::one();
    let m = parent.len();
    let mut raw = Vec::with_capacity(m * m);
    for anchor in parent.points() {
        let (x0, y0) = (&anchor.x, &anchor.y);
        let x0_sq = x0 * x0;
        for q in parent.points() {
            let x = &eps * (&q.x - &one) + x0;
            let y = &eps2 * &q.y + y0 + a * (&x * &x - &x0_sq);
            raw.push(PlanarPoint::new(x, y));
        }
    }
    // clusters overlapping in x show up here as a non-increasing sequence
    let raw = PointSequence::new(raw)?;
    let points = renormalize(&raw)?;
    let mut a_by_generation = history.to_vec();
    a_by_generation.push(a.clone());
    let params = ConstructionParams {
        generation,
        a: Some(a.clone()),
        epsilon: Some(eps),
        a_by_generation,
        base_set: base_set.points().to_vec(),
    };
    ClusteredSet::from_parts(points, (0..m * m).map(|i| i / m).collect(), parent.clone(), params)
}

/// Axis-aligned affine map of the bounding box onto `[1, 19/10] × [0, 1]`.
/// Both scale factors are positive, so every tuple sign is preserved.
fn renormalize(seq: &PointSequence) -> Result<PointSequence> {
    let pts = seq.points();
    let (first, last) = (&pts[0].x, &pts[pts.len() - 1].x);
    let y_min = pts.iter().map(|p| &p.y).min().expect("nonempty");
    let y_max = pts.iter().map(|p| &p.y).max().expect("nonempty");
    if first == last || y_min == y_max {
        return Err(Error::Construction("degenerate bounding box".into()));
    }
    let x_scale = rat(9, 10) / (last - first);
    let y_scale = (y_max - y_min).recip();
    let one = Rational::one();
    PointSequence::new(
        pts.iter()
            .map(|p| PlanarPoint::new(&one + (&p.x - first) * &x_scale, (&p.y - y_min) * &y_scale))
            .collect(),
    )
}

/// Quick rejection on a seeded sample and on the outermost points of every
/// cluster 4-tuple, then the full check.
fn accept(cs: &ClusteredSet, exec: Exec) -> bool {
    if !slope_check(cs, exec).separated {
        return false;
    }
    let mut probes = sample_tuples(cs.len(), SCREEN_SAMPLES, SCREEN_SEED);
    let m = cs.cluster_count();
    let size = cs.len() / m;
    crate::combin::for_each_combination(m, 4, |c| {
        probes.push([c[0] * size, c[1] * size, c[2] * size, c[3] * size]);
        probes.push([c[0] * size + size - 1, c[1] * size + size - 1, c[2] * size + size - 1, c[3] * size + size - 1]);
        true
    });
    let parent = match parent_table(cs) {
        Ok(t) => t,
        Err(_) => return false,
    };
    let ok = par::map_slice(exec, &probes, |t| direct_check(cs, &parent, t).is_none());
    if ok.iter().any(|&b| !b) {
        return false;
    }
    let mode = if binomial(cs.len() as u64, 4) <= crate::signs::MAX_TABLE_ENTRIES {
        VerifyMode::Exhaustive
    } else {
        VerifyMode::Sampled { count: 100_000, seed: 0 }
    };
    verify_construction_with(cs, mode, exec).map(|r| r.passed).unwrap_or(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleFailure {
    pub indices: Vec<usize>,
    pub tuple_type: String,
    pub expected: i8,
    pub actual: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    /// Largest secant slope between points of different clusters.
    pub max_cross_cluster: Option<f64>,
    /// Smallest secant slope between points of one cluster.
    pub min_intra_cluster: Option<f64>,
    pub separated: bool,
    pub pairs_checked: u64,
    pub sampled: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub mode: String,
    pub method: String,
    pub seed: Option<u64>,
    pub points: usize,
    pub generation: u32,
    pub checked_tuples: u64,
    pub zero_sign_tuples: u64,
    pub mismatched_tuples: u64,
    pub tuples_by_type: BTreeMap<String, u64>,
    pub first_failure: Option<TupleFailure>,
    pub clusters_x_disjoint: bool,
    pub slopes: SlopeReport,
}

pub fn verify_construction(cs: &ClusteredSet, mode: VerifyMode) -> Result<VerificationReport> {
    verify_construction_with(cs, mode, Exec::default())
}

/// Tallies for a run of tuples, merged in index order.
#[derive(Default)]
struct Tally {
    by_breaks: [u64; 8],
    zero: u64,
    mismatched: u64,
    first: Option<TupleFailure>,
}

impl Tally {
    fn record(&mut self, t: &[usize], breaks: u8, failure: Option<TupleFailure>) {
        self.by_breaks[breaks as usize] += 1;
        if let Some(f) = failure {
            if f.actual == 0 {
                self.zero += 1;
            } else {
                self.mismatched += 1;
            }
            if self.first.is_none() {
                self.first = Some(f);
            }
        }
        debug_assert_eq!(t.len(), 4);
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.by_breaks.iter_mut().zip(other.by_breaks) {
            *a += b;
        }
        self.zero += other.zero;
        self.mismatched += other.mismatched;
        self.first = self.first.or(other.first);
        self
    }
}

fn parent_table(cs: &ClusteredSet) -> Result<Arc<SignTable>> {
    Ok(Arc::new(SignTable::build_with(cs.anchors(), 3, Exec::Sequential)?))
}

fn failure(t: &[usize], breaks: u8, expected: TupleSign, actual: TupleSign) -> Option<TupleFailure> {
    (expected != actual || actual == TupleSign::Zero).then(|| TupleFailure {
        indices: t.to_vec(),
        tuple_type: TupleType::from_breaks(breaks).to_string(),
        expected: expected.value(),
        actual: actual.value(),
    })
}

#[inline]
fn expected_sign(cs: &ClusteredSet, parent: &SignTable, t: &[usize], breaks: u8) -> TupleSign {
    match expected_by_breaks(breaks) {
        ExpectedSign::Fixed(s) => s,
        ExpectedSign::Inherited => parent.sign(&cs.parent_tuple(t, breaks)),
    }
}

/// Failure for one tuple, with its sign from exact divided differences.
fn direct_check(cs: &ClusteredSet, parent: &SignTable, t: &[usize; 4]) -> Option<TupleFailure> {
    let breaks = cs.breaks(t);
    let actual = tuple_sign(&cs.points().select(t), 3).expect("increasing x");
    failure(t, breaks, expected_sign(cs, parent, t, breaks), actual)
}

fn sample_tuples(n: usize, count: usize, seed: u64) -> Vec<[usize; 4]> {
    if n < 4 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut t = [0usize; 4];
            for (slot, i) in t.iter_mut().zip(rand::seq::index::sample(&mut rng, n, 4)) {
                *slot = i;
            }
            t.sort_unstable();
            t
        })
        .collect()
}

/// Checks every (or a seeded sample of) 4-tuple against the type table,
/// plus cluster x-disjointness and secant-slope separation.
pub fn verify_construction_with(cs: &ClusteredSet, mode: VerifyMode, exec: Exec) -> Result<VerificationReport> {
    let n = cs.len();
    let parent = parent_table(cs)?;
    let total = binomial(n as u64, 4);
    let (tally, method, seed) = match mode {
        VerifyMode::Exhaustive if total <= DIRECT_TUPLE_LIMIT => {
            let tuples: Vec<[usize; 4]> =
                crate::combin::combinations(n, 4).into_iter().map(|t| [t[0], t[1], t[2], t[3]]).collect();
            (tally_direct(cs, &parent, &tuples, exec), "direct", None)
        }
        VerifyMode::Exhaustive => {
            let table = SignTable::build_with(cs.points(), 3, exec)?;
            let parts = par::map_range(exec, 0..n, |first| {
                let mut tally = Tally::default();
                for_each_with_first(n, 4, first, |t| {
                    let breaks = cs.breaks(t);
                    let expected = expected_sign(cs, &parent, t, breaks);
                    tally.record(t, breaks, failure(t, breaks, expected, table.sign(t)));
                    true
                });
                tally
            });
            (parts.into_iter().fold(Tally::default(), Tally::merge), "sign-table", None)
        }
        VerifyMode::Sampled { count, seed } => {
            (tally_direct(cs, &parent, &sample_tuples(n, count, seed), exec), "direct", Some(seed))
        }
    };
    let clusters_x_disjoint = (1..cs.cluster_count()).all(|c| {
        let start = cs.cluster_start[c];
        cs.points().get(start - 1).x < cs.points().get(start).x && cs.cluster_of(start - 1) + 1 == c
    });
    let slopes = slope_check(cs, exec);
    let mut tuples_by_type = BTreeMap::new();
    for (breaks, &count) in tally.by_breaks.iter().enumerate() {
        if count > 0 {
            tuples_by_type.insert(TupleType::from_breaks(breaks as u8).to_string(), count);
        }
    }
    Ok(VerificationReport {
        passed: tally.first.is_none() && clusters_x_disjoint && slopes.separated,
        mode: match mode {
            VerifyMode::Exhaustive => "exhaustive".into(),
            VerifyMode::Sampled { .. } => "sampled".into(),
        },
        method: method.into(),
        seed,
        points: n,
        generation: cs.params().generation,
        checked_tuples: tally.by_breaks.iter().sum(),
        zero_sign_tuples: tally.zero,
        mismatched_tuples: tally.mismatched,
        tuples_by_type,
        first_failure: tally.first,
        clusters_x_disjoint,
        slopes,
    })
}

fn tally_direct(cs: &ClusteredSet, parent: &SignTable, tuples: &[[usize; 4]], exec: Exec) -> Tally {
    let failures = par::map_slice(exec, tuples, |t| direct_check(cs, parent, t));
    let mut tally = Tally::default();
    for (t, f) in tuples.iter().zip(failures) {
        tally.record(t, cs.breaks(t), f);
    }
    tally
}

/// Secant slope `dy / dx` with `dx > 0`, compared by cross-multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Slope {
    dy: BigInt,
    dx: BigInt,
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.dy * &other.dx).cmp(&(&other.dy * &self.dx))
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Slope {
    /// Undoes the coordinate scaling.
    fn to_f64(&self, x_scale: &BigInt, y_scale: &BigInt) -> Option<f64> {
        Rational::new(&self.dy * x_scale, &self.dx * y_scale).to_f64()
    }
}

fn slope_check(cs: &ClusteredSet, exec: Exec) -> SlopeReport {
    let n = cs.len();
    let pts = cs.points().points();
    let x_scale = common_denominator(pts.iter().map(|p| &p.x));
    let y_scale = common_denominator(pts.iter().map(|p| &p.y));
    let xs: Vec<BigInt> = pts.iter().map(|p| p.x.numer() * (&x_scale / p.x.denom())).collect();
    let ys: Vec<BigInt> = pts.iter().map(|p| p.y.numer() * (&y_scale / p.y.denom())).collect();
    let sampled = n > SLOPE_PAIR_POINT_LIMIT;
    let pairs: Vec<(usize, usize)> = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(SCREEN_SEED);
        (0..SLOPE_SAMPLES)
            .map(|_| {
                let v = rand::seq::index::sample(&mut rng, n, 2);
                let (a, b) = (v.index(0), v.index(1));
                (a.min(b), a.max(b))
            })
            .collect()
    } else {
        Vec::new()
    };
    // (largest cross-cluster, smallest intra-cluster)
    type Extremes = (Option<Slope>, Option<Slope>);
    let fold = |acc: &mut Extremes, i: usize, j: usize| {
        let s = Slope { dy: &ys[j] - &ys[i], dx: &xs[j] - &xs[i] };
        if cs.cluster_of(i) == cs.cluster_of(j) {
            if acc.1.as_ref().is_none_or(|cur| s < *cur) {
                acc.1 = Some(s);
            }
        } else if acc.0.as_ref().is_none_or(|cur| s > *cur) {
            acc.0 = Some(s);
        }
    };
    let parts: Vec<Extremes> = if sampled {
        let mut acc = (None, None);
        for &(i, j) in &pairs {
            fold(&mut acc, i, j);
        }
        vec![acc]
    } else {
        par::map_range(exec, 0..n, |i| {
            let mut acc = (None, None);
            for j in i + 1..n {
                fold(&mut acc, i, j);
            }
            acc
        })
    };
    let max_cross = parts.iter().filter_map(|p| p.0.as_ref()).max();
    let min_intra = parts.iter().filter_map(|p| p.1.as_ref()).min();
    let separated = match (max_cross, min_intra) {
        (Some(a), Some(b)) => a < b,
        _ => true,
    };
    SlopeReport {
        max_cross_cluster: max_cross.and_then(|s| s.to_f64(&x_scale, &y_scale)),
        min_intra_cluster: min_intra.and_then(|s| s.to_f64(&x_scale, &y_scale)),
        separated,
        pairs_checked: if sampled { pairs.len() as u64 } else { (n as u64) * (n as u64).saturating_sub(1) / 2 },
        sampled,
    }
}

/// `(n-1)²` points with no monotone subsequence longer than `n - 1`:
/// `n - 1` increasing blocks, each a decreasing run of `n - 1` values.
pub fn block_construction_k1(n: usize) -> Result<PointSequence> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("block construction needs n >= 2, got {n}")));
    }
    let m = (n - 1) as i64;
    PointSequence::from_pairs(
        (0..m).flat_map(|b| (0..m).map(move |j| (int(b * m + j), int(b * m + (m - 1 - j))))),
    )
}
