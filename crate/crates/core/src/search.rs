//! Largest monochromatic monotone paths and homogeneous sets.
//!
//! A monotone path in a coloring of arity ℓ is an increasing index sequence
//! whose consecutive ℓ-windows share one color. For a transitive coloring
//! every such path is homogeneous, so the path DP below finds a largest
//! homogeneous set; for a sign coloring that is a largest kth-order
//! monotone subset.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coloring::{geometric_coloring, ColorId, Coloring, POSITIVE_COLOR};
use crate::combin::{binomial, Binomials};
use crate::error::{Error, Result};
use crate::geometry::PointSequence;
use crate::par::{self, Exec};
use crate::signs::for_each_with_first;

/// Default ground-set cap for the subset-enumeration oracle.
pub const BRUTE_FORCE_CAP: usize = 16;

const MAX_ARITY: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub length: usize,
    pub indices: Vec<usize>,
    pub color: ColorId,
}

impl SearchResult {
    fn new(indices: Vec<usize>, color: ColorId) -> Self {
        SearchResult { length: indices.len(), indices, color }
    }

    /// Every consecutive ℓ-window carries `color`.
    pub fn windows_match(&self, c: &Coloring) -> bool {
        let l = c.arity();
        self.length == self.indices.len()
            && self.indices.windows(2).all(|w| w[0] < w[1])
            && self.indices.last().is_none_or(|&i| i < c.ground_size())
            && self.indices.windows(l).all(|w| c.color_unchecked(w) == self.color)
    }

    /// Every ℓ-subset carries `color`.
    pub fn is_homogeneous(&self, c: &Coloring) -> bool {
        self.windows_match(c) && is_homogeneous_set(c, &self.indices, self.color)
    }
}

fn is_homogeneous_set(c: &Coloring, indices: &[usize], color: ColorId) -> bool {
    let l = c.arity();
    let mut ok = true;
    let mut buf = vec![0; l];
    crate::combin::for_each_combination(indices.len(), l, |t| {
        for (b, &i) in buf.iter_mut().zip(t) {
            *b = indices[i];
        }
        ok = c.color_unchecked(&buf) == color;
        ok
    });
    ok
}

fn check_search_arity(c: &Coloring) -> Result<()> {
    if c.arity() > MAX_ARITY {
        return Err(Error::InvalidParameter(format!(
            "arity {} exceeds the supported maximum {MAX_ARITY}",
            c.arity()
        )));
    }
    Ok(())
}

/// Longest monochromatic monotone path; ties go to the lexicographically
/// smallest index sequence, then to color 1.
pub fn longest_monochromatic_path(c: &Coloring) -> Result<SearchResult> {
    longest_monochromatic_path_with(c, Exec::default())
}

/// Backward DP over states `(last ℓ-1 indices, color)`: `best[S][c]` is the
/// length of the longest path that starts with `S` and whose windows all
/// have color `c`. States sharing a first element are independent of each
/// other and only read states with a larger first element, so each such
/// layer is evaluated in parallel.
pub fn longest_monochromatic_path_with(c: &Coloring, exec: Exec) -> Result<SearchResult> {
    check_search_arity(c)?;
    let n = c.ground_size();
    let l = c.arity();
    if n < l {
        return Ok(SearchResult::new((0..n).collect(), POSITIVE_COLOR));
    }
    let s = l - 1;
    let states = binomial(n as u64, s as u64) as usize;
    let binom = Binomials::new(n, s);
    let mut best: Vec<[u16; 2]> = vec![[s as u16; 2]; states];

    for first in (0..n).rev() {
        let mut layer: Vec<usize> = Vec::new();
        for_each_with_first(n, s, first, |t| {
            layer.extend_from_slice(t);
            true
        });
        let table = &best;
        let updates = par::map_range(exec, 0..layer.len() / s, |j| {
            let state = &layer[j * s..(j + 1) * s];
            let mut tuple = [0usize; MAX_ARITY];
            tuple[..s].copy_from_slice(state);
            let mut out = [s as u16; 2];
            for d in state[s - 1] + 1..n {
                tuple[s] = d;
                let color = c.color_unchecked(&tuple[..l]);
                let next = table[binom.rank(&tuple[1..l])][(color - 1) as usize] + 1;
                let slot = &mut out[(color - 1) as usize];
                if next > *slot {
                    *slot = next;
                }
            }
            (binom.rank(state), out)
        });
        for (idx, value) in updates {
            best[idx] = value;
        }
    }

    let longest = best.iter().flat_map(|b| b.iter().copied()).max().unwrap_or(0);
    // lexicographically first starting state reaching the maximum
    let mut start = None;
    crate::combin::for_each_combination(n, s, |t| {
        if best[binom.rank(t)].contains(&longest) {
            start = Some(t.to_vec());
            false
        } else {
            true
        }
    });
    let start = start.expect("some state attains the maximum");
    let mut candidates = Vec::new();
    for color in [1u8, 2] {
        if best[binom.rank(&start)][(color - 1) as usize] != longest {
            continue;
        }
        let mut path = start.clone();
        let mut tuple = vec![0usize; l];
        while path.len() < longest as usize {
            let state = &path[path.len() - s..];
            let need = best[binom.rank(state)][(color - 1) as usize] - 1;
            tuple[..s].copy_from_slice(state);
            let step = (state[s - 1] + 1..n).find(|&d| {
                tuple[s] = d;
                c.color_unchecked(&tuple) == color
                    && best[binom.rank(&tuple[1..])][(color - 1) as usize] == need
            });
            path.push(step.expect("DP table is consistent"));
        }
        candidates.push((path, color));
    }
    let (indices, color) = candidates.into_iter().min().expect("at least one color attains the maximum");
    Ok(SearchResult::new(indices, color))
}

/// Largest set all of whose ℓ-subsets share a color, by enumerating subsets
/// from the largest size down. `cap` bounds the ground-set size.
pub fn largest_homogeneous_bruteforce(c: &Coloring, cap: Option<usize>) -> Result<SearchResult> {
    largest_homogeneous_bruteforce_with(c, cap, Exec::default())
}

pub fn largest_homogeneous_bruteforce_with(
    c: &Coloring,
    cap: Option<usize>,
    exec: Exec,
) -> Result<SearchResult> {
    let n = c.ground_size();
    let cap = cap.unwrap_or(BRUTE_FORCE_CAP);
    if n > cap {
        return Err(Error::SizeCap { what: "brute-force ground set", size: n as u128, cap: cap as u128 });
    }
    let l = c.arity();
    if n < l {
        return Ok(SearchResult::new((0..n).collect(), POSITIVE_COLOR));
    }
    for size in (l..=n).rev() {
        let found = par::find_first(exec, 0..n, |first| {
            let mut hit = None;
            for_each_with_first(n, size, first, |t| {
                let color = c.color_unchecked(&t[..l]);
                if is_homogeneous_set(c, t, color) {
                    hit = Some((t.to_vec(), color));
                    false
                } else {
                    true
                }
            });
            hit
        });
        if let Some((indices, color)) = found {
            return Ok(SearchResult::new(indices, color));
        }
    }
    unreachable!("every ℓ-subset is homogeneous")
}

/// Largest kth-order monotone subset of a sequence in k-general position.
pub fn longest_kth_order_monotone(seq: &PointSequence, k: usize) -> Result<SearchResult> {
    let c = geometric_coloring(seq, k)?;
    longest_monochromatic_path(&c)
}

/// Per-level bookkeeping of the extraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionLevel {
    pub arity: usize,
    pub ground_size: usize,
    /// Size of the set on which the derived coloring lives.
    pub chain_size: usize,
    /// Element used to derive the lower-arity coloring.
    pub apex: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub result: SearchResult,
    pub target: usize,
    /// The homogeneous set found is smaller than the target.
    pub shortfall: bool,
    pub levels: Vec<ExtractionLevel>,
}

/// Homogeneous set of a transitive coloring of arity `k + 1 >= 3` by the
/// Erdős–Rado style reduction: grow a chain `A` whose `k`-subsets color
/// their extensions independently of the last element, then recurse on the
/// derived coloring `K -> c(K ∪ {apex})` of arity `k`. Arity 3 is solved by
/// the path DP.
pub fn erdos_rado_extract(c: &Coloring, target: usize) -> Result<Extraction> {
    if c.arity() < 3 {
        return Err(Error::InvalidParameter("extraction needs arity >= 3".into()));
    }
    let mut levels = Vec::new();
    let (indices, color) = extract_level(c, &mut levels)?;
    if !is_homogeneous_set(c, &indices, color) {
        return Err(Error::NotHomogeneous(indices));
    }
    let result = SearchResult::new(indices, color);
    Ok(Extraction { shortfall: result.length < target, result, target, levels })
}

/// The chain `A` and apex `x` of one reduction step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub chain: Vec<usize>,
    pub apex: usize,
}

/// Builds the chain for a coloring of arity `k + 1 >= 3` on at least `k + 1`
/// elements. Starting from `A = {0..k-2}`, the least remaining element `a`
/// joins `A` and the other remaining elements are split by the colors of
/// `K ∪ {a, y}` over all `(k-1)`-subsets `K` of the chain before `a` joined;
/// the largest class survives (ties to the class holding the smallest
/// element). The last survivor is the apex.
pub fn reduction_step(c: &Coloring) -> Result<ReductionStep> {
    let n = c.ground_size();
    let l = c.arity();
    if l < 3 || n < l {
        return Err(Error::InvalidParameter(format!(
            "reduction needs arity >= 3 and at least that many elements, got arity {l} on {n}"
        )));
    }
    let k = l - 1;
    let mut chain: Vec<usize> = (0..k - 1).collect();
    let mut rest: Vec<usize> = (k - 1..n).collect();
    let mut buf = vec![0usize; l];
    while rest.len() >= 2 {
        let pivot = rest[0];
        let mut classes: BTreeMap<Vec<ColorId>, Vec<usize>> = BTreeMap::new();
        let subsets = crate::combin::combinations(chain.len(), k - 1);
        for &y in &rest[1..] {
            let signature: Vec<ColorId> = subsets
                .iter()
                .map(|t| {
                    for (b, &i) in buf.iter_mut().zip(t) {
                        *b = chain[i];
                    }
                    buf[k - 1] = pivot;
                    buf[k] = y;
                    c.color_unchecked(&buf)
                })
                .collect();
            classes.entry(signature).or_default().push(y);
        }
        rest = classes
            .into_values()
            .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b[0].cmp(&a[0])))
            .expect("at least one candidate");
        chain.push(pivot);
    }
    Ok(ReductionStep { chain, apex: rest[0] })
}

fn extract_level(c: &Coloring, levels: &mut Vec<ExtractionLevel>) -> Result<(Vec<usize>, ColorId)> {
    let n = c.ground_size();
    let l = c.arity();
    if l <= 3 || n < l {
        levels.push(ExtractionLevel { arity: l, ground_size: n, chain_size: n, apex: None });
        let r = longest_monochromatic_path(c)?;
        return Ok((r.indices, r.color));
    }
    let ReductionStep { chain, apex } = reduction_step(c)?;
    levels.push(ExtractionLevel { arity: l, ground_size: n, chain_size: chain.len(), apex: Some(apex) });
    let derived = c.derived(&chain, apex)?;
    let (inner, color) = extract_level(&derived, levels)?;
    Ok((inner.into_iter().map(|i| chain[i]).collect(), color))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{is_transitive, Coloring};
    use crate::geometry::PlanarPoint;
    use crate::numeric::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seq(pairs: &[(i64, i64)]) -> PointSequence {
        PointSequence::new(pairs.iter().map(|&(x, y)| PlanarPoint::new(int(x), int(y))).collect())
            .unwrap()
    }

    /// Longest subsequence of `ys` that is strictly increasing or strictly
    /// decreasing, by trying every subset.
    fn exhaustive_monotone(ys: &[i64]) -> usize {
        let n = ys.len();
        (0u32..1 << n)
            .filter(|mask| {
                let sub: Vec<i64> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ys[i]).collect();
                sub.windows(2).all(|w| w[0] < w[1]) || sub.windows(2).all(|w| w[0] > w[1])
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn first_order_example() {
        let ys = [1, 3, 2, 4];
        assert_eq!(exhaustive_monotone(&ys), 3);
        let s = seq(&[(0, 1), (1, 3), (2, 2), (3, 4)]);
        let r = longest_kth_order_monotone(&s, 1).unwrap();
        assert_eq!(r.length, 3);
        assert_eq!(r.indices, vec![0, 1, 3]);
        assert_eq!(r.color, POSITIVE_COLOR);
    }

    #[test]
    fn constant_colorings_are_fully_monotone() {
        for l in 2..5 {
            let c = Coloring::constant(9, l, 2).unwrap();
            let r = longest_monochromatic_path(&c).unwrap();
            assert_eq!(r.indices, (0..9).collect::<Vec<_>>());
            assert_eq!(r.color, 2);
            assert_eq!(largest_homogeneous_bruteforce(&c, None).unwrap().length, 9);
        }
        let c = Coloring::constant(6, 3, 1).unwrap();
        assert_eq!(largest_homogeneous_bruteforce(&c, None).unwrap().length, 6);
    }

    #[test]
    fn non_transitive_triangle() {
        let c = Coloring::from_fn(3, 2, |t| if t == [0, 2] { 2 } else { 1 }).unwrap();
        let brute = largest_homogeneous_bruteforce(&c, None).unwrap();
        assert_eq!(brute.length, 2);
        assert_eq!(brute.indices, vec![0, 1]);
        // the path 0,1,2 is monochromatic in its windows but not homogeneous
        let path = longest_monochromatic_path(&c).unwrap();
        assert_eq!(path.length, 3);
        assert!(path.windows_match(&c));
        assert!(!path.is_homogeneous(&c));
    }

    #[test]
    fn small_inputs_and_caps() {
        let c = Coloring::constant(2, 3, 1).unwrap();
        assert_eq!(longest_monochromatic_path(&c).unwrap().length, 2);
        assert_eq!(largest_homogeneous_bruteforce(&c, None).unwrap().length, 2);
        let big = Coloring::constant(17, 2, 1).unwrap();
        assert!(matches!(largest_homogeneous_bruteforce(&big, None), Err(Error::SizeCap { .. })));
        assert_eq!(largest_homogeneous_bruteforce(&big, Some(17)).unwrap().length, 17);
    }

    #[test]
    fn cubic_points_and_falling_points() {
        let cubic: Vec<(i64, i64)> = (-2..3).map(|x| (x, x * x * x)).collect();
        assert_eq!(longest_kth_order_monotone(&seq(&cubic), 3).unwrap().length, 5);
        let falling: Vec<(i64, i64)> = (0..8).map(|x| (x, 100 - x * x)).collect();
        let r = longest_kth_order_monotone(&seq(&falling), 1).unwrap();
        assert_eq!(r.length, 8);
        assert_eq!(r.color, 2);
    }

    fn random_general_sequence(rng: &mut ChaCha8Rng, n: usize, k: usize) -> PointSequence {
        loop {
            let s = PointSequence::new(
                (0..n)
                    .map(|i| PlanarPoint::new(int(i as i64), rat(rng.random_range(-40..40), rng.random_range(1..5))))
                    .collect(),
            )
            .unwrap();
            if crate::geometry::is_k_general_position(&s, k) {
                return s;
            }
        }
    }

    #[test]
    fn dp_agrees_with_enumeration_on_random_sequences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..60 {
            let k = 1 + trial % 3;
            let n = 4 + trial % 8;
            let s = random_general_sequence(&mut rng, n, k);
            let c = geometric_coloring(&s, k).unwrap();
            let dp = longest_monochromatic_path(&c).unwrap();
            let brute = largest_homogeneous_bruteforce(&c, None).unwrap();
            assert_eq!(dp.length, brute.length, "trial {trial}");
            assert!(dp.is_homogeneous(&c));
            let seq_dp = longest_monochromatic_path_with(&c, Exec::Sequential).unwrap();
            assert_eq!(seq_dp, dp);
        }
    }

    #[test]
    fn extending_the_ground_set_never_shrinks_the_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = random_general_sequence(&mut rng, 12, 2);
        let mut previous = 0;
        for m in 3..=12 {
            let prefix = s.subsequence(&(0..m).collect::<Vec<_>>()).unwrap();
            let len = longest_kth_order_monotone(&prefix, 2).unwrap().length;
            assert!(len >= previous);
            previous = len;
        }
    }

    #[test]
    fn extraction_on_constant_and_geometric_colorings() {
        let c = Coloring::constant(10, 4, 1).unwrap();
        let e = erdos_rado_extract(&c, 5).unwrap();
        assert!(e.result.length >= 5);
        assert!(!e.shortfall);
        assert!(e.result.is_homogeneous(&c));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let s = random_general_sequence(&mut rng, 12, 3);
            let c = geometric_coloring(&s, 3).unwrap();
            let e = erdos_rado_extract(&c, 4).unwrap();
            assert!(e.result.is_homogeneous(&c));
            let level = &e.levels[0];
            let apex = level.apex.unwrap();
            assert_eq!(e.levels.len(), 2);
            assert!(level.chain_size >= 3);
            let step = reduction_step(&c).unwrap();
            assert_eq!(step.apex, apex);
            assert!(is_transitive(&c.derived(&step.chain, step.apex).unwrap()));
            let c2 = geometric_coloring(&random_general_sequence(&mut rng, 12, 2), 2).unwrap();
            let small = reduction_step(&c2).unwrap();
            assert!(is_transitive(&c2.derived(&small.chain, small.apex).unwrap()));
        }
        assert!(erdos_rado_extract(&Coloring::constant(5, 2, 1).unwrap(), 2).is_err());
    }
}
