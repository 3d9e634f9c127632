//! Precomputed tuple signs for a whole point sequence.
//!
//! For increasing x, `∇_k(p_0..p_k)` has the sign of
//! `∇_{k-1}(p_1..p_k) - ∇_{k-1}(p_0..p_{k-1})`. So once every k-subset's
//! `∇_{k-1}` has been ranked exactly (equal values share a rank), the sign of
//! any `(k+1)`-tuple is a comparison of two integers.
//!
//! Divided differences are formed on integer coordinates (x and y scaled by
//! the lcm of their denominators), which multiplies every `∇_{k-1}` by the
//! same positive constant and leaves the ranking unchanged.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::combin::{binomial, Binomials};
use crate::error::{Error, Result};
use crate::geometry::{PointSequence, TupleSign};
use crate::numeric::common_denominator;
use crate::par::{self, Exec};

/// Most k-subsets a table will index.
pub const MAX_TABLE_ENTRIES: u128 = 200_000_000;

#[derive(Clone, Debug)]
pub struct SignTable {
    n: usize,
    k: usize,
    binom: Binomials,
    ranks: Vec<u32>,
}

/// Unreduced fraction with positive denominator, plus a float estimate
/// used to skip most exact comparisons.
struct Value {
    num: BigInt,
    den: BigInt,
    approx: Option<f64>,
}

fn scaled_f64(v: &BigInt) -> (f64, i64) {
    let bits = v.bits();
    let shift = bits.saturating_sub(62);
    let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
    (top, shift as i64)
}

impl Value {
    fn new(num: BigInt, den: BigInt) -> Self {
        let approx = if num.is_zero() {
            Some(0.0)
        } else {
            let (n, sn) = scaled_f64(&num);
            let (d, sd) = scaled_f64(&den);
            let exp = sn - sd;
            let v = if exp.abs() > 2000 { f64::NAN } else { n / d * 2f64.powi(exp as i32) };
            (v.is_finite() && v.abs() > 1e-280).then_some(v)
        };
        Value { num, den, approx }
    }

    fn exact_cmp(&self, other: &Value) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }

    fn cmp(&self, other: &Value) -> Ordering {
        if let (Some(a), Some(b)) = (self.approx, other.approx) {
            let tol = 1e-9 * a.abs().max(b.abs());
            if a < b - tol {
                return Ordering::Less;
            }
            if a > b + tol {
                return Ordering::Greater;
            }
        }
        self.exact_cmp(other)
    }
}

/// `∇_{len-1}` of integer points (x strictly increasing), unreduced.
fn integer_divided_difference(xs: &[&BigInt], ys: &[&BigInt]) -> Value {
    let m = xs.len();
    let mut column: Vec<(BigInt, BigInt)> =
        ys.iter().map(|&y| (y.clone(), BigInt::from(1))).collect();
    for order in 1..m {
        column = (0..column.len() - 1)
            .map(|i| {
                let (an, ad) = &column[i];
                let (bn, bd) = &column[i + 1];
                let gap = xs[i + order] - xs[i];
                if order == 1 {
                    (bn - an, gap)
                } else {
                    (bn * ad - an * bd, ad * bd * gap)
                }
            })
            .collect();
    }
    let (num, den) = column.pop().expect("nonempty tuple");
    debug_assert!(den.is_positive());
    Value::new(num, den)
}

/// Calls `f` on every `r`-subset of `0..n` whose smallest element is
/// `first`, lexicographically.
pub(crate) fn for_each_with_first(n: usize, r: usize, first: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if r == 0 || first + r > n {
        return;
    }
    let mut tuple: Vec<usize> = (first..first + r).collect();
    loop {
        if !f(&tuple) {
            return;
        }
        // advance positions 1.. only
        let mut i = r;
        let mut advanced = false;
        while i > 1 {
            i -= 1;
            if tuple[i] < n - r + i {
                tuple[i] += 1;
                for j in i + 1..r {
                    tuple[j] = tuple[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return;
        }
    }
}

impl SignTable {
    /// Ranks `∇_{k-1}` over all k-subsets of `seq`. Needs `k >= 1`.
    pub fn build(seq: &PointSequence, k: usize) -> Result<Self> {
        Self::build_with(seq, k, Exec::default())
    }

    pub fn build_with(seq: &PointSequence, k: usize, exec: Exec) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("sign tables need order k >= 1".into()));
        }
        let n = seq.len();
        let entries = binomial(n as u64, k as u64);
        if entries > MAX_TABLE_ENTRIES {
            return Err(Error::SizeCap { what: "sign table", size: entries, cap: MAX_TABLE_ENTRIES });
        }
        let entries = entries as usize;
        let binom = Binomials::new(n, k + 1);

        let x_scale = common_denominator(seq.points().iter().map(|p| &p.x));
        let y_scale = common_denominator(seq.points().iter().map(|p| &p.y));
        let xs: Vec<BigInt> =
            seq.points().iter().map(|p| p.x.numer() * (&x_scale / p.x.denom())).collect();
        let ys: Vec<BigInt> =
            seq.points().iter().map(|p| p.y.numer() * (&y_scale / p.y.denom())).collect();

        let blocks: Vec<Vec<(usize, Value)>> = par::map_range(exec, 0..n, |first| {
            let mut out = Vec::new();
            let mut tx: Vec<&BigInt> = Vec::with_capacity(k);
            let mut ty: Vec<&BigInt> = Vec::with_capacity(k);
            for_each_with_first(n, k, first, |t| {
                tx.clear();
                ty.clear();
                tx.extend(t.iter().map(|&i| &xs[i]));
                ty.extend(t.iter().map(|&i| &ys[i]));
                out.push((binom.rank(t), integer_divided_difference(&tx, &ty)));
                true
            });
            out
        });
        let mut values: Vec<Option<Value>> = (0..entries).map(|_| None).collect();
        for (idx, v) in blocks.into_iter().flatten() {
            values[idx] = Some(v);
        }
        let values: Vec<Value> =
            values.into_iter().map(|v| v.expect("every subset visited")).collect();

        let mut order: Vec<u32> = (0..entries as u32).collect();
        par::sort_by(exec, &mut order, |&a, &b| values[a as usize].cmp(&values[b as usize]));
        let mut ranks = vec![0u32; entries];
        let mut rank = 0u32;
        for w in 0..order.len() {
            if w > 0 {
                let prev = &values[order[w - 1] as usize];
                let cur = &values[order[w] as usize];
                if prev.cmp(cur) != Ordering::Equal {
                    rank += 1;
                }
            }
            ranks[order[w] as usize] = rank;
        }
        Ok(SignTable { n, k, binom, ranks })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Tuples are of size `order() + 1`.
    pub fn order(&self) -> usize {
        self.k
    }

    /// Sign of a strictly increasing `(k+1)`-tuple of indices. Unchecked
    /// beyond debug assertions.
    #[inline]
    pub fn sign(&self, tuple: &[usize]) -> TupleSign {
        debug_assert_eq!(tuple.len(), self.k + 1);
        let head = self.ranks[self.binom.rank(&tuple[..self.k])];
        let tail = self.ranks[self.binom.rank(&tuple[1..])];
        TupleSign::from_ordering(tail.cmp(&head))
    }

    /// Rank of `∇_{k-1}` over the k-subset `subset`.
    #[inline]
    pub fn rank_of(&self, subset: &[usize]) -> u32 {
        self.ranks[self.binom.rank(subset)]
    }

    /// Lexicographically first `(k+1)`-tuple with sign zero.
    pub fn first_zero(&self) -> Option<Vec<usize>> {
        self.first_zero_with(Exec::default())
    }

    pub fn first_zero_with(&self, exec: Exec) -> Option<Vec<usize>> {
        par::find_first(exec, 0..self.n, |first| {
            let mut found = None;
            for_each_with_first(self.n, self.k + 1, first, |t| {
                if self.sign(t) == TupleSign::Zero {
                    found = Some(t.to_vec());
                    false
                } else {
                    true
                }
            });
            found
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::combinations;
    use crate::geometry::{tuple_sign, PlanarPoint};
    use crate::numeric::{int, rat};
    use proptest::prelude::*;

    fn seq(pairs: &[(i64, i64)]) -> PointSequence {
        PointSequence::new(pairs.iter().map(|&(x, y)| PlanarPoint::new(int(x), int(y))).collect())
            .unwrap()
    }

    #[test]
    fn first_element_enumeration() {
        let mut got = Vec::new();
        for_each_with_first(5, 3, 1, |t| {
            got.push(t.to_vec());
            true
        });
        assert_eq!(got, vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4]]);
        let mut single = Vec::new();
        for_each_with_first(3, 1, 2, |t| {
            single.push(t.to_vec());
            true
        });
        assert_eq!(single, vec![vec![2]]);
    }

    #[test]
    fn zero_signs_are_found() {
        let s = seq(&[(0, 0), (1, 5), (2, 1), (3, 2), (4, 3)]);
        let t = SignTable::build(&s, 2).unwrap();
        assert_eq!(t.first_zero(), Some(vec![2, 3, 4]));
        assert_eq!(t.sign(&[0, 1, 2]), TupleSign::Negative);
        assert!(SignTable::build(&s, 0).is_err());
    }

    fn sequence_strategy() -> impl Strategy<Value = PointSequence> {
        (3usize..10).prop_flat_map(|n| {
            (
                proptest::collection::btree_set(-30i64..30, n),
                proptest::collection::vec((-6i64..6, 1i64..4), n),
            )
                .prop_map(|(xs, ys)| {
                    PointSequence::new(
                        xs.into_iter()
                            .zip(ys)
                            .map(|(x, (a, b))| PlanarPoint::new(rat(x, 7), rat(a, b)))
                            .collect(),
                    )
                    .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn table_matches_direct_signs(s in sequence_strategy(), k in 1usize..4) {
            prop_assume!(s.len() > k);
            let table = SignTable::build(&s, k).unwrap();
            let seq_table = SignTable::build_with(&s, k, Exec::Sequential).unwrap();
            prop_assert_eq!(&table.ranks, &seq_table.ranks);
            for t in combinations(s.len(), k + 1) {
                let direct = tuple_sign(&s.select(&t), k).unwrap();
                prop_assert_eq!(table.sign(&t), direct, "tuple {:?}", t);
            }
        }
    }
}
