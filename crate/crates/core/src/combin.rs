//! Subset indexing: binomial tables, colex ranks and lexicographic
//! enumeration of sorted index tuples.

use crate::error::{Error, Result};

/// Pascal triangle `C(n, r)` for `n <= max_n`, `r <= max_r`.
#[derive(Clone, Debug)]
pub struct Binomials {
    max_r: usize,
    table: Vec<u64>,
}

impl Binomials {
    pub fn new(max_n: usize, max_r: usize) -> Self {
        let width = max_r + 1;
        let mut table = vec![0u64; (max_n + 1) * width];
        for n in 0..=max_n {
            table[n * width] = 1;
            for r in 1..=max_r.min(n) {
                let above = table[(n - 1) * width + r - 1];
                let left = if r < n { table[(n - 1) * width + r] } else { 0 };
                table[n * width + r] = above.saturating_add(left);
            }
        }
        Binomials { max_r, table }
    }

    #[inline]
    pub fn get(&self, n: usize, r: usize) -> u64 {
        if r > self.max_r {
            return binomial(n as u64, r as u64).min(u64::MAX as u128) as u64;
        }
        self.table[n * (self.max_r + 1) + r]
    }

    /// Colex rank of a strictly increasing tuple: `sum_j C(s_j, j + 1)`.
    #[inline]
    pub fn rank(&self, subset: &[usize]) -> usize {
        let width = self.max_r + 1;
        let mut idx = 0u64;
        for (j, &s) in subset.iter().enumerate() {
            idx += self.table[s * width + j + 1];
        }
        idx as usize
    }
}

/// Exact `C(n, r)` in 128 bits (saturating).
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Advances `tuple` to the next `r`-subset of `0..n` in lexicographic
/// order. Returns `false` after the last one.
pub fn next_combination(tuple: &mut [usize], n: usize) -> bool {
    let r = tuple.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if tuple[i] < n - r + i {
            tuple[i] += 1;
            for j in i + 1..r {
                tuple[j] = tuple[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `f` on every `r`-subset of `0..n` in lexicographic order; stops
/// early when `f` returns `false`.
pub fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if r > n {
        return;
    }
    let mut tuple: Vec<usize> = (0..r).collect();
    loop {
        if !f(&tuple) {
            return;
        }
        if r == 0 || !next_combination(&mut tuple, n) {
            return;
        }
    }
}

/// All `r`-subsets of `0..n`, lexicographically.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_combination(n, r, |t| {
        out.push(t.to_vec());
        true
    });
    out
}

/// Checks that `indices` has length `arity`, is strictly increasing, and
/// stays below `n`.
pub fn validate_subset(indices: &[usize], arity: usize, n: usize) -> Result<()> {
    if indices.len() != arity {
        return Err(Error::Arity { expected: arity, got: indices.len() });
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedIndices(indices.to_vec()));
    }
    if let Some(&last) = indices.last() {
        if last >= n {
            return Err(Error::IndexOutOfRange { index: last, n });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(16, 4), 1820);
        assert_eq!(binomial(256, 4), 174_792_640);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(3, 5), 0);
        let b = Binomials::new(20, 4);
        assert_eq!(b.get(16, 4), 1820);
        assert_eq!(b.get(3, 4), 0);
        assert_eq!(b.get(20, 0), 1);
    }

    #[test]
    fn colex_rank_is_a_bijection() {
        let b = Binomials::new(9, 3);
        let mut seen = [false; 84];
        for t in combinations(9, 3) {
            let r = b.rank(&t);
            assert!(!seen[r]);
            seen[r] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn lexicographic_enumeration() {
        let all = combinations(4, 2);
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
        let mut count = 0;
        for_each_combination(10, 4, |_| {
            count += 1;
            count < 7
        });
        assert_eq!(count, 7);
    }

    #[test]
    fn subset_validation() {
        assert!(validate_subset(&[0, 2, 5], 3, 6).is_ok());
        assert!(matches!(validate_subset(&[0, 2], 3, 6), Err(Error::Arity { .. })));
        assert!(matches!(validate_subset(&[2, 2, 3], 3, 6), Err(Error::UnsortedIndices(_))));
        assert!(matches!(validate_subset(&[0, 2, 6], 3, 6), Err(Error::IndexOutOfRange { .. })));
    }
}
