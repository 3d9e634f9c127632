//! Sequential or rayon-backed execution of the data-parallel kernels.
//!
//! Every helper preserves input order in its output, so results do not
//! depend on the execution mode or the worker count.

use std::cmp::Ordering;
use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[derive(Default)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}


pub fn map_range<R, F>(exec: Exec, range: Range<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        Exec::Sequential => range.map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => range.into_par_iter().map(f).collect(),
    }
}

pub fn map_slice<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Exec::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
    }
}

/// First `Some` in index order.
pub fn find_first<R, F>(exec: Exec, range: Range<usize>, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    match exec {
        Exec::Sequential => range.into_iter().find_map(f),
        #[cfg(feature = "parallel")]
        Exec::Parallel => range.into_par_iter().find_map_first(f),
    }
}

/// Sum of `f` over the range.
pub fn sum_range<F>(exec: Exec, range: Range<usize>, f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    match exec {
        Exec::Sequential => range.map(f).sum(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => range.into_par_iter().map(f).sum(),
    }
}

/// Stable sort.
pub fn sort_by<T, F>(exec: Exec, items: &mut [T], compare: F)
where
    T: Send,
    F: Fn(&T, &T) -> Ordering + Sync,
{
    match exec {
        Exec::Sequential => items.sort_by(compare),
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_sort_by(compare),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modes() -> Vec<Exec> {
        vec![Exec::Sequential, Exec::default()]
    }

    #[test]
    fn helpers_preserve_order() {
        for exec in modes() {
            assert_eq!(map_range(exec, 0..5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(map_slice(exec, &[3, 1, 2], |v| v + 1), vec![4, 2, 3]);
            assert_eq!(find_first(exec, 0..1000, |i| (i % 97 == 96).then_some(i)), Some(96));
            assert_eq!(sum_range(exec, 0..101, |i| i as u64), 5050);
            let mut v = vec![(2, 'a'), (1, 'b'), (2, 'c'), (0, 'd')];
            sort_by(exec, &mut v, |a, b| a.0.cmp(&b.0));
            assert_eq!(v, vec![(0, 'd'), (1, 'b'), (2, 'a'), (2, 'c')]);
        }
    }
}
