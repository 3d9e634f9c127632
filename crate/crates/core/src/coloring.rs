//! Two-colorings of the ℓ-subsets of an ordered ground set `0..n`.
//!
//! A coloring is transitive when, for every `(ℓ+1)`-tuple whose first and
//! last ℓ-windows agree, every ℓ-subset of the tuple has that color. The
//! coloring of `(k+1)`-tuples of a point sequence by their sign is
//! transitive.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combin::{binomial, validate_subset, Binomials};
use crate::error::{Error, Result};
use crate::geometry::{PointSequence, TupleSign};
use crate::par::{self, Exec};
use crate::signs::{for_each_with_first, SignTable};

/// Color ids are 1 and 2. Positive tuples get 1, negative tuples 2.
pub type ColorId = u8;

pub const POSITIVE_COLOR: ColorId = 1;
pub const NEGATIVE_COLOR: ColorId = 2;

/// Largest explicit table we are willing to materialize.
pub const MAX_EXPLICIT_ENTRIES: u128 = 50_000_000;

pub fn color_of_sign(sign: TupleSign) -> Option<ColorId> {
    match sign {
        TupleSign::Positive => Some(POSITIVE_COLOR),
        TupleSign::Negative => Some(NEGATIVE_COLOR),
        TupleSign::Zero => None,
    }
}

#[derive(Clone, Debug)]
enum Source {
    /// Colors indexed by colex rank of the subset.
    Explicit(Vec<ColorId>),
    Geometric(Arc<SignTable>),
}

#[derive(Clone, Debug)]
pub struct Coloring {
    n: usize,
    arity: usize,
    binom: Binomials,
    source: Source,
}

/// Which ℓ-subsets of a tuple with agreeing end windows must share its
/// color. `Weak` only looks at the subsets omitting the second or third
/// element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    #[default]
    Full,
    Weak,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityWitness {
    /// The `(ℓ+1)`-tuple.
    pub indices: Vec<usize>,
    /// An ℓ-subset of it whose color differs from the two end windows.
    pub offending_subset: Vec<usize>,
}

impl TransitivityWitness {
    /// Re-checks the witness against `c`.
    pub fn holds_for(&self, c: &Coloring) -> bool {
        let l = c.arity();
        if self.indices.len() != l + 1 || self.offending_subset.len() != l {
            return false;
        }
        let (Ok(first), Ok(last), Ok(odd)) = (
            c.color(&self.indices[..l]),
            c.color(&self.indices[1..]),
            c.color(&self.offending_subset),
        ) else {
            return false;
        };
        let inside = self.offending_subset.iter().all(|i| self.indices.contains(i));
        inside && first == last && odd != first
    }
}

fn check_arity(arity: usize) -> Result<()> {
    if arity < 2 {
        return Err(Error::InvalidParameter(format!("coloring arity must be >= 2, got {arity}")));
    }
    Ok(())
}

impl Coloring {
    /// Explicit coloring from a function of the sorted subset.
    pub fn from_fn(n: usize, arity: usize, mut f: impl FnMut(&[usize]) -> ColorId) -> Result<Self> {
        check_arity(arity)?;
        let entries = binomial(n as u64, arity as u64);
        if entries > MAX_EXPLICIT_ENTRIES {
            return Err(Error::SizeCap {
                what: "explicit coloring",
                size: entries,
                cap: MAX_EXPLICIT_ENTRIES,
            });
        }
        let binom = Binomials::new(n, arity);
        let mut colors = vec![0; entries as usize];
        let mut bad = None;
        crate::combin::for_each_combination(n, arity, |t| {
            let c = f(t);
            if c != 1 && c != 2 {
                bad = Some(c);
                return false;
            }
            colors[binom.rank(t)] = c;
            true
        });
        if let Some(c) = bad {
            return Err(Error::InvalidColor(c));
        }
        Ok(Coloring { n, arity, binom, source: Source::Explicit(colors) })
    }

    pub fn constant(n: usize, arity: usize, color: ColorId) -> Result<Self> {
        Self::from_fn(n, arity, |_| color)
    }

    /// Explicit coloring from a complete table keyed by sorted subsets.
    pub fn from_table(n: usize, arity: usize, table: &BTreeMap<Vec<usize>, ColorId>) -> Result<Self> {
        check_arity(arity)?;
        for key in table.keys() {
            validate_subset(key, arity, n)?;
        }
        let expected = binomial(n as u64, arity as u64);
        if table.len() as u128 != expected {
            return Err(Error::Parse(format!(
                "coloring covers {} of {expected} subsets",
                table.len()
            )));
        }
        Self::from_fn(n, arity, |t| table[t])
    }

    /// The sign coloring of `(k+1)`-tuples over a precomputed table. Fails
    /// with the first degenerate tuple if the sequence is not in
    /// k-general position.
    pub fn from_sign_table(table: Arc<SignTable>) -> Result<Self> {
        if let Some(t) = table.first_zero() {
            return Err(Error::Degenerate(t));
        }
        let n = table.len();
        let arity = table.order() + 1;
        check_arity(arity)?;
        Ok(Coloring { n, arity, binom: Binomials::new(n, arity), source: Source::Geometric(table) })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_geometric(&self) -> bool {
        matches!(self.source, Source::Geometric(_))
    }

    /// Color of a strictly increasing ℓ-subset.
    pub fn color(&self, subset: &[usize]) -> Result<ColorId> {
        validate_subset(subset, self.arity, self.n)?;
        Ok(self.color_unchecked(subset))
    }

    /// As [`Coloring::color`] without validation.
    #[inline]
    pub fn color_unchecked(&self, subset: &[usize]) -> ColorId {
        match &self.source {
            Source::Explicit(colors) => colors[self.binom.rank(subset)],
            Source::Geometric(table) => match table.sign(subset) {
                TupleSign::Positive => POSITIVE_COLOR,
                _ => NEGATIVE_COLOR,
            },
        }
    }

    /// The coloring induced on the increasing index list `subset`,
    /// relabelled to `0..subset.len()`.
    pub fn restrict(&self, subset: &[usize]) -> Result<Coloring> {
        if subset.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedIndices(subset.to_vec()));
        }
        if let Some(&last) = subset.last() {
            if last >= self.n {
                return Err(Error::IndexOutOfRange { index: last, n: self.n });
            }
        }
        let mut buf = vec![0; self.arity];
        Coloring::from_fn(subset.len(), self.arity, |t| {
            for (b, &i) in buf.iter_mut().zip(t) {
                *b = subset[i];
            }
            self.color_unchecked(&buf)
        })
    }

    /// The coloring `K -> c(K ∪ {apex})` of the (ℓ-1)-subsets of `base`,
    /// relabelled to `0..base.len()`. `apex` must exceed every element of
    /// `base`.
    pub fn derived(&self, base: &[usize], apex: usize) -> Result<Coloring> {
        if base.windows(2).any(|w| w[0] >= w[1]) || base.last().is_some_and(|&b| b >= apex) {
            return Err(Error::UnsortedIndices(base.to_vec()));
        }
        if apex >= self.n {
            return Err(Error::IndexOutOfRange { index: apex, n: self.n });
        }
        let mut buf = vec![0; self.arity];
        Coloring::from_fn(base.len(), self.arity - 1, |t| {
            for (b, &i) in buf.iter_mut().zip(t) {
                *b = base[i];
            }
            buf[self.arity - 1] = apex;
            self.color_unchecked(&buf)
        })
    }

    /// Copy backed by an explicit table.
    pub fn to_explicit(&self) -> Result<Coloring> {
        Coloring::from_fn(self.n, self.arity, |t| self.color_unchecked(t))
    }

    pub fn to_file(&self) -> ColoringFile {
        let mut colors = BTreeMap::new();
        crate::combin::for_each_combination(self.n, self.arity, |t| {
            let key = t.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            colors.insert(key, self.color_unchecked(t));
            true
        });
        ColoringFile { n: self.n, arity: self.arity, colors }
    }

    pub fn from_file(file: &ColoringFile) -> Result<Coloring> {
        let mut table = BTreeMap::new();
        for (key, &color) in &file.colors {
            let subset = key
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("subset key {key:?}: {e}")))?;
            if table.insert(subset, color).is_some() {
                return Err(Error::Parse(format!("duplicate subset key {key:?}")));
            }
        }
        Coloring::from_table(file.n, file.arity, &table)
    }
}

/// JSON form of an explicit coloring. Keys are comma-separated 0-based
/// indices in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub n: usize,
    pub arity: usize,
    pub colors: BTreeMap<String, ColorId>,
}

/// Colors every `(k+1)`-tuple of `seq` by its sign.
pub fn geometric_coloring(seq: &PointSequence, k: usize) -> Result<Coloring> {
    Coloring::from_sign_table(Arc::new(SignTable::build(seq, k)?))
}

pub fn color(c: &Coloring, subset: &[usize]) -> Result<ColorId> {
    c.color(subset)
}

fn tuple_witness(c: &Coloring, tuple: &[usize], strength: Strength, buf: &mut Vec<usize>) -> Option<Vec<usize>> {
    let l = c.arity();
    let first = c.color_unchecked(&tuple[..l]);
    if first != c.color_unchecked(&tuple[1..]) {
        return None;
    }
    let last_interior = match strength {
        Strength::Full => l - 1,
        Strength::Weak => (l - 1).min(2),
    };
    for skip in 1..=last_interior {
        buf.clear();
        buf.extend(tuple.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v));
        if c.color_unchecked(buf) != first {
            return Some(buf.clone());
        }
    }
    None
}

/// First violation of transitivity in lexicographic order of the
/// `(ℓ+1)`-tuples, if any.
pub fn transitivity_witness(c: &Coloring, strength: Strength) -> Option<TransitivityWitness> {
    transitivity_witness_with(c, strength, Exec::default())
}

pub fn transitivity_witness_with(
    c: &Coloring,
    strength: Strength,
    exec: Exec,
) -> Option<TransitivityWitness> {
    let l = c.arity();
    par::find_first(exec, 0..c.ground_size(), |first| {
        let mut found = None;
        let mut buf = Vec::with_capacity(l);
        for_each_with_first(c.ground_size(), l + 1, first, |t| {
            match tuple_witness(c, t, strength, &mut buf) {
                Some(offending) => {
                    found = Some(TransitivityWitness { indices: t.to_vec(), offending_subset: offending });
                    false
                }
                None => true,
            }
        });
        found
    })
}

pub fn is_transitive(c: &Coloring) -> bool {
    transitivity_witness(c, Strength::Full).is_none()
}
