//! Small finite sets of indices packed into a `u64`.
//!
//! Every carrier in this crate (tokens, poset elements, universe elements,
//! family members) is indexed densely from zero, so a set over at most 64
//! of them fits in one word.

use std::cmp::Ordering;
use std::fmt;

/// Largest carrier a [`BitSet`] can index.
pub const MAX_WIDTH: usize = 64;

/// A set of indices below [`MAX_WIDTH`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitSet(u64);

impl BitSet {
    pub const EMPTY: BitSet = BitSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        BitSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_WIDTH);
        BitSet(1u64 << i)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_WIDTH);
        if n == MAX_WIDTH {
            BitSet(u64::MAX)
        } else {
            BitSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(BitSet::EMPTY, |s, i| s.with(i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_WIDTH && self.0 & (1u64 << i) != 0
    }

    pub fn with(self, i: usize) -> Self {
        debug_assert!(i < MAX_WIDTH);
        BitSet(self.0 | (1u64 << i))
    }

    pub fn without(self, i: usize) -> Self {
        BitSet(self.0 & !(1u64 << i))
    }

    pub fn union(self, other: BitSet) -> Self {
        BitSet(self.0 | other.0)
    }

    pub fn intersection(self, other: BitSet) -> Self {
        BitSet(self.0 & other.0)
    }

    pub fn difference(self, other: BitSet) -> Self {
        BitSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: BitSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_superset(self, other: BitSet) -> bool {
        other.is_subset(self)
    }

    pub fn intersects(self, other: BitSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self`, in increasing numeric order (so `∅` first and
    /// `self` last).
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// Subsets of `self` in canonical order: by size, then lexicographically
    /// on the sorted index lists.
    pub fn subsets_canonical(self) -> Vec<BitSet> {
        let mut all: Vec<BitSet> = self.subsets().collect();
        all.sort_by(|a, b| a.canonical_cmp(*b));
        all
    }

    /// Lexicographic comparison of the sorted index lists.
    pub fn lex_cmp(self, other: BitSet) -> Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    o => return o,
                },
            }
        }
    }

    /// Size first, then lexicographic. This is the order used for every
    /// serialized listing and every reported witness.
    pub fn canonical_cmp(self, other: BitSet) -> Ordering {
        // Among sets of equal size, the one holding the least element of the
        // symmetric difference comes first lexicographically.
        self.len().cmp(&other.len()).then_with(|| {
            let d = self.0 ^ other.0;
            if d == 0 {
                Ordering::Equal
            } else if self.0 & d & d.wrapping_neg() != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for BitSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        BitSet::from_indices(iter)
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = BitSet;

    fn next(&mut self) -> Option<BitSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some(cur.wrapping_sub(self.mask) & self.mask)
        };
        Some(BitSet(cur))
    }
}

/// Render a set with the given names, e.g. `{ a b }`, `{ }` when empty.
pub fn render_set<S: AsRef<str>>(set: BitSet, names: &[S]) -> String {
    let mut out = String::from("{");
    for i in set.iter() {
        out.push(' ');
        out.push_str(names[i].as_ref());
    }
    out.push_str(" }");
    out
}

/// Sort a list of sets canonically and drop duplicates.
pub fn canonicalize(sets: &mut Vec<BitSet>) {
    sets.sort_by(|a, b| a.canonical_cmp(*b));
    sets.dedup();
}

/// Position of `set` in a canonically sorted slice.
pub fn position(sorted: &[BitSet], set: BitSet) -> Option<usize> {
    sorted.binary_search_by(|s| s.canonical_cmp(set)).ok()
}

/// A binary relation on `0..n`, stored row-wise: `rows[x]` is the set of
/// `y` with `x R y`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Relation {
    rows: Vec<BitSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            rows: vec![BitSet::EMPTY; n],
        }
    }

    pub fn from_rows(rows: Vec<BitSet>) -> Self {
        Relation { rows }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let rows = (0..n)
            .map(|x| (0..n).filter(|&y| f(x, y)).collect())
            .collect();
        Relation { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x] = self.rows[x].with(y);
    }

    pub fn row(&self, x: usize) -> BitSet {
        self.rows[x]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    /// The set `{x : x R y}`.
    pub fn column(&self, y: usize) -> BitSet {
        (0..self.rows.len())
            .filter(|&x| self.contains(x, y))
            .collect()
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, r)| r.iter().map(move |y| (x, y)))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.is_subset(*b))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.rows.len()).all(|x| self.contains(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs()
            .all(|(x, y)| self.rows[y].is_subset(self.rows[x]))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_powerset() {
        let s = BitSet::from_indices([1, 3, 4]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert_eq!(subs[0], BitSet::EMPTY);
        assert_eq!(*subs.last().unwrap(), s);
        assert!(subs.iter().all(|x| x.is_subset(s)));
        assert_eq!(BitSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn canonical_order() {
        let a = BitSet::from_indices([0, 2]);
        let b = BitSet::from_indices([1]);
        let c = BitSet::from_indices([1, 2]);
        assert_eq!(a.lex_cmp(b), Ordering::Less);
        assert_eq!(b.canonical_cmp(a), Ordering::Less);
        assert_eq!(a.canonical_cmp(c), Ordering::Less);
        let canon = BitSet::full(3).subsets_canonical();
        assert_eq!(canon[0], BitSet::EMPTY);
        assert_eq!(canon[1], BitSet::singleton(0));
        assert_eq!(canon[4], BitSet::from_indices([0, 1]));
        assert_eq!(position(&canon, c), Some(6));
        for a in BitSet::full(5).subsets() {
            for b in BitSet::full(5).subsets() {
                let slow = a.len().cmp(&b.len()).then_with(|| a.lex_cmp(b));
                assert_eq!(a.canonical_cmp(b), slow);
            }
        }
    }

    #[test]
    fn full_width() {
        assert_eq!(BitSet::full(64).len(), 64);
        assert_eq!(BitSet::full(0), BitSet::EMPTY);
        assert!(BitSet::full(64).contains(63));
    }
}
