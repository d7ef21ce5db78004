//! Fixed-width index sets.
//!
//! Both atom sets and group-element sets live in `0..64`, so a single `u64`
//! word is enough and every Boolean operation is one instruction.

use std::fmt;

/// Largest index an [`IndexSet`] can hold, plus one.
pub const MAX_INDEX: usize = 64;

/// A subset of `0..64` stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        IndexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_INDEX);
        IndexSet(1u64 << i)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_INDEX);
        if n == MAX_INDEX {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_INDEX && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        IndexSet(self.0 & !other.0)
    }

    /// Complement relative to `0..n`.
    pub fn complement(self, n: usize) -> Self {
        IndexSet(!self.0 & Self::full(n).0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Members in ascending order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = IndexSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl IntoIterator for IndexSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
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

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_and_complement() {
        assert_eq!(IndexSet::full(0), IndexSet::EMPTY);
        assert_eq!(IndexSet::full(64).len(), 64);
        let s: IndexSet = [1, 3].into_iter().collect();
        assert_eq!(s.complement(4).to_vec(), vec![0, 2]);
        assert_eq!(s.to_string(), "{1,3}");
    }

    proptest! {
        #[test]
        fn iteration_matches_membership(bits in any::<u64>()) {
            let s = IndexSet::from_bits(bits);
            let listed: Vec<usize> = s.iter().collect();
            let probed: Vec<usize> = (0..64).filter(|&i| s.contains(i)).collect();
            prop_assert_eq!(listed, probed);
            prop_assert_eq!(s.len(), bits.count_ones() as usize);
        }

        #[test]
        fn de_morgan(a in any::<u64>(), b in any::<u64>()) {
            let (a, b) = (IndexSet::from_bits(a), IndexSet::from_bits(b));
            prop_assert_eq!(a.union(b).complement(64), a.complement(64).intersection(b.complement(64)));
        }
    }
}
