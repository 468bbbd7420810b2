//! Bitmask sets over small finite universes.
//!
//! Every structure in this crate lives over a universe of at most
//! [`MAX_ELEMENTS`] elements, identified by their position. A [`Set`] is a
//! subset of such a universe; a [`Family`] is a set of subsets and therefore
//! needs one bit per subset, which bounds universes indexed by subsets to
//! [`MAX_FAMILY_ELEMENTS`].

use std::fmt;

/// Upper bound on the number of elements a [`Set`] can hold.
pub const MAX_ELEMENTS: usize = 64;

/// Upper bound on the universe size for anything indexed by subsets.
pub const MAX_FAMILY_ELEMENTS: usize = 8;

/// A subset of `{0, .., 63}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Set(pub u64);

impl Set {
    pub const EMPTY: Set = Set(0);

    /// The full universe `{0, .., n-1}`.
    pub fn full(n: usize) -> Set {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == 64 {
            Set(u64::MAX)
        } else {
            Set((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Set {
        Set(1u64 << i)
    }

    pub fn pair(a: usize, b: usize) -> Set {
        Set((1u64 << a) | (1u64 << b))
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(items: I) -> Set {
        items.into_iter().fold(Set::EMPTY, |s, i| s.with(i))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Set {
        Set(self.0 | 1u64 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Set {
        Set(self.0 & !(1u64 << i))
    }

    #[inline]
    pub fn union(self, other: Set) -> Set {
        Set(self.0 | other.0)
    }

    #[inline]
    pub fn inter(self, other: Set) -> Set {
        Set(self.0 & other.0)
    }

    #[inline]
    pub fn minus(self, other: Set) -> Set {
        Set(self.0 & !other.0)
    }

    /// Complement relative to `universe`.
    #[inline]
    pub fn complement_in(self, universe: Set) -> Set {
        Set(universe.0 & !self.0)
    }

    #[inline]
    pub fn is_subset(self, other: Set) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn intersects(self, other: Set) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Least element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// All subsets of `self`, in increasing numeric order, starting with the
    /// empty set and ending with `self`.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// All subsets of `{0, .., n-1}` in increasing numeric order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = Set> + Clone {
        debug_assert!(n < 64);
        (0..1u64 << n).map(Set)
    }

    /// All supersets of `self` inside `universe`.
    pub fn supersets_in(self, universe: Set) -> impl Iterator<Item = Set> {
        let base = self;
        universe
            .minus(self)
            .subsets()
            .map(move |extra| base.union(extra))
    }
}

impl fmt::Debug for Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the elements of a [`Set`], ascending.
#[derive(Clone)]
pub struct Elements(u64);

impl Iterator for Elements {
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

impl ExactSizeIterator for Elements {}

/// Submask enumeration in increasing order.
#[derive(Clone)]
pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = Set;

    fn next(&mut self) -> Option<Set> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            // next submask above `cur`
            Some(((cur | !self.mask).wrapping_add(1)) & self.mask)
        };
        Some(Set(cur))
    }
}

/// A set of subsets of a universe with at most [`MAX_FAMILY_ELEMENTS`]
/// elements, one bit per subset.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Family([u64; 4]);

impl Family {
    pub const EMPTY: Family = Family([0; 4]);

    pub fn from_sets<I: IntoIterator<Item = Set>>(sets: I) -> Family {
        let mut fam = Family::EMPTY;
        for s in sets {
            fam.insert(s);
        }
        fam
    }

    /// Every subset of `universe`.
    pub fn power_set(universe: Set) -> Family {
        Family::from_sets(universe.subsets())
    }

    /// `{ A ⊆ universe : base ⊆ A }`.
    pub fn principal_filter(base: Set, universe: Set) -> Family {
        Family::from_sets(base.supersets_in(universe))
    }

    #[inline]
    pub fn contains(&self, s: Set) -> bool {
        let i = s.index();
        debug_assert!(i < 256);
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, s: Set) {
        let i = s.index();
        assert!(i < 256, "family member outside an 8-element universe");
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, s: Set) {
        let i = s.index();
        if i < 256 {
            self.0[i >> 6] &= !(1u64 << (i & 63));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union(&self, other: &Family) -> Family {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a |= b;
        }
        out
    }

    pub fn inter(&self, other: &Family) -> Family {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a &= b;
        }
        out
    }

    pub fn is_subset(&self, other: &Family) -> bool {
        self.0.iter().zip(other.0).all(|(a, b)| a & !b == 0)
    }

    /// Members in increasing numeric order.
    pub fn iter(&self) -> impl Iterator<Item = Set> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, bits)| Elements(*bits).map(move |b| Set(((w << 6) | b) as u64)))
    }

    /// Intersection of all members, `None` for the empty family.
    pub fn meet(&self) -> Option<Set> {
        self.iter().reduce(Set::inter)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submask_enumeration_is_complete_and_ordered() {
        let mask = Set(0b1011);
        let subs: Vec<u64> = mask.subsets().map(Set::bits).collect();
        assert_eq!(subs, vec![0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(Set::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn supersets_of_singleton() {
        let sups: Vec<Set> = Set::singleton(0).supersets_in(Set::full(4)).collect();
        assert_eq!(sups.len(), 8);
        assert!(sups.iter().all(|s| s.contains(0)));
    }

    #[test]
    fn family_basics() {
        let mut fam = Family::EMPTY;
        fam.insert(Set(0b11));
        fam.insert(Set(255));
        fam.insert(Set(0b01));
        assert!(fam.contains(Set(255)));
        assert!(!fam.contains(Set(0b10)));
        assert_eq!(fam.len(), 3);
        assert_eq!(fam.meet(), Some(Set(0b01)));
        assert_eq!(
            fam.iter().collect::<Vec<_>>(),
            vec![Set(0b01), Set(0b11), Set(255)]
        );
        assert_eq!(Family::EMPTY.meet(), None);
    }

    #[test]
    fn principal_filter_size() {
        let fam = Family::principal_filter(Set(0b001), Set(0b111));
        assert_eq!(fam.len(), 4);
    }
}
