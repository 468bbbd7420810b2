//! Preferential structures with copies over a finite base set.
//!
//! Copies are kept sorted by `(point, index)` and the strict relation is
//! stored as one bitset per copy: `below[c]` holds every `d` with `d ≺ c`.
//! A point may instead carry an ω marker, standing for a descending chain of
//! copies of that point placed above every explicit copy. Marked points have
//! no explicit copies, never occur in `μ`, and leave rankedness of the
//! explicit part unchanged, since chain copies are comparable to everything.

use std::fmt;

use thiserror::Error;

use crate::choice::{check_property, ChoiceFunction, Property, PropertyReport};
use crate::set::{Family, Set};

/// Explicit copies are limited by the bitset width.
pub const MAX_COPIES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CopyRef {
    pub point: usize,
    pub index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrefError {
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("{0} points exceed the supported maximum of {max}", max = crate::set::MAX_ELEMENTS)]
    TooManyPoints(usize),
    #[error("{0} copies exceed the supported maximum of {MAX_COPIES}")]
    TooManyCopies(usize),
    #[error("copy refers to unknown point #{0}")]
    UnknownPoint(usize),
    #[error("copy {0:?} listed twice")]
    DuplicateCopy(CopyRef),
    #[error("edge refers to unlisted copy {0:?}")]
    UnknownCopy(CopyRef),
    #[error("relation is not irreflexive at {0:?}")]
    Reflexive(CopyRef),
    #[error("point #{0} has both explicit copies and an ω chain")]
    OmegaWithCopies(usize),
    #[error("relation is not ranked: {0}")]
    NotRanked(RankWitness),
    #[error("relation has a cycle through {0:?}")]
    Cycle(CopyRef),
    #[error("structure has {0} points, too many for a choice function")]
    TooManyForChoice(usize),
}

/// `x ⊥ y` yet `z` is related to `x` and not in the same way to `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankWitness {
    pub x: CopyRef,
    pub y: CopyRef,
    pub z: CopyRef,
    /// True if `z ≺ x`, false if `x ≺ z`.
    pub z_below: bool,
}

impl fmt::Display for RankWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y, z) = (self.x, self.y, self.z);
        if self.z_below {
            write!(
                f,
                "{z:?} below {x:?} but not below {y:?}, which is incomparable to it"
            )
        } else {
            write!(
                f,
                "{z:?} above {x:?} but not above {y:?}, which is incomparable to it"
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefStructure {
    points: Vec<String>,
    copies: Vec<CopyRef>,
    omega: Set,
    below: Vec<u64>,
}

impl PrefStructure {
    /// `edges` are pairs `(lower, upper)` meaning `lower ≺ upper`.
    pub fn new(
        points: Vec<String>,
        copies: impl IntoIterator<Item = CopyRef>,
        omega: Set,
        edges: impl IntoIterator<Item = (CopyRef, CopyRef)>,
    ) -> Result<PrefStructure, PrefError> {
        if points.len() > crate::set::MAX_ELEMENTS {
            return Err(PrefError::TooManyPoints(points.len()));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(PrefError::DuplicatePoint(p.clone()));
            }
        }
        if let Some(p) = omega.iter().find(|&p| p >= points.len()) {
            return Err(PrefError::UnknownPoint(p));
        }
        let mut copies: Vec<CopyRef> = copies.into_iter().collect();
        copies.sort_unstable();
        if copies.len() > MAX_COPIES {
            return Err(PrefError::TooManyCopies(copies.len()));
        }
        for (k, c) in copies.iter().enumerate() {
            if c.point >= points.len() {
                return Err(PrefError::UnknownPoint(c.point));
            }
            if k > 0 && copies[k - 1] == *c {
                return Err(PrefError::DuplicateCopy(*c));
            }
            if omega.contains(c.point) {
                return Err(PrefError::OmegaWithCopies(c.point));
            }
        }
        let pos = |c: CopyRef| {
            copies
                .binary_search(&c)
                .map_err(|_| PrefError::UnknownCopy(c))
        };
        let mut below = vec![0u64; copies.len()];
        for (lo, hi) in edges {
            let (l, h) = (pos(lo)?, pos(hi)?);
            if l == h {
                return Err(PrefError::Reflexive(lo));
            }
            below[h] |= 1 << l;
        }
        Ok(PrefStructure {
            points,
            copies,
            omega,
            below,
        })
    }

    /// One copy per point, index 0, with `less(a, b)` meaning `a ≺ b`.
    pub fn single_copy(
        points: Vec<String>,
        less: impl Fn(usize, usize) -> bool,
    ) -> Result<PrefStructure, PrefError> {
        let n = points.len();
        let c = |p| CopyRef { point: p, index: 0 };
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| less(a, b))
            .map(|(a, b)| (c(a), c(b)))
            .collect();
        PrefStructure::new(points, (0..n).map(c), Set::EMPTY, edges)
    }

    /// Points named `0..n`.
    pub fn unnamed_points(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn point_set(&self) -> Set {
        Set::full(self.points.len())
    }

    pub fn copies(&self) -> &[CopyRef] {
        &self.copies
    }

    pub fn omega(&self) -> Set {
        self.omega
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    /// Pairs `(lower, upper)` in copy order.
    pub fn edges(&self) -> impl Iterator<Item = (CopyRef, CopyRef)> + '_ {
        (0..self.copies.len()).flat_map(move |h| {
            Set(self.below[h])
                .iter()
                .map(move |l| (self.copies[l], self.copies[h]))
        })
    }

    /// `a ≺ b` between explicit copies.
    pub fn less(&self, a: CopyRef, b: CopyRef) -> bool {
        match (self.copies.binary_search(&a), self.copies.binary_search(&b)) {
            (Ok(i), Ok(j)) => self.lt(i, j),
            _ => false,
        }
    }

    fn lt(&self, i: usize, j: usize) -> bool {
        self.below[j] >> i & 1 == 1
    }

    /// Points with at least one explicit copy.
    pub fn points_with_copies(&self) -> Set {
        Set::from_elements(self.copies.iter().map(|c| c.point))
    }

    /// Explicit copies whose point lies in `x`, as a copy bitset.
    fn copies_in(&self, x: Set) -> u64 {
        self.copies
            .iter()
            .enumerate()
            .filter(|(_, c)| x.contains(c.point))
            .fold(0, |acc, (k, _)| acc | 1 << k)
    }

    /// `μ(X)`: points of `X` with a copy not attacked from within `X`.
    pub fn mu(&self, x: Set) -> Set {
        let inside = self.copies_in(x);
        Set::from_elements(
            Set(inside)
                .iter()
                .filter(|&k| self.below[k] & inside == 0)
                .map(|k| self.copies[k].point),
        )
    }

    /// The choice function `X ↦ μ(X)` on `domain`.
    pub fn choice_function(&self, domain: &Family) -> Result<ChoiceFunction, PrefError> {
        if self.points.len() > crate::set::MAX_FAMILY_ELEMENTS {
            return Err(PrefError::TooManyForChoice(self.points.len()));
        }
        let entries = domain.iter().map(|x| (x, self.mu(x)));
        Ok(ChoiceFunction::new(self.points.clone(), entries).expect("μ stays inside the points"))
    }

    /// `Y`-smoothness, copy version; the first failing `(X, point)` in the
    /// order of `y` and then of copies.
    pub fn is_smooth(&self, y: impl IntoIterator<Item = Set>) -> Result<(), SmoothWitness> {
        for x in y {
            let inside = self.copies_in(x);
            let minimal = Set(inside)
                .iter()
                .filter(|&k| self.below[k] & inside == 0)
                .fold(0u64, |acc, k| acc | 1 << k);
            for k in Set(inside).iter() {
                let attackers = self.below[k] & inside;
                if attackers != 0 && attackers & minimal == 0 {
                    return Err(SmoothWitness {
                        set: x,
                        point: self.copies[k].point,
                        copy: Some(self.copies[k]),
                    });
                }
            }
            // every explicit copy sits below the chains
            if let Some(c) = self.omega.inter(x).first() {
                if minimal == 0 {
                    return Err(SmoothWitness {
                        set: x,
                        point: c,
                        copy: None,
                    });
                }
            }
        }
        Ok(())
    }

    /// Condition (2) of rankedness on the explicit copies.
    pub fn is_ranked(&self) -> Result<(), RankWitness> {
        let n = self.copies.len();
        for x in 0..n {
            for y in 0..n {
                if x == y || self.lt(x, y) || self.lt(y, x) {
                    continue;
                }
                for z in 0..n {
                    let z_below = self.lt(z, x) && !self.lt(z, y);
                    if z_below || (self.lt(x, z) && !self.lt(y, z)) {
                        return Err(RankWitness {
                            x: self.copies[x],
                            y: self.copies[y],
                            z: self.copies[z],
                            z_below,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Some copy on a cycle, if any.
    pub fn find_cycle(&self) -> Option<CopyRef> {
        // below⁺ by iterated composition
        let mut reach = self.below.clone();
        loop {
            let next: Vec<u64> = reach
                .iter()
                .map(|&r| Set(r).iter().fold(r, |acc, k| acc | reach[k]))
                .collect();
            if next == reach {
                break;
            }
            reach = next;
        }
        (0..reach.len())
            .find(|&k| reach[k] >> k & 1 == 1)
            .map(|k| self.copies[k])
    }

    pub fn is_transitive(&self) -> Result<(), (CopyRef, CopyRef, CopyRef)> {
        let n = self.copies.len();
        for z in 0..n {
            for y in Set(self.below[z]).iter() {
                for x in Set(self.below[y]).iter() {
                    if !self.lt(x, z) {
                        return Err((self.copies[x], self.copies[y], self.copies[z]));
                    }
                }
            }
        }
        Ok(())
    }

    /// Ranks as `⊥`-classes ordered by `≺`.
    pub fn rank_of(&self) -> Result<RankAssignment, PrefError> {
        self.is_ranked().map_err(PrefError::NotRanked)?;
        if let Some(c) = self.find_cycle() {
            return Err(PrefError::Cycle(c));
        }
        // in a ranked acyclic relation the number of copies below determines
        // the class
        let depth: Vec<u32> = self.below.iter().map(|b| b.count_ones()).collect();
        let mut levels = depth.clone();
        levels.sort_unstable();
        levels.dedup();
        let rank: Vec<usize> = depth
            .iter()
            .map(|d| levels.binary_search(d).expect("level present"))
            .collect();
        let n = self.copies.len();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(
                    self.lt(i, j),
                    rank[i] < rank[j],
                    "ranked acyclic relation must match its levels"
                );
            }
        }
        Ok(RankAssignment {
            ranks: levels.len(),
            rank: self.copies.iter().copied().zip(rank).collect(),
        })
    }

    /// Transitivity of a ranked cycle-free relation.
    pub fn check_rank_trans(&self) -> RankTrans {
        if self.is_ranked().is_err() || self.find_cycle().is_some() {
            return RankTrans::Skipped;
        }
        match self.is_transitive() {
            Ok(()) => RankTrans::Transitive,
            Err(w) => RankTrans::NotTransitive(w),
        }
    }

    /// The laws ranked structures satisfy, evaluated on `μ` over `y`.
    pub fn check_rank_hold(&self, y: &Family) -> Result<Vec<PropertyReport>, PrefError> {
        self.is_ranked().map_err(PrefError::NotRanked)?;
        let cf = self.choice_function(y)?;
        Ok(RANK_HOLD.iter().map(|&p| check_property(&cf, p)).collect())
    }
}

/// Laws checked by [`PrefStructure::check_rank_hold`].
pub const RANK_HOLD: [Property; 9] = [
    Property::Subset,
    Property::Eq,
    Property::Pr,
    Property::EqPrime,
    Property::Par,
    Property::Cup,
    Property::CupPrime,
    Property::In,
    Property::RatM,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothWitness {
    pub set: Set,
    pub point: usize,
    /// The offending copy; `None` for an ω chain.
    pub copy: Option<CopyRef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankTrans {
    /// Not ranked or not cycle-free.
    Skipped,
    Transitive,
    NotTransitive((CopyRef, CopyRef, CopyRef)),
}

/// `Ω = {0, .., ranks-1}` with the usual order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankAssignment {
    pub ranks: usize,
    pub rank: Vec<(CopyRef, usize)>,
}

impl RankAssignment {
    pub fn get(&self, c: CopyRef) -> Option<usize> {
        self.rank.iter().find(|(d, _)| *d == c).map(|&(_, r)| r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(point: usize, index: u32) -> CopyRef {
        CopyRef { point, index }
    }

    fn abc() -> Vec<String> {
        vec!["a".into(), "b".into(), "c".into()]
    }

    #[test]
    fn minimal_single_copies() {
        let s = PrefStructure::single_copy(abc()[..2].to_vec(), |x, y| x == 0 && y == 1).unwrap();
        assert_eq!(s.mu(Set(0b11)), Set(0b01));
        assert_eq!(s.mu(Set::EMPTY), Set::EMPTY);
    }

    #[test]
    fn unattacked_copy_survives() {
        let s = PrefStructure::new(
            abc()[..2].to_vec(),
            [c(0, 1), c(1, 1), c(1, 2)],
            Set::EMPTY,
            [(c(0, 1), c(1, 1))],
        )
        .unwrap();
        assert_eq!(s.mu(Set(0b11)), Set(0b11));
    }

    #[test]
    fn construction_errors() {
        let pts = abc();
        assert_eq!(
            PrefStructure::new(pts.clone(), [c(0, 0)], Set::EMPTY, [(c(0, 0), c(0, 0))]),
            Err(PrefError::Reflexive(c(0, 0)))
        );
        assert_eq!(
            PrefStructure::new(pts.clone(), [c(5, 0)], Set::EMPTY, []),
            Err(PrefError::UnknownPoint(5))
        );
        assert_eq!(
            PrefStructure::new(pts.clone(), [c(0, 0)], Set::singleton(0), []),
            Err(PrefError::OmegaWithCopies(0))
        );
        assert_eq!(
            PrefStructure::new(pts, [c(0, 0)], Set::EMPTY, [(c(0, 0), c(1, 0))]),
            Err(PrefError::UnknownCopy(c(1, 0)))
        );
    }

    #[test]
    fn omega_chain_is_never_minimal_and_breaks_smoothness() {
        let s = PrefStructure::new(abc(), [c(0, 0), c(1, 0)], Set::singleton(2), []).unwrap();
        assert_eq!(s.mu(Set(0b100)), Set::EMPTY);
        assert_eq!(s.mu(Set(0b101)), Set(0b001));
        assert!(s.is_smooth([Set(0b101)]).is_ok());
        let w = s.is_smooth([Set(0b001), Set(0b100)]).unwrap_err();
        assert_eq!((w.set, w.point, w.copy), (Set(0b100), 2, None));
        assert!(s.is_smooth([Set::EMPTY]).is_ok());
    }

    #[test]
    fn cycles_are_not_smooth() {
        let s =
            PrefStructure::single_copy(abc(), |x, y| (x, y) == (0, 1) || (x, y) == (1, 0)).unwrap();
        assert_eq!(s.find_cycle(), Some(c(0, 0)));
        assert!(s.is_smooth([Set(0b011)]).is_err());
        assert_eq!(s.check_rank_trans(), RankTrans::Skipped);
    }

    #[test]
    fn rankedness() {
        let total = PrefStructure::single_copy(abc(), |x, y| x < y).unwrap();
        assert!(total.is_ranked().is_ok());
        let empty = PrefStructure::single_copy(abc(), |_, _| false).unwrap();
        assert!(empty.is_ranked().is_ok());
        let s = PrefStructure::single_copy(abc(), |x, y| (x, y) == (0, 2)).unwrap();
        assert_eq!(
            s.is_ranked(),
            Err(RankWitness {
                x: c(0, 0),
                y: c(1, 0),
                z: c(2, 0),
                z_below: false
            })
        );
        assert!(matches!(s.rank_of(), Err(PrefError::NotRanked(_))));
    }

    #[test]
    fn ranks() {
        // a ⊥ b, both below c
        let s = PrefStructure::single_copy(abc(), |x, y| y == 2 && x != 2).unwrap();
        let r = s.rank_of().unwrap();
        assert_eq!(r.ranks, 2);
        assert_eq!(
            (r.get(c(0, 0)), r.get(c(1, 0)), r.get(c(2, 0))),
            (Some(0), Some(0), Some(1))
        );
        let chain = PrefStructure::single_copy(abc(), |x, y| x < y).unwrap();
        assert_eq!(chain.rank_of().unwrap().ranks, 3);
        assert_eq!(chain.check_rank_trans(), RankTrans::Transitive);
        let flat = PrefStructure::single_copy(abc(), |_, _| false).unwrap();
        assert_eq!(flat.rank_of().unwrap().ranks, 1);
    }

    #[test]
    fn rank_hold_on_chain() {
        let s = PrefStructure::single_copy(abc(), |x, y| x < y).unwrap();
        let reports = s.check_rank_hold(&Family::power_set(Set::full(3))).unwrap();
        assert!(reports.iter().all(|r| r.verdict.ok()), "{reports:?}");
        let unranked = PrefStructure::single_copy(abc(), |x, y| (x, y) == (0, 2)).unwrap();
        assert!(unranked.check_rank_hold(&Family::EMPTY).is_err());
    }
}
