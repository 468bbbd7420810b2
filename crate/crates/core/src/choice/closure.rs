//! Closure conditions on a domain `Y ⊆ P(U)`.

use std::fmt;

use crate::set::{Family, Set};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Closure {
    /// `(∩)`: closed under binary intersection.
    Intersection,
    /// `(∪)`: closed under binary union.
    Union,
    /// `(−)`: closed under set difference.
    Difference,
    /// Contains every singleton.
    Singletons,
    /// The domain is all of `P(U)`.
    PowerSet,
}

impl Closure {
    pub fn symbol(self) -> &'static str {
        match self {
            Closure::Intersection => "(∩)",
            Closure::Union => "(∪)",
            Closure::Difference => "(−)",
            Closure::Singletons => "sing.",
            Closure::PowerSet => "Y=P(U)",
        }
    }
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// First pair (or single set, repeated) showing the closure fails.
///
/// For [`Closure::Singletons`] and [`Closure::PowerSet`] both components are
/// the missing set.
pub fn closure_witness(
    n: usize,
    in_domain: impl Fn(Set) -> bool,
    closure: Closure,
) -> Option<(Set, Set)> {
    let all = Set::full(n);
    let members = || all.subsets().filter(|&x| in_domain(x));
    let binary = |op: fn(Set, Set) -> Set| {
        members().find_map(|x| members().find(|&y| !in_domain(op(x, y))).map(|y| (x, y)))
    };
    match closure {
        Closure::Intersection => binary(Set::inter),
        Closure::Union => binary(Set::union),
        Closure::Difference => binary(Set::minus),
        Closure::Singletons => (0..n)
            .map(Set::singleton)
            .find(|&s| !in_domain(s))
            .map(|s| (s, s)),
        Closure::PowerSet => all.subsets().find(|&s| !in_domain(s)).map(|s| (s, s)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureReport {
    pub intersection: bool,
    pub union: bool,
    pub difference: bool,
    pub singletons: bool,
}

pub fn check_closure(n: usize, domain: &Family) -> ClosureReport {
    let holds = |c| closure_witness(n, |x| domain.contains(x), c).is_none();
    ClosureReport {
        intersection: holds(Closure::Intersection),
        union: holds(Closure::Union),
        difference: holds(Closure::Difference),
        singletons: holds(Closure::Singletons),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_set_is_closed() {
        let r = check_closure(3, &Family::power_set(Set::full(3)));
        assert!(r.intersection && r.union && r.difference && r.singletons);
    }

    #[test]
    fn trivial_domain() {
        let y = Family::from_sets([Set::EMPTY, Set::full(2)]);
        let r = check_closure(2, &y);
        assert!(r.intersection && r.union && r.difference);
        assert!(!r.singletons);
    }

    #[test]
    fn singletons_only() {
        let y = Family::from_sets((0..3).map(Set::singleton));
        let r = check_closure(3, &y);
        assert!(!r.union && r.singletons);
        assert_eq!(
            closure_witness(3, |x| y.contains(x), Closure::Union),
            Some((Set(1), Set(2)))
        );
    }
}
