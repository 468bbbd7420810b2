//! Abstract choice functions `f : Y -> P(U)` over a finite universe, their
//! algebraic laws, closure conditions on the domain, and the sweep deciding
//! which combinations of laws imply which.

mod closure;
pub mod interdep;
mod props;

use std::fmt;

use thiserror::Error;

use crate::set::{Family, Set, MAX_FAMILY_ELEMENTS};

pub use closure::{check_closure, closure_witness, Closure, ClosureReport};
pub use interdep::{
    check_interdependency, row, rows, InterdepOptions, InterdepReport, Row, RowKind, RowOutcome,
    SmallWitness,
};
pub use props::{
    check_all, check_property, holds, Counterexample, Property, PropertyReport, UnknownProperty,
    Verdict,
};

/// Read access shared by all choice-function representations.
pub trait Choice {
    /// Number of elements of `U`; subsets are masks below `2^n`.
    fn universe_size(&self) -> usize;
    fn in_domain(&self, x: Set) -> bool;
    /// `f(x)`; only meaningful for `x` in the domain.
    fn image(&self, x: Set) -> Set;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChoiceError {
    #[error("universe of {0} elements exceeds the supported maximum of {MAX_FAMILY_ELEMENTS}")]
    TooLarge(usize),
    #[error("duplicate universe element `{0}`")]
    DuplicateElement(String),
    #[error("unknown universe element `{0}`")]
    UnknownElement(String),
    #[error("set {0:?} given twice")]
    DuplicateArgument(Set),
    #[error("value {value:?} at {x:?} leaves the universe")]
    OutOfRange { x: Set, value: Set },
}

/// A choice function with named universe elements, defined exactly on its
/// domain.
#[derive(Clone, PartialEq, Eq)]
pub struct ChoiceFunction {
    universe: Vec<String>,
    values: Vec<Option<Set>>,
}

impl ChoiceFunction {
    /// Build from `(X, f(X))` pairs; sets not listed are outside the domain.
    pub fn new(
        universe: Vec<String>,
        entries: impl IntoIterator<Item = (Set, Set)>,
    ) -> Result<ChoiceFunction, ChoiceError> {
        let n = universe.len();
        if n > MAX_FAMILY_ELEMENTS {
            return Err(ChoiceError::TooLarge(n));
        }
        let mut seen = std::collections::HashSet::new();
        for u in &universe {
            if !seen.insert(u) {
                return Err(ChoiceError::DuplicateElement(u.clone()));
            }
        }
        let all = Set::full(n);
        let mut values = vec![None; 1 << n];
        for (x, v) in entries {
            if !x.is_subset(all) || !v.is_subset(all) {
                return Err(ChoiceError::OutOfRange { x, value: v });
            }
            if values[x.index()].replace(v).is_some() {
                return Err(ChoiceError::DuplicateArgument(x));
            }
        }
        Ok(ChoiceFunction { universe, values })
    }

    /// Unnamed universe `0..n` with `f` defined on every member of `domain`.
    pub fn from_fn(n: usize, domain: &Family, mut f: impl FnMut(Set) -> Set) -> ChoiceFunction {
        let universe = (0..n).map(|i| i.to_string()).collect();
        ChoiceFunction::new(universe, domain.iter().map(|x| (x, f(x))))
            .expect("values inside the universe")
    }

    /// Unnamed universe `0..n`, domain `P(U)`.
    pub fn total(n: usize, f: impl FnMut(Set) -> Set) -> ChoiceFunction {
        ChoiceFunction::from_fn(n, &Family::power_set(Set::full(n)), f)
    }

    /// The identity on `P(U)`.
    pub fn identity(n: usize) -> ChoiceFunction {
        ChoiceFunction::total(n, |x| x)
    }

    /// Minimal elements under a strict relation: `x` is chosen from `X`
    /// unless some `y ∈ X` has `less(y, x)`.
    pub fn minimal(n: usize, less: impl Fn(usize, usize) -> bool) -> ChoiceFunction {
        ChoiceFunction::total(n, |x| {
            Set::from_elements(x.iter().filter(|&a| !x.iter().any(|b| less(b, a))))
        })
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn universe_set(&self) -> Set {
        Set::full(self.universe.len())
    }

    pub fn get(&self, x: Set) -> Option<Set> {
        self.values.get(x.index()).copied().flatten()
    }

    pub fn domain(&self) -> Family {
        Family::from_sets(self.entries().map(|(x, _)| x))
    }

    /// `(X, f(X))` in increasing order of `X`.
    pub fn entries(&self) -> impl Iterator<Item = (Set, Set)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (Set(i as u64), v)))
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|u| u == name)
    }

    pub fn element_names(&self, s: Set) -> Vec<String> {
        s.iter().map(|i| self.universe[i].clone()).collect()
    }

    /// Same function with the domain cut down to members of `keep`.
    pub fn restrict(&self, keep: &Family) -> ChoiceFunction {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v.filter(|_| keep.contains(Set(i as u64))))
            .collect();
        ChoiceFunction {
            universe: self.universe.clone(),
            values,
        }
    }
}

impl Choice for ChoiceFunction {
    fn universe_size(&self) -> usize {
        self.universe.len()
    }

    #[inline]
    fn in_domain(&self, x: Set) -> bool {
        matches!(self.values.get(x.index()), Some(Some(_)))
    }

    #[inline]
    fn image(&self, x: Set) -> Set {
        self.values[x.index()].unwrap_or(Set::EMPTY)
    }
}

impl fmt::Debug for ChoiceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, v) in self.entries() {
            m.entry(&x, &v);
        }
        m.finish()
    }
}

/// Compact choice function over at most five elements, used by sweeps.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SmallChoice {
    pub n: usize,
    /// Bit `X` set iff `X` is in the domain.
    pub dom: u32,
    pub f: [u8; 32],
}

impl SmallChoice {
    pub const MAX_N: usize = 5;

    pub fn new(n: usize) -> SmallChoice {
        assert!(n <= Self::MAX_N);
        SmallChoice {
            n,
            dom: 0,
            f: [0; 32],
        }
    }

    pub fn set(&mut self, x: Set, v: Set) {
        self.dom |= 1 << x.index();
        self.f[x.index()] = v.bits() as u8;
    }

    /// Domain cut down to the masks in `keep`.
    pub fn restricted(&self, keep: u32) -> SmallChoice {
        SmallChoice {
            dom: self.dom & keep,
            ..*self
        }
    }

    pub fn to_choice_function(&self) -> ChoiceFunction {
        let universe = (0..self.n).map(|i| i.to_string()).collect();
        let entries = (0..1u64 << self.n)
            .map(Set)
            .filter(|&x| self.in_domain(x))
            .map(|x| (x, self.image(x)));
        ChoiceFunction::new(universe, entries).expect("small choice is well formed")
    }
}

impl Choice for SmallChoice {
    fn universe_size(&self) -> usize {
        self.n
    }

    #[inline]
    fn in_domain(&self, x: Set) -> bool {
        x.bits() < 32 && self.dom >> x.bits() & 1 == 1
    }

    #[inline]
    fn image(&self, x: Set) -> Set {
        Set(u64::from(self.f[x.index()]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_access() {
        let cf = ChoiceFunction::new(
            vec!["a".into(), "b".into()],
            [(Set(0b11), Set(0b01)), (Set(0b01), Set(0b01))],
        )
        .unwrap();
        assert_eq!(cf.get(Set(0b11)), Some(Set(0b01)));
        assert_eq!(cf.get(Set(0b10)), None);
        assert!(!cf.in_domain(Set::EMPTY));
        assert_eq!(cf.domain().len(), 2);
        assert_eq!(cf.element_names(Set(0b11)), vec!["a", "b"]);
        assert_eq!(
            ChoiceFunction::new(vec!["a".into()], [(Set(1), Set(1)), (Set(1), Set(0))]),
            Err(ChoiceError::DuplicateArgument(Set(1)))
        );
        assert!(matches!(
            ChoiceFunction::new(vec!["a".into()], [(Set(1), Set(2))]),
            Err(ChoiceError::OutOfRange { .. })
        ));
    }

    #[test]
    fn small_round_trip() {
        let mut s = SmallChoice::new(2);
        s.set(Set(0b11), Set(0b10));
        s.set(Set::EMPTY, Set::EMPTY);
        let cf = s.to_choice_function();
        assert_eq!(cf.get(Set(0b11)), Some(Set(0b10)));
        assert_eq!(cf.domain().len(), 2);
        assert!(!s.restricted(0b1).in_domain(Set(0b11)));
    }

    #[test]
    fn minimal_elements() {
        // 1 < 0
        let cf = ChoiceFunction::minimal(2, |a, b| a == 1 && b == 0);
        assert_eq!(cf.get(Set(0b11)), Some(Set(0b10)));
        assert_eq!(cf.get(Set(0b01)), Some(Set(0b01)));
        assert_eq!(cf.get(Set::EMPTY), Some(Set::EMPTY));
    }
}
