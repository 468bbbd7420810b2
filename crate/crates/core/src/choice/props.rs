//! The algebraic laws on choice functions.
//!
//! Each law quantifies over members of the domain (and, for a few, over
//! arbitrary subsets or elements of `U`). An instance whose auxiliary sets
//! are missing from the domain (e.g. `X ∪ Y` for `(μOR)`) is skipped and
//! counted separately. A law passes when no instance fails and at least one
//! was checked; with nothing checked it is vacuous.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::Choice;
use crate::set::Set;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Subset,
    Empty,
    EmptyFin,
    Pr,
    PrPrime,
    Or,
    WOr,
    DisjOr,
    Cut,
    Cm,
    ResM,
    Cum,
    SubsetSupset,
    RatM,
    Eq,
    EqPrime,
    Par,
    Cup,
    CupPrime,
    In,
}

impl Property {
    pub const ALL: [Property; 20] = [
        Property::Subset,
        Property::Empty,
        Property::EmptyFin,
        Property::Pr,
        Property::PrPrime,
        Property::Or,
        Property::WOr,
        Property::DisjOr,
        Property::Cut,
        Property::Cm,
        Property::ResM,
        Property::Cum,
        Property::SubsetSupset,
        Property::RatM,
        Property::Eq,
        Property::EqPrime,
        Property::Par,
        Property::Cup,
        Property::CupPrime,
        Property::In,
    ];

    /// ASCII identifier used on the command line and in JSON.
    pub fn key(self) -> &'static str {
        match self {
            Property::Subset => "subset",
            Property::Empty => "empty",
            Property::EmptyFin => "empty-fin",
            Property::Pr => "pr",
            Property::PrPrime => "pr'",
            Property::Or => "or",
            Property::WOr => "wor",
            Property::DisjOr => "disjor",
            Property::Cut => "cut",
            Property::Cm => "cm",
            Property::ResM => "resm",
            Property::Cum => "cum",
            Property::SubsetSupset => "subset-supset",
            Property::RatM => "ratm",
            Property::Eq => "eq",
            Property::EqPrime => "eq'",
            Property::Par => "par",
            Property::Cup => "cup",
            Property::CupPrime => "cup'",
            Property::In => "in",
        }
    }

    /// Conventional symbol, e.g. `(μPR)`.
    pub fn symbol(self) -> &'static str {
        match self {
            Property::Subset => "(μ⊆)",
            Property::Empty => "(μ∅)",
            Property::EmptyFin => "(μ∅fin)",
            Property::Pr => "(μPR)",
            Property::PrPrime => "(μPR′)",
            Property::Or => "(μOR)",
            Property::WOr => "(μwOR)",
            Property::DisjOr => "(μdisjOR)",
            Property::Cut => "(μCUT)",
            Property::Cm => "(μCM)",
            Property::ResM => "(μResM)",
            Property::Cum => "(μCUM)",
            Property::SubsetSupset => "(μ⊆⊇)",
            Property::RatM => "(μRatM)",
            Property::Eq => "(μ=)",
            Property::EqPrime => "(μ=′)",
            Property::Par => "(μ∥)",
            Property::Cup => "(μ∪)",
            Property::CupPrime => "(μ∪′)",
            Property::In => "(μ∈)",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown property `{0}`")]
pub struct UnknownProperty(pub String);

impl FromStr for Property {
    type Err = UnknownProperty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bare = |p: Property| {
            let sym = p.symbol();
            sym[1..sym.len() - 1].to_string()
        };
        Property::ALL
            .into_iter()
            .find(|&p| {
                t.eq_ignore_ascii_case(p.key())
                    || t == p.symbol()
                    || t == bare(p)
                    || t.strip_prefix("mu")
                        .is_some_and(|r| r.eq_ignore_ascii_case(p.key()))
            })
            .ok_or_else(|| UnknownProperty(s.to_string()))
    }
}

/// The objects refuting one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counterexample {
    pub labels: &'static [&'static str],
    pub sets: [Set; 2],
    /// The element `a` of `(μ∈)`.
    pub element: Option<usize>,
}

impl Counterexample {
    fn one(x: Set) -> Counterexample {
        Counterexample {
            labels: &["X"],
            sets: [x, Set::EMPTY],
            element: None,
        }
    }

    fn two(x: Set, y: Set) -> Counterexample {
        Counterexample {
            labels: &["X", "Y"],
            sets: [x, y],
            element: None,
        }
    }

    /// `(label, set)` pairs in order.
    pub fn named_sets(&self) -> impl Iterator<Item = (&'static str, Set)> + '_ {
        self.labels.iter().copied().zip(self.sets)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Vacuous,
    Fail,
}

impl Verdict {
    /// Not refuted.
    pub fn ok(self) -> bool {
        self != Verdict::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    pub checked: u64,
    pub skipped: u64,
    pub counterexample: Option<Counterexample>,
}

enum Outcome {
    Checked,
    Skipped,
    Failed(Counterexample),
}

/// Which auxiliary set a pair instance needs in the domain.
#[derive(Clone, Copy)]
enum Needs {
    Nothing,
    Union,
    Inter,
}

fn domain<C: Choice + ?Sized>(c: &C) -> impl Iterator<Item = Set> + '_ {
    (0..1u64 << c.universe_size())
        .map(Set)
        .filter(move |&x| c.in_domain(x))
}

/// Run `sink` on every instance; stops early and returns false once
/// `sink` does.
fn scan<C, S>(c: &C, p: Property, sink: &mut S) -> bool
where
    C: Choice + ?Sized,
    S: FnMut(Outcome) -> bool,
{
    let f = |x: Set| c.image(x);
    let single = |sink: &mut S, ok: &dyn Fn(Set) -> bool| {
        for x in domain(c) {
            let o = if ok(x) {
                Outcome::Checked
            } else {
                Outcome::Failed(Counterexample::one(x))
            };
            if !sink(o) {
                return false;
            }
        }
        true
    };
    let pairs = |sink: &mut S, needs: Needs, ok: &dyn Fn(Set, Set) -> bool| {
        for x in domain(c) {
            for y in domain(c) {
                let o = match needs {
                    Needs::Union if !c.in_domain(x.union(y)) => Outcome::Skipped,
                    Needs::Inter if !c.in_domain(x.inter(y)) => Outcome::Skipped,
                    _ if ok(x, y) => Outcome::Checked,
                    _ => Outcome::Failed(Counterexample::two(x, y)),
                };
                if !sink(o) {
                    return false;
                }
            }
        }
        true
    };
    match p {
        Property::Subset => single(sink, &|x| f(x).is_subset(x)),
        Property::Empty | Property::EmptyFin => single(sink, &|x| x.is_empty() || !f(x).is_empty()),
        Property::Pr => pairs(sink, Needs::Nothing, &|x, y| {
            !x.is_subset(y) || f(y).inter(x).is_subset(f(x))
        }),
        Property::PrPrime => pairs(sink, Needs::Inter, &|x, y| {
            f(x).inter(y).is_subset(f(x.inter(y)))
        }),
        Property::Or => pairs(sink, Needs::Union, &|x, y| {
            f(x.union(y)).is_subset(f(x).union(f(y)))
        }),
        Property::WOr => pairs(sink, Needs::Union, &|x, y| {
            f(x.union(y)).is_subset(f(x).union(y))
        }),
        Property::DisjOr => pairs(sink, Needs::Union, &|x, y| {
            x.intersects(y) || f(x.union(y)).is_subset(f(x).union(f(y)))
        }),
        Property::Cut => pairs(sink, Needs::Nothing, &|x, y| {
            !(f(x).is_subset(y) && y.is_subset(x)) || f(x).is_subset(f(y))
        }),
        Property::Cm => pairs(sink, Needs::Nothing, &|x, y| {
            !(f(x).is_subset(y) && y.is_subset(x)) || f(y).is_subset(f(x))
        }),
        Property::Cum => pairs(sink, Needs::Nothing, &|x, y| {
            !(f(x).is_subset(y) && y.is_subset(x)) || f(y) == f(x)
        }),
        Property::SubsetSupset => pairs(sink, Needs::Nothing, &|x, y| {
            !(f(x).is_subset(y) && f(y).is_subset(x)) || f(x) == f(y)
        }),
        Property::RatM => pairs(sink, Needs::Nothing, &|x, y| {
            !(x.is_subset(y) && x.intersects(f(y))) || f(x).is_subset(f(y).inter(x))
        }),
        Property::Eq => pairs(sink, Needs::Nothing, &|x, y| {
            !(x.is_subset(y) && x.intersects(f(y))) || f(x) == f(y).inter(x)
        }),
        Property::EqPrime => pairs(sink, Needs::Inter, &|x, y| {
            !f(y).intersects(x) || f(y.inter(x)) == f(y).inter(x)
        }),
        Property::Par => pairs(sink, Needs::Union, &|x, y| {
            let u = f(x.union(y));
            u == f(x) || u == f(y) || u == f(x).union(f(y))
        }),
        Property::Cup => pairs(sink, Needs::Union, &|x, y| {
            !f(y).intersects(x.minus(f(x))) || !f(x.union(y)).intersects(y)
        }),
        Property::CupPrime => pairs(sink, Needs::Union, &|x, y| {
            !f(y).intersects(x.minus(f(x))) || f(x.union(y)) == f(x)
        }),
        Property::ResM => {
            // f(X) ⊆ A ∩ B ⇒ f(X ∩ A) ⊆ B for all B reduces to B = f(X).
            let all = Set::full(c.universe_size());
            for x in domain(c) {
                for a in all.subsets() {
                    let o = if !c.in_domain(x.inter(a)) {
                        Outcome::Skipped
                    } else if !f(x).is_subset(a) || f(x.inter(a)).is_subset(f(x)) {
                        Outcome::Checked
                    } else {
                        Outcome::Failed(Counterexample {
                            labels: &["X", "A"],
                            sets: [x, a],
                            element: None,
                        })
                    };
                    if !sink(o) {
                        return false;
                    }
                }
            }
            true
        }
        Property::In => {
            for x in domain(c) {
                for a in x.iter() {
                    let o = if x.iter().any(|b| !c.in_domain(Set::pair(a, b))) {
                        Outcome::Skipped
                    } else if f(x).contains(a) || x.iter().any(|b| !f(Set::pair(a, b)).contains(a))
                    {
                        Outcome::Checked
                    } else {
                        Outcome::Failed(Counterexample {
                            labels: &["X"],
                            sets: [x, Set::EMPTY],
                            element: Some(a),
                        })
                    };
                    if !sink(o) {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// Full report with instance counts and the first counterexample.
pub fn check_property<C: Choice + ?Sized>(c: &C, p: Property) -> PropertyReport {
    let (mut checked, mut skipped, mut counterexample) = (0u64, 0u64, None);
    scan(c, p, &mut |o| {
        match o {
            Outcome::Checked => checked += 1,
            Outcome::Skipped => skipped += 1,
            Outcome::Failed(w) => {
                checked += 1;
                counterexample = Some(w);
                return false;
            }
        }
        true
    });
    let verdict = match (&counterexample, checked) {
        (Some(_), _) => Verdict::Fail,
        (None, 0) => Verdict::Vacuous,
        (None, _) => Verdict::Pass,
    };
    PropertyReport {
        property: p,
        verdict,
        checked,
        skipped,
        counterexample,
    }
}

/// Whether no instance fails.
pub fn holds<C: Choice + ?Sized>(c: &C, p: Property) -> bool {
    scan(c, p, &mut |o| !matches!(o, Outcome::Failed(_)))
}

pub fn check_all<C: Choice + ?Sized>(c: &C) -> Vec<PropertyReport> {
    Property::ALL
        .iter()
        .map(|&p| check_property(c, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::ChoiceFunction;

    #[test]
    fn identity_passes_everything() {
        for n in 1..=3 {
            let cf = ChoiceFunction::identity(n);
            for r in check_all(&cf) {
                assert_eq!(r.verdict, Verdict::Pass, "{}", r.property);
            }
        }
    }

    #[test]
    fn minimum_of_two_element_order() {
        // U = {1, 2} as indices 0, 1; 2 < 1
        let cf = ChoiceFunction::minimal(2, |a, b| a == 1 && b == 0);
        for p in [Property::Subset, Property::Pr, Property::Eq] {
            assert_eq!(check_property(&cf, p).verdict, Verdict::Pass, "{p}");
        }
        let nonempty = cf.restrict(&crate::set::Family::from_sets([Set(1), Set(2), Set(3)]));
        assert_eq!(
            check_property(&nonempty, Property::Empty).verdict,
            Verdict::Pass
        );
    }

    #[test]
    fn empty_image_refutes_mu_empty() {
        let cf = ChoiceFunction::new(
            vec!["a".into(), "b".into()],
            [(Set(0b11), Set(0b01)), (Set(0b01), Set::EMPTY)],
        )
        .unwrap();
        let r = check_property(&cf, Property::Empty);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.counterexample.unwrap().sets[0], Set(0b01));
    }

    #[test]
    fn skipped_instances_make_vacuous() {
        // domain {{a}, {b}} is not closed under union
        let cf = ChoiceFunction::new(
            vec!["a".into(), "b".into()],
            [(Set(0b01), Set(0b01)), (Set(0b10), Set(0b10))],
        )
        .unwrap();
        let r = check_property(&cf, Property::Or);
        assert_eq!(r.skipped, 2);
        assert_eq!(r.checked, 2);
        let cf = ChoiceFunction::new(vec!["a".into()], []).unwrap();
        assert_eq!(check_property(&cf, Property::Pr).verdict, Verdict::Vacuous);
    }

    #[test]
    fn membership_law() {
        // a is dropped from {a,b}, and f({a,b}) itself excludes it
        let cf = ChoiceFunction::total(2, |x| if x == Set(0b11) { Set(0b10) } else { x });
        assert!(holds(&cf, Property::In));
        // a is dropped from U but kept by every pair
        let cf = ChoiceFunction::total(3, |x| if x == Set(0b111) { Set(0b100) } else { x });
        let r = check_property(&cf, Property::In);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.counterexample.unwrap().element, Some(0));
    }

    #[test]
    fn resm_reduction() {
        // f(X) = X except f(U) = {a}; then A = {a, b} gives f({a,b}) ⊄ f(U)
        let cf = ChoiceFunction::total(3, |x| if x == Set(0b111) { Set(0b001) } else { x });
        let r = check_property(&cf, Property::ResM);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!holds(&cf, Property::Cm));
    }

    #[test]
    fn parse_ids() {
        assert_eq!("pr".parse::<Property>().unwrap(), Property::Pr);
        assert_eq!("(μ=′)".parse::<Property>().unwrap(), Property::EqPrime);
        assert_eq!("μRatM".parse::<Property>().unwrap(), Property::RatM);
        assert_eq!("muCUM".parse::<Property>().unwrap(), Property::Cum);
        assert!("mu-foo".parse::<Property>().is_err());
        for p in Property::ALL {
            assert_eq!(p.key().parse::<Property>().unwrap(), p);
        }
    }
}
