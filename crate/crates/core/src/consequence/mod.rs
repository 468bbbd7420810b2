//! Nonmonotonic consequence over a finite propositional language, induced by
//! a choice function on its models.
//!
//! World `i` of a language with atoms `p0..pk` is the valuation making atom
//! `j` true iff bit `j` of `i` is set. Since every set of worlds is
//! definable, a formula is identified with its class `A ⊆ M_L` and a theory
//! with the family of classes it contains. The logical rules are decided on
//! these families: `T ∪ T′` is family union, `T ∨ T′` is `{A ∪ B}`, and the
//! nonmonotonic closure of `T` is `Th(f(M(T)))`. Nothing here consults the
//! algebraic laws, so [`correspond`] can compare the two sides.

pub mod correspond;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::choice::{Choice, ChoiceFunction};
use crate::formula::Formula;
use crate::set::{Family, Set};

pub use correspond::{
    correspondence_check, correspondence_rows, correspondence_sweep, sample_function, Agreement,
    CorrespondenceRow, Direction, SweepSummary,
};

/// Largest supported language.
pub const MAX_ATOMS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LanguageError {
    #[error("{0} atoms exceed the supported maximum of {MAX_ATOMS}")]
    TooManyAtoms(usize),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("atom `{0}` is not in the language")]
    UnknownAtom(String),
    #[error("`{0}` is not a propositional formula")]
    NotClassical(String),
    #[error("choice function is over {got} elements, the language has {expected} models")]
    UniverseMismatch { got: usize, expected: usize },
    #[error("choice function is undefined on the definable set {0:?}")]
    NotTotal(Set),
}

/// A propositional language over finitely many atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLanguage {
    atoms: Vec<String>,
}

impl FiniteLanguage {
    pub fn new(atoms: Vec<String>) -> Result<FiniteLanguage, LanguageError> {
        if atoms.len() > MAX_ATOMS {
            return Err(LanguageError::TooManyAtoms(atoms.len()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(LanguageError::DuplicateAtom(a.clone()));
            }
        }
        Ok(FiniteLanguage { atoms })
    }

    /// Atoms `p0, p1, ..`.
    pub fn numbered(k: usize) -> FiniteLanguage {
        FiniteLanguage::new((0..k).map(|i| format!("p{i}")).collect()).expect("small language")
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// `|M_L|`.
    pub fn model_count(&self) -> usize {
        1 << self.atoms.len()
    }

    pub fn models_all(&self) -> Set {
        Set::full(self.model_count())
    }

    /// Human-readable world name such as `p0 ~p1`.
    pub fn world_name(&self, w: usize) -> String {
        self.atoms
            .iter()
            .enumerate()
            .map(|(j, a)| {
                if w >> j & 1 == 1 {
                    a.clone()
                } else {
                    format!("~{a}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// `M(f)`.
    pub fn models(&self, f: &Formula) -> Result<Set, LanguageError> {
        let all = self.models_all();
        Ok(match f {
            Formula::Atom(a) => {
                let j = self
                    .atoms
                    .iter()
                    .position(|x| x == a)
                    .ok_or_else(|| LanguageError::UnknownAtom(a.clone()))?;
                Set::from_elements((0..self.model_count()).filter(|w| w >> j & 1 == 1))
            }
            Formula::Top => all,
            Formula::Bot => Set::EMPTY,
            Formula::Not(g) => self.models(g)?.complement_in(all),
            Formula::And(g, h) => self.models(g)?.inter(self.models(h)?),
            Formula::Or(g, h) => self.models(g)?.union(self.models(h)?),
            Formula::Imp(g, h) => self.models(g)?.complement_in(all).union(self.models(h)?),
            Formula::Iff(g, h) => {
                let (a, b) = (self.models(g)?, self.models(h)?);
                Set(!(a.bits() ^ b.bits())).inter(all)
            }
            other => return Err(LanguageError::NotClassical(other.to_string())),
        })
    }

    /// `M(T)` for a set of formulas.
    pub fn models_of(&self, theory: &[Formula]) -> Result<Set, LanguageError> {
        theory
            .iter()
            .try_fold(self.models_all(), |acc, f| Ok(acc.inter(self.models(f)?)))
    }

    /// `Th(X)`: the classes of all formulas true throughout `x`.
    pub fn th(&self, x: Set) -> Family {
        Family::principal_filter(x, self.models_all())
    }

    /// `M(T)` for a theory given as a family of classes.
    pub fn mod_of(&self, t: &Family) -> Set {
        t.iter().fold(self.models_all(), Set::inter)
    }

    /// Classical closure `T̄`.
    pub fn cl(&self, t: &Family) -> Family {
        self.th(self.mod_of(t))
    }

    /// `Con(T)`: `⊥` is not derivable.
    pub fn con(&self, t: &Family) -> bool {
        !self.cl(t).contains(Set::EMPTY)
    }

    /// `T ∨ T′ = {A ∪ B : A ∈ T, B ∈ T′}`, for upward closed families.
    ///
    /// Both families are closed upward inside `M_L`, so the result is the
    /// upward closure of the unions of their minimal members.
    pub fn disj(&self, t: &Family, u: &Family) -> Family {
        let all = self.models_all();
        let minimal = |fam: &Family| -> Vec<Set> {
            let members: Vec<Set> = fam.iter().collect();
            members
                .iter()
                .copied()
                .filter(|&a| !members.iter().any(|&b| b != a && b.is_subset(a)))
                .collect()
        };
        let mut out = Family::EMPTY;
        for a in minimal(t) {
            for b in minimal(u) {
                for c in a.union(b).supersets_in(all) {
                    out.insert(c);
                }
            }
        }
        out
    }
}

/// `|~` induced by a choice function defined on every set of models.
#[derive(Debug, Clone)]
pub struct ConsequenceRelation {
    language: FiniteLanguage,
    f: ChoiceFunction,
    /// `T̿` for `T = Th(X)`, indexed by `X`.
    closure: Vec<Family>,
}

impl ConsequenceRelation {
    pub fn new(language: FiniteLanguage, f: ChoiceFunction) -> Result<Self, LanguageError> {
        let m = language.model_count();
        if f.universe_size() != m {
            return Err(LanguageError::UniverseMismatch {
                got: f.universe_size(),
                expected: m,
            });
        }
        if let Some(x) = Set::all_subsets(m).find(|&x| !f.in_domain(x)) {
            return Err(LanguageError::NotTotal(x));
        }
        let closure = Set::all_subsets(m)
            .map(|x| language.th(f.image(x)))
            .collect();
        Ok(ConsequenceRelation {
            language,
            f,
            closure,
        })
    }

    pub fn language(&self) -> &FiniteLanguage {
        &self.language
    }

    pub fn choice(&self) -> &ChoiceFunction {
        &self.f
    }

    /// `T̿ = Th(f(M(T)))`.
    pub fn nm(&self, t: &Family) -> Family {
        self.closure[self.language.mod_of(t).index()]
    }

    /// `T |~ φ` for a theory given as a family of classes.
    pub fn entails_class(&self, t: &Family, phi: Set) -> bool {
        self.nm(t).contains(phi)
    }

    /// `T |~ φ` for formulas.
    pub fn entails(&self, theory: &[Formula], phi: &Formula) -> Result<bool, LanguageError> {
        let x = self.language.models_of(theory)?;
        let a = self.language.models(phi)?;
        Ok(self.f.image(x).is_subset(a))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    And,
    Or,
    WOr,
    DisjOr,
    Lle,
    Rw,
    Ccl,
    Sc,
    Ref,
    Cp,
    Pr,
    Cut,
    Cm,
    ResM,
    Cum,
    SubsetSupset,
    RatM,
    RatMEq,
    LogEqPrime,
    LogPar,
    LogCup,
    LogCupPrime,
}

impl Rule {
    pub const ALL: [Rule; 22] = [
        Rule::And,
        Rule::Or,
        Rule::WOr,
        Rule::DisjOr,
        Rule::Lle,
        Rule::Rw,
        Rule::Ccl,
        Rule::Sc,
        Rule::Ref,
        Rule::Cp,
        Rule::Pr,
        Rule::Cut,
        Rule::Cm,
        Rule::ResM,
        Rule::Cum,
        Rule::SubsetSupset,
        Rule::RatM,
        Rule::RatMEq,
        Rule::LogEqPrime,
        Rule::LogPar,
        Rule::LogCup,
        Rule::LogCupPrime,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Rule::And => "and",
            Rule::Or => "or",
            Rule::WOr => "wor",
            Rule::DisjOr => "disjor",
            Rule::Lle => "lle",
            Rule::Rw => "rw",
            Rule::Ccl => "ccl",
            Rule::Sc => "sc",
            Rule::Ref => "ref",
            Rule::Cp => "cp",
            Rule::Pr => "pr",
            Rule::Cut => "cut",
            Rule::Cm => "cm",
            Rule::ResM => "resm",
            Rule::Cum => "cum",
            Rule::SubsetSupset => "subset-supset",
            Rule::RatM => "ratm",
            Rule::RatMEq => "ratm=",
            Rule::LogEqPrime => "log='",
            Rule::LogPar => "log-par",
            Rule::LogCup => "log-cup",
            Rule::LogCupPrime => "log-cup'",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rule::And => "(AND)",
            Rule::Or => "(OR)",
            Rule::WOr => "(wOR)",
            Rule::DisjOr => "(disjOR)",
            Rule::Lle => "(LLE)",
            Rule::Rw => "(RW)",
            Rule::Ccl => "(CCL)",
            Rule::Sc => "(SC)",
            Rule::Ref => "(REF)",
            Rule::Cp => "(CP)",
            Rule::Pr => "(PR)",
            Rule::Cut => "(CUT)",
            Rule::Cm => "(CM)",
            Rule::ResM => "(ResM)",
            Rule::Cum => "(CUM)",
            Rule::SubsetSupset => "(⊆⊇)",
            Rule::RatM => "(RatM)",
            Rule::RatMEq => "(RatM=)",
            Rule::LogEqPrime => "(Log=′)",
            Rule::LogPar => "(Log∥)",
            Rule::LogCup => "(Log∪)",
            Rule::LogCupPrime => "(Log∪′)",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for Rule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Rule::ALL
            .into_iter()
            .find(|r| {
                t.eq_ignore_ascii_case(r.key())
                    || t == r.symbol()
                    || t == &r.symbol()[1..r.symbol().len() - 1]
            })
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

/// Theories `Th(X)` are named by `X`; formulas by their class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleWitness {
    pub labels: &'static [&'static str],
    pub sets: [Set; 3],
}

impl RuleWitness {
    pub fn named_sets(&self) -> impl Iterator<Item = (&'static str, Set)> + '_ {
        self.labels.iter().copied().zip(self.sets)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleReport {
    pub rule: Rule,
    pub checked: u64,
    pub counterexample: Option<RuleWitness>,
}

impl RuleReport {
    pub fn pass(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn tt(t: Set, u: Set) -> RuleWitness {
    RuleWitness {
        labels: &["T", "T'"],
        sets: [t, u, Set::EMPTY],
    }
}

fn t_ab(t: Set, a: Set, b: Set, labels: &'static [&'static str]) -> RuleWitness {
    RuleWitness {
        labels,
        sets: [t, a, b],
    }
}

/// Decide a rule by quantifying theories over all `Th(X)` and formulas over
/// all classes.
pub fn check_logical_rule(rel: &ConsequenceRelation, rule: Rule) -> RuleReport {
    let lang = &rel.language;
    let all = lang.models_all();
    let xs: Vec<Set> = all.subsets().collect();
    let ths: Vec<Family> = xs.iter().map(|&x| lang.th(x)).collect();
    let nm = |t: &Family| rel.nm(t);
    let entails = |t: &Family, a: Set| rel.entails_class(t, a);
    let union = |t: &Family, u: &Family| t.union(u);
    let with = |t: &Family, a: Set| {
        let mut t = *t;
        t.insert(a);
        t
    };
    let mut checked = 0u64;

    let pairs = |checked: &mut u64, ok: &dyn Fn(&Family, &Family) -> bool| {
        for (i, t) in ths.iter().enumerate() {
            for (j, u) in ths.iter().enumerate() {
                *checked += 1;
                if !ok(t, u) {
                    return Some(tt(xs[i], xs[j]));
                }
            }
        }
        None
    };
    let formulas = |checked: &mut u64,
                    labels: &'static [&'static str],
                    ok: &dyn Fn(&Family, Set, Set) -> bool| {
        for (i, t) in ths.iter().enumerate() {
            for &a in &xs {
                for &b in &xs {
                    *checked += 1;
                    if !ok(t, a, b) {
                        return Some(t_ab(xs[i], a, b, labels));
                    }
                }
            }
        }
        None
    };
    let singles = |checked: &mut u64, ok: &dyn Fn(&Family) -> bool| {
        for (i, t) in ths.iter().enumerate() {
            *checked += 1;
            if !ok(t) {
                return Some(RuleWitness {
                    labels: &["T"],
                    sets: [xs[i], Set::EMPTY, Set::EMPTY],
                });
            }
        }
        None
    };
    // T ⊆ T̄′ ⊆ T̿
    let cumulative_premise = |t: &Family, u: &Family| {
        let cu = lang.cl(u);
        t.is_subset(&cu) && cu.is_subset(&nm(t))
    };

    let counterexample = match rule {
        Rule::And => formulas(&mut checked, &["T", "psi", "psi'"], &|t, a, b| {
            !(entails(t, a) && entails(t, b)) || entails(t, a.inter(b))
        }),
        Rule::Or => pairs(&mut checked, &|t, u| {
            nm(t).inter(&nm(u)).is_subset(&nm(&lang.disj(t, u)))
        }),
        Rule::WOr => pairs(&mut checked, &|t, u| {
            nm(t).inter(&lang.cl(u)).is_subset(&nm(&lang.disj(t, u)))
        }),
        Rule::DisjOr => pairs(&mut checked, &|t, u| {
            lang.con(&union(t, u)) || nm(t).inter(&nm(u)).is_subset(&nm(&lang.disj(t, u)))
        }),
        Rule::Lle => pairs(&mut checked, &|t, u| {
            lang.cl(t) != lang.cl(u) || nm(t) == nm(u)
        }),
        Rule::Rw => formulas(&mut checked, &["T", "psi", "psi'"], &|t, a, b| {
            !(entails(t, a) && a.is_subset(b)) || entails(t, b)
        }),
        Rule::Ccl => singles(&mut checked, &|t| lang.cl(&nm(t)) == nm(t)),
        Rule::Sc => singles(&mut checked, &|t| lang.cl(t).is_subset(&nm(t))),
        Rule::Ref => formulas(&mut checked, &["T", "alpha", "-"], &|t, a, _| {
            entails(&with(t, a), a)
        }),
        Rule::Cp => singles(&mut checked, &|t| !entails(t, Set::EMPTY) || !lang.con(t)),
        Rule::Pr => pairs(&mut checked, &|t, u| {
            nm(&union(t, u)).is_subset(&lang.cl(&union(&nm(t), u)))
        }),
        Rule::Cut => pairs(&mut checked, &|t, u| {
            !cumulative_premise(t, u) || nm(u).is_subset(&nm(t))
        }),
        Rule::Cm => pairs(&mut checked, &|t, u| {
            !cumulative_premise(t, u) || nm(t).is_subset(&nm(u))
        }),
        Rule::ResM => formulas(&mut checked, &["T", "alpha", "beta"], &|t, a, b| {
            !(entails(t, a) && entails(t, b)) || entails(&with(t, a), b)
        }),
        Rule::Cum => pairs(&mut checked, &|t, u| {
            !cumulative_premise(t, u) || nm(t) == nm(u)
        }),
        Rule::SubsetSupset => pairs(&mut checked, &|t, u| {
            !(t.is_subset(&nm(u)) && u.is_subset(&nm(t))) || nm(t) == nm(u)
        }),
        Rule::RatM => pairs(&mut checked, &|t, u| {
            let premise = lang.con(&union(t, &nm(u))) && u.is_subset(&lang.cl(t));
            !premise || lang.cl(&union(&nm(u), t)).is_subset(&nm(t))
        }),
        Rule::RatMEq => pairs(&mut checked, &|t, u| {
            let premise = lang.con(&union(t, &nm(u))) && u.is_subset(&lang.cl(t));
            !premise || lang.cl(&union(&nm(u), t)) == nm(t)
        }),
        Rule::LogEqPrime => pairs(&mut checked, &|t, u| {
            !lang.con(&union(&nm(u), t)) || nm(&union(t, u)) == lang.cl(&union(&nm(u), t))
        }),
        Rule::LogPar => pairs(&mut checked, &|t, u| {
            let d = nm(&lang.disj(t, u));
            d == nm(t) || d == nm(u) || d == nm(t).inter(&nm(u))
        }),
        Rule::LogCup => pairs(&mut checked, &|t, u| {
            let premise = lang.con(&union(&nm(u), t)) && !lang.con(&union(&nm(u), &nm(t)));
            !premise || !lang.con(&union(&nm(&lang.disj(t, u)), u))
        }),
        Rule::LogCupPrime => pairs(&mut checked, &|t, u| {
            let premise = lang.con(&union(&nm(u), t)) && !lang.con(&union(&nm(u), &nm(t)));
            !premise || nm(&lang.disj(t, u)) == nm(t)
        }),
    };
    RuleReport {
        rule,
        checked,
        counterexample,
    }
}

pub fn check_all_rules(rel: &ConsequenceRelation) -> Vec<RuleReport> {
    Rule::ALL
        .iter()
        .map(|&r| check_logical_rule(rel, r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{atom, parse};

    fn lang2() -> FiniteLanguage {
        FiniteLanguage::new(vec!["p".into(), "q".into()]).unwrap()
    }

    #[test]
    fn world_encoding() {
        let l = lang2();
        assert_eq!(l.models(&atom("p")).unwrap(), Set::from_elements([1, 3]));
        assert_eq!(l.models(&atom("q")).unwrap(), Set::from_elements([2, 3]));
        assert_eq!(l.world_name(1), "p ~q");
        assert!(matches!(
            l.models(&parse("[a] p").unwrap()),
            Err(LanguageError::NotClassical(_))
        ));
    }

    #[test]
    fn identity_is_classical() {
        let rel = ConsequenceRelation::new(lang2(), ChoiceFunction::identity(4)).unwrap();
        assert!(rel.entails(&[atom("p")], &parse("p | q").unwrap()).unwrap());
        assert!(!rel.entails(&[atom("p")], &atom("q")).unwrap());
        for r in check_all_rules(&rel) {
            assert!(r.pass(), "{}", r.rule);
        }
    }

    #[test]
    fn preferring_not_q() {
        let l = lang2();
        let q = l.models(&atom("q")).unwrap();
        // ~q worlds below q worlds
        let f = ChoiceFunction::minimal(4, |a, b| !q.contains(a) && q.contains(b));
        let rel = ConsequenceRelation::new(l, f).unwrap();
        assert!(rel.entails(&[atom("p")], &parse("~q").unwrap()).unwrap());
        assert!(rel.entails(&[atom("p"), Formula::Bot], &atom("q")).unwrap());
        for r in [Rule::RatM, Rule::RatMEq, Rule::Cum, Rule::Or] {
            assert!(check_logical_rule(&rel, r).pass(), "{r}");
        }
    }

    #[test]
    fn cautious_monotony_failure_is_found() {
        // f(X) ⊆ Y ⊆ X with f(Y) ⊄ f(X): X = {0,1}, Y = {0}, f(X) = ∅
        let f = ChoiceFunction::total(1 << 1, |x| if x == Set(0b11) { Set::EMPTY } else { x });
        let rel = ConsequenceRelation::new(FiniteLanguage::numbered(1), f).unwrap();
        let r = check_logical_rule(&rel, Rule::Cm);
        let w = r.counterexample.unwrap();
        let (t, u) = (w.sets[0], w.sets[1]);
        assert!(u.is_subset(t));
        assert!(!rel.choice().image(u).is_subset(rel.choice().image(t)));
    }

    #[test]
    fn disjunction_of_theories() {
        let l = lang2();
        let (t, u) = (l.th(Set(0b0001)), l.th(Set(0b0100)));
        assert_eq!(l.disj(&t, &u), l.th(Set(0b0101)));
    }

    #[test]
    fn rejects_partial_functions() {
        let f = ChoiceFunction::new((0..2).map(|i| i.to_string()).collect(), []).unwrap();
        assert!(matches!(
            ConsequenceRelation::new(FiniteLanguage::numbered(1), f),
            Err(LanguageError::NotTotal(_))
        ));
    }

    #[test]
    fn rule_ids() {
        for r in Rule::ALL {
            assert_eq!(r.key().parse::<Rule>().unwrap(), r);
            assert_eq!(r.symbol().parse::<Rule>().unwrap(), r);
        }
    }
}
