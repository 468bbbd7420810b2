//! Formulas of the deontic language and of the bimodal minimality language.
//!
//! Both languages share one AST. Which operators are admissible depends on
//! the evaluator: [`crate::cjmodel`] accepts the actual/potential modalities,
//! the deontic operators and the converse diamond; [`crate::modal`] accepts
//! the plain, minimality and complement modalities. Duals are separate
//! constructors and nothing is rewritten at parse time.

mod parser;
mod render;

use std::collections::BTreeSet;
use std::fmt;

pub use parser::{parse, ParseError};

/// Formula AST.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// Actual necessity `[a]`.
    BoxA(Box<Formula>),
    /// Actual possibility `<a>`.
    DiaA(Box<Formula>),
    /// Potential necessity `[p]`.
    BoxP(Box<Formula>),
    /// Potential possibility `<p>`.
    DiaP(Box<Formula>),
    /// Dyadic obligation `O(consequent / antecedent)`.
    Ocond(Box<Formula>, Box<Formula>),
    /// Actual obligation `Oa(..)`.
    Oa(Box<Formula>),
    /// Potential obligation `Op(..)`.
    Op(Box<Formula>),
    /// Accessibility necessity `[]`.
    Box(Box<Formula>),
    /// Accessibility possibility `<>`.
    Dia(Box<Formula>),
    /// Minimality necessity `[m]`.
    BoxMin(Box<Formula>),
    /// Minimality possibility `<m>`.
    DiaMin(Box<Formula>),
    /// Complement-of-accessibility necessity `[c]`.
    BoxComp(Box<Formula>),
    /// Complement-of-accessibility possibility `<c>`.
    DiaComp(Box<Formula>),
    /// Converse of actual accessibility `<inv>`.
    DiaConv(Box<Formula>),
}

/// Coarse operator classes, used by evaluators to reject foreign operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fragment {
    Classical,
    /// `[a] <a> [p] <p> O(/) Oa Op <inv>`
    Deontic,
    /// `[] <> [m] <m> [c] <c>`
    Bimodal,
}

pub fn atom(name: &str) -> Formula {
    Formula::Atom(name.to_string())
}

macro_rules! unary_ctor {
    ($($fn_name:ident => $variant:ident),* $(,)?) => {
        impl Formula {
            $(
                pub fn $fn_name(f: Formula) -> Formula {
                    Formula::$variant(Box::new(f))
                }
            )*
        }
    };
}

macro_rules! binary_ctor {
    ($($fn_name:ident => $variant:ident),* $(,)?) => {
        impl Formula {
            $(
                pub fn $fn_name(f: Formula, g: Formula) -> Formula {
                    Formula::$variant(Box::new(f), Box::new(g))
                }
            )*
        }
    };
}

unary_ctor! {
    not => Not, box_a => BoxA, dia_a => DiaA, box_p => BoxP, dia_p => DiaP,
    oa => Oa, op => Op, boxed => Box, dia => Dia, box_min => BoxMin,
    dia_min => DiaMin, box_comp => BoxComp, dia_comp => DiaComp,
    dia_conv => DiaConv,
}

binary_ctor! {
    and => And, or => Or, imp => Imp, iff => Iff, ocond => Ocond,
}

impl Formula {
    /// Right-nested conjunction of `parts`; `Top` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        let mut items: Vec<Formula> = parts.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::Top;
        };
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    /// Right-nested disjunction of `parts`; `Bot` when empty.
    pub fn disj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        let mut items: Vec<Formula> = parts.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::Bot;
        };
        while let Some(f) = items.pop() {
            acc = Formula::or(f, acc);
        }
        acc
    }

    /// Names of the atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.clone());
            }
            Formula::Top | Formula::Bot => {}
            _ => self.children().for_each(|c| c.collect_atoms(out)),
        }
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> impl Iterator<Item = &Formula> {
        use Formula::*;
        let (a, b): (Option<&Formula>, Option<&Formula>) = match self {
            Atom(_) | Top | Bot => (None, None),
            Not(f) | BoxA(f) | DiaA(f) | BoxP(f) | DiaP(f) | Oa(f) | Op(f) | Box(f) | Dia(f)
            | BoxMin(f) | DiaMin(f) | BoxComp(f) | DiaComp(f) | DiaConv(f) => (Some(f), None),
            And(f, g) | Or(f, g) | Imp(f, g) | Iff(f, g) | Ocond(f, g) => (Some(f), Some(g)),
        };
        a.into_iter().chain(b)
    }

    /// Operator class of the root node.
    pub fn fragment(&self) -> Fragment {
        use Formula::*;
        match self {
            Atom(_) | Top | Bot | Not(_) | And(..) | Or(..) | Imp(..) | Iff(..) => {
                Fragment::Classical
            }
            BoxA(_) | DiaA(_) | BoxP(_) | DiaP(_) | Ocond(..) | Oa(_) | Op(_) | DiaConv(_) => {
                Fragment::Deontic
            }
            Box(_) | Dia(_) | BoxMin(_) | DiaMin(_) | BoxComp(_) | DiaComp(_) => Fragment::Bimodal,
        }
    }

    /// First subformula (pre-order) whose root is in `fragment`.
    pub fn find_fragment(&self, fragment: Fragment) -> Option<&Formula> {
        if self.fragment() == fragment {
            return Some(self);
        }
        self.children().find_map(|c| c.find_fragment(fragment))
    }

    /// True if only classical connectives occur.
    pub fn is_classical(&self) -> bool {
        self.find_fragment(Fragment::Deontic).is_none()
            && self.find_fragment(Fragment::Bimodal).is_none()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().map(Formula::depth).max().unwrap_or(0)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render::render(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Render a formula in the concrete ASCII syntax accepted by [`parse`].
pub fn render(f: &Formula) -> String {
    render::render(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_collects_names() {
        let f = Formula::imp(atom("p"), atom("q"));
        assert_eq!(
            f.atoms(),
            ["p", "q"].iter().map(|s| s.to_string()).collect()
        );
        assert!(Formula::Top.atoms().is_empty());
        let g = Formula::ocond(atom("p"), atom("p"));
        assert_eq!(g.atoms().len(), 1);
    }

    #[test]
    fn fragments() {
        let f = Formula::and(atom("p"), Formula::dia_min(atom("q")));
        assert!(f.find_fragment(Fragment::Bimodal).is_some());
        assert!(f.find_fragment(Fragment::Deontic).is_none());
        assert!(!f.is_classical());
        assert!(Formula::iff(atom("p"), Formula::Bot).is_classical());
    }

    #[test]
    fn conj_is_right_nested() {
        let f = Formula::conj([atom("a"), atom("b"), atom("c")]);
        assert_eq!(
            f,
            Formula::and(atom("a"), Formula::and(atom("b"), atom("c")))
        );
        assert_eq!(Formula::conj([]), Formula::Top);
        assert_eq!(Formula::disj([]), Formula::Bot);
    }
}
