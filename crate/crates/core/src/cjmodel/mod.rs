//! Finite models of the dyadic deontic logic: worlds with actual and
//! potential accessibility (`av`, `pv`), a valuation, and an explicit map
//! `ob` from contexts to families of "morally good" sets.
//!
//! Evaluation follows the validity clauses of the logic; [`frame`] checks the
//! structural conditions 3-a through 5-d and [`axioms`] checks the axiom
//! schemata (1)–(15) semantically, with schematic letters ranging over all
//! subsets of the world set.

pub mod axioms;
pub mod frame;

use thiserror::Error;

use crate::formula::{Formula, Fragment};
use crate::set::{Family, Set, MAX_FAMILY_ELEMENTS};

pub use axioms::{check_axioms, AxiomReport, AxiomResult, AxiomWitness, SweepMode};
pub use frame::{check_frame, FrameCondition, FrameReport, FrameResult, FrameWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs at least one world")]
    NoWorlds,
    #[error("{0} worlds exceed the supported maximum of {MAX_FAMILY_ELEMENTS}")]
    TooManyWorlds(usize),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("world `{world}` listed twice in one subset")]
    DuplicateMember { world: String },
    #[error("context {0:?} given twice in the ob map")]
    DuplicateContext(Vec<String>),
    #[error("{what} has {got} entries, expected {expected}")]
    Arity {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("set {0:?} is not a subset of the world set")]
    OutOfRange(Set),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("atom `{0}` is not declared by the model")]
    UnknownAtom(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("world index {0} out of range")]
    WorldOutOfRange(usize),
    #[error("operator in `{0}` is not part of the deontic language")]
    ForeignOperator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObError {
    #[error("condition 5-b fails for X={x:?}: {y:?} and {z:?} agree inside X but not in ob(X)")]
    NotContextLocal { x: Set, y: Set, z: Set },
    #[error("ob({x:?}) is not closed under intersection: {a:?} ∩ {b:?} missing")]
    NotIntersectionClosed { x: Set, a: Set, b: Set },
    #[error("mu({x:?}) = {mu:?} is not a subset of its argument")]
    MuNotSubset { x: Set, mu: Set },
    #[error("expected {expected} mu values, got {got}")]
    MuArity { expected: usize, got: usize },
}

/// The map `ob : P(W) -> P(P(W))`, total on `P(W)`.
///
/// In normalized form every family only holds subsets of its context and
/// membership is read modulo the context: `A ∈ ob(X)` iff `A ∩ X` is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObMap {
    n: usize,
    families: Vec<Family>,
    normalized: bool,
}

impl ObMap {
    /// The map with `ob(X) = ∅` everywhere.
    pub fn empty(n: usize) -> ObMap {
        ObMap {
            n,
            families: vec![Family::EMPTY; 1 << n],
            normalized: false,
        }
    }

    pub fn from_families(n: usize, families: Vec<Family>, normalized: bool) -> ObMap {
        assert_eq!(families.len(), 1 << n, "one family per context");
        ObMap {
            n,
            families,
            normalized,
        }
    }

    pub fn world_count(&self) -> usize {
        self.n
    }

    pub fn universe(&self) -> Set {
        Set::full(self.n)
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// The stored family for context `x`.
    pub fn family(&self, x: Set) -> &Family {
        &self.families[x.index()]
    }

    pub fn family_mut(&mut self, x: Set) -> &mut Family {
        &mut self.families[x.index()]
    }

    /// Membership `a ∈ ob(x)` under the reading of this map.
    #[inline]
    pub fn contains(&self, x: Set, a: Set) -> bool {
        let fam = &self.families[x.index()];
        if self.normalized {
            fam.contains(a.inter(x))
        } else {
            fam.contains(a)
        }
    }

    /// Every `Y ⊆ W` with `Y ∈ ob(x)`, ascending.
    pub fn members(&self, x: Set) -> Vec<Set> {
        if !self.normalized {
            return self.family(x).iter().collect();
        }
        let outside = self.universe().minus(x);
        let mut out: Vec<Set> = self
            .family(x)
            .iter()
            .filter(|m| m.is_subset(x))
            .flat_map(|m| outside.subsets().map(move |o| m.union(o)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Add `a` to `ob(x)` together with everything that agrees with it
    /// inside `x`, so condition 5-b is kept.
    pub fn insert_closed(&mut self, x: Set, a: Set) {
        if self.normalized {
            self.families[x.index()].insert(a.inter(x));
            return;
        }
        let core = a.inter(x);
        let outside = self.universe().minus(x);
        for extra in outside.subsets() {
            self.families[x.index()].insert(core.union(extra));
        }
    }

    /// Conditions 5-a .. 5-d.
    pub fn check_conditions(&self) -> Vec<FrameResult> {
        frame::check_ob(self)
    }

    /// Replace each `ob(X)` by `{A ∩ X : A ∈ ob(X)}` and switch to the
    /// context-relative membership test.
    ///
    /// Requires 5-b; without it the rewrite changes truth values.
    pub fn normalize(&self) -> Result<ObMap, ObError> {
        if self.normalized {
            return Ok(self.clone());
        }
        if let Some(FrameWitness::Triple { x, y, z }) = frame::first_5b_violation(self) {
            return Err(ObError::NotContextLocal { x, y, z });
        }
        let families = Set::all_subsets(self.n)
            .map(|x| Family::from_sets(self.family(x).iter().map(|a| a.inter(x))))
            .collect();
        Ok(ObMap {
            n: self.n,
            families,
            normalized: true,
        })
    }

    /// The least member of `ob(x)`, read inside `x`; `None` when `ob(x)` is
    /// empty.
    ///
    /// Fails if the family is not closed under intersection, since then no
    /// least member need exist.
    pub fn mu(&self, x: Set) -> Result<Option<Set>, ObError> {
        let inside: Vec<Set> = {
            let mut v: Vec<Set> = self.family(x).iter().map(|a| a.inter(x)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        for (i, &a) in inside.iter().enumerate() {
            for &b in &inside[i + 1..] {
                if !self.contains(x, a.inter(b)) {
                    return Err(ObError::NotIntersectionClosed { x, a, b });
                }
            }
        }
        Ok(inside.into_iter().reduce(Set::inter))
    }

    /// Build the normalized map `ob(X) = {A ⊆ X : mu(X) ⊆ A}` from mu
    /// values indexed by context; `None` yields the empty family.
    pub fn from_mu(n: usize, mu: &[Option<Set>]) -> Result<ObMap, ObError> {
        if mu.len() != 1 << n {
            return Err(ObError::MuArity {
                expected: 1 << n,
                got: mu.len(),
            });
        }
        let mut families = Vec::with_capacity(mu.len());
        for (x, m) in Set::all_subsets(n).zip(mu) {
            let fam = match *m {
                None => Family::EMPTY,
                Some(m) if !m.is_subset(x) => return Err(ObError::MuNotSubset { x, mu: m }),
                Some(m) => Family::principal_filter(m, x),
            };
            families.push(fam);
        }
        Ok(ObMap {
            n,
            families,
            normalized: true,
        })
    }
}

/// A finite model `⟨W, av, pv, ob, V⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CJModel {
    worlds: Vec<String>,
    atoms: Vec<String>,
    valuation: Vec<Set>,
    av: Vec<Set>,
    pv: Vec<Set>,
    ob: ObMap,
}

fn check_unique<'a>(
    names: impl IntoIterator<Item = &'a String>,
    err: fn(String) -> ModelError,
) -> Result<(), ModelError> {
    let mut seen = std::collections::HashSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(err(name.clone()));
        }
    }
    Ok(())
}

impl CJModel {
    /// Assemble a model from positional data: `valuation[i]` is the truth set
    /// of `atoms[i]`, `av[w]` and `pv[w]` are indexed by world.
    ///
    /// Frame conditions are not enforced; [`check_frame`] reports them.
    pub fn new(
        worlds: Vec<String>,
        atoms: Vec<String>,
        valuation: Vec<Set>,
        av: Vec<Set>,
        pv: Vec<Set>,
        ob: ObMap,
    ) -> Result<CJModel, ModelError> {
        let n = worlds.len();
        if n == 0 {
            return Err(ModelError::NoWorlds);
        }
        if n > MAX_FAMILY_ELEMENTS {
            return Err(ModelError::TooManyWorlds(n));
        }
        check_unique(&worlds, ModelError::DuplicateWorld)?;
        check_unique(&atoms, ModelError::DuplicateAtom)?;
        for (what, got, expected) in [
            ("valuation", valuation.len(), atoms.len()),
            ("av", av.len(), n),
            ("pv", pv.len(), n),
            ("ob", ob.world_count(), n),
        ] {
            if got != expected {
                return Err(ModelError::Arity {
                    what,
                    got,
                    expected,
                });
            }
        }
        let universe = Set::full(n);
        for s in valuation.iter().chain(&av).chain(&pv) {
            if !s.is_subset(universe) {
                return Err(ModelError::OutOfRange(*s));
            }
        }
        Ok(CJModel {
            worlds,
            atoms,
            valuation,
            av,
            pv,
            ob,
        })
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn valuation(&self) -> &[Set] {
        &self.valuation
    }

    pub fn av(&self) -> &[Set] {
        &self.av
    }

    pub fn pv(&self) -> &[Set] {
        &self.pv
    }

    pub fn ob(&self) -> &ObMap {
        &self.ob
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn universe(&self) -> Set {
        Set::full(self.worlds.len())
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    /// Names of the worlds in `s`, in world order.
    pub fn world_names(&self, s: Set) -> Vec<String> {
        s.iter().map(|i| self.worlds[i].clone()).collect()
    }

    /// Truth set of `atom`.
    pub fn atom_set(&self, atom: &str) -> Option<Set> {
        self.atoms
            .iter()
            .position(|a| a == atom)
            .map(|i| self.valuation[i])
    }

    /// True when the worlds carry pairwise distinct valuations covering
    /// every valuation of the atoms. Only then does inclusion of truth sets
    /// coincide with classical derivability.
    pub fn is_full_valuation_space(&self) -> bool {
        let k = self.atoms.len();
        if k >= 64 || self.worlds.len() != 1 << k {
            return false;
        }
        let mut seen = vec![false; 1 << k];
        for w in 0..self.worlds.len() {
            let code = self
                .valuation
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(w))
                .fold(0usize, |acc, (i, _)| acc | 1 << i);
            if std::mem::replace(&mut seen[code], true) {
                return false;
            }
        }
        true
    }

    /// Same model with a different `ob` map.
    pub fn with_ob(&self, ob: ObMap) -> CJModel {
        assert_eq!(ob.world_count(), self.world_count());
        CJModel { ob, ..self.clone() }
    }

    /// Same model with `a` added to `ob(x)`, closed under 5-b.
    pub fn with_obligation(&self, x: Set, a: Set) -> CJModel {
        let mut ob = self.ob.clone();
        ob.insert_closed(x, a);
        self.with_ob(ob)
    }

    /// Normalized copy of the model; truth sets are unchanged.
    pub fn normalize_ob(&self) -> Result<CJModel, ObError> {
        Ok(self.with_ob(self.ob.normalize()?))
    }

    /// The least obligation of context `x`.
    pub fn mu_from_ob(&self, x: Set) -> Result<Option<Set>, ObError> {
        self.ob.mu(x)
    }

    // Set-level semantics of the operators. Each returns the truth set of
    // the compound given the truth sets of its arguments.

    pub fn box_a(&self, a: Set) -> Set {
        self.collect(|w| self.av[w].is_subset(a))
    }

    pub fn dia_a(&self, a: Set) -> Set {
        self.collect(|w| self.av[w].intersects(a))
    }

    pub fn box_p(&self, a: Set) -> Set {
        self.collect(|w| self.pv[w].is_subset(a))
    }

    pub fn dia_p(&self, a: Set) -> Set {
        self.collect(|w| self.pv[w].intersects(a))
    }

    /// `O(consequent / antecedent)`, which does not depend on the world.
    pub fn ocond(&self, consequent: Set, antecedent: Set) -> Set {
        if self.ocond_holds(consequent, antecedent) {
            self.universe()
        } else {
            Set::EMPTY
        }
    }

    pub fn ocond_holds(&self, consequent: Set, antecedent: Set) -> bool {
        consequent.intersects(antecedent)
            && antecedent
                .subsets()
                .filter(|x| x.intersects(consequent))
                .all(|x| self.ob.contains(x, consequent))
    }

    pub fn oa(&self, a: Set) -> Set {
        self.collect(|w| self.ob.contains(self.av[w], a) && !self.av[w].is_subset(a))
    }

    pub fn op(&self, a: Set) -> Set {
        self.collect(|w| self.ob.contains(self.pv[w], a) && !self.pv[w].is_subset(a))
    }

    /// Worlds having some `av`-predecessor in `a`.
    pub fn dia_conv(&self, a: Set) -> Set {
        a.iter().fold(Set::EMPTY, |acc, w| acc.union(self.av[w]))
    }

    fn collect(&self, pred: impl Fn(usize) -> bool) -> Set {
        (0..self.world_count())
            .filter(|&w| pred(w))
            .fold(Set::EMPTY, Set::with)
    }

    /// `M(f)`: the set of worlds where `f` holds.
    pub fn truth_set(&self, f: &Formula) -> Result<Set, EvalError> {
        if let Some(bad) = f.find_fragment(Fragment::Bimodal) {
            return Err(EvalError::ForeignOperator(bad.to_string()));
        }
        self.eval_set(f)
    }

    fn eval_set(&self, f: &Formula) -> Result<Set, EvalError> {
        let w = self.universe();
        Ok(match f {
            Formula::Atom(name) => self
                .atom_set(name)
                .ok_or_else(|| EvalError::UnknownAtom(name.clone()))?,
            Formula::Top => w,
            Formula::Bot => Set::EMPTY,
            Formula::Not(g) => self.eval_set(g)?.complement_in(w),
            Formula::And(g, h) => self.eval_set(g)?.inter(self.eval_set(h)?),
            Formula::Or(g, h) => self.eval_set(g)?.union(self.eval_set(h)?),
            Formula::Imp(g, h) => self.eval_set(g)?.complement_in(w).union(self.eval_set(h)?),
            Formula::Iff(g, h) => {
                let (a, b) = (self.eval_set(g)?, self.eval_set(h)?);
                Set(!(a.bits() ^ b.bits())).inter(w)
            }
            Formula::BoxA(g) => self.box_a(self.eval_set(g)?),
            Formula::DiaA(g) => self.dia_a(self.eval_set(g)?),
            Formula::BoxP(g) => self.box_p(self.eval_set(g)?),
            Formula::DiaP(g) => self.dia_p(self.eval_set(g)?),
            Formula::Ocond(b, a) => self.ocond(self.eval_set(b)?, self.eval_set(a)?),
            Formula::Oa(g) => self.oa(self.eval_set(g)?),
            Formula::Op(g) => self.op(self.eval_set(g)?),
            Formula::DiaConv(g) => self.dia_conv(self.eval_set(g)?),
            other => return Err(EvalError::ForeignOperator(other.to_string())),
        })
    }

    /// Truth of `f` at the world with index `world`.
    pub fn eval_at(&self, world: usize, f: &Formula) -> Result<bool, EvalError> {
        if world >= self.world_count() {
            return Err(EvalError::WorldOutOfRange(world));
        }
        Ok(self.truth_set(f)?.contains(world))
    }

    /// Truth of `f` at the named world.
    pub fn eval(&self, world: &str, f: &Formula) -> Result<bool, EvalError> {
        let w = self
            .world_index(world)
            .ok_or_else(|| EvalError::UnknownWorld(world.to_string()))?;
        self.eval_at(w, f)
    }

    /// True if `f` holds at every world.
    pub fn is_valid(&self, f: &Formula) -> Result<bool, EvalError> {
        Ok(self.truth_set(f)? == self.universe())
    }

    /// Whether `world` violates `O(b / a)`: some `av`-predecessor postulated
    /// the obligation while `a ∧ b` was actually possible, and now `a ∧ ¬b`
    /// holds. With `strengthened`, additionally `[a](a ∧ ¬b)` must hold.
    pub fn violation_check(
        &self,
        world: usize,
        a: &Formula,
        b: &Formula,
        strengthened: bool,
    ) -> Result<bool, EvalError> {
        self.eval_at(world, &violation_formula(a, b, strengthened))
    }
}

/// `<inv>(O(b / a) & <a>(a & b)) & a & ~b`, optionally conjoined with
/// `[a](a & ~b)`.
pub fn violation_formula(a: &Formula, b: &Formula, strengthened: bool) -> Formula {
    let postulated = Formula::dia_conv(Formula::and(
        Formula::ocond(b.clone(), a.clone()),
        Formula::dia_a(Formula::and(a.clone(), b.clone())),
    ));
    let breached = Formula::and(a.clone(), Formula::not(b.clone()));
    let mut parts = vec![postulated, a.clone(), Formula::not(b.clone())];
    if strengthened {
        parts.push(Formula::box_a(breached));
    }
    Formula::conj(parts)
}

/// The four-world incompleteness witness over atoms `p, q`.
///
/// Worlds `m1..m4` realize `p∧q, p∧¬q, ¬p∧q, ¬p∧¬q`; `ob({m1})` and
/// `ob({m2})` are the supersets of the respective singleton, every other
/// context has no obligations, and `av = pv = W` everywhere.
pub fn build_example_1_1() -> CJModel {
    let worlds: Vec<String> = (1..=4).map(|i| format!("m{i}")).collect();
    let atoms = vec!["p".to_string(), "q".to_string()];
    let valuation = vec![Set::from_elements([0, 1]), Set::from_elements([0, 2])];
    let all = Set::full(4);
    let mut ob = ObMap::empty(4);
    for m in [Set::singleton(0), Set::singleton(1)] {
        *ob.family_mut(m) = Family::from_sets(m.supersets_in(all));
    }
    CJModel::new(worlds, atoms, valuation, vec![all; 4], vec![all; 4], ob)
        .expect("example model is well formed")
}

/// [`build_example_1_1`] with `M(p)` added to `ob(M(p))` and closed under 5-b.
pub fn build_example_1_1_forced() -> CJModel {
    let m = build_example_1_1();
    let mp = m.atom_set("p").expect("atom p");
    m.with_obligation(mp, mp)
}
