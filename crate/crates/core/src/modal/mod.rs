//! Kripke models with an accessibility relation `R`, an independent
//! minimality relation `R′`, and the complement `R₋` of `R`, together with
//! the modal encoding of nonmonotonic conditionals.
//!
//! `w R′ v` reads "`v` is better than `w`", so a world is minimal for `α` when
//! it satisfies `α` and no `R′`-successor does.

use rand::Rng;
use thiserror::Error;

use crate::formula::{Formula, Fragment};
use crate::prefstruct::PrefStructure;
use crate::set::Set;

/// Worlds are bits of a [`Set`].
pub const MAX_WORLDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModalError {
    #[error("a model needs at least one world")]
    NoWorlds,
    #[error("{0} worlds exceed the supported maximum of {MAX_WORLDS}")]
    TooManyWorlds(usize),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("R is not transitive: {0} R {1} R {2} but not {0} R {2}")]
    NotTransitive(String, String, String),
    #[error("world `{0}` is not R-visible from the entry point")]
    NotVisible(String),
    #[error("R′ is not irreflexive at `{0}`")]
    Reflexive(String),
    #[error("`{0}` is outside the bimodal language")]
    ForeignOperator(String),
    #[error("the set {0:?} is not definable from the valuation")]
    NotDefinable(Set),
    #[error("`{0}` is not a propositional formula")]
    NotClassical(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiModalModel {
    worlds: Vec<String>,
    entry: usize,
    atoms: Vec<String>,
    /// Truth set per atom.
    valuation: Vec<Set>,
    r: Vec<Set>,
    rmin: Vec<Set>,
}

/// `R(m) = {n : m R n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuccessorSet {
    pub origin: usize,
    pub set: Set,
}

impl BiModalModel {
    /// Relations are given as successor sets per world.
    pub fn new(
        worlds: Vec<String>,
        entry: usize,
        atoms: Vec<String>,
        valuation: Vec<Set>,
        r: Vec<Set>,
        rmin: Vec<Set>,
    ) -> Result<BiModalModel, ModalError> {
        let n = worlds.len();
        if n == 0 {
            return Err(ModalError::NoWorlds);
        }
        if n > MAX_WORLDS {
            return Err(ModalError::TooManyWorlds(n));
        }
        for names in [&worlds, &atoms] {
            for (i, w) in names.iter().enumerate() {
                if names[..i].contains(w) {
                    return Err(ModalError::Duplicate(w.clone()));
                }
            }
        }
        let all = Set::full(n);
        assert!(entry < n && r.len() == n && rmin.len() == n && valuation.len() == atoms.len());
        assert!(r
            .iter()
            .chain(&rmin)
            .chain(&valuation)
            .all(|s| s.is_subset(all)));
        let m = BiModalModel {
            worlds,
            entry,
            atoms,
            valuation,
            r,
            rmin,
        };
        for a in 0..n {
            for b in m.r[a].iter() {
                if let Some(c) = m.r[b].minus(m.r[a]).first() {
                    let name = |i: usize| m.worlds[i].clone();
                    return Err(ModalError::NotTransitive(name(a), name(b), name(c)));
                }
            }
        }
        if let Some(w) = all.minus(m.r[entry]).first() {
            return Err(ModalError::NotVisible(m.worlds[w].clone()));
        }
        if let Some(w) = (0..n).find(|&w| m.rmin[w].contains(w)) {
            return Err(ModalError::Reflexive(m.worlds[w].clone()));
        }
        Ok(m)
    }

    /// Build from names and edge lists.
    pub fn from_names(
        worlds: Vec<String>,
        entry: &str,
        valuation: Vec<(String, Vec<String>)>,
        r: &[(String, String)],
        rmin: &[(String, String)],
    ) -> Result<BiModalModel, ModalError> {
        let idx = |w: &str| {
            worlds
                .iter()
                .position(|x| x == w)
                .ok_or_else(|| ModalError::UnknownWorld(w.to_string()))
        };
        let n = worlds.len();
        let rel = |pairs: &[(String, String)]| -> Result<Vec<Set>, ModalError> {
            let mut out = vec![Set::EMPTY; n];
            for (a, b) in pairs {
                let (a, b) = (idx(a)?, idx(b)?);
                out[a] = out[a].with(b);
            }
            Ok(out)
        };
        let entry = idx(entry)?;
        let (r, rmin) = (rel(r)?, rel(rmin)?);
        let mut atoms = Vec::new();
        let mut truth = Vec::new();
        for (a, ws) in valuation {
            atoms.push(a);
            truth.push(
                ws.iter()
                    .map(|w| idx(w))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Set::from_elements)?,
            );
        }
        BiModalModel::new(worlds, entry, atoms, truth, r, rmin)
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn universe(&self) -> Set {
        Set::full(self.worlds.len())
    }

    pub fn entry(&self) -> usize {
        self.entry
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn valuation(&self) -> &[Set] {
        &self.valuation
    }

    pub fn r(&self) -> &[Set] {
        &self.r
    }

    pub fn rmin(&self) -> &[Set] {
        &self.rmin
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn successors(&self, m: usize) -> SuccessorSet {
        SuccessorSet {
            origin: m,
            set: self.r[m],
        }
    }

    /// The plain complement `R₋` is irreflexive only where `R` is reflexive.
    pub fn r_is_reflexive(&self) -> bool {
        (0..self.world_count()).all(|w| self.r[w].contains(w))
    }

    fn pre_image(&self, rel: &[Set], t: Set, exists: bool) -> Set {
        Set::from_elements((0..rel.len()).filter(|&w| {
            if exists {
                rel[w].intersects(t)
            } else {
                rel[w].is_subset(t)
            }
        }))
    }

    fn comp(&self) -> Vec<Set> {
        self.r
            .iter()
            .map(|s| s.complement_in(self.universe()))
            .collect()
    }

    pub fn truth_set(&self, f: &Formula) -> Result<Set, ModalError> {
        let all = self.universe();
        Ok(match f {
            Formula::Atom(a) => {
                let j = self
                    .atoms
                    .iter()
                    .position(|x| x == a)
                    .ok_or_else(|| ModalError::UnknownAtom(a.clone()))?;
                self.valuation[j]
            }
            Formula::Top => all,
            Formula::Bot => Set::EMPTY,
            Formula::Not(g) => self.truth_set(g)?.complement_in(all),
            Formula::And(g, h) => self.truth_set(g)?.inter(self.truth_set(h)?),
            Formula::Or(g, h) => self.truth_set(g)?.union(self.truth_set(h)?),
            Formula::Imp(g, h) => self
                .truth_set(g)?
                .complement_in(all)
                .union(self.truth_set(h)?),
            Formula::Iff(g, h) => {
                let (a, b) = (self.truth_set(g)?, self.truth_set(h)?);
                Set(!(a.bits() ^ b.bits())).inter(all)
            }
            Formula::Box(g) => self.pre_image(&self.r, self.truth_set(g)?, false),
            Formula::Dia(g) => self.pre_image(&self.r, self.truth_set(g)?, true),
            Formula::BoxMin(g) => self.pre_image(&self.rmin, self.truth_set(g)?, false),
            Formula::DiaMin(g) => self.pre_image(&self.rmin, self.truth_set(g)?, true),
            Formula::BoxComp(g) => self.pre_image(&self.comp(), self.truth_set(g)?, false),
            Formula::DiaComp(g) => self.pre_image(&self.comp(), self.truth_set(g)?, true),
            other => {
                debug_assert_eq!(other.fragment(), Fragment::Deontic);
                return Err(ModalError::ForeignOperator(other.to_string()));
            }
        })
    }

    pub fn eval(&self, w: usize, f: &Formula) -> Result<bool, ModalError> {
        Ok(self.truth_set(f)?.contains(w))
    }

    /// `u ⊨ f`.
    pub fn eval_entry(&self, f: &Formula) -> Result<bool, ModalError> {
        self.eval(self.entry, f)
    }

    /// Worlds grouped by valuation; the definable sets are unions of these.
    pub fn valuation_classes(&self) -> Vec<Set> {
        let mut classes: Vec<Set> = Vec::new();
        for w in 0..self.world_count() {
            match classes
                .iter_mut()
                .find(|c| self.same_valuation(c.first().expect("nonempty"), w))
            {
                Some(c) => *c = c.with(w),
                None => classes.push(Set::singleton(w)),
            }
        }
        classes
    }

    fn same_valuation(&self, a: usize, b: usize) -> bool {
        self.valuation
            .iter()
            .all(|t| t.contains(a) == t.contains(b))
    }

    /// Every definable set of worlds, in increasing mask order.
    pub fn definable_sets(&self) -> Vec<Set> {
        let classes = self.valuation_classes();
        let mut out: Vec<Set> = (0..1u64 << classes.len())
            .map(|pick| {
                Set(pick)
                    .iter()
                    .fold(Set::EMPTY, |acc, i| acc.union(classes[i]))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// A classical formula whose truth set is `x`: a disjunction of world
    /// descriptions.
    pub fn characteristic_formula(&self, x: Set) -> Result<Formula, ModalError> {
        let classes = self.valuation_classes();
        let mut parts = Vec::new();
        let mut covered = Set::EMPTY;
        for c in classes {
            if c.is_subset(x) {
                let w = c.first().expect("nonempty");
                parts.push(Formula::conj(self.atoms.iter().enumerate().map(
                    |(j, a)| {
                        let p = Formula::Atom(a.clone());
                        if self.valuation[j].contains(w) {
                            p
                        } else {
                            Formula::not(p)
                        }
                    },
                )));
                covered = covered.union(c);
            }
        }
        if covered != x {
            return Err(ModalError::NotDefinable(x));
        }
        Ok(Formula::disj(parts))
    }

    /// `R′` as a single-copy preferential structure: `v ≺ w` iff `w R′ v`.
    pub fn preference(&self) -> PrefStructure {
        PrefStructure::single_copy(self.worlds.clone(), |v, w| self.rmin[w].contains(v))
            .expect("R′ is irreflexive")
    }

    /// `μ_{R′}(x)`.
    pub fn mu(&self, x: Set) -> Set {
        x.iter()
            .filter(|&w| !self.rmin[w].intersects(x))
            .fold(Set::EMPTY, Set::with)
    }
}

/// `α ∧ ¬◇′α`.
pub fn minimal_models_formula(alpha: &Formula) -> Formula {
    Formula::and(alpha.clone(), Formula::not(Formula::dia_min(alpha.clone())))
}

/// `□((α ∧ ¬◇′α) → β)`.
pub fn translate_conditional(alpha: &Formula, beta: &Formula) -> Formula {
    Formula::boxed(Formula::imp(minimal_models_formula(alpha), beta.clone()))
}

/// The (RatM) instance for `φ, ψ, ψ′`.
pub fn translate_ratm(phi: &Formula, psi: &Formula, psi2: &Formula) -> Formula {
    let both = Formula::and(phi.clone(), psi2.clone());
    Formula::imp(
        Formula::and(
            translate_conditional(phi, psi),
            Formula::dia(Formula::and(minimal_models_formula(phi), psi2.clone())),
        ),
        translate_conditional(&both, psi),
    )
}

/// `□φ ∧ ¬◇₋φ`: `φ` holds exactly on the successors.
pub fn successor_characterization(phi: &Formula) -> Formula {
    Formula::and(
        Formula::boxed(phi.clone()),
        Formula::not(Formula::dia_comp(phi.clone())),
    )
}

/// True iff the truth set of `phi` is exactly `R(m)`.
pub fn characterizes_successors(
    model: &BiModalModel,
    m: usize,
    phi: &Formula,
) -> Result<bool, ModalError> {
    if !phi.is_classical() {
        return Err(ModalError::NotClassical(phi.to_string()));
    }
    model.eval(m, &successor_characterization(phi))
}

/// The (AND) instance for `α` given as the successors of a world described
/// by `φ_m`, read from the entry point.
pub fn translate_and_schema(phi_m: &Formula, phi: &Formula, phi2: &Formula) -> Formula {
    let min = || minimal_models_formula(phi_m);
    let cond = |c: Formula| Formula::boxed(Formula::imp(min(), c));
    Formula::boxed(Formula::imp(
        Formula::conj([
            successor_characterization(phi_m),
            cond(phi.clone()),
            cond(phi2.clone()),
        ]),
        cond(Formula::and(phi.clone(), phi2.clone())),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub pairs: usize,
    /// `(M(α), M(β), modal verdict)` where the two readings differ.
    pub disagreements: Vec<(Set, Set, bool)>,
    /// The matrix of modal verdicts, indexed like `definable_sets`.
    pub matrix: Vec<Vec<bool>>,
    pub sets: Vec<Set>,
    pub r_reflexive: bool,
}

impl AgreementReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compare `u ⊨ □((α ∧ ¬◇′α) → β)` with `μ_{R′}(M(α) ∩ R(u)) ⊆ M(β)` for
/// all definable `α`, `β`.
pub fn agreement_check(model: &BiModalModel) -> AgreementReport {
    let sets = model.definable_sets();
    let formulas: Vec<Formula> = sets
        .iter()
        .map(|&x| model.characteristic_formula(x).expect("definable"))
        .collect();
    let ru = model.successors(model.entry).set;
    let mut disagreements = Vec::new();
    let mut matrix = Vec::new();
    for (i, a) in formulas.iter().enumerate() {
        let chosen = model.mu(sets[i].inter(ru));
        let mut row = Vec::new();
        for (j, b) in formulas.iter().enumerate() {
            let modal = model
                .eval_entry(&translate_conditional(a, b))
                .expect("bimodal formula");
            if modal != chosen.is_subset(sets[j]) {
                disagreements.push((sets[i], sets[j], modal));
            }
            row.push(modal);
        }
        matrix.push(row);
    }
    AgreementReport {
        pairs: sets.len() * sets.len(),
        disagreements,
        matrix,
        sets,
        r_reflexive: model.r_is_reflexive(),
    }
}

/// First definable `(φ, ψ, ψ′)` whose (RatM) instance fails at the entry.
pub fn ratm_counterexample(model: &BiModalModel) -> Option<[Set; 3]> {
    let sets = model.definable_sets();
    let fs: Vec<Formula> = sets
        .iter()
        .map(|&x| model.characteristic_formula(x).expect("definable"))
        .collect();
    for (i, phi) in fs.iter().enumerate() {
        for (j, psi) in fs.iter().enumerate() {
            for (k, psi2) in fs.iter().enumerate() {
                if !model
                    .eval_entry(&translate_ratm(phi, psi, psi2))
                    .expect("bimodal formula")
                {
                    return Some([sets[i], sets[j], sets[k]]);
                }
            }
        }
    }
    None
}

/// First `(m, φ, φ′)` whose (AND) instance, with `φ_m` characterizing
/// `R(m)`, fails at the entry.
pub fn and_schema_counterexample(model: &BiModalModel) -> Option<(usize, Set, Set)> {
    let sets = model.definable_sets();
    for m in 0..model.world_count() {
        let Ok(phi_m) = model.characteristic_formula(model.r[m]) else {
            continue;
        };
        for &a in &sets {
            for &b in &sets {
                let f = translate_and_schema(
                    &phi_m,
                    &model.characteristic_formula(a).expect("definable"),
                    &model.characteristic_formula(b).expect("definable"),
                );
                if !model.eval_entry(&f).expect("bimodal formula") {
                    return Some((m, a, b));
                }
            }
        }
    }
    None
}

/// World `i` makes exactly `p{i}` true, so every set is definable.
fn discrete_valuation(n: usize) -> (Vec<String>, Vec<Set>) {
    (
        (0..n).map(|i| format!("p{i}")).collect(),
        (0..n).map(Set::singleton).collect(),
    )
}

fn world_names(n: usize) -> Vec<String> {
    let mut names = vec!["u".to_string()];
    names.extend((1..n).map(|i| format!("w{i}")));
    names
}

/// Transitive relations on `n` worlds with `R(0)` everything.
pub fn visible_transitive_relations(n: usize) -> Vec<Vec<Set>> {
    assert!(n * n <= 20, "enumeration over {n} worlds is too large");
    let all = Set::full(n);
    let free = n * (n - 1);
    (0..1u64 << free)
        .map(|code| {
            let mut r = vec![all; n];
            for (k, w) in (1..n).enumerate() {
                r[w] = Set(code >> (k * n)).inter(all);
            }
            r
        })
        .filter(|r| (0..n).all(|a| r[a].iter().all(|b| r[b].is_subset(r[a]))))
        .collect()
}

/// Irreflexive relations on `n` worlds.
pub fn irreflexive_relations(n: usize) -> Vec<Vec<Set>> {
    assert!(n * (n - 1) <= 20);
    let all = Set::full(n);
    (0..1u64 << (n * (n - 1)))
        .map(|code| {
            let mut bits = code;
            (0..n)
                .map(|w| {
                    let others = all.without(w);
                    let mut s = Set::EMPTY;
                    for v in others.iter() {
                        if bits & 1 == 1 {
                            s = s.with(v);
                        }
                        bits >>= 1;
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Every model on `n` worlds with entry `u`, discrete valuation, `R`
/// transitive with `R(u) = W`, and any irreflexive `R′`.
pub fn all_models(n: usize) -> Vec<BiModalModel> {
    let (atoms, val) = discrete_valuation(n);
    let rs = visible_transitive_relations(n);
    let rmins = irreflexive_relations(n);
    let mut out = Vec::with_capacity(rs.len() * rmins.len());
    for r in &rs {
        for rmin in &rmins {
            out.push(
                BiModalModel::new(
                    world_names(n),
                    0,
                    atoms.clone(),
                    val.clone(),
                    r.clone(),
                    rmin.clone(),
                )
                .expect("enumerated relations are admissible"),
            );
        }
    }
    out
}

/// A random model of the same shape as [`all_models`]: a random transitive
/// `R` is obtained by closing random edges.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> BiModalModel {
    let all = Set::full(n);
    let mut r: Vec<Set> = (0..n)
        .map(|_| Set::from_elements((0..n).filter(|_| rng.gen_bool(density))))
        .collect();
    r[0] = all;
    loop {
        let next: Vec<Set> = r
            .iter()
            .map(|&s| s.iter().fold(s, |acc, b| acc.union(r[b])))
            .collect();
        if next == r {
            break;
        }
        r = next;
    }
    let rmin = (0..n)
        .map(|w| Set::from_elements((0..n).filter(|&v| v != w && rng.gen_bool(density))))
        .collect();
    let (atoms, val) = discrete_valuation(n);
    BiModalModel::new(world_names(n), 0, atoms, val, r, rmin).expect("admissible")
}
