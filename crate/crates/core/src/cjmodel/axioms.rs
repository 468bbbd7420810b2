//! Semantic check of the axiom schemata.
//!
//! Every operator's truth set depends only on the truth sets of its
//! arguments, so a schema is valid in a model iff it holds for every
//! assignment of subsets of `W` to its schematic letters. Up to
//! [`AxiomOptions::exhaustive_max`] worlds all assignments are visited;
//! beyond that a seeded sample is drawn.
//!
//! Derivability premises of the two rules are read set-theoretically:
//! `⊢ ψ ↔ ψ′` as `M(ψ) = M(ψ′)` and `⊢ ψ → (φ ↔ φ′)` as
//! `M(ψ) ∩ M(φ) = M(ψ) ∩ M(φ′)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CJModel;
use crate::par::{self, Exec};
use crate::set::Set;

/// Precomputed truth-set transformers of one model.
struct Tables {
    n: usize,
    all: Set,
    box_a: Vec<Set>,
    dia_a: Vec<Set>,
    box_p: Vec<Set>,
    dia_p: Vec<Set>,
    oa: Vec<Set>,
    op: Vec<Set>,
    /// `ocond[(consequent << n) | antecedent]`
    ocond: Vec<bool>,
}

impl Tables {
    fn new(m: &CJModel, exec: Exec) -> Tables {
        let n = m.world_count();
        let subsets: Vec<Set> = Set::all_subsets(n).collect();
        let table = |f: &dyn Fn(Set) -> Set| subsets.iter().map(|&a| f(a)).collect::<Vec<_>>();
        let ocond = par::map(exec, 0..1u64 << (2 * n), |i| {
            m.ocond_holds(Set(i >> n), Set(i & ((1 << n) - 1)))
        });
        Tables {
            n,
            all: m.universe(),
            box_a: table(&|a| m.box_a(a)),
            dia_a: table(&|a| m.dia_a(a)),
            box_p: table(&|a| m.box_p(a)),
            dia_p: table(&|a| m.dia_p(a)),
            oa: table(&|a| m.oa(a)),
            op: table(&|a| m.op(a)),
            ocond,
        }
    }

    fn o(&self, consequent: Set, antecedent: Set) -> Set {
        if self.ocond[(consequent.index() << self.n) | antecedent.index()] {
            self.all
        } else {
            Set::EMPTY
        }
    }

    fn not(&self, a: Set) -> Set {
        a.complement_in(self.all)
    }

    fn iff(&self, a: Set, b: Set) -> Set {
        Set(!(a.bits() ^ b.bits())).inter(self.all)
    }
}

/// Which of the two modal families an instance uses.
#[derive(Clone, Copy)]
enum Kind {
    Actual,
    Potential,
}

impl Tables {
    fn bx(&self, k: Kind, a: Set) -> Set {
        match k {
            Kind::Actual => self.box_a[a.index()],
            Kind::Potential => self.box_p[a.index()],
        }
    }

    fn di(&self, k: Kind, a: Set) -> Set {
        match k {
            Kind::Actual => self.dia_a[a.index()],
            Kind::Potential => self.dia_p[a.index()],
        }
    }

    fn ob(&self, k: Kind, a: Set) -> Set {
        match k {
            Kind::Actual => self.oa[a.index()],
            Kind::Potential => self.op[a.index()],
        }
    }
}

/// Worlds where the instance fails (`lhs ∖ rhs` for an implication).
type Instance = fn(&Tables, &[Set]) -> Set;

struct Schema {
    id: u8,
    variant: &'static str,
    letters: &'static [&'static str],
    check: Instance,
}

fn imp(lhs: Set, rhs: Set) -> Set {
    lhs.minus(rhs)
}

fn rule(t: &Tables, premise: bool, a: Set, b: Set) -> Set {
    if premise && a != b {
        t.all
    } else {
        Set::EMPTY
    }
}

const PHI: &[&str] = &["phi"];
const PHI_PSI: &[&str] = &["phi", "psi"];
const PHI_PHI2_PSI: &[&str] = &["phi", "phi'", "psi"];
const PHI_PSI_PSI2: &[&str] = &["phi", "psi", "psi'"];

fn k_schema(t: &Tables, k: Kind, v: &[Set]) -> Set {
    let (a, b) = (v[0], v[1]);
    let lhs = t.bx(k, t.not(a).union(b)).inter(t.bx(k, a));
    imp(lhs, t.bx(k, b))
}

fn ob_conj(t: &Tables, k: Kind, v: &[Set]) -> Set {
    let (a, b) = (v[0], v[1]);
    imp(t.ob(k, a).inter(t.ob(k, b)), t.ob(k, a.inter(b)))
}

fn box_blocks_ob(t: &Tables, k: Kind, v: &[Set]) -> Set {
    let a = v[0];
    let rhs = t.not(t.ob(k, a)).inter(t.not(t.ob(k, t.not(a))));
    imp(t.bx(k, a), rhs)
}

fn box_iff_ob(t: &Tables, k: Kind, v: &[Set]) -> Set {
    let (a, b) = (v[0], v[1]);
    imp(t.bx(k, t.iff(a, b)), t.iff(t.ob(k, a), t.ob(k, b)))
}

fn cond_to_ob(t: &Tables, k: Kind, v: &[Set]) -> Set {
    let (a, b) = (v[0], v[1]);
    let lhs = t
        .o(a, b)
        .inter(t.bx(k, b))
        .inter(t.di(k, a))
        .inter(t.di(k, t.not(a)));
    imp(lhs, t.ob(k, a))
}

fn cond_to_ob_material(t: &Tables, k: Kind, v: &[Set]) -> Set {
    let (a, b) = (v[0], v[1]);
    let lhs = t
        .o(a, b)
        .inter(t.di(k, a.inter(b)))
        .inter(t.di(k, b.minus(a)));
    imp(lhs, t.ob(k, t.not(b).union(a)))
}

const SCHEMATA: &[Schema] = &[
    Schema {
        id: 1,
        variant: "K",
        letters: PHI_PSI,
        check: |t, v| k_schema(t, Kind::Potential, v),
    },
    Schema {
        id: 1,
        variant: "N",
        letters: &[],
        check: |t, _| imp(t.all, t.box_p[t.all.index()]),
    },
    Schema {
        id: 1,
        variant: "T",
        letters: PHI,
        check: |t, v| imp(t.box_p[v[0].index()], v[0]),
    },
    Schema {
        id: 2,
        variant: "K",
        letters: PHI_PSI,
        check: |t, v| k_schema(t, Kind::Actual, v),
    },
    Schema {
        id: 2,
        variant: "N",
        letters: &[],
        check: |t, _| imp(t.all, t.box_a[t.all.index()]),
    },
    Schema {
        id: 2,
        variant: "D",
        letters: PHI,
        check: |t, v| imp(t.box_a[v[0].index()], t.dia_a[v[0].index()]),
    },
    Schema {
        id: 3,
        variant: "",
        letters: PHI,
        check: |t, v| imp(t.box_p[v[0].index()], t.box_a[v[0].index()]),
    },
    Schema {
        id: 4,
        variant: "",
        letters: &["psi"],
        check: |t, v| t.o(Set::EMPTY, v[0]),
    },
    Schema {
        id: 5,
        variant: "",
        letters: PHI_PHI2_PSI,
        check: |t, v| {
            let (a, a2, b) = (v[0], v[1], v[2]);
            imp(t.o(a, b).inter(t.o(a2, b)), t.o(a.inter(a2), b))
        },
    },
    Schema {
        id: 6,
        variant: "",
        letters: PHI_PSI,
        check: |t, v| imp(t.o(v[0], v[1]), t.o(v[0], v[0].inter(v[1]))),
    },
    Schema {
        id: 7,
        variant: "",
        letters: PHI_PSI_PSI2,
        check: |t, v| rule(t, v[1] == v[2], t.o(v[0], v[1]), t.o(v[0], v[2])),
    },
    Schema {
        id: 8,
        variant: "",
        letters: PHI_PHI2_PSI,
        check: |t, v| {
            let (a, a2, b) = (v[0], v[1], v[2]);
            rule(t, a.inter(b) == a2.inter(b), t.o(a, b), t.o(a2, b))
        },
    },
    Schema {
        id: 9,
        variant: "",
        letters: PHI_PSI,
        check: |t, v| {
            let o = t.o(v[0], v[1]);
            imp(t.dia_p[o.index()], t.box_p[o.index()])
        },
    },
    Schema {
        id: 10,
        variant: "",
        letters: PHI_PSI_PSI2,
        check: |t, v| {
            let (a, b, b2) = (v[0], v[1], v[2]);
            let lhs = t.dia_p[b.inter(b2).inter(a).index()].inter(t.o(a, b));
            imp(lhs, t.o(a, b.inter(b2)))
        },
    },
    Schema {
        id: 11,
        variant: "a",
        letters: PHI_PSI,
        check: |t, v| ob_conj(t, Kind::Actual, v),
    },
    Schema {
        id: 11,
        variant: "p",
        letters: PHI_PSI,
        check: |t, v| ob_conj(t, Kind::Potential, v),
    },
    Schema {
        id: 12,
        variant: "a",
        letters: PHI,
        check: |t, v| box_blocks_ob(t, Kind::Actual, v),
    },
    Schema {
        id: 12,
        variant: "p",
        letters: PHI,
        check: |t, v| box_blocks_ob(t, Kind::Potential, v),
    },
    Schema {
        id: 13,
        variant: "a",
        letters: PHI_PSI,
        check: |t, v| box_iff_ob(t, Kind::Actual, v),
    },
    Schema {
        id: 13,
        variant: "p",
        letters: PHI_PSI,
        check: |t, v| box_iff_ob(t, Kind::Potential, v),
    },
    Schema {
        id: 14,
        variant: "a",
        letters: PHI_PSI,
        check: |t, v| cond_to_ob(t, Kind::Actual, v),
    },
    Schema {
        id: 14,
        variant: "p",
        letters: PHI_PSI,
        check: |t, v| cond_to_ob(t, Kind::Potential, v),
    },
    Schema {
        id: 15,
        variant: "a",
        letters: PHI_PSI,
        check: |t, v| cond_to_ob_material(t, Kind::Actual, v),
    },
    Schema {
        id: 15,
        variant: "p",
        letters: PHI_PSI,
        check: |t, v| cond_to_ob_material(t, Kind::Potential, v),
    },
];

/// How the letters were quantified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Sampled { seed: u64, samples: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct AxiomOptions {
    pub exec: Exec,
    /// Largest world count swept exhaustively.
    pub exhaustive_max: usize,
    /// Assignments drawn per schema when sampling.
    pub samples: u64,
    pub seed: u64,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions {
            exec: Exec::default(),
            exhaustive_max: 6,
            samples: 20_000,
            seed: 0,
        }
    }
}

/// First refuting assignment of a schema instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomWitness {
    pub variant: &'static str,
    pub world: usize,
    pub assignment: Vec<(&'static str, Set)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomResult {
    pub id: u8,
    /// Assignments examined over all variants.
    pub checked: u64,
    pub counterexample: Option<AxiomWitness>,
}

impl AxiomResult {
    pub fn pass(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    /// One entry per axiom, ids 1 to 15 in order.
    pub results: Vec<AxiomResult>,
    pub mode: SweepMode,
    /// Whether `W` realizes every valuation exactly once, which makes the
    /// set reading of derivability premises exact.
    pub full_valuation_space: bool,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(AxiomResult::pass)
    }

    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.pass()).count()
    }

    pub fn get(&self, id: u8) -> &AxiomResult {
        &self.results[usize::from(id) - 1]
    }
}

pub fn check_axioms(m: &CJModel) -> AxiomReport {
    check_axioms_with(m, &AxiomOptions::default())
}

pub fn check_axioms_with(m: &CJModel, opts: &AxiomOptions) -> AxiomReport {
    let t = Tables::new(m, opts.exec);
    let n = t.n;
    let exhaustive = n <= opts.exhaustive_max;
    let mut results: Vec<AxiomResult> = (1..=15)
        .map(|id| AxiomResult {
            id,
            checked: 0,
            counterexample: None,
        })
        .collect();

    for (k, schema) in SCHEMATA.iter().enumerate() {
        let slot = &mut results[usize::from(schema.id) - 1];
        if slot.counterexample.is_some() {
            continue;
        }
        let arity = schema.letters.len();
        let decode = |code: u64| -> Vec<Set> {
            (0..arity)
                .map(|i| Set((code >> (i * n)) & ((1 << n) - 1)))
                .collect()
        };
        let refute = |letters: Vec<Set>| -> Option<AxiomWitness> {
            let bad = (schema.check)(&t, &letters);
            bad.first().map(|world| AxiomWitness {
                variant: schema.variant,
                world,
                assignment: schema.letters.iter().copied().zip(letters).collect(),
            })
        };
        let (found, total) = if exhaustive || arity == 0 {
            let total = 1u64 << (arity * n);
            (
                par::find_first(opts.exec, 0..total, |code| refute(decode(code))),
                total,
            )
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(k as u64);
            let codes: Vec<u64> = (0..opts.samples)
                .map(|_| rng.gen_range(0..1u64 << (arity * n)))
                .collect();
            (
                par::find_first_in(opts.exec, &codes, |&code| refute(decode(code))),
                opts.samples,
            )
        };
        slot.checked += total;
        slot.counterexample = found;
    }

    AxiomReport {
        results,
        mode: if exhaustive {
            SweepMode::Exhaustive
        } else {
            SweepMode::Sampled {
                seed: opts.seed,
                samples: opts.samples,
            }
        },
        full_valuation_space: m.is_full_valuation_space(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cjmodel::{build_example_1_1, build_example_1_1_forced, ObMap};
    use crate::formula::parse;

    #[test]
    fn example_passes_all() {
        let r = check_axioms(&build_example_1_1());
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.results.len(), 15);
        assert_eq!(r.mode, SweepMode::Exhaustive);
        assert!(r.full_valuation_space);
        // (5) has three letters over four worlds
        assert_eq!(r.get(5).checked, 1 << 12);
    }

    #[test]
    fn forced_example_still_passes() {
        let m = build_example_1_1_forced();
        assert!(check_axioms(&m).all_pass());
        assert!(m.is_valid(&parse("O(p / p)").unwrap()).unwrap());
    }

    #[test]
    fn av_outside_pv_breaks_3() {
        let all = Set::full(2);
        let m = CJModel::new(
            vec!["u".into(), "v".into()],
            vec![],
            vec![],
            vec![all, Set::singleton(1)],
            vec![Set::singleton(0), all],
            ObMap::empty(2),
        )
        .unwrap();
        let r = check_axioms(&m);
        let w = r.get(3).counterexample.clone().expect("(3) fails");
        assert_eq!(w.world, 0);
        let phi = w.assignment[0].1;
        // [p]phi holds at u, [a]phi does not
        assert!(m.box_p(phi).contains(0) && !m.box_a(phi).contains(0));
        assert!(r.get(1).pass() && r.get(2).pass());
    }

    #[test]
    fn empty_av_breaks_d() {
        let all = Set::full(2);
        let m = CJModel::new(
            vec!["u".into(), "v".into()],
            vec![],
            vec![],
            vec![Set::EMPTY, all],
            vec![all, all],
            ObMap::empty(2),
        )
        .unwrap();
        let w = check_axioms(&m).get(2).counterexample.clone().unwrap();
        assert_eq!(w.variant, "D");
    }

    #[test]
    fn sampling_is_seeded_and_modes_agree() {
        let m = build_example_1_1();
        let opts = AxiomOptions {
            exhaustive_max: 2,
            samples: 500,
            seed: 7,
            exec: Exec::Sequential,
        };
        let a = check_axioms_with(&m, &opts);
        let b = check_axioms_with(
            &m,
            &AxiomOptions {
                exec: Exec::Parallel,
                ..opts
            },
        );
        assert_eq!(a, b);
        assert_eq!(
            a.mode,
            SweepMode::Sampled {
                seed: 7,
                samples: 500
            }
        );
    }
}
