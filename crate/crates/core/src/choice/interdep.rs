//! Implications and non-implications between the laws, decided on every
//! choice function over small universes.
//!
//! The search assigns `f` set by set in increasing mask order, deciding for
//! each set whether it belongs to the domain and, if so, its value. After
//! every step the premises are checked on the part assigned so far: each law
//! is preserved under shrinking the domain, so a failure there persists in
//! every completion and the branch is cut. Closure under intersection and
//! difference is likewise decided as soon as both operands are placed; union
//! closure and the conclusion are checked at the leaves.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::closure::{closure_witness, Closure};
use super::props::{check_property, holds, Counterexample, Property};
use super::{Choice, SmallChoice};
use crate::par::{self, Exec};
use crate::set::Set;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Implies,
    Equivalent,
    NotImplies,
}

impl RowKind {
    pub fn symbol(self) -> &'static str {
        match self {
            RowKind::Implies => "⇒",
            RowKind::Equivalent => "⇔",
            RowKind::NotImplies => "⇏",
        }
    }
}

/// One row: `left` together with the side conditions implies (or does not
/// imply) every law in `right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub id: &'static str,
    pub kind: RowKind,
    pub left: &'static [Property],
    /// Laws of `f` required alongside the left side.
    pub side_laws: &'static [Property],
    pub side_closures: &'static [Closure],
    pub right: &'static [Property],
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ps: &[Property]| ps.iter().map(|p| p.symbol()).collect::<Vec<_>>().join("+");
        write!(
            f,
            "({}) {} {}",
            self.id,
            join(self.left),
            self.kind.symbol()
        )?;
        let side: Vec<&str> = self
            .side_laws
            .iter()
            .map(|p| p.symbol())
            .chain(self.side_closures.iter().map(|c| c.symbol()))
            .collect();
        if !side.is_empty() {
            write!(f, " [{}]", side.join("+"))?;
        }
        write!(f, " {}", join(self.right))
    }
}

use Closure::{
    Difference as Diff, Intersection as Cap, PowerSet, Singletons as Sing, Union as Cup,
};
use Property as P;

macro_rules! row {
    ($id:literal, $kind:ident, [$($l:expr),*], [$($s:expr),*], [$($c:expr),*], [$($r:expr),*]) => {
        Row {
            id: $id,
            kind: RowKind::$kind,
            left: &[$($l),*],
            side_laws: &[$($s),*],
            side_closures: &[$($c),*],
            right: &[$($r),*],
        }
    };
}

static ROWS: &[Row] = &[
    row!("1.1", Implies, [P::Pr], [P::Subset], [Cap], [P::PrPrime]),
    row!("1.2", Implies, [P::PrPrime], [], [], [P::Pr]),
    row!("2.1", Implies, [P::Pr], [P::Subset], [], [P::Or]),
    row!("2.2", Implies, [P::Or], [P::Subset], [Diff], [P::Pr]),
    row!("2.3", Implies, [P::Pr], [P::Subset], [], [P::WOr]),
    row!("2.4", Implies, [P::WOr], [P::Subset], [Diff], [P::Pr]),
    row!("3", Implies, [P::Pr], [], [], [P::Cut]),
    row!(
        "4",
        NotImplies,
        [P::Subset, P::SubsetSupset, P::Cum, P::RatM],
        [],
        [Cap],
        [P::Pr]
    ),
    row!("5.1", Implies, [P::Cm], [P::Subset], [Cap], [P::ResM]),
    row!("5.2", Implies, [P::ResM], [], [], [P::Cm]),
    row!("6", Equivalent, [P::Cm, P::Cut], [], [], [P::Cum]),
    row!("7", Implies, [P::Subset, P::SubsetSupset], [], [], [P::Cum]),
    row!(
        "8",
        Implies,
        [P::Subset, P::Cum],
        [],
        [Cap],
        [P::SubsetSupset]
    ),
    row!(
        "9",
        NotImplies,
        [P::Subset, P::Cum],
        [],
        [],
        [P::SubsetSupset]
    ),
    row!("10", Implies, [P::RatM, P::Pr], [], [], [P::Eq]),
    row!("11", Implies, [P::Eq], [], [], [P::Pr, P::RatM]),
    row!("12.1", Implies, [P::Eq], [P::Subset], [Cap], [P::EqPrime]),
    row!("12.2", Implies, [P::EqPrime], [], [], [P::Eq]),
    row!("13", Implies, [P::Subset, P::Eq], [], [Cup], [P::Cup]),
    row!(
        "14",
        Implies,
        [P::Subset, P::Empty, P::Eq],
        [],
        [Cup],
        [P::Par, P::CupPrime, P::Cum]
    ),
    row!("15", Implies, [P::Subset, P::Par], [], [Diff], [P::Eq]),
    row!(
        "16",
        Implies,
        [P::Par, P::In, P::Pr, P::Subset],
        [],
        [Cup, Sing],
        [P::Eq]
    ),
    row!("17", Implies, [P::Cum, P::Eq], [], [Cup, Sing], [P::In]),
    row!(
        "18",
        Implies,
        [P::Cum, P::Eq, P::Subset],
        [],
        [Cup],
        [P::Par]
    ),
    row!(
        "19",
        Implies,
        [P::Pr, P::Cum, P::Par],
        [P::Subset],
        [PowerSet],
        [P::Eq]
    ),
    row!(
        "20",
        NotImplies,
        [P::Subset, P::Pr, P::Eq],
        [],
        [],
        [P::Par]
    ),
    row!(
        "21",
        NotImplies,
        [P::Subset, P::Pr, P::Par],
        [],
        [],
        [P::Eq]
    ),
    row!(
        "22",
        NotImplies,
        [P::Subset, P::Pr, P::Par, P::Eq, P::Cup],
        [],
        [],
        [P::In]
    ),
];

pub fn rows() -> &'static [Row] {
    ROWS
}

pub fn row(id: &str) -> Option<&'static Row> {
    let id = id.trim().trim_start_matches('(').trim_end_matches(')');
    ROWS.iter().find(|r| r.id == id)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterdepError {
    #[error("unknown row `{0}`")]
    UnknownRow(String),
    #[error("exhaustive enumeration is limited to |U| <= {max}, got cap {cap}; use sampling")]
    CapTooLarge { cap: usize, max: usize },
    #[error("sampling is limited to |U| <= {max}, got cap {cap}")]
    SampleCapTooLarge { cap: usize, max: usize },
}

/// Largest universe enumerated exhaustively.
pub const EXHAUSTIVE_MAX: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterdepOptions {
    pub cap: usize,
    pub exec: Exec,
    /// `(seed, samples)`: sizes above [`EXHAUSTIVE_MAX`] are sampled.
    pub sampling: Option<(u64, u64)>,
}

impl Default for InterdepOptions {
    fn default() -> Self {
        InterdepOptions {
            cap: EXHAUSTIVE_MAX,
            exec: Exec::default(),
            sampling: None,
        }
    }
}

/// A function on which the premises hold and some conclusion fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallWitness {
    pub choice: SmallChoice,
    /// The failing law and its refuting instance.
    pub failed: Property,
    pub counterexample: Counterexample,
    /// Found while checking the right-to-left half of an equivalence.
    pub converse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOutcome {
    /// An implication holds on every instance examined.
    Verified,
    /// An implication is refuted.
    Counterexample(SmallWitness),
    /// A non-implication is confirmed.
    WitnessFound(SmallWitness),
    /// A non-implication has no witness in the searched space.
    NoWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterdepReport {
    pub row: &'static Row,
    pub cap: usize,
    /// `(seed, samples)` when sizes above the exhaustive bound were sampled.
    pub sampling: Option<(u64, u64)>,
    /// Functions satisfying the premises and side conditions.
    pub instances: u64,
    pub outcome: RowOutcome,
}

impl InterdepReport {
    /// Whether the row's claim is confirmed.
    pub fn confirmed(&self) -> bool {
        matches!(
            self.outcome,
            RowOutcome::Verified | RowOutcome::WitnessFound(_)
        )
    }

    /// Whether the row's claim is contradicted.
    pub fn refuted(&self) -> bool {
        matches!(self.outcome, RowOutcome::Counterexample(_))
    }

    pub fn summary(&self) -> String {
        match &self.outcome {
            RowOutcome::Verified if self.sampling.is_some() => {
                format!(
                    "verified to cap {} (sampled above {EXHAUSTIVE_MAX})",
                    self.cap
                )
            }
            RowOutcome::Verified => format!("verified to cap {}", self.cap),
            RowOutcome::Counterexample(_) => "counterexample".to_string(),
            RowOutcome::WitnessFound(_) => "witness found".to_string(),
            RowOutcome::NoWitness => format!("no witness up to cap {}", self.cap),
        }
    }
}

/// One search direction: premises plus closures, refuted conclusion wanted.
struct Problem<'a> {
    premises: Vec<Property>,
    closures: &'a [Closure],
    conclusion: &'a [Property],
    prune_subset: bool,
    converse: bool,
}

impl Problem<'_> {
    fn needs(&self, c: Closure) -> bool {
        self.closures.contains(&c)
    }

    fn premises_hold(&self, c: &SmallChoice) -> bool {
        self.premises.iter().all(|&p| holds(c, p))
    }

    /// The first failing conclusion, if any.
    fn refute(&self, c: &SmallChoice) -> Option<SmallWitness> {
        self.conclusion.iter().find_map(|&p| {
            check_property(c, p).counterexample.map(|w| SmallWitness {
                choice: *c,
                failed: p,
                counterexample: w,
                converse: self.converse,
            })
        })
    }

    fn closures_hold(&self, c: &SmallChoice) -> bool {
        self.closures
            .iter()
            .all(|&cl| closure_witness(c.n, |x| c.in_domain(x), cl).is_none())
    }
}

fn problems(row: &Row) -> Vec<Problem<'_>> {
    let make = |left: &[Property], right: &'static [Property], converse: bool| {
        let premises: Vec<Property> = left.iter().chain(row.side_laws).copied().collect();
        Problem {
            prune_subset: premises.contains(&Property::Subset),
            premises,
            closures: row.side_closures,
            conclusion: right,
            converse,
        }
    };
    let mut out = vec![make(row.left, row.right, false)];
    if row.kind == RowKind::Equivalent {
        out.push(make(row.right, row.left, true));
    }
    out
}

#[derive(Default)]
struct Tally {
    instances: u64,
    witness: Option<SmallWitness>,
}

struct Search<'a> {
    p: &'a Problem<'a>,
    n: usize,
    sets: usize,
}

impl Search<'_> {
    /// Options for the set with mask `k`: `None` keeps it out of the domain.
    fn options(&self, k: usize) -> Vec<Option<Set>> {
        let x = Set(k as u64);
        let forced =
            self.p.needs(Closure::PowerSet) || (self.p.needs(Closure::Singletons) && x.len() == 1);
        let range = if self.p.prune_subset {
            x
        } else {
            Set::full(self.n)
        };
        let mut out: Vec<Option<Set>> = if forced { vec![] } else { vec![None] };
        out.extend(range.subsets().map(Some));
        out
    }

    /// Whether the prefix through mask `k` can still be completed.
    fn prefix_ok(&self, c: &SmallChoice, k: usize) -> bool {
        let x = Set(k as u64);
        let assigned: u32 = if k == 31 {
            u32::MAX
        } else {
            (1u32 << (k + 1)) - 1
        };
        if c.in_domain(x) {
            let earlier = (0..k as u64).map(Set).filter(|&y| c.in_domain(y));
            for y in earlier {
                if self.p.needs(Closure::Intersection) && !c.in_domain(x.inter(y)) {
                    return false;
                }
                if self.p.needs(Closure::Difference)
                    && (!c.in_domain(x.minus(y)) || !c.in_domain(y.minus(x)))
                {
                    return false;
                }
            }
        }
        self.p.premises_hold(&c.restricted(assigned))
    }

    fn leaf(&self, c: &SmallChoice, t: &mut Tally) -> bool {
        if !self.p.closures_hold(c) {
            return true;
        }
        t.instances += 1;
        match self.p.refute(c) {
            Some(w) => {
                t.witness = Some(w);
                false
            }
            None => true,
        }
    }

    fn dfs(&self, k: usize, c: &mut SmallChoice, t: &mut Tally) -> bool {
        if k == self.sets {
            return self.leaf(c, t);
        }
        let x = Set(k as u64);
        for opt in self.options(k) {
            match opt {
                None => c.dom &= !(1 << k),
                Some(v) => c.set(x, v),
            }
            if self.prefix_ok(c, k) && !self.dfs(k + 1, c, t) {
                return false;
            }
        }
        c.dom &= !(1 << k);
        true
    }

    /// Partial assignments of the first `depth` sets that survive pruning.
    fn frontier(&self, depth: usize) -> Vec<SmallChoice> {
        let mut layer = vec![SmallChoice::new(self.n)];
        for k in 0..depth.min(self.sets) {
            let x = Set(k as u64);
            let mut next = Vec::new();
            for c in &layer {
                for opt in self.options(k) {
                    let mut c2 = *c;
                    if let Some(v) = opt {
                        c2.set(x, v);
                    }
                    if self.prefix_ok(&c2, k) {
                        next.push(c2);
                    }
                }
            }
            layer = next;
        }
        layer
    }

    fn run(&self, exec: Exec) -> Tally {
        let depth = 3.min(self.sets);
        let frontier = self.frontier(depth);
        let parts = par::map_in(exec, &frontier, |start| {
            let mut t = Tally::default();
            let mut c = *start;
            self.dfs(depth, &mut c, &mut t);
            t
        });
        let mut total = Tally::default();
        for t in parts {
            total.instances += t.instances;
            if total.witness.is_none() {
                total.witness = t.witness;
            }
        }
        total
    }
}

/// Random domain satisfying the required closures.
fn sample_domain<R: Rng>(rng: &mut R, n: usize, closures: &[Closure]) -> u32 {
    let sets = 1usize << n;
    let full: u32 = if sets == 32 {
        u32::MAX
    } else {
        (1 << sets) - 1
    };
    if closures.contains(&Closure::PowerSet) {
        return full;
    }
    let mut dom: u32 = rng.gen::<u32>() & full;
    if closures.contains(&Closure::Singletons) {
        for i in 0..n {
            dom |= 1 << (1 << i);
        }
    }
    loop {
        let before = dom;
        let members: Vec<usize> = (0..sets).filter(|&i| dom >> i & 1 == 1).collect();
        for &a in &members {
            for &b in &members {
                for (c, op) in [
                    (Closure::Intersection, a & b),
                    (Closure::Union, a | b),
                    (Closure::Difference, a & !b),
                ] {
                    if closures.contains(&c) {
                        dom |= 1 << op;
                    }
                }
            }
        }
        if dom == before {
            return dom;
        }
    }
}

/// Random function on `dom`: uniform values, or the minimal elements of a
/// random strict relation, which satisfies many laws at once.
fn sample_function<R: Rng>(rng: &mut R, n: usize, dom: u32, prune_subset: bool) -> SmallChoice {
    let mut c = SmallChoice::new(n);
    let all = Set::full(n);
    if rng.gen_bool(0.5) {
        let rank: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n as u32 + 1)).collect();
        let ranked = rng.gen_bool(0.5);
        let edges: Vec<bool> = (0..n * n).map(|_| rng.gen_bool(0.3)).collect();
        let less = |a: usize, b: usize| {
            if ranked {
                rank[a] < rank[b]
            } else {
                a < b && edges[a * n + b] || a > b && edges[a * n + b] && !edges[b * n + a]
            }
        };
        for i in 0..1usize << n {
            if dom >> i & 1 == 1 {
                let x = Set(i as u64);
                let min = Set::from_elements(x.iter().filter(|&a| !x.iter().any(|b| less(b, a))));
                c.set(x, min);
            }
        }
    } else {
        for i in 0..1usize << n {
            if dom >> i & 1 == 1 {
                let x = Set(i as u64);
                let within = if prune_subset { x } else { all };
                c.set(x, crate::gen::subset(rng, within));
            }
        }
    }
    c
}

fn sample(p: &Problem<'_>, n: usize, seed: u64, samples: u64, exec: Exec) -> Tally {
    let parts = par::map(exec, 0..samples, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let dom = sample_domain(&mut rng, n, p.closures);
        let c = sample_function(&mut rng, n, dom, p.prune_subset);
        if !p.premises_hold(&c) || !p.closures_hold(&c) {
            return (0, None);
        }
        (1, p.refute(&c))
    });
    let mut t = Tally::default();
    for (count, w) in parts {
        t.instances += count;
        if t.witness.is_none() {
            t.witness = w;
        }
    }
    t
}

/// Decide one row over all universes of size `1..=cap`.
pub fn check_interdependency(
    row: &'static Row,
    opts: &InterdepOptions,
) -> Result<InterdepReport, InterdepError> {
    if opts.cap > EXHAUSTIVE_MAX && opts.sampling.is_none() {
        return Err(InterdepError::CapTooLarge {
            cap: opts.cap,
            max: EXHAUSTIVE_MAX,
        });
    }
    if opts.cap > SmallChoice::MAX_N {
        return Err(InterdepError::SampleCapTooLarge {
            cap: opts.cap,
            max: SmallChoice::MAX_N,
        });
    }
    let mut instances = 0;
    let mut witness = None;
    'outer: for p in problems(row) {
        for n in 1..=opts.cap {
            let t = match opts.sampling {
                Some((seed, samples)) if n > EXHAUSTIVE_MAX => {
                    sample(&p, n, seed ^ (n as u64) << 32, samples, opts.exec)
                }
                _ => Search {
                    p: &p,
                    n,
                    sets: 1 << n,
                }
                .run(opts.exec),
            };
            instances += t.instances;
            if t.witness.is_some() {
                witness = t.witness;
                break 'outer;
            }
        }
    }
    let outcome = match (row.kind, witness) {
        (RowKind::NotImplies, Some(w)) => RowOutcome::WitnessFound(w),
        (RowKind::NotImplies, None) => RowOutcome::NoWitness,
        (_, Some(w)) => RowOutcome::Counterexample(w),
        (_, None) => RowOutcome::Verified,
    };
    Ok(InterdepReport {
        row,
        cap: opts.cap,
        sampling: opts.sampling.filter(|_| opts.cap > EXHAUSTIVE_MAX),
        instances,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(id: &str, cap: usize) -> InterdepReport {
        let opts = InterdepOptions {
            cap,
            ..Default::default()
        };
        check_interdependency(row(id).unwrap(), &opts).unwrap()
    }

    #[test]
    fn row_lookup() {
        assert_eq!(rows().len(), 28);
        assert_eq!(row("(12.1)").unwrap().right, &[Property::EqPrime]);
        assert!(row("23").is_none());
        assert_eq!(row("6").unwrap().to_string(), "(6) (μCM)+(μCUT) ⇔ (μCUM)");
    }

    #[test]
    fn small_caps_verify() {
        for id in ["10", "11", "6", "1.1", "3"] {
            let r = run(id, 2);
            assert!(r.confirmed(), "{id}: {r:?}");
            assert!(r.instances > 0);
        }
    }

    #[test]
    fn search_matches_brute_force_count() {
        // (μ⊆)+(μ⊆⊇) on |U| = 2, checked against a plain enumeration of
        // all domains and all f with f(X) ⊆ X.
        let r = run("7", 2);
        let mut count = 0;
        for n in 1..=2usize {
            let sets = 1u64 << n;
            for dom in 0u32..1 << sets {
                let members: Vec<u64> = (0..sets).filter(|i| dom >> i & 1 == 1).collect();
                let total: u64 = members.iter().map(|&m| 1u64 << Set(m).len()).product();
                for code in 0..total {
                    let mut c = SmallChoice::new(n);
                    let mut rest = code;
                    for &m in &members {
                        let k = 1u64 << Set(m).len();
                        let pick = Set(m).subsets().nth((rest % k) as usize).unwrap();
                        rest /= k;
                        c.set(Set(m), pick);
                    }
                    if holds(&c, Property::Subset) && holds(&c, Property::SubsetSupset) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(r.instances, count);
    }

    #[test]
    fn modes_agree() {
        let row = row("2.2").unwrap();
        let a = check_interdependency(
            row,
            &InterdepOptions {
                cap: 2,
                exec: Exec::Sequential,
                sampling: None,
            },
        )
        .unwrap();
        let b = check_interdependency(
            row,
            &InterdepOptions {
                cap: 2,
                exec: Exec::Parallel,
                sampling: None,
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cap_bounds() {
        let r = row("3").unwrap();
        let opts = InterdepOptions {
            cap: 4,
            ..Default::default()
        };
        assert!(matches!(
            check_interdependency(r, &opts),
            Err(InterdepError::CapTooLarge { .. })
        ));
        let opts = InterdepOptions {
            cap: 4,
            sampling: Some((1, 200)),
            ..Default::default()
        };
        let rep = check_interdependency(r, &opts).unwrap();
        assert!(rep.confirmed());
        assert_eq!(rep.sampling, Some((1, 200)));
    }

    #[test]
    fn sampled_domains_respect_closures() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let dom = sample_domain(&mut rng, 3, &[Closure::Union, Closure::Singletons]);
            let c = SmallChoice {
                dom,
                ..SmallChoice::new(3)
            };
            assert!(closure_witness(3, |x| c.in_domain(x), Closure::Union).is_none());
            assert!(closure_witness(3, |x| c.in_domain(x), Closure::Singletons).is_none());
        }
    }
}
