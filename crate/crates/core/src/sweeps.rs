//! Desk-scale sweeps: seeded or exhaustive runs of the checks over whole
//! families of small objects. Each takes an [`Exec`] so the sequential and
//! parallel back ends can be compared.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::choice::{check_property, holds, Choice, ChoiceFunction, Property};
use crate::cjmodel::axioms::{check_axioms_with, AxiomOptions};
use crate::cjmodel::{check_frame, CJModel};
use crate::formula::{parse, render, Formula, Fragment};
use crate::gen;
use crate::modal::{agreement_check, all_models, ratm_counterexample, BiModalModel};
use crate::par::{self, Exec};
use crate::prefstruct::{CopyRef, PrefStructure, RANK_HOLD};
use crate::represent::{
    extend_to_total_preorder, normalize_one_infinity, reflexive_transitive_closure,
    represent_ranked, verify_representation,
};
use crate::set::{Family, Set};

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Outcome of a sweep: how many objects were checked and the first failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally<W> {
    pub checked: u64,
    pub failure: Option<W>,
}

impl<W> Tally<W> {
    pub fn pass(&self) -> bool {
        self.failure.is_none()
    }
}

fn tally<T: Sync, W: Send>(
    exec: Exec,
    items: &[T],
    check: impl Fn(&T) -> Option<W> + Sync + Send,
) -> Tally<W> {
    Tally {
        checked: items.len() as u64,
        failure: par::find_first_in(exec, items, check),
    }
}

/// Seeded frame-valid model number `i`: 1 to `max_worlds` worlds, two atoms,
/// alternating stored and normalized `ob`.
pub fn soundness_model(seed: u64, i: u64, max_worlds: usize) -> CJModel {
    let mut rng = rng_for(seed, i);
    let n = rng.gen_range(1..=max_worlds);
    let density = rng.gen_range(0.2..0.8);
    gen::frame_valid_cj(&mut rng, n, 2, density, i % 2 == 1)
}

/// Frame-valid random models satisfy every axiom. Failures name the model
/// index and the first failing axiom.
pub fn soundness(seed: u64, count: u64, max_worlds: usize, exec: Exec) -> Tally<(u64, u8)> {
    let opts = AxiomOptions {
        exec: Exec::Sequential,
        ..AxiomOptions::default()
    };
    let ids: Vec<u64> = (0..count).collect();
    tally(exec, &ids, |&i| {
        let m = soundness_model(seed, i, max_worlds);
        assert!(
            check_frame(&m).all_pass(),
            "generator produced a frame violation"
        );
        let report = check_axioms_with(&m, &opts);
        report.results.iter().find(|r| !r.pass()).map(|r| (i, r.id))
    })
}

/// All `f` on `P(U)`, `|U| = n`, with (μ⊆), (μ∅) and (μ=).
pub fn admissible_ranked_choices(n: usize) -> Vec<ChoiceFunction> {
    let nonempty: Vec<Set> = Set::full(n).subsets().filter(|x| !x.is_empty()).collect();
    let mut out = Vec::new();
    let mut values = vec![Set::EMPTY; 1 << n];
    fn go(k: usize, sets: &[Set], values: &mut [Set], n: usize, out: &mut Vec<ChoiceFunction>) {
        let Some(&x) = sets.get(k) else {
            let cf = ChoiceFunction::total(n, |x| values[x.index()]);
            if holds(&cf, Property::Eq) {
                out.push(cf);
            }
            return;
        };
        for v in x.subsets().filter(|v| !v.is_empty()) {
            values[x.index()] = v;
            // (μ=) only compares a set with its supersets, all fixed later;
            // prune on the already fixed subsets
            if consistent_so_far(&sets[..=k], values, v, x) {
                go(k + 1, sets, values, n, out);
            }
        }
    }
    go(0, &nonempty, &mut values, n, &mut out);
    out
}

/// (μ=) between `x` (value `v`) and every earlier subset of it.
fn consistent_so_far(fixed: &[Set], values: &[Set], v: Set, x: Set) -> bool {
    fixed.iter().all(|&y| {
        if y == x || !y.is_subset(x) || !v.intersects(y) {
            return true;
        }
        values[y.index()] == v.inter(y)
    })
}

/// Ranked representation for every admissible `f` on `|U| = n`, on `P(U)`
/// and on `P(U) − {∅}`. Failures carry the offending function.
pub fn representation(n: usize, exec: Exec) -> Tally<ChoiceFunction> {
    let mut nonempty = Family::power_set(Set::full(n));
    nonempty.remove(Set::EMPTY);
    let fs: Vec<ChoiceFunction> = admissible_ranked_choices(n)
        .into_iter()
        .flat_map(|f| {
            let g = f.restrict(&nonempty);
            [f, g]
        })
        .collect();
    tally(exec, &fs, |f| {
        let ok = represent_ranked(f)
            .map(|s| {
                verify_representation(f, &s).is_ok()
                    && s.is_ranked().is_ok()
                    && s.is_smooth(f.entries().map(|(x, _)| x)).is_ok()
                    && (0..1u64 << n)
                        .map(Set)
                        .filter(|&x| f.in_domain(x))
                        .all(|x| s.mu(x) == f.image(x))
            })
            .unwrap_or(false);
        (!ok).then(|| f.clone())
    })
}

/// Every relation on `n` points (loops included) extends to a total
/// preorder with the required property. Failures carry the relation.
pub fn preorder_extension(n: usize, exec: Exec) -> Tally<Vec<u64>> {
    assert!(n * n <= 20);
    let mask = (1u64 << n) - 1;
    let codes: Vec<u64> = (0..1u64 << (n * n)).collect();
    tally(exec, &codes, |&code| {
        let r: Vec<u64> = (0..n).map(|x| code >> (x * n) & mask).collect();
        let s = extend_to_total_preorder(&r);
        let star = reflexive_transitive_closure(&r);
        let extends = (0..n).all(|x| (0..n).all(|y| r[x] >> y & 1 == 0 || s.holds(x, y)));
        let faithful = (0..n)
            .all(|x| (0..n).all(|y| !(s.holds(x, y) && s.holds(y, x)) || star[x] >> y & 1 == 1));
        let ok = extends && faithful && s.is_total() && s.is_reflexive() && s.is_transitive();
        (!ok).then_some(r)
    })
}

/// Every ordered partition of `0..k`, as a rank per element.
pub fn weak_orders(k: usize) -> Vec<Vec<u8>> {
    // set partitions as restricted growth strings, then every block order
    let mut partitions = Vec::new();
    let mut rgs = vec![0u8; k];
    fn grow(i: usize, max: u8, rgs: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == rgs.len() {
            out.push(rgs.clone());
            return;
        }
        for b in 0..=max + 1 {
            if i == 0 && b > 0 {
                break;
            }
            rgs[i] = b;
            grow(i + 1, max.max(b), rgs, out);
        }
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    grow(0, 0, &mut rgs, &mut partitions);
    let mut out = Vec::new();
    for p in partitions {
        let blocks = *p.iter().max().expect("nonempty") as usize + 1;
        let mut perm: Vec<u8> = (0..blocks as u8).collect();
        permutations(&mut perm, 0, &mut |order| {
            out.push(p.iter().map(|&b| order[b as usize]).collect());
        });
    }
    out
}

fn permutations(items: &mut [u8], k: usize, visit: &mut impl FnMut(&[u8])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Copies `copies[i]` ordered by `rank[i]`.
pub fn ranked_from(points: usize, copies: &[CopyRef], rank: &[u8]) -> PrefStructure {
    let mut edges = Vec::new();
    for (i, &a) in copies.iter().enumerate() {
        for (j, &b) in copies.iter().enumerate() {
            if rank[i] < rank[j] {
                edges.push((a, b));
            }
        }
    }
    PrefStructure::new(
        PrefStructure::unnamed_points(points),
        copies.iter().copied(),
        Set::EMPTY,
        edges,
    )
    .expect("well formed")
}

/// Copy layouts on `z` points: each point has 1 or 2 copies, except that
/// at most one point may have none.
fn copy_layouts(z: usize) -> Vec<Vec<CopyRef>> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(z as u32) {
        let counts: Vec<u32> = (0..z)
            .map(|p| (code / 3usize.pow(p as u32) % 3) as u32)
            .collect();
        if counts.iter().filter(|&&c| c == 0).count() > 1 {
            continue;
        }
        out.push(
            counts
                .iter()
                .enumerate()
                .flat_map(|(p, &c)| (0..c).map(move |index| CopyRef { point: p, index }))
                .collect(),
        );
    }
    out
}

/// Every ranked cycle-free structure on up to `max_z` points with the
/// layouts of [`copy_layouts`]: normalization keeps `μ` on all subsets and
/// leaves one copy or an ω chain per point. Failures carry the structure.
pub fn normalization(max_z: usize, exec: Exec) -> Tally<PrefStructure> {
    let jobs: Vec<(usize, Vec<CopyRef>)> = (1..=max_z)
        .flat_map(|z| copy_layouts(z).into_iter().map(move |l| (z, l)))
        .collect();
    let orders: Vec<Vec<Vec<u8>>> = (0..=2 * max_z).map(weak_orders).collect();
    let checked: u64 = jobs.iter().map(|(_, l)| orders[l.len()].len() as u64).sum();
    let failure = par::find_first_in(exec, &jobs, |(z, layout)| {
        orders[layout.len()].iter().find_map(|rank| {
            let s = ranked_from(*z, layout, rank);
            let out = normalize_one_infinity(&s, s.points()).ok()?;
            let one_infinity = (0..*z).all(|p| {
                let c = out.copies().iter().filter(|c| c.point == p).count();
                (c == 1) != out.omega().contains(p) && c <= 1
            });
            let same = Set::full(*z).subsets().all(|x| s.mu(x) == out.mu(x));
            let ok = one_infinity && same && out.is_ranked().is_ok() && out.find_cycle().is_none();
            (!ok).then_some(s)
        })
    });
    Tally { checked, failure }
}

/// Every single-copy ranked structure on `n` points satisfies the laws of
/// [`RANK_HOLD`] on `P(Z)`. Failures carry the ranks and the law.
pub fn rank_hold(n: usize, exec: Exec) -> Tally<(Vec<u8>, Property)> {
    let orders = weak_orders(n);
    let copies: Vec<CopyRef> = (0..n).map(|p| CopyRef { point: p, index: 0 }).collect();
    let y = Family::power_set(Set::full(n));
    tally(exec, &orders, |rank| {
        let s = ranked_from(n, &copies, rank);
        let cf = s.choice_function(&y).expect("small");
        RANK_HOLD
            .iter()
            .find(|&&p| !check_property(&cf, p).verdict.ok())
            .map(|&p| (rank.clone(), p))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModalFailure {
    Disagreement {
        model: BiModalModel,
        alpha: Set,
        beta: Set,
    },
    RatM {
        model: BiModalModel,
        sets: [Set; 3],
    },
}

/// Conditional agreement on every model up to `max_worlds`, and the (RatM)
/// instance on those whose `R′` is ranked.
pub fn modal_agreement(max_worlds: usize, exec: Exec) -> (Tally<ModalFailure>, u64) {
    let models: Vec<BiModalModel> = (1..=max_worlds).flat_map(all_models).collect();
    let ranked = models
        .iter()
        .filter(|m| m.preference().is_ranked().is_ok())
        .count() as u64;
    let t = tally(exec, &models, |m| {
        let report = agreement_check(m);
        if let Some(&(alpha, beta, _)) = report.disagreements.first() {
            return Some(ModalFailure::Disagreement {
                model: m.clone(),
                alpha,
                beta,
            });
        }
        if m.preference().is_ranked().is_ok() {
            if let Some(sets) = ratm_counterexample(m) {
                return Some(ModalFailure::RatM {
                    model: m.clone(),
                    sets,
                });
            }
        }
        None
    });
    (t, ranked)
}

/// `count` seeded formulas over both languages survive `parse ∘ render`.
pub fn parser_round_trip(seed: u64, count: u64, exec: Exec) -> Tally<Formula> {
    let atoms: Vec<String> = ["p", "q", "r", "s1"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let ids: Vec<u64> = (0..count).collect();
    tally(exec, &ids, |&i| {
        let mut rng = rng_for(seed, i);
        let fragment = if i % 2 == 0 {
            Fragment::Deontic
        } else {
            Fragment::Bimodal
        };
        let depth = rng.gen_range(1..=7);
        let f = gen::formula(&mut rng, &atoms, depth, fragment);
        let text = render(&f);
        match parse(&text) {
            Ok(g) if g == f && render(&g) == text => None,
            _ => Some(f),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_bell_numbers() {
        let counts: Vec<usize> = (0..=5).map(|k| weak_orders(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 13, 75, 541]);
    }

    #[test]
    fn admissible_counts() {
        let counts: Vec<usize> = (1..=4)
            .map(|n| admissible_ranked_choices(n).len())
            .collect();
        assert_eq!(counts, vec![1, 3, 13, 75]);
    }

    #[test]
    fn layouts() {
        // 3^2 codes minus the one with two copyless points
        assert_eq!(copy_layouts(2).len(), 8);
    }

    #[test]
    fn small_sweeps_pass_in_both_modes() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert!(soundness(1, 20, 3, exec).pass());
            assert!(representation(3, exec).pass());
            assert!(preorder_extension(3, exec).pass());
            assert!(normalization(2, exec).pass());
            assert!(rank_hold(3, exec).pass());
            assert!(modal_agreement(2, exec).0.pass());
            assert!(parser_round_trip(3, 200, exec).pass());
        }
    }
}
