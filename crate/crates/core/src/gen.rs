//! Seeded random generators for sweeps and property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cjmodel::{CJModel, ObMap};
use crate::formula::{Formula, Fragment};
use crate::prefstruct::{CopyRef, PrefStructure};
use crate::set::{Family, Set};

/// Uniformly random subset of `within`.
pub fn subset<R: Rng + ?Sized>(rng: &mut R, within: Set) -> Set {
    Set(rng.gen::<u64>() & within.bits())
}

/// Uniformly random nonempty subset of a nonempty `within`.
pub fn nonempty_subset<R: Rng + ?Sized>(rng: &mut R, within: Set) -> Set {
    assert!(!within.is_empty());
    loop {
        let s = subset(rng, within);
        if !s.is_empty() {
            return s;
        }
    }
}

fn world_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

fn atom_names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("p{i}")).collect()
}

/// Random `av`, `pv` with `∅ ≠ av(w) ⊆ pv(w)` and `w ∈ pv(w)`.
fn accessibility<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (Vec<Set>, Vec<Set>) {
    let all = Set::full(n);
    let pv: Vec<Set> = (0..n).map(|w| subset(rng, all).with(w)).collect();
    let av = pv.iter().map(|&p| nonempty_subset(rng, p)).collect();
    (av, pv)
}

/// Close per-context cores (subsets of the context) under intersection and
/// under `Y ∈ F(X), X ⊆ Z ⟹ (Z − X) ∪ Y ∈ F(Z)` until nothing changes.
fn close_cores(n: usize, cores: &mut [Family]) {
    let all = Set::full(n);
    loop {
        let mut changed = false;
        for x in Set::all_subsets(n) {
            let members: Vec<Set> = cores[x.index()].iter().collect();
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    let c = a.inter(b);
                    if !cores[x.index()].contains(c) {
                        cores[x.index()].insert(c);
                        changed = true;
                    }
                }
                for z in x.supersets_in(all) {
                    let d = z.minus(x).union(a);
                    if !cores[z.index()].contains(d) {
                        cores[z.index()].insert(d);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// A model satisfying every frame condition 3-a .. 5-d.
///
/// `density` is the chance that a context receives a random seed member.
/// With `normalized` the map is stored as cores; otherwise each core is
/// expanded to all sets agreeing with it inside the context.
pub fn frame_valid_cj<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    atoms: usize,
    density: f64,
    normalized: bool,
) -> CJModel {
    let cores = loop {
        let mut cores = vec![Family::EMPTY; 1 << n];
        for x in Set::all_subsets(n).skip(1) {
            while rng.gen_bool(density) {
                cores[x.index()].insert(nonempty_subset(rng, x));
            }
        }
        close_cores(n, &mut cores);
        if cores.iter().all(|f| !f.contains(Set::EMPTY)) {
            break cores;
        }
    };
    let ob = cores_to_ob(n, cores, normalized);
    let (av, pv) = accessibility(rng, n);
    let valuation = (0..atoms).map(|_| subset(rng, Set::full(n))).collect();
    CJModel::new(world_names(n), atom_names(atoms), valuation, av, pv, ob)
        .expect("generated model is well formed")
}

fn cores_to_ob(n: usize, cores: Vec<Family>, normalized: bool) -> ObMap {
    if normalized {
        return ObMap::from_families(n, cores, true);
    }
    let mut ob = ObMap::empty(n);
    for (x, fam) in Set::all_subsets(n).zip(&cores) {
        for a in fam.iter() {
            ob.insert_closed(x, a);
        }
    }
    ob
}

/// A model whose `ob` satisfies 5-b but is otherwise unconstrained;
/// accessibility may violate 3-a .. 4-b.
pub fn context_local_cj<R: Rng + ?Sized>(rng: &mut R, n: usize, atoms: usize) -> CJModel {
    let all = Set::full(n);
    let cores = Set::all_subsets(n)
        .map(|x| Family::from_sets(x.subsets().filter(|_| rng.gen_bool(0.3))))
        .collect();
    let ob = cores_to_ob(n, cores, false);
    let av = (0..n).map(|_| subset(rng, all)).collect();
    let pv = (0..n).map(|_| subset(rng, all)).collect();
    let valuation = (0..atoms).map(|_| subset(rng, all)).collect();
    CJModel::new(world_names(n), atom_names(atoms), valuation, av, pv, ob)
        .expect("generated model is well formed")
}

/// Random formula of depth at most `depth` over `atoms`, using the
/// classical connectives plus the operators of `fragment`.
pub fn formula<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[String],
    depth: usize,
    fragment: Fragment,
) -> Formula {
    if depth <= 1 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::Atom(atoms.choose(rng).expect("atoms").clone()),
        };
    }
    let d = depth - 1;
    let sub = |rng: &mut R| formula(rng, atoms, d, fragment);
    let unary: &[fn(Formula) -> Formula] = match fragment {
        Fragment::Classical => &[Formula::not],
        Fragment::Deontic => &[
            Formula::not,
            Formula::box_a,
            Formula::dia_a,
            Formula::box_p,
            Formula::dia_p,
            Formula::oa,
            Formula::op,
            Formula::dia_conv,
        ],
        Fragment::Bimodal => &[
            Formula::not,
            Formula::boxed,
            Formula::dia,
            Formula::box_min,
            Formula::dia_min,
            Formula::box_comp,
            Formula::dia_comp,
        ],
    };
    let mut binary: Vec<fn(Formula, Formula) -> Formula> =
        vec![Formula::and, Formula::or, Formula::imp, Formula::iff];
    if fragment == Fragment::Deontic {
        binary.push(Formula::ocond);
    }
    if rng.gen_bool(0.45) {
        let op = unary[rng.gen_range(0..unary.len())];
        op(sub(rng))
    } else {
        let op = binary[rng.gen_range(0..binary.len())];
        let (a, b) = (sub(rng), sub(rng));
        op(a, b)
    }
}

fn random_copies<R: Rng + ?Sized>(rng: &mut R, points: usize, max_copies: u32) -> Vec<CopyRef> {
    (0..points)
        .flat_map(|p| {
            (0..rng.gen_range(1..=max_copies)).map(move |i| CopyRef { point: p, index: i })
        })
        .collect()
}

/// Random structure: each point gets `1..=max_copies` copies, each ordered
/// pair of distinct copies is related with probability `density`.
pub fn pref_structure<R: Rng + ?Sized>(
    rng: &mut R,
    points: usize,
    max_copies: u32,
    density: f64,
) -> PrefStructure {
    let copies = random_copies(rng, points, max_copies);
    let mut edges = Vec::new();
    for &a in &copies {
        for &b in &copies {
            if a != b && rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    PrefStructure::new(
        PrefStructure::unnamed_points(points),
        copies,
        Set::EMPTY,
        edges,
    )
    .expect("well formed")
}

/// Random ranked, cycle-free structure: copies get random ranks and are
/// ordered by rank.
pub fn ranked_structure<R: Rng + ?Sized>(
    rng: &mut R,
    points: usize,
    max_copies: u32,
) -> PrefStructure {
    let copies = random_copies(rng, points, max_copies);
    let levels = copies.len() as u32;
    let rank: Vec<u32> = copies.iter().map(|_| rng.gen_range(0..levels)).collect();
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
        copies,
        Set::EMPTY,
        edges,
    )
    .expect("well formed")
}
