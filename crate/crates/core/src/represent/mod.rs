//! Ranked representation of choice functions and normalization of ranked
//! structures to one or infinitely many copies per point.

use thiserror::Error;

use crate::choice::{check_property, closure_witness, Choice, ChoiceFunction, Closure, Property};
use crate::prefstruct::{CopyRef, PrefError, PrefStructure, RankWitness, SmoothWitness};
use crate::set::Set;

/// A total preorder `S` on `0..n`; row `x` has bit `y` set iff `x S y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalPreorder {
    s: Vec<u64>,
}

impl TotalPreorder {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn holds(&self, x: usize, y: usize) -> bool {
        self.s[x] >> y & 1 == 1
    }

    /// `x S y` and not `y S x`.
    pub fn strictly(&self, x: usize, y: usize) -> bool {
        self.holds(x, y) && !self.holds(y, x)
    }

    pub fn is_total(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| self.holds(x, y) || self.holds(y, x)))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|x| self.holds(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            Set(self.s[x])
                .iter()
                .all(|y| Set(self.s[y]).is_subset(Set(self.s[x])))
        })
    }
}

/// Reflexive-transitive closure of `r` (rows as successor bitsets).
pub fn reflexive_transitive_closure(r: &[u64]) -> Vec<u64> {
    let n = r.len();
    let mut c: Vec<u64> = (0..n).map(|x| r[x] | 1 << x).collect();
    // Warshall
    for k in 0..n {
        for x in 0..n {
            if c[x] >> k & 1 == 1 {
                c[x] |= c[k];
            }
        }
    }
    c
}

/// Extend `r` on `0..n` to a total preorder `S` with `x S y ∧ y S x ⇒ x R* y`.
///
/// Classes of mutual `R*`-reachability are linearized by repeatedly taking,
/// among classes all of whose `R*`-predecessors are placed, the one with the
/// smallest member.
pub fn extend_to_total_preorder(r: &[u64]) -> TotalPreorder {
    let n = r.len();
    assert!(n <= 64);
    let star = reflexive_transitive_closure(r);
    let reaches = |x: usize, y: usize| star[x] >> y & 1 == 1;
    // class representative = smallest member
    let rep: Vec<usize> = (0..n)
        .map(|x| {
            (0..n)
                .find(|&y| reaches(x, y) && reaches(y, x))
                .expect("x ≡ x")
        })
        .collect();
    let mut reps: Vec<usize> = rep.clone();
    reps.sort_unstable();
    reps.dedup();
    let mut position = vec![usize::MAX; n];
    let mut placed = 0usize;
    while placed < reps.len() {
        let next = reps
            .iter()
            .copied()
            .find(|&c| {
                position[c] == usize::MAX
                    && reps
                        .iter()
                        .all(|&d| d == c || !reaches(d, c) || position[d] != usize::MAX)
            })
            .expect("the class order is acyclic");
        position[next] = placed;
        placed += 1;
    }
    let s = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| position[rep[x]] <= position[rep[y]])
                .fold(0u64, |acc, y| acc | 1 << y)
        })
        .collect();
    TotalPreorder { s }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentError {
    #[error("{} fails: {:?}", .0.symbol(), .1)]
    Precondition(Property, Vec<(&'static str, Set)>),
    #[error("domain is not closed under unions: {0:?} ∪ {1:?} is missing")]
    NotUnionClosed(Set, Set),
    #[error(transparent)]
    Structure(#[from] PrefError),
    #[error("base set does not contain point `{0}`")]
    MissingPoint(String),
}

/// Ranked, single-copy, `Y`-smooth structure with `μ = f` on the domain.
pub fn represent_ranked(cf: &ChoiceFunction) -> Result<PrefStructure, RepresentError> {
    let n = cf.universe_size();
    if let Some((a, b)) = closure_witness(n, |x| cf.in_domain(x), Closure::Union) {
        return Err(RepresentError::NotUnionClosed(a, b));
    }
    for p in [Property::Subset, Property::Empty, Property::Eq] {
        let r = check_property(cf, p);
        if let Some(ce) = r.counterexample {
            return Err(RepresentError::Precondition(p, ce.named_sets().collect()));
        }
    }
    // a R b iff a ∈ f(A) and b ∈ A for some A, or a = b
    let mut r: Vec<u64> = (0..n).map(|a| 1u64 << a).collect();
    for (x, fx) in cf.entries() {
        for a in fx.iter() {
            r[a] |= x.bits();
        }
    }
    let s = extend_to_total_preorder(&r);
    Ok(PrefStructure::single_copy(
        cf.universe().to_vec(),
        |a, b| s.strictly(a, b),
    )?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    Mu { set: Set, expected: Set, got: Set },
    NotRanked(RankWitness),
    NotSmooth(SmoothWitness),
    PointMismatch,
}

/// `μ_s = f` on the domain, `s` ranked and smooth on the domain.
pub fn verify_representation(cf: &ChoiceFunction, s: &PrefStructure) -> Result<(), VerifyFailure> {
    if s.points() != cf.universe() {
        return Err(VerifyFailure::PointMismatch);
    }
    for (x, fx) in cf.entries() {
        let got = s.mu(x);
        if got != fx {
            return Err(VerifyFailure::Mu {
                set: x,
                expected: fx,
                got,
            });
        }
    }
    s.is_ranked().map_err(VerifyFailure::NotRanked)?;
    s.is_smooth(cf.entries().map(|(x, _)| x))
        .map_err(VerifyFailure::NotSmooth)
}

/// Equivalent ranked cycle-free structure over `z` with one copy or an ω
/// chain per point.
///
/// `z` lists the intended base set and must contain every point of `s`.
/// Points whose copies are all attacked by copies of themselves keep their
/// ω chain. Otherwise a point keeps its least-indexed copy among those not
/// below another copy of it. Points of `z` without copies get an ω chain.
pub fn normalize_one_infinity(
    s: &PrefStructure,
    z: &[String],
) -> Result<PrefStructure, RepresentError> {
    s.rank_of()?;
    let remap: Vec<usize> = s
        .points()
        .iter()
        .map(|p| {
            z.iter()
                .position(|q| q == p)
                .ok_or_else(|| RepresentError::MissingPoint(p.clone()))
        })
        .collect::<Result<_, _>>()?;
    let copies = s.copies();
    let kept: Vec<CopyRef> = (0..s.point_count())
        .filter_map(|p| {
            copies
                .iter()
                .copied()
                .filter(|c| c.point == p)
                .find(|&c| !copies.iter().any(|&d| d.point == p && s.less(d, c)))
        })
        .collect();
    let moved = |c: CopyRef| CopyRef {
        point: remap[c.point],
        index: c.index,
    };
    let with_copies = Set::from_elements(kept.iter().map(|c| remap[c.point]));
    let omega = Set::full(z.len()).minus(with_copies);
    let edges: Vec<_> = kept
        .iter()
        .flat_map(|&a| kept.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| s.less(a, b))
        .map(|(a, b)| (moved(a), moved(b)))
        .collect();
    Ok(PrefStructure::new(
        z.to_vec(),
        kept.iter().map(|&c| moved(c)),
        omega,
        edges,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::Family;

    fn names(n: usize) -> Vec<String> {
        ["a", "b", "c", "d"][..n]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Vec<u64> {
        let mut r = vec![0u64; n];
        for &(a, b) in pairs {
            r[a] |= 1 << b;
        }
        r
    }

    #[test]
    fn preorder_examples() {
        let s = extend_to_total_preorder(&rel(2, &[]));
        assert!(s.holds(0, 1) && !s.holds(1, 0));
        let s = extend_to_total_preorder(&rel(2, &[(0, 1), (1, 0)]));
        assert!(s.holds(0, 1) && s.holds(1, 0));
        let s = extend_to_total_preorder(&rel(3, &[(0, 1), (1, 2)]));
        assert!(s.strictly(0, 1) && s.strictly(1, 2) && s.strictly(0, 2));
        // the order respects R even against carrier order
        let s = extend_to_total_preorder(&rel(3, &[(2, 0)]));
        assert!(s.strictly(2, 0) && s.strictly(1, 0));
        assert!(s.is_total() && s.is_reflexive() && s.is_transitive());
    }

    #[test]
    fn represent_two_points() {
        let cf = ChoiceFunction::new(
            names(2),
            [
                (Set(0b11), Set(0b01)),
                (Set(0b01), Set(0b01)),
                (Set(0b10), Set(0b10)),
            ],
        )
        .unwrap();
        let s = represent_ranked(&cf).unwrap();
        assert!(s.less(
            CopyRef { point: 0, index: 0 },
            CopyRef { point: 1, index: 0 }
        ));
        assert_eq!(s.edges().count(), 1);
        assert_eq!(verify_representation(&cf, &s), Ok(()));
    }

    #[test]
    fn identity_gives_empty_order() {
        let cf = ChoiceFunction::identity(3);
        let s = represent_ranked(&cf).unwrap();
        assert_eq!(s.edges().count(), 0);
        assert_eq!(verify_representation(&cf, &s), Ok(()));
    }

    #[test]
    fn rejects_inadmissible_input() {
        let cf = ChoiceFunction::new(names(2), [(Set(0b11), Set(0b01)), (Set(0b10), Set::EMPTY)])
            .unwrap();
        assert!(matches!(
            represent_ranked(&cf),
            Err(RepresentError::Precondition(Property::Empty, _))
        ));
        let cf = ChoiceFunction::new(names(2), [(Set(0b01), Set(0b01)), (Set(0b10), Set(0b10))])
            .unwrap();
        assert_eq!(
            represent_ranked(&cf),
            Err(RepresentError::NotUnionClosed(Set(0b01), Set(0b10)))
        );
    }

    #[test]
    fn flipped_edge_is_detected() {
        let cf = ChoiceFunction::minimal(3, |a, b| a < b);
        let s = represent_ranked(&cf).unwrap();
        let c = |p| CopyRef { point: p, index: 0 };
        let flipped = PrefStructure::new(
            s.points().to_vec(),
            s.copies().iter().copied(),
            Set::EMPTY,
            s.edges().map(|(a, b)| {
                if (a, b) == (c(0), c(1)) {
                    (b, a)
                } else {
                    (a, b)
                }
            }),
        )
        .unwrap();
        assert!(matches!(
            verify_representation(&cf, &flipped),
            Err(VerifyFailure::Mu { set, .. }) if set == Set(0b011)
        ));
        let trivial = ChoiceFunction::new(s.points().to_vec(), [(Set::EMPTY, Set::EMPTY)]).unwrap();
        assert_eq!(verify_representation(&trivial, &flipped), Ok(()));
    }

    #[test]
    fn normalization_drops_extra_copies_and_adds_chains() {
        let c = |point, index| CopyRef { point, index };
        // two copies of b at different ranks, a between them; c has none
        let s = PrefStructure::new(
            names(3),
            [c(0, 0), c(1, 0), c(1, 1)],
            Set::EMPTY,
            [(c(1, 0), c(0, 0)), (c(0, 0), c(1, 1)), (c(1, 0), c(1, 1))],
        )
        .unwrap();
        let out = normalize_one_infinity(&s, s.points()).unwrap();
        assert_eq!(out.copies(), &[c(0, 0), c(1, 0)]);
        assert_eq!(out.omega(), Set::singleton(2));
        for x in Set::full(3).subsets() {
            assert_eq!(s.mu(x), out.mu(x), "{x:?}");
            if x.contains(2) {
                assert!(!out.mu(x).contains(2));
            }
        }
        let again = normalize_one_infinity(&out, out.points()).unwrap();
        assert_eq!(again, out);
    }

    #[test]
    fn normalization_of_single_copy_is_identity() {
        let s = PrefStructure::single_copy(names(3), |a, b| a < b).unwrap();
        assert_eq!(normalize_one_infinity(&s, s.points()).unwrap(), s);
        let wider = normalize_one_infinity(&s, &names(4)).unwrap();
        assert_eq!(wider.omega(), Set::singleton(3));
        assert!(matches!(
            normalize_one_infinity(&s, &names(2)),
            Err(RepresentError::MissingPoint(_))
        ));
    }

    #[test]
    fn representation_on_nonempty_domain() {
        let full = Family::power_set(Set::full(3));
        let mut dom = full;
        dom.remove(Set::EMPTY);
        let cf = ChoiceFunction::minimal(3, |a, b| a == 2 && b != 2).restrict(&dom);
        let s = represent_ranked(&cf).unwrap();
        assert_eq!(verify_representation(&cf, &s), Ok(()));
    }
}
