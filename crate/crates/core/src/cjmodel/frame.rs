//! Structural conditions on models.

use std::fmt;

use super::{CJModel, ObMap};
use crate::set::Set;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameCondition {
    A3,
    A4,
    B4,
    A5,
    B5,
    C5,
    D5,
}

impl FrameCondition {
    pub const ALL: [FrameCondition; 7] = [
        FrameCondition::A3,
        FrameCondition::A4,
        FrameCondition::B4,
        FrameCondition::A5,
        FrameCondition::B5,
        FrameCondition::C5,
        FrameCondition::D5,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FrameCondition::A3 => "3-a",
            FrameCondition::A4 => "4-a",
            FrameCondition::B4 => "4-b",
            FrameCondition::A5 => "5-a",
            FrameCondition::B5 => "5-b",
            FrameCondition::C5 => "5-c",
            FrameCondition::D5 => "5-d",
        }
    }

    pub fn from_label(s: &str) -> Option<FrameCondition> {
        FrameCondition::ALL.into_iter().find(|c| c.label() == s)
    }
}

impl fmt::Display for FrameCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The objects refuting a condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameWitness {
    /// 3-a, 4-a, 4-b
    World(usize),
    /// 5-a: `∅ ∈ ob(x)`
    Context { x: Set },
    /// 5-b: `y`, `z` agree inside `x` but only one is in `ob(x)`;
    /// 5-c: `y, z ∈ ob(x)` but not `y ∩ z`.
    Triple { x: Set, y: Set, z: Set },
    /// 5-d: `y ⊆ x ⊆ z`, `y ∈ ob(x)`, `demanded = (z − x) ∪ y ∉ ob(z)`.
    Completion {
        x: Set,
        y: Set,
        z: Set,
        demanded: Set,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameResult {
    pub condition: FrameCondition,
    pub witness: Option<FrameWitness>,
}

impl FrameResult {
    pub fn pass(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameReport {
    pub results: Vec<FrameResult>,
}

impl FrameReport {
    pub fn get(&self, c: FrameCondition) -> &FrameResult {
        self.results
            .iter()
            .find(|r| r.condition == c)
            .expect("all conditions reported")
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(FrameResult::pass)
    }

    pub fn failed(&self) -> impl Iterator<Item = &FrameResult> {
        self.results.iter().filter(|r| !r.pass())
    }
}

pub fn check_frame(m: &CJModel) -> FrameReport {
    let first_world = |bad: &dyn Fn(usize) -> bool| {
        (0..m.world_count())
            .find(|&w| bad(w))
            .map(FrameWitness::World)
    };
    let mut results = vec![
        FrameResult {
            condition: FrameCondition::A3,
            witness: first_world(&|w| m.av[w].is_empty()),
        },
        FrameResult {
            condition: FrameCondition::A4,
            witness: first_world(&|w| !m.av[w].is_subset(m.pv[w])),
        },
        FrameResult {
            condition: FrameCondition::B4,
            witness: first_world(&|w| !m.pv[w].contains(w)),
        },
    ];
    results.extend(check_ob(&m.ob));
    FrameReport { results }
}

pub(super) fn check_ob(ob: &ObMap) -> Vec<FrameResult> {
    [
        (FrameCondition::A5, first_5a_violation(ob)),
        (FrameCondition::B5, first_5b_violation(ob)),
        (FrameCondition::C5, first_5c_violation(ob)),
        (FrameCondition::D5, first_5d_violation(ob)),
    ]
    .into_iter()
    .map(|(condition, witness)| FrameResult { condition, witness })
    .collect()
}

fn contexts(ob: &ObMap) -> impl Iterator<Item = Set> {
    Set::all_subsets(ob.world_count())
}

fn first_5a_violation(ob: &ObMap) -> Option<FrameWitness> {
    contexts(ob)
        .find(|&x| ob.contains(x, Set::EMPTY))
        .map(|x| FrameWitness::Context { x })
}

pub(super) fn first_5b_violation(ob: &ObMap) -> Option<FrameWitness> {
    if ob.is_normalized() {
        return None;
    }
    let all = ob.universe();
    contexts(ob).find_map(|x| {
        all.subsets().find_map(|y| {
            let z = y.inter(x);
            (ob.contains(x, y) != ob.contains(x, z)).then_some(FrameWitness::Triple { x, y, z })
        })
    })
}

fn first_5c_violation(ob: &ObMap) -> Option<FrameWitness> {
    contexts(ob).find_map(|x| {
        let members = ob.members(x);
        members.iter().enumerate().find_map(|(i, &y)| {
            members[i + 1..].iter().find_map(|&z| {
                (!ob.contains(x, y.inter(z))).then_some(FrameWitness::Triple { x, y, z })
            })
        })
    })
}

fn first_5d_violation(ob: &ObMap) -> Option<FrameWitness> {
    let all = ob.universe();
    contexts(ob).find_map(|x| {
        ob.members(x)
            .into_iter()
            .filter(|y| y.is_subset(x))
            .find_map(|y| {
                x.supersets_in(all).find_map(|z| {
                    let demanded = z.minus(x).union(y);
                    (!ob.contains(z, demanded)).then_some(FrameWitness::Completion {
                        x,
                        y,
                        z,
                        demanded,
                    })
                })
            })
    })
}
