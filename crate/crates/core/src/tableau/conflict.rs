//! Conflict detection and the closure conditions on branches and forests.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Concept, ConceptName};
use crate::signing::Sign;

use super::branch::{Branch, NodeId, NodeLabel};
use super::rules::is_complete;

/// What clashes: an atom against its negation, or `bot` on its own.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ClashAtom {
    Atom(ConceptName),
    Bottom,
}

impl fmt::Display for ClashAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClashAtom::Atom(a) => write!(f, "{a}"),
            ClashAtom::Bottom => f.write_str("bot"),
        }
    }
}

/// Classes by the sum of the two signs: 2 real, 1 strong, 0 inner.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ConflictClass {
    Real,
    Strong,
    Inner,
}

impl ConflictClass {
    pub fn from_sum(sum: u8) -> ConflictClass {
        match sum {
            2 => ConflictClass::Real,
            1 => ConflictClass::Strong,
            _ => ConflictClass::Inner,
        }
    }

    /// Real conflicts are first-class; strong and inner ones second-class.
    pub fn is_second_class(self) -> bool {
        !matches!(self, ConflictClass::Real)
    }

    pub fn name(self) -> &'static str {
        match self {
            ConflictClass::Real => "real",
            ConflictClass::Strong => "strong",
            ConflictClass::Inner => "inner",
        }
    }

    pub fn from_name(s: &str) -> Option<ConflictClass> {
        match s {
            "real" => Some(ConflictClass::Real),
            "strong" => Some(ConflictClass::Strong),
            "inner" => Some(ConflictClass::Inner),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Conflict {
    pub node: NodeId,
    pub atom: ClashAtom,
    /// Sign of `A` (of `bot` for a bottom clash).
    pub positive_sign: Sign,
    /// Sign of `not A` (of `bot` for a bottom clash).
    pub negative_sign: Sign,
    pub class: ConflictClass,
}

/// Every conflict in one label: one per pair `(A, s1)`, `(not A, s2)`, and
/// one per `(bot, s)` counted with sign sum `2s`. `top` never conflicts.
pub fn conflicts(node: NodeId, label: &NodeLabel) -> Vec<Conflict> {
    let mut out = Vec::new();
    for sc in label.iter() {
        match &sc.concept {
            Concept::Atomic(name) => {
                let negated = Concept::not(sc.concept.clone());
                for s in [Sign::Premise, Sign::Query] {
                    if label.has(&negated, s) {
                        out.push(Conflict {
                            node,
                            atom: ClashAtom::Atom(name.clone()),
                            positive_sign: sc.sign,
                            negative_sign: s,
                            class: ConflictClass::from_sum(sc.sign.value() + s.value()),
                        });
                    }
                }
            }
            Concept::Bottom => out.push(Conflict {
                node,
                atom: ClashAtom::Bottom,
                positive_sign: sc.sign,
                negative_sign: sc.sign,
                class: ConflictClass::from_sum(2 * sc.sign.value()),
            }),
            _ => {}
        }
    }
    out
}

/// All conflicts of a branch, node by node.
pub fn branch_conflicts(b: &Branch) -> Vec<Conflict> {
    b.nodes()
        .flat_map(|(id, n)| conflicts(id, n.label()))
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BranchClass {
    Open,
    FirstClassClosed,
    SecondClassClosed,
}

impl BranchClass {
    pub fn name(self) -> &'static str {
        match self {
            BranchClass::Open => "open",
            BranchClass::FirstClassClosed => "first-class-closed",
            BranchClass::SecondClassClosed => "second-class-closed",
        }
    }

    pub fn from_name(s: &str) -> Option<BranchClass> {
        match s {
            "open" => Some(BranchClass::Open),
            "first-class-closed" => Some(BranchClass::FirstClassClosed),
            "second-class-closed" => Some(BranchClass::SecondClassClosed),
            _ => None,
        }
    }

    pub fn is_closed(self) -> bool {
        self != BranchClass::Open
    }

    /// Class implied by a set of conflicts.
    pub fn of(conflicts: &[Conflict]) -> BranchClass {
        if conflicts.iter().any(|c| c.class.is_second_class()) {
            BranchClass::SecondClassClosed
        } else if conflicts.is_empty() {
            BranchClass::Open
        } else {
            BranchClass::FirstClassClosed
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Classification {
    pub class: BranchClass,
    pub evidence: Vec<Conflict>,
}

/// Classifies a finished branch. A branch still open to expansion is an
/// error unless it already holds a second-class conflict, since labels only
/// grow and that classification cannot change.
pub fn classify_branch(b: &Branch) -> Result<Classification> {
    if !b.has_second_class_conflict() && !b.is_finalized() && !is_complete(b) {
        return Err(Error::BranchNotComplete);
    }
    let evidence = branch_conflicts(b);
    Ok(Classification {
        class: BranchClass::of(&evidence),
        evidence,
    })
}

/// Which closure condition a forest is judged by.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum ClosurePolicy {
    /// Every branch has a conflict and some branch a second-class one.
    #[default]
    Paraconsistent,
    /// Every branch has a conflict, whatever the signs.
    Classical,
}

impl ClosurePolicy {
    pub fn name(self) -> &'static str {
        match self {
            ClosurePolicy::Paraconsistent => "para",
            ClosurePolicy::Classical => "classical",
        }
    }

    /// Once this holds for a branch its contribution to the verdict is fixed.
    pub(crate) fn decided(self, b: &Branch) -> bool {
        match self {
            ClosurePolicy::Paraconsistent => b.has_second_class_conflict(),
            ClosurePolicy::Classical => b.has_conflict(),
        }
    }

    pub fn closed(self, classes: impl IntoIterator<Item = BranchClass>) -> bool {
        let mut all_closed = true;
        let mut second = false;
        for c in classes {
            all_closed &= c.is_closed();
            second |= c == BranchClass::SecondClassClosed;
        }
        match self {
            ClosurePolicy::Paraconsistent => all_closed && second,
            ClosurePolicy::Classical => all_closed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BranchReport {
    pub branch: Branch,
    pub classification: Classification,
}

#[derive(Clone, Debug)]
pub struct ForestVerdict {
    pub policy: ClosurePolicy,
    pub closed: bool,
    pub branches: Vec<BranchReport>,
}

impl ForestVerdict {
    pub fn classes(&self) -> impl Iterator<Item = BranchClass> + '_ {
        self.branches.iter().map(|r| r.classification.class)
    }
}

/// Paraconsistent closure of a set of complete branches.
pub fn forest_verdict(branches: Vec<Branch>) -> Result<ForestVerdict> {
    forest_verdict_with(branches, ClosurePolicy::Paraconsistent)
}

pub fn forest_verdict_with(branches: Vec<Branch>, policy: ClosurePolicy) -> Result<ForestVerdict> {
    let branches = branches
        .into_iter()
        .map(|branch| {
            let classification = classify_branch(&branch)?;
            Ok(BranchReport {
                branch,
                classification,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let closed = policy.closed(branches.iter().map(|r| r.classification.class));
    Ok(ForestVerdict {
        policy,
        closed,
        branches,
    })
}
