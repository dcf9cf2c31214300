//! The four expansion rules. Each `apply_*` checks its own applicability
//! condition and refuses with [`Error::RuleNotApplicable`] otherwise.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::model::Concept;
use crate::signing::{Sign, SignedConcept};

use super::branch::{BlockStatus, Branch, DisjunctionPolicy, NodeId, Origin, RuleKind};

/// A rule instance ready to fire.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleApplication {
    pub rule: RuleKind,
    pub node: NodeId,
    pub entry: SignedConcept,
}

fn not_applicable(rule: &'static str, reason: &'static str) -> Error {
    Error::RuleNotApplicable { rule, reason }
}

fn check_member(b: &Branch, x: NodeId, sc: &SignedConcept, rule: &'static str) -> Result<()> {
    if x.0 >= b.node_count() {
        return Err(not_applicable(rule, "no such node"));
    }
    if !b.label(x).contains(sc) {
        return Err(not_applicable(rule, "entry is not in the node label"));
    }
    Ok(())
}

/// Sign an entry gets when pushed across an edge of sign `edge`.
pub(crate) fn across(sign: Sign, edge: Sign) -> Sign {
    sign.min(edge)
}

fn and_pending(b: &Branch, x: NodeId, sc: &SignedConcept) -> bool {
    match &sc.concept {
        Concept::And(l, r) => !(b.label(x).has(l, sc.sign) && b.label(x).has(r, sc.sign)),
        _ => false,
    }
}

fn or_pending(b: &Branch, x: NodeId, sc: &SignedConcept) -> bool {
    let Concept::Or(l, r) = &sc.concept else {
        return false;
    };
    let label = b.label(x);
    let (has_l, has_r) = (label.has(l, sc.sign), label.has(r, sc.sign));
    match b.disjunction {
        DisjunctionPolicy::SkipIfSatisfied => !has_l && !has_r,
        DisjunctionPolicy::SplitOnce => !(has_l && has_r) && !b.node(x).branched.contains(sc),
    }
}

fn forall_pending(b: &Branch, x: NodeId, sc: &SignedConcept) -> bool {
    let Concept::Forall(role, c) = &sc.concept else {
        return false;
    };
    b.successors(x)
        .any(|e| e.roles.contains(role) && !b.label(e.to).has(c, across(sc.sign, e.sign)))
}

fn exists_pending(b: &Branch, x: NodeId, sc: &SignedConcept) -> bool {
    let Concept::Exists(role, c) = &sc.concept else {
        return false;
    };
    !b.successors(x)
        .any(|e| e.roles.contains(role) && e.sign >= sc.sign && b.label(e.to).has(c, sc.sign))
}

/// Adds both conjuncts with the entry's sign.
pub fn apply_and(b: &mut Branch, x: NodeId, sc: &SignedConcept) -> Result<()> {
    check_member(b, x, sc, "⊓")?;
    let Concept::And(l, r) = &sc.concept else {
        return Err(not_applicable("⊓", "entry is not a conjunction"));
    };
    if b.blocked(x) == BlockStatus::IndirectlyBlocked {
        return Err(not_applicable("⊓", "node is indirectly blocked"));
    }
    if !and_pending(b, x, sc) {
        return Err(not_applicable("⊓", "both conjuncts already present"));
    }
    for part in [l, r] {
        let origin = Origin::Rule {
            rule: RuleKind::And,
            from: x,
            parent: sc.clone(),
            edge_sign: None,
        };
        b.insert(x, SignedConcept::new((**part).clone(), sc.sign), origin);
    }
    Ok(())
}

/// Splits on a disjunction: the first branch gets the left disjunct, the
/// second the right one, both with the entry's sign.
pub fn apply_or(b: &Branch, x: NodeId, sc: &SignedConcept) -> Result<(Branch, Branch)> {
    check_member(b, x, sc, "⊔")?;
    let Concept::Or(l, r) = &sc.concept else {
        return Err(not_applicable("⊔", "entry is not a disjunction"));
    };
    if b.blocked(x) == BlockStatus::IndirectlyBlocked {
        return Err(not_applicable("⊔", "node is indirectly blocked"));
    }
    if !or_pending(b, x, sc) {
        return Err(not_applicable("⊔", "disjunction already handled"));
    }
    let child = |part: &Concept| {
        let mut nb = b.clone();
        nb.nodes[x.0].branched.insert(sc.clone());
        let origin = Origin::Rule {
            rule: RuleKind::Or,
            from: x,
            parent: sc.clone(),
            edge_sign: None,
        };
        nb.insert(x, SignedConcept::new(part.clone(), sc.sign), origin);
        nb
    };
    Ok((child(l), child(r)))
}

/// Creates a fresh successor for an existential restriction. The new edge
/// carries the entry's sign.
pub fn apply_exists(b: &mut Branch, x: NodeId, sc: &SignedConcept) -> Result<NodeId> {
    check_member(b, x, sc, "∃")?;
    let Concept::Exists(role, c) = &sc.concept else {
        return Err(not_applicable(
            "∃",
            "entry is not an existential restriction",
        ));
    };
    if b.blocked(x).is_blocked() {
        return Err(not_applicable("∃", "node is blocked"));
    }
    if !exists_pending(b, x, sc) {
        return Err(not_applicable("∃", "a suitable successor already exists"));
    }
    let y = b.add_variable(x, role.clone(), sc.sign);
    let origin = Origin::Rule {
        rule: RuleKind::Exists,
        from: x,
        parent: sc.clone(),
        edge_sign: Some(sc.sign),
    };
    b.insert(y, SignedConcept::new((**c).clone(), sc.sign), origin);
    Ok(y)
}

/// Pushes the filler of a universal restriction to every R-successor that
/// lacks it. The filler's sign is the lower of the entry's and the edge's.
/// Returns the nodes that changed.
pub fn apply_forall(b: &mut Branch, x: NodeId, sc: &SignedConcept) -> Result<Vec<NodeId>> {
    check_member(b, x, sc, "∀")?;
    let Concept::Forall(role, c) = &sc.concept else {
        return Err(not_applicable("∀", "entry is not a universal restriction"));
    };
    if b.blocked(x) == BlockStatus::IndirectlyBlocked {
        return Err(not_applicable("∀", "node is indirectly blocked"));
    }
    let targets: Vec<(NodeId, Sign)> = b
        .successors(x)
        .filter(|e| e.roles.contains(role))
        .map(|e| (e.to, e.sign))
        .collect();
    let mut changed = Vec::new();
    for (y, edge_sign) in targets {
        let entry = SignedConcept::new((**c).clone(), across(sc.sign, edge_sign));
        let origin = Origin::Rule {
            rule: RuleKind::Forall,
            from: x,
            parent: sc.clone(),
            edge_sign: Some(edge_sign),
        };
        if b.insert(y, entry, origin) {
            changed.push(y);
        }
    }
    if changed.is_empty() {
        return Err(not_applicable(
            "∀",
            "every R-successor already has the filler",
        ));
    }
    Ok(changed)
}

/// Fires `app` on `b`. A ⊔ application returns the second branch.
pub fn apply(b: &mut Branch, app: &RuleApplication) -> Result<Option<Branch>> {
    match app.rule {
        RuleKind::And => apply_and(b, app.node, &app.entry).map(|_| None),
        RuleKind::Forall => apply_forall(b, app.node, &app.entry).map(|_| None),
        RuleKind::Exists => apply_exists(b, app.node, &app.entry).map(|_| None),
        RuleKind::Or => {
            let (left, right) = apply_or(b, app.node, &app.entry)?;
            *b = left;
            Ok(Some(right))
        }
    }
}

const ORDER: [RuleKind; 4] = [
    RuleKind::And,
    RuleKind::Or,
    RuleKind::Forall,
    RuleKind::Exists,
];

fn pending(b: &Branch, rule: RuleKind, x: NodeId, sc: &SignedConcept) -> bool {
    match rule {
        RuleKind::And => and_pending(b, x, sc),
        RuleKind::Or => or_pending(b, x, sc),
        RuleKind::Forall => forall_pending(b, x, sc),
        RuleKind::Exists => exists_pending(b, x, sc),
    }
}

/// Visits applicable rule instances in canonical order: nodes in creation
/// order, and within a node ⊓, then ⊔, then ∀, then ∃, each over the label
/// in insertion order.
pub(crate) fn visit_applicable<F>(b: &Branch, only: Option<&[bool]>, mut f: F)
where
    F: FnMut(RuleApplication) -> ControlFlow<()>,
{
    let statuses = b.block_statuses();
    for x in b.node_ids() {
        if only.is_some_and(|only| !only[x.0]) {
            continue;
        }
        let status = statuses[x.0];
        if status == BlockStatus::IndirectlyBlocked {
            continue;
        }
        for rule in ORDER {
            if rule == RuleKind::Exists && status.is_blocked() {
                continue;
            }
            for sc in b.label(x).iter() {
                if pending(b, rule, x, sc) {
                    let app = RuleApplication {
                        rule,
                        node: x,
                        entry: sc.clone(),
                    };
                    if f(app).is_break() {
                        return;
                    }
                }
            }
        }
    }
}

/// First applicable rule instance in canonical order.
pub fn next_rule(b: &Branch) -> Option<RuleApplication> {
    next_rule_among(b, None)
}

/// Every applicable rule instance in canonical order.
pub fn applicable_rules(b: &Branch) -> Vec<RuleApplication> {
    applicable_rules_among(b, None)
}

/// [`next_rule`] restricted to the nodes flagged in `only`.
pub(crate) fn next_rule_among(b: &Branch, only: Option<&[bool]>) -> Option<RuleApplication> {
    let mut found = None;
    visit_applicable(b, only, |app| {
        found = Some(app);
        ControlFlow::Break(())
    });
    found
}

pub(crate) fn applicable_rules_among(b: &Branch, only: Option<&[bool]>) -> Vec<RuleApplication> {
    let mut out = Vec::new();
    visit_applicable(b, only, |app| {
        out.push(app);
        ControlFlow::Continue(())
    });
    out
}

/// No rule applies (blocking taken into account).
pub fn is_complete(b: &Branch) -> bool {
    next_rule(b).is_none()
}
