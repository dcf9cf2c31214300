//! JSON rendering of a reasoning result.
//!
//! Schema (signs are the integers 0 and 1):
//!
//! ```text
//! { "mode": "para" | "classical", "query": string, "closed": bool, "verdict": bool,
//!   "branches": [ { "nodes": [ { "id", "name", "kind": "root" | "variable", "parent",
//!                                "label": [ { "concept", "sign" } ], "blocked" } ],
//!                   "edges": [ { "from", "to", "roles", "sign" } ],
//!                   "conflicts": [ { "node", "atom", "signs": [pos, neg], "class" } ],
//!                   "classification": "open" | "first-class-closed" | "second-class-closed",
//!                   "finalized": bool } ] }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Concept;
use crate::reasoner::{Mode, Query, ReasoningResult};
use crate::signing::{Sign, SignedConcept};
use crate::syntax::parse_concept;
use crate::tableau::{
    conflicts, BlockStatus, BranchClass, ClosurePolicy, Conflict, ConflictClass, NodeId, NodeKind,
    NodeLabel,
};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceDocument {
    pub mode: String,
    pub query: String,
    pub closed: bool,
    pub verdict: bool,
    pub branches: Vec<TraceBranch>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceBranch {
    pub nodes: Vec<TraceNode>,
    pub edges: Vec<TraceEdge>,
    pub conflicts: Vec<TraceConflict>,
    pub classification: String,
    pub finalized: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceNode {
    pub id: usize,
    pub name: String,
    pub kind: String,
    pub parent: Option<usize>,
    pub label: Vec<TraceEntry>,
    /// `null`, `"indirect"`, or the id of the blocking node.
    pub blocked: Option<serde_json::Value>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceEntry {
    pub concept: String,
    pub sign: u8,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceEdge {
    pub from: usize,
    pub to: usize,
    pub roles: Vec<String>,
    pub sign: u8,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceConflict {
    pub node: usize,
    pub atom: String,
    pub signs: [u8; 2],
    pub class: String,
}

impl From<&Conflict> for TraceConflict {
    fn from(c: &Conflict) -> Self {
        Self {
            node: c.node.index(),
            atom: c.atom.to_string(),
            signs: [c.positive_sign.value(), c.negative_sign.value()],
            class: c.class.name().to_string(),
        }
    }
}

/// Renders every branch of `r` with its labels, edges, conflicts and class.
pub fn emit_trace(r: &ReasoningResult) -> TraceDocument {
    let branches = r
        .trace
        .branches
        .iter()
        .map(|report| {
            let b = &report.branch;
            let statuses = b.block_statuses();
            let nodes = b
                .nodes()
                .map(|(id, n)| TraceNode {
                    id: id.index(),
                    name: n.name(),
                    kind: match n.kind() {
                        NodeKind::Root(_) => "root",
                        NodeKind::Variable(_) => "variable",
                    }
                    .to_string(),
                    parent: n.parent().map(NodeId::index),
                    label: n
                        .label()
                        .iter()
                        .map(|sc| TraceEntry {
                            concept: sc.concept.to_string(),
                            sign: sc.sign.value(),
                        })
                        .collect(),
                    blocked: match statuses[id.index()] {
                        BlockStatus::Unblocked => None,
                        BlockStatus::DirectlyBlockedBy(y) => Some(y.index().into()),
                        BlockStatus::IndirectlyBlocked => Some("indirect".into()),
                    },
                })
                .collect();
            let edges = b
                .edges()
                .iter()
                .map(|e| TraceEdge {
                    from: e.from.index(),
                    to: e.to.index(),
                    roles: e.roles.iter().map(|r| r.to_string()).collect(),
                    sign: e.sign.value(),
                })
                .collect();
            TraceBranch {
                nodes,
                edges,
                conflicts: report
                    .classification
                    .evidence
                    .iter()
                    .map(TraceConflict::from)
                    .collect(),
                classification: report.classification.class.name().to_string(),
                finalized: b.is_finalized(),
            }
        })
        .collect();
    TraceDocument {
        mode: r.mode.name().to_string(),
        query: r.query.to_string(),
        closed: r.trace.closed,
        verdict: r.verdict,
        branches,
    }
}

impl TraceDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Trace(e.to_string()))
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Trace(msg.into())
}

fn parse_sign(v: u8) -> Result<Sign> {
    Sign::from_value(v).ok_or_else(|| bad(format!("sign {v} is not 0 or 1")))
}

/// Rebuilds conflicts and classifications from the serialized labels alone,
/// checks them against the stored ones, and returns the recomputed closure
/// verdict.
pub fn recompute(doc: &TraceDocument) -> Result<bool> {
    let policy = match doc.mode.parse::<Mode>().map_err(bad)? {
        Mode::Para => ClosurePolicy::Paraconsistent,
        Mode::Classical => ClosurePolicy::Classical,
    };
    let mut classes = Vec::with_capacity(doc.branches.len());
    for (i, branch) in doc.branches.iter().enumerate() {
        let mut found = Vec::new();
        for node in &branch.nodes {
            let label = node
                .label
                .iter()
                .map(|e| {
                    let concept: Concept =
                        parse_concept(&e.concept).map_err(|err| bad(err.to_string()))?;
                    Ok(SignedConcept::new(concept, parse_sign(e.sign)?))
                })
                .collect::<Result<NodeLabel>>()?;
            found.extend(conflicts(NodeId(node.id), &label));
        }
        let stored: Vec<TraceConflict> = branch.conflicts.clone();
        let recomputed: Vec<TraceConflict> = found.iter().map(TraceConflict::from).collect();
        if stored != recomputed {
            return Err(bad(format!(
                "branch {i}: stored conflicts differ from the labels"
            )));
        }
        for c in &stored {
            let class = ConflictClass::from_name(&c.class)
                .ok_or_else(|| bad(format!("unknown class {}", c.class)))?;
            if class != ConflictClass::from_sum(c.signs[0] + c.signs[1]) {
                return Err(bad(format!(
                    "branch {i}: conflict class does not match its signs"
                )));
            }
        }
        let class = BranchClass::of(&found);
        if Some(class) != BranchClass::from_name(&branch.classification) {
            return Err(bad(format!(
                "branch {i}: classification `{}` should be `{}`",
                branch.classification,
                class.name()
            )));
        }
        classes.push(class);
    }
    let closed = policy.closed(classes);
    if closed != doc.closed {
        return Err(bad("stored closure verdict differs from the branches"));
    }
    Ok(closed)
}

/// The reasoner-level verdict a closure result stands for.
pub fn verdict_for(query: &Query, closed: bool) -> bool {
    match query {
        Query::Consistency => !closed,
        _ => closed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ABox, ConceptAssertion, IndividualName, Ontology};
    use crate::reasoner::para_entails;

    fn at(c: Concept, i: &str) -> ConceptAssertion {
        ConceptAssertion::new(c, IndividualName::new(i).unwrap())
    }

    #[test]
    fn open_single_branch() {
        let o = Ontology::from_abox(ABox::new().with(at(Concept::atom("A"), "a")));
        let r = para_entails(&o, &at(Concept::atom("B"), "a")).unwrap();
        let doc = emit_trace(&r);
        assert!(!doc.closed);
        assert_eq!(doc.branches.len(), 1);
        assert_eq!(doc.branches[0].classification, "open");
        assert!(!recompute(&doc).unwrap());
    }

    #[test]
    fn top_query_gives_inner_conflict() {
        let r = para_entails(&Ontology::default(), &at(Concept::Top, "a")).unwrap();
        let doc = emit_trace(&r);
        assert!(doc.closed);
        let c = &doc.branches[0].conflicts[0];
        assert_eq!(
            (c.atom.as_str(), c.class.as_str(), c.signs),
            ("bot", "inner", [0, 0])
        );
        let text = doc.to_json();
        let back = TraceDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert!(recompute(&back).unwrap());
    }

    #[test]
    fn tampering_is_detected() {
        let o = Ontology::from_abox(ABox::new().with(at(Concept::atom("A"), "a")));
        let r = para_entails(&o, &at(Concept::atom("A"), "a")).unwrap();
        let mut doc = emit_trace(&r);
        assert!(recompute(&doc).unwrap());
        doc.branches[0].nodes[0].label.retain(|e| e.sign == 1);
        assert!(matches!(recompute(&doc), Err(Error::Trace(_))));
    }

    #[test]
    fn json_keys() {
        let o = Ontology::from_abox(ABox::new().with(at(Concept::atom("A"), "a")));
        let r = para_entails(&o, &at(Concept::atom("A"), "a")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&emit_trace(&r).to_json()).unwrap();
        assert_eq!(v["mode"], "para");
        assert_eq!(v["closed"], true);
        assert_eq!(v["branches"][0]["nodes"][0]["label"][0]["concept"], "A");
        assert_eq!(v["branches"][0]["nodes"][0]["label"][0]["sign"], 1);
        assert_eq!(v["branches"][0]["conflicts"][0]["class"], "strong");
        assert_eq!(v["branches"][0]["classification"], "second-class-closed");
    }
}
