use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;

use crate::model::{Assertion, Concept, IndividualName, RoleName};
use crate::signing::{signed_nnf, Sign, SignedAssertion, SignedConcept};

/// Index of a node inside its branch. Roots come first, in order of first
/// occurrence of their individual; variable nodes follow in creation order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NodeId(pub(crate) usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NodeKind {
    Root(IndividualName),
    /// Sequence number, starting at 1.
    Variable(usize),
}

/// Signed label of a node. Equality is set equality; iteration follows
/// insertion order.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct NodeLabel {
    entries: IndexSet<SignedConcept>,
}

impl NodeLabel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, sc: &SignedConcept) -> bool {
        self.entries.contains(sc)
    }

    pub fn has(&self, concept: &Concept, sign: Sign) -> bool {
        // SignedConcept owns its concept, so a lookup needs a clone; concepts
        // are Arc-shared so this is shallow.
        self.entries
            .contains(&SignedConcept::new(concept.clone(), sign))
    }

    pub fn insert(&mut self, sc: SignedConcept) -> bool {
        self.entries.insert(sc)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SignedConcept> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<SignedConcept> for NodeLabel {
    fn from_iter<T: IntoIterator<Item = SignedConcept>>(iter: T) -> Self {
        Self {
            entries: iter.into_iter().collect(),
        }
    }
}

impl fmt::Debug for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.entries.iter()).finish()
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, sc) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{sc}")?;
        }
        f.write_str("}")
    }
}

/// A directed edge. Edges between roots come from role assertions and carry
/// sign 1; an edge made by the ∃-rule carries the sign of the entry that
/// made it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub roles: BTreeSet<RoleName>,
    pub sign: Sign,
}

#[derive(Clone, Debug)]
pub struct Node {
    pub(crate) kind: NodeKind,
    pub(crate) label: NodeLabel,
    pub(crate) parent: Option<NodeId>,
    pub(crate) incoming: Option<usize>,
    pub(crate) outgoing: Vec<usize>,
    /// Disjunctions already split at this node.
    pub(crate) branched: HashSet<SignedConcept>,
}

impl Node {
    fn new(kind: NodeKind, parent: Option<NodeId>, incoming: Option<usize>) -> Self {
        Self {
            kind,
            label: NodeLabel::new(),
            parent,
            incoming,
            outgoing: Vec::new(),
            branched: HashSet::new(),
        }
    }

    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    pub fn label(&self) -> &NodeLabel {
        &self.label
    }

    /// Tree predecessor; `None` for roots.
    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn is_root(&self) -> bool {
        matches!(self.kind, NodeKind::Root(_))
    }

    pub fn name(&self) -> String {
        match &self.kind {
            NodeKind::Root(ind) => ind.to_string(),
            NodeKind::Variable(n) => format!("_t{n}"),
        }
    }
}

/// How the ⊔-rule decides that a disjunction still needs splitting.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum DisjunctionPolicy {
    /// Every disjunction entry is split exactly once per node, unless both
    /// disjuncts are already present.
    #[default]
    SplitOnce,
    /// Split only while neither disjunct (with the entry's sign) is present.
    SkipIfSatisfied,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BlockStatus {
    Unblocked,
    DirectlyBlockedBy(NodeId),
    IndirectlyBlocked,
}

impl BlockStatus {
    pub fn is_blocked(self) -> bool {
        !matches!(self, BlockStatus::Unblocked)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RuleKind {
    And,
    Or,
    Forall,
    Exists,
}

impl RuleKind {
    pub fn symbol(self) -> &'static str {
        match self {
            RuleKind::And => "⊓",
            RuleKind::Or => "⊔",
            RuleKind::Forall => "∀",
            RuleKind::Exists => "∃",
        }
    }
}

/// Why an entry is in a label.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Origin {
    /// Initial assertion.
    Input,
    /// Internalized TBox concept.
    Tbox,
    /// Produced by a rule from `parent` at node `from`. `edge_sign` is the
    /// sign of the edge crossed, for ∃ and ∀.
    Rule {
        rule: RuleKind,
        from: NodeId,
        parent: SignedConcept,
        edge_sign: Option<Sign>,
    },
}

/// One label insertion, in order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Insertion {
    pub node: NodeId,
    pub entry: SignedConcept,
    pub origin: Origin,
}

/// One nondeterministic expansion of the whole node/edge structure.
#[derive(Clone, Debug)]
pub struct Branch {
    pub(crate) nodes: Vec<Node>,
    pub(crate) edges: Vec<Edge>,
    pub(crate) tbox: Option<Arc<Concept>>,
    pub(crate) disjunction: DisjunctionPolicy,
    pub(crate) variables: usize,
    pub(crate) first_class: bool,
    pub(crate) second_class: bool,
    pub(crate) finalized: bool,
    pub(crate) log: Vec<Insertion>,
}

/// Builds the initial branch: one root per individual, labelled with the NNF
/// of its signed concept assertions and `tbox_concept`, and one edge per
/// related pair of individuals. A `top` TBox concept is omitted.
pub fn init_branch(signed_abox: &[SignedAssertion], tbox_concept: &SignedConcept) -> Branch {
    let tbox = match nnf_of(tbox_concept) {
        Concept::Top => None,
        c => Some(Arc::new(c)),
    };
    let mut b = Branch {
        nodes: Vec::new(),
        edges: Vec::new(),
        tbox,
        disjunction: DisjunctionPolicy::default(),
        variables: 0,
        first_class: false,
        second_class: false,
        finalized: false,
        log: Vec::new(),
    };
    for sa in signed_abox {
        match &sa.assertion {
            Assertion::Concept(ca) => {
                let x = b.root(&ca.individual);
                let entry = signed_nnf(&SignedConcept::new(ca.concept.clone(), sa.sign));
                b.insert(x, entry, Origin::Input);
            }
            Assertion::Role(ra) => {
                let from = b.root(&ra.subject);
                let to = b.root(&ra.object);
                b.add_root_edge(from, to, ra.role.clone());
            }
        }
    }
    b
}

fn nnf_of(sc: &SignedConcept) -> Concept {
    signed_nnf(sc).concept
}

impl Branch {
    pub fn with_disjunction_policy(mut self, policy: DisjunctionPolicy) -> Self {
        self.disjunction = policy;
        self
    }

    pub fn disjunction_policy(&self) -> DisjunctionPolicy {
        self.disjunction
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn node(&self, x: NodeId) -> &Node {
        &self.nodes[x.0]
    }

    pub fn label(&self, x: NodeId) -> &NodeLabel {
        &self.nodes[x.0].label
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Outgoing edges of `x`.
    pub fn successors(&self, x: NodeId) -> impl Iterator<Item = &Edge> {
        self.nodes[x.0].outgoing.iter().map(|&e| &self.edges[e])
    }

    /// Tree edge into `x`; `None` for roots.
    pub fn incoming(&self, x: NodeId) -> Option<&Edge> {
        self.nodes[x.0].incoming.map(|e| &self.edges[e])
    }

    pub fn find_root(&self, individual: &IndividualName) -> Option<NodeId> {
        self.nodes().find_map(|(id, n)| match &n.kind {
            NodeKind::Root(i) if i == individual => Some(id),
            _ => None,
        })
    }

    pub fn tbox_concept(&self) -> Option<&Concept> {
        self.tbox.as_deref()
    }

    /// Insertions in the order they happened.
    pub fn insertions(&self) -> &[Insertion] {
        &self.log
    }

    /// Was expansion stopped early because the classification was already
    /// decided?
    pub fn is_finalized(&self) -> bool {
        self.finalized
    }

    pub fn has_first_class_conflict(&self) -> bool {
        self.first_class
    }

    pub fn has_second_class_conflict(&self) -> bool {
        self.second_class
    }

    pub fn has_conflict(&self) -> bool {
        self.first_class || self.second_class
    }

    /// Proper ancestors of `x` along tree edges, nearest first.
    pub fn ancestors(&self, x: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(self.nodes[x.0].parent, move |p| self.nodes[p.0].parent)
    }

    /// Number of tree edges between `x` and its root.
    pub fn depth(&self, x: NodeId) -> usize {
        self.ancestors(x).count()
    }

    fn root(&mut self, individual: &IndividualName) -> NodeId {
        if let Some(id) = self.find_root(individual) {
            return id;
        }
        let id = NodeId(self.nodes.len());
        self.nodes
            .push(Node::new(NodeKind::Root(individual.clone()), None, None));
        if let Some(t) = self.tbox.clone() {
            self.insert(id, SignedConcept::premise((*t).clone()), Origin::Tbox);
        }
        id
    }

    fn add_root_edge(&mut self, from: NodeId, to: NodeId, role: RoleName) {
        let existing = self.nodes[from.0]
            .outgoing
            .iter()
            .copied()
            .find(|&e| self.edges[e].to == to);
        match existing {
            Some(e) => {
                self.edges[e].roles.insert(role);
            }
            None => {
                self.edges.push(Edge {
                    from,
                    to,
                    roles: BTreeSet::from([role]),
                    sign: Sign::Premise,
                });
                self.nodes[from.0].outgoing.push(self.edges.len() - 1);
            }
        }
    }

    /// Creates a variable node below `parent`, reached through a `role` edge
    /// of the given sign. The internalized TBox is added to its label.
    pub(crate) fn add_variable(&mut self, parent: NodeId, role: RoleName, sign: Sign) -> NodeId {
        self.variables += 1;
        let id = NodeId(self.nodes.len());
        self.edges.push(Edge {
            from: parent,
            to: id,
            roles: BTreeSet::from([role]),
            sign,
        });
        let e = self.edges.len() - 1;
        self.nodes[parent.0].outgoing.push(e);
        self.nodes.push(Node::new(
            NodeKind::Variable(self.variables),
            Some(parent),
            Some(e),
        ));
        if let Some(t) = self.tbox.clone() {
            self.insert(id, SignedConcept::premise((*t).clone()), Origin::Tbox);
        }
        id
    }

    /// Adds `entry` to `L(x)`, keeping the conflict flags current. Returns
    /// whether the entry was new.
    pub(crate) fn insert(&mut self, x: NodeId, entry: SignedConcept, origin: Origin) -> bool {
        if self.nodes[x.0].label.contains(&entry) {
            return false;
        }
        let label = &self.nodes[x.0].label;
        let partner = match &entry.concept {
            Concept::Atomic(_) => Some(Concept::Not(Arc::new(entry.concept.clone()))),
            Concept::Not(inner) if matches!(**inner, Concept::Atomic(_)) => Some((**inner).clone()),
            _ => None,
        };
        let mut sums = Vec::new();
        if let Some(p) = partner {
            for s in [Sign::Query, Sign::Premise] {
                if label.has(&p, s) {
                    sums.push(entry.sign.value() + s.value());
                }
            }
        }
        if entry.concept == Concept::Bottom {
            sums.push(2 * entry.sign.value());
        }
        for sum in sums {
            if sum == 2 {
                self.first_class = true;
            } else {
                self.second_class = true;
            }
        }
        self.nodes[x.0].label.insert(entry.clone());
        self.log.push(Insertion {
            node: x,
            entry,
            origin,
        });
        true
    }

    /// Nodes whose further expansion can still produce a conflict involving
    /// sign 0. A node qualifies when some concept may ever appear in its
    /// label with sign 0, or when it has an edge into such a node.
    ///
    /// The sets are over-approximated: sign-0 entries and everything they
    /// decompose into, fillers of sign-0 universals along matching edges, and
    /// across a sign-0 edge the filler of any universal that can occur in the
    /// branch at all. Nodes outside the result never hold a sign-0 entry, and
    /// rules applied there cannot change any node in it.
    pub(crate) fn query_relevant(&self) -> Vec<bool> {
        let mut every: HashSet<Concept> = HashSet::new();
        for node in &self.nodes {
            for sc in node.label.iter() {
                every.extend(sc.concept.subterms());
            }
        }
        if let Some(t) = &self.tbox {
            every.extend(t.subterms());
        }
        let mut potential: Vec<HashSet<Concept>> = vec![HashSet::new(); self.nodes.len()];
        let mut work: Vec<(usize, Concept)> = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            for sc in node.label.iter().filter(|sc| sc.sign == Sign::Query) {
                work.push((i, sc.concept.clone()));
            }
        }
        for e in self.edges.iter().filter(|e| e.sign == Sign::Query) {
            for c in &every {
                if let Concept::Forall(r, d) = c {
                    if e.roles.contains(r) {
                        work.push((e.to.0, (**d).clone()));
                    }
                }
            }
        }
        while let Some((x, c)) = work.pop() {
            if !potential[x].insert(c.clone()) {
                continue;
            }
            match &c {
                Concept::Not(d) => work.push((x, (**d).clone())),
                Concept::And(l, r) | Concept::Or(l, r) => {
                    work.push((x, (**l).clone()));
                    work.push((x, (**r).clone()));
                }
                Concept::Forall(role, d) => {
                    for &e in &self.nodes[x].outgoing {
                        let e = &self.edges[e];
                        if e.roles.contains(role) {
                            work.push((e.to.0, (**d).clone()));
                        }
                    }
                }
                _ => {}
            }
        }
        (0..self.nodes.len())
            .map(|x| {
                !potential[x].is_empty()
                    || self.nodes[x]
                        .outgoing
                        .iter()
                        .any(|&e| !potential[self.edges[e].to.0].is_empty())
            })
            .collect()
    }

    /// Blocking status of `x`. Roots are never blocked. A variable node `x`
    /// with predecessor `x'` is directly blocked by a non-root ancestor `y`
    /// with predecessor `y'` when `L(x) = L(y)`, `L(x') = L(y')` and the two
    /// tree edges agree, provided no ancestor of `x` is blocked.
    pub fn blocked(&self, x: NodeId) -> BlockStatus {
        let chain: Vec<NodeId> = self.ancestors(x).collect();
        // Ancestors are checked from the root down so the first blocked one
        // decides indirect blocking.
        for &a in chain.iter().rev() {
            if self.direct_blocker(a).is_some() {
                return BlockStatus::IndirectlyBlocked;
            }
        }
        match self.direct_blocker(x) {
            Some(y) => BlockStatus::DirectlyBlockedBy(y),
            None => BlockStatus::Unblocked,
        }
    }

    /// Blocking status of every node, indexed by node.
    pub fn block_statuses(&self) -> Vec<BlockStatus> {
        let mut out: Vec<BlockStatus> = Vec::with_capacity(self.nodes.len());
        for i in 0..self.nodes.len() {
            let x = NodeId(i);
            let status = match self.nodes[i].parent {
                None => BlockStatus::Unblocked,
                // Parents are created before their children.
                Some(p) if out[p.0].is_blocked() => BlockStatus::IndirectlyBlocked,
                Some(_) => match self.direct_blocker(x) {
                    Some(y) => BlockStatus::DirectlyBlockedBy(y),
                    None => BlockStatus::Unblocked,
                },
            };
            out.push(status);
        }
        out
    }

    /// The pairwise condition alone, ignoring whether ancestors are blocked.
    fn direct_blocker(&self, x: NodeId) -> Option<NodeId> {
        let node = &self.nodes[x.0];
        let (xp, ex) = (node.parent?, &self.edges[node.incoming?]);
        self.ancestors(x).find(|&y| {
            let ny = &self.nodes[y.0];
            let (Some(yp), Some(ey)) = (ny.parent, ny.incoming) else {
                return false;
            };
            let ey = &self.edges[ey];
            node.label == ny.label
                && self.nodes[xp.0].label == self.nodes[yp.0].label
                && ex.roles == ey.roles
                && ex.sign == ey.sign
        })
    }
}
