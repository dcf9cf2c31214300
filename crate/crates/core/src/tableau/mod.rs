//! The signed tableau: initial forest, expansion rules, blocking, conflict
//! classification and closure.
//!
//! A [`Branch`] is one complete nondeterministic expansion of the whole
//! node/edge structure. [`expand`] explores every ⊔-choice depth first and
//! returns the finished branches, which [`forest_verdict`] then judges.

mod branch;
mod conflict;
mod rules;

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use branch::{
    init_branch, BlockStatus, Branch, DisjunctionPolicy, Edge, Insertion, Node, NodeId, NodeKind,
    NodeLabel, Origin, RuleKind,
};
pub use conflict::{
    branch_conflicts, classify_branch, conflicts, forest_verdict, forest_verdict_with, BranchClass,
    BranchReport, ClashAtom, Classification, ClosurePolicy, Conflict, ConflictClass, ForestVerdict,
};
pub use rules::{
    applicable_rules, apply, apply_and, apply_exists, apply_forall, apply_or, is_complete,
    next_rule, RuleApplication,
};

/// Caps that turn runaway expansion into an error.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Limits {
    /// Nodes in any single branch.
    pub max_nodes: usize,
    /// Branches created while answering one query.
    pub max_branches: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_nodes: 100_000,
            max_branches: 10_000,
        }
    }
}

/// How the next rule instance is picked.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum RuleOrder {
    /// Nodes in creation order; ⊓, ⊔, ∀, ∃ within a node; left disjunct first.
    #[default]
    Canonical,
    /// Uniformly among all applicable instances, from a seeded generator.
    Shuffled(u64),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ExpansionConfig {
    pub limits: Limits,
    pub order: RuleOrder,
    pub closure: ClosurePolicy,
    /// Explore the two sides of a ⊔ split on separate threads.
    pub parallel: bool,
    /// Expand every branch to the end even after the verdict is known.
    pub exhaustive: bool,
}

/// Splits deeper than this run sequentially even in parallel mode.
const PARALLEL_DEPTH: usize = 8;

struct Run<'a> {
    config: &'a ExpansionConfig,
    branches: AtomicUsize,
    /// A complete open branch exists, so the forest cannot close.
    open_found: AtomicBool,
    /// Some branch holds a second-class conflict.
    second_found: AtomicBool,
}

impl Run<'_> {
    fn stopped(&self) -> bool {
        !self.config.exhaustive && self.open_found.load(Ordering::Relaxed)
    }

    /// Whether `b` can stop expanding. Besides the policy's own condition, a
    /// branch with any conflict is settled once another branch supplies the
    /// second-class conflict the forest needs.
    fn decided(&self, b: &Branch) -> bool {
        if self.config.closure.decided(b) {
            if b.has_second_class_conflict() {
                self.second_found.store(true, Ordering::Relaxed);
            }
            return true;
        }
        !self.config.exhaustive && b.has_conflict() && self.second_found.load(Ordering::Relaxed)
    }

    fn count_branch(&self) -> Result<()> {
        let n = self.branches.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.config.limits.max_branches {
            return Err(Error::ResourceLimit {
                what: "branches",
                limit: self.config.limits.max_branches,
            });
        }
        Ok(())
    }

    fn pick(&self, b: &Branch, rng: Option<&mut ChaCha8Rng>) -> Option<RuleApplication> {
        // A branch with a real conflict is never open, so all that is left to
        // find is a second-class conflict, and only rules near sign-0 entries
        // can produce one.
        let relevant = (self.defers() && b.has_conflict()).then(|| b.query_relevant());
        let only = relevant.as_deref();
        match rng {
            None => rules::next_rule_among(b, only),
            Some(rng) => {
                let mut all = rules::applicable_rules_among(b, only);
                if all.is_empty() {
                    None
                } else {
                    let i = rng.gen_range(0..all.len());
                    Some(all.swap_remove(i))
                }
            }
        }
    }

    /// Runs `b` until it finishes, splits, or (with `defer`) first holds a
    /// conflict that does not settle it.
    fn step(&self, b: &mut Branch, mut rng: Option<&mut ChaCha8Rng>, defer: bool) -> Result<Step> {
        loop {
            if self.decided(b) {
                b.finalized = true;
                return Ok(Step::Done);
            }
            if defer && b.has_conflict() {
                return Ok(Step::Defer);
            }
            let Some(app) = self.pick(b, rng.as_deref_mut()) else {
                if b.has_conflict() {
                    // Rules may remain at nodes that cannot matter.
                    b.finalized = !is_complete(b);
                } else {
                    self.open_found.store(true, Ordering::Relaxed);
                }
                return Ok(Step::Done);
            };
            let right = rules::apply(b, &app)?;
            if b.node_count() > self.config.limits.max_nodes {
                return Err(Error::ResourceLimit {
                    what: "nodes in a branch",
                    limit: self.config.limits.max_nodes,
                });
            }
            if let Some(right) = right {
                self.count_branch()?;
                let right_rng = rng
                    .as_deref_mut()
                    .map(|g| ChaCha8Rng::seed_from_u64(g.gen()));
                return Ok(Step::Split(right, right_rng));
            }
        }
    }

    fn sequential(
        &self,
        b: Branch,
        rng: Option<ChaCha8Rng>,
        defer: bool,
        out: &mut Outcome,
    ) -> Result<()> {
        let mut stack = vec![(b, rng)];
        while let Some((mut b, mut rng)) = stack.pop() {
            if self.stopped() {
                break;
            }
            loop {
                match self.step(&mut b, rng.as_mut(), defer)? {
                    Step::Done => {
                        out.done.push(b);
                        break;
                    }
                    Step::Defer => {
                        out.deferred.push((b, rng));
                        break;
                    }
                    Step::Split(right, right_rng) => stack.push((right, right_rng)),
                }
            }
        }
        Ok(())
    }

    fn parallel(
        &self,
        mut b: Branch,
        mut rng: Option<ChaCha8Rng>,
        depth: usize,
    ) -> Result<Outcome> {
        let mut out = Outcome::default();
        if self.stopped() {
            return Ok(out);
        }
        if depth >= PARALLEL_DEPTH {
            self.sequential(b, rng, self.defers(), &mut out)?;
            return Ok(out);
        }
        match self.step(&mut b, rng.as_mut(), self.defers())? {
            Step::Done => out.done.push(b),
            Step::Defer => out.deferred.push((b, rng)),
            Step::Split(right, right_rng) => {
                let (l, r) = rayon::join(
                    || self.parallel(b, rng, depth + 1),
                    || self.parallel(right, right_rng, depth + 1),
                );
                out = l?;
                let r = r?;
                out.done.extend(r.done);
                out.deferred.extend(r.deferred);
            }
        }
        Ok(out)
    }

    /// Branches with a first-class conflict can never be open, so under the
    /// paraconsistent policy they wait until the search for an open branch
    /// is over.
    fn defers(&self) -> bool {
        !self.config.exhaustive && self.config.closure == ClosurePolicy::Paraconsistent
    }
}

#[allow(clippy::large_enum_variant)]
enum Step {
    Done,
    Defer,
    Split(Branch, Option<ChaCha8Rng>),
}

#[derive(Default)]
struct Outcome {
    done: Vec<Branch>,
    deferred: Vec<(Branch, Option<ChaCha8Rng>)>,
}

/// Expands `initial` until every branch is complete, or decided under the
/// configured closure policy. Branches come back in depth-first order, left
/// disjunct first.
///
/// Unless `config.exhaustive` is set, the search is pruned without changing
/// whether the forest is closed: it stops at the first complete open branch,
/// branches holding only real conflicts are postponed until no open branch
/// remains to be found, and once a second-class conflict has appeared
/// anywhere every branch stops at its first conflict. Branches abandoned
/// this way are not returned.
pub fn expand(initial: Branch, config: &ExpansionConfig) -> Result<Vec<Branch>> {
    let run = Run {
        config,
        branches: AtomicUsize::new(1),
        open_found: AtomicBool::new(false),
        second_found: AtomicBool::new(false),
    };
    let rng = match config.order {
        RuleOrder::Canonical => None,
        RuleOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut out = if config.parallel {
        run.parallel(initial, rng, 0)?
    } else {
        let mut out = Outcome::default();
        run.sequential(initial, rng, run.defers(), &mut out)?;
        out
    };
    // No open branch turned up while conflicts were deferred. The deferred
    // branches now run to the end, until one of them yields the
    // second-class conflict that closes the forest; the rest then settle.
    for (b, rng) in std::mem::take(&mut out.deferred) {
        if run.stopped() {
            break;
        }
        run.sequential(b, rng, false, &mut out)?;
    }
    Ok(out.done)
}
