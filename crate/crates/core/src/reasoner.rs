//! Reasoning tasks on top of the tableau: paraconsistent instance checking
//! and subsumption, and the classical counterparts used for comparison.

use std::fmt;

use crate::error::Result;
use crate::model::{
    internalize, nnf, Assertion, Concept, ConceptAssertion, IndividualName, Ontology,
};
use crate::signing::{characteristic, Sign, SignedAssertion, SignedConcept};
use crate::tableau::{
    expand, forest_verdict_with, init_branch, ClosurePolicy, DisjunctionPolicy, ExpansionConfig,
    ForestVerdict, Limits, RuleOrder,
};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Query {
    Instance(ConceptAssertion),
    Subsumes { sub: Concept, sup: Concept },
    Consistency,
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Instance(a) => a.fmt(f),
            Query::Subsumes { sub, sup } => write!(f, "{sub} subsumedby {sup}"),
            Query::Consistency => f.write_str("consistent"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum Mode {
    #[default]
    Para,
    Classical,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Para => "para",
            Mode::Classical => "classical",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "para" => Ok(Mode::Para),
            "classical" => Ok(Mode::Classical),
            other => Err(format!(
                "unknown mode `{other}` (expected para or classical)"
            )),
        }
    }
}

/// Answer to one query. For entailment and subsumption `verdict` is true
/// when the query follows; for consistency it is true when the ontology is
/// consistent.
#[derive(Clone, Debug)]
pub struct ReasoningResult {
    pub verdict: bool,
    pub mode: Mode,
    pub query: Query,
    pub trace: ForestVerdict,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ReasonerConfig {
    pub limits: Limits,
    pub order: RuleOrder,
    pub disjunction: DisjunctionPolicy,
    pub parallel: bool,
    /// Expand every branch fully, for complete traces.
    pub exhaustive: bool,
}

/// Runs queries against ontologies under a fixed engine configuration.
#[derive(Clone, Copy, Debug, Default)]
pub struct Reasoner {
    pub config: ReasonerConfig,
}

impl Reasoner {
    pub fn new(config: ReasonerConfig) -> Self {
        Self { config }
    }

    fn run(
        &self,
        input: &[SignedAssertion],
        o: &Ontology,
        closure: ClosurePolicy,
    ) -> Result<ForestVerdict> {
        let tbox = SignedConcept::premise(internalize(&o.tbox));
        let initial = init_branch(input, &tbox).with_disjunction_policy(self.config.disjunction);
        let config = ExpansionConfig {
            limits: self.config.limits,
            order: self.config.order,
            closure,
            parallel: self.config.parallel,
            exhaustive: self.config.exhaustive,
        };
        forest_verdict_with(expand(initial, &config)?, closure)
    }

    /// Every ABox assertion, signed by membership in the ABox itself.
    fn premises(o: &Ontology) -> Vec<SignedAssertion> {
        let all: Vec<Assertion> = o.abox.assertions().collect();
        all.iter()
            .map(|a| SignedAssertion::new(a.clone(), characteristic(&all, a)))
            .collect()
    }

    /// `premises ∪ {~C(a)}` with the query copy signed 0.
    fn with_negated_query(o: &Ontology, q: &ConceptAssertion) -> Vec<SignedAssertion> {
        let mut input = Self::premises(o);
        let negated =
            ConceptAssertion::new(nnf(&Concept::not(q.concept.clone())), q.individual.clone());
        input.push(SignedAssertion::new(negated, Sign::Query));
        input
    }

    /// Paraconsistent entailment of `q`: the negated query, signed 0, is
    /// added to the signed premises, and `q` follows iff the resulting forest
    /// is closed.
    pub fn para_entails(&self, o: &Ontology, q: &ConceptAssertion) -> Result<ReasoningResult> {
        let trace = self.run(
            &Self::with_negated_query(o, q),
            o,
            ClosurePolicy::Paraconsistent,
        )?;
        Ok(ReasoningResult {
            verdict: trace.closed,
            mode: Mode::Para,
            query: Query::Instance(q.clone()),
            trace,
        })
    }

    /// Paraconsistent subsumption `sub ⊑ sup`, reduced to an instance check
    /// on a fresh individual that is asserted to be a `sub`.
    pub fn para_subsumes(
        &self,
        o: &Ontology,
        sub: &Concept,
        sup: &Concept,
    ) -> Result<ReasoningResult> {
        let (extended, q) = Self::subsumption_instance(o, sub, sup);
        let mut r = self.para_entails(&extended, &q)?;
        r.query = Query::Subsumes {
            sub: sub.clone(),
            sup: sup.clone(),
        };
        Ok(r)
    }

    fn subsumption_instance(
        o: &Ontology,
        sub: &Concept,
        sup: &Concept,
    ) -> (Ontology, ConceptAssertion) {
        let i = o.abox.fresh_individual();
        let mut extended = o.clone();
        extended
            .abox
            .add(ConceptAssertion::new(sub.clone(), i.clone()));
        (extended, ConceptAssertion::new(sup.clone(), i))
    }

    /// Classical consistency: some complete branch is free of clashes.
    pub fn classical_consistency(&self, o: &Ontology) -> Result<ReasoningResult> {
        let mut input = Self::premises(o);
        // With no individuals at all a TBox still constrains the (nonempty)
        // domain, so it is checked on one anonymous element.
        if input.is_empty() && !o.tbox.is_empty() {
            input.push(SignedAssertion::new(
                ConceptAssertion::new(Concept::Top, IndividualName::fresh(0)),
                Sign::Premise,
            ));
        }
        let trace = self.run(&input, o, ClosurePolicy::Classical)?;
        Ok(ReasoningResult {
            verdict: !trace.closed,
            mode: Mode::Classical,
            query: Query::Consistency,
            trace,
        })
    }

    pub fn classical_consistent(&self, o: &Ontology) -> Result<bool> {
        Ok(self.classical_consistency(o)?.verdict)
    }

    /// Classical entailment: `o ∪ {not C(a)}` is inconsistent.
    pub fn classical_entailment(
        &self,
        o: &Ontology,
        q: &ConceptAssertion,
    ) -> Result<ReasoningResult> {
        let trace = self.run(&Self::with_negated_query(o, q), o, ClosurePolicy::Classical)?;
        Ok(ReasoningResult {
            verdict: trace.closed,
            mode: Mode::Classical,
            query: Query::Instance(q.clone()),
            trace,
        })
    }

    pub fn classical_entails(&self, o: &Ontology, q: &ConceptAssertion) -> Result<bool> {
        Ok(self.classical_entailment(o, q)?.verdict)
    }

    pub fn classical_subsumes(
        &self,
        o: &Ontology,
        sub: &Concept,
        sup: &Concept,
    ) -> Result<ReasoningResult> {
        let (extended, q) = Self::subsumption_instance(o, sub, sup);
        let mut r = self.classical_entailment(&extended, &q)?;
        r.query = Query::Subsumes {
            sub: sub.clone(),
            sup: sup.clone(),
        };
        Ok(r)
    }

    /// Answers any query in the given mode. Consistency is always checked
    /// classically.
    pub fn answer(&self, o: &Ontology, query: &Query, mode: Mode) -> Result<ReasoningResult> {
        match (query, mode) {
            (Query::Consistency, _) => self.classical_consistency(o),
            (Query::Instance(q), Mode::Para) => self.para_entails(o, q),
            (Query::Instance(q), Mode::Classical) => self.classical_entailment(o, q),
            (Query::Subsumes { sub, sup }, Mode::Para) => self.para_subsumes(o, sub, sup),
            (Query::Subsumes { sub, sup }, Mode::Classical) => self.classical_subsumes(o, sub, sup),
        }
    }
}

/// [`Reasoner::para_entails`] with the default configuration.
pub fn para_entails(o: &Ontology, q: &ConceptAssertion) -> Result<ReasoningResult> {
    Reasoner::default().para_entails(o, q)
}

pub fn para_subsumes(o: &Ontology, sub: &Concept, sup: &Concept) -> Result<ReasoningResult> {
    Reasoner::default().para_subsumes(o, sub, sup)
}

pub fn classical_consistent(o: &Ontology) -> Result<bool> {
    Reasoner::default().classical_consistent(o)
}

pub fn classical_entails(o: &Ontology, q: &ConceptAssertion) -> Result<bool> {
    Reasoner::default().classical_entails(o, q)
}
