//! A sign-based paraconsistent tableau reasoner for the description logic
//! ALC.
//!
//! Premises carry sign 1 and the negated query sign 0. A contradiction
//! between two premises (a *real* conflict) does not close the forest on its
//! own, so an inconsistent ontology does not entail everything, while
//! conflicts that involve the query still decide entailment.

pub mod error;
pub mod model;
pub mod reasoner;
pub mod signing;
pub mod syntax;
pub mod tableau;
pub mod trace;

pub use error::{Error, Result};
pub use model::{
    closure, complement, internalize, nnf, ABox, Assertion, Concept, ConceptAssertion, ConceptName,
    Inclusion, IndividualName, Ontology, RoleAssertion, RoleName, TBox,
};
pub use reasoner::{Mode, Query, Reasoner, ReasonerConfig, ReasoningResult};
pub use signing::{characteristic, signed_nnf, Sign, SignedAssertion, SignedConcept};
pub use syntax::{
    parse_concept, parse_ontology, parse_query, print_ontology, ParseError, SourceDocument,
};
pub use trace::{emit_trace, recompute, TraceDocument};
