//! Signs 0/1 separating premise-derived formulas from query-derived ones.

use std::fmt;

use crate::model::{nnf, Assertion, Concept, ConceptAssertion};

/// `1` marks formulas that come from the premises, `0` formulas that come
/// from the (negated) query.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sign {
    Query = 0,
    Premise = 1,
}

impl Sign {
    pub fn value(self) -> u8 {
        self as u8
    }

    pub fn from_value(v: u8) -> Option<Sign> {
        match v {
            0 => Some(Sign::Query),
            1 => Some(Sign::Premise),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A concept tagged with the sign of the assertion it came from. The
/// individual is implicit: it is whatever tableau node holds the entry.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedConcept {
    pub concept: Concept,
    pub sign: Sign,
}

impl SignedConcept {
    pub fn new(concept: Concept, sign: Sign) -> Self {
        Self { concept, sign }
    }

    pub fn premise(concept: Concept) -> Self {
        Self::new(concept, Sign::Premise)
    }

    pub fn query(concept: Concept) -> Self {
        Self::new(concept, Sign::Query)
    }
}

impl fmt::Display for SignedConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.concept.is_literal() || matches!(self.concept, Concept::Top | Concept::Bottom) {
            write!(f, "{}^{}", self.concept, self.sign)
        } else {
            write!(f, "({})^{}", self.concept, self.sign)
        }
    }
}

impl fmt::Debug for SignedConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An assertion with its sign. Role assertions are always premises here.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignedAssertion {
    pub assertion: Assertion,
    pub sign: Sign,
}

impl SignedAssertion {
    pub fn new(assertion: impl Into<Assertion>, sign: Sign) -> Self {
        let assertion = assertion.into();
        let sign = match assertion {
            Assertion::Role(_) => Sign::Premise,
            Assertion::Concept(_) => sign,
        };
        Self { assertion, sign }
    }
}

fn normalized(a: &Assertion) -> Assertion {
    match a {
        Assertion::Concept(ca) => Assertion::Concept(ConceptAssertion::new(
            nnf(&ca.concept),
            ca.individual.clone(),
        )),
        Assertion::Role(_) => a.clone(),
    }
}

/// The labeling function: `Premise` if `a` belongs to `premises`, `Query`
/// otherwise. Concept assertions are compared after NNF, so `not not A(x)`
/// is recognized as the premise `A(x)`.
pub fn characteristic<'a, I>(premises: I, a: &Assertion) -> Sign
where
    I: IntoIterator<Item = &'a Assertion>,
{
    let target = normalized(a);
    if premises.into_iter().any(|p| normalized(p) == target) {
        Sign::Premise
    } else {
        Sign::Query
    }
}

/// NNF on the concept; the sign is untouched.
pub fn signed_nnf(sc: &SignedConcept) -> SignedConcept {
    SignedConcept::new(nnf(&sc.concept), sc.sign)
}
