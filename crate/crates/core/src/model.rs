//! ALC terms: names, concepts, assertions and ontologies, together with
//! negation normal form, syntactic closure and TBox internalization.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;

use crate::error::Error;

/// Words the textual syntax reserves; none of them may be used as a name.
pub const KEYWORDS: &[&str] = &[
    "tbox",
    "abox",
    "subclassof",
    "subsumedby",
    "consistent",
    "not",
    "and",
    "or",
    "some",
    "all",
    "top",
    "bot",
];

/// Prefix of generated individual names. User-supplied names never start with
/// an underscore, so anything in this namespace is guaranteed fresh.
pub const FRESH_PREFIX: &str = "_fresh";

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn check_name(s: &str) -> Result<(), Error> {
    if s.starts_with('_') {
        return Err(Error::ReservedName(s.to_string()));
    }
    if !is_identifier(s) {
        return Err(Error::InvalidName(s.to_string()));
    }
    if KEYWORDS.contains(&s) {
        return Err(Error::ReservedName(s.to_string()));
    }
    Ok(())
}

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            /// Validates `s` as an identifier of the textual syntax.
            pub fn new(s: &str) -> Result<Self, Error> {
                check_name(s)?;
                Ok(Self(Arc::from(s)))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl std::str::FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Error> {
                Self::new(s)
            }
        }
    };
}

name_type!(
    /// Name of an atomic concept.
    ConceptName
);
name_type!(
    /// Name of an atomic role.
    RoleName
);
name_type!(
    /// Name of an individual.
    IndividualName
);

impl IndividualName {
    /// The `n`-th name of the reserved fresh namespace (`_fresh0`, `_fresh1`, ...).
    pub fn fresh(n: usize) -> Self {
        Self(Arc::from(format!("{FRESH_PREFIX}{n}")))
    }

    pub fn is_fresh(&self) -> bool {
        self.0.starts_with(FRESH_PREFIX)
    }
}

/// An ALC concept. Subterms are shared, so cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Top,
    Bottom,
    Atomic(ConceptName),
    Not(Arc<Concept>),
    And(Arc<Concept>, Arc<Concept>),
    Or(Arc<Concept>, Arc<Concept>),
    Exists(RoleName, Arc<Concept>),
    Forall(RoleName, Arc<Concept>),
}

impl Concept {
    /// Atomic concept from a string.
    ///
    /// # Panics
    ///
    /// If `name` is not a valid concept name. Use [`ConceptName::new`] for
    /// untrusted input.
    pub fn atom(name: &str) -> Concept {
        Concept::Atomic(ConceptName::new(name).expect("invalid concept name"))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Concept {
        Concept::Not(Arc::new(c))
    }

    pub fn and(l: Concept, r: Concept) -> Concept {
        Concept::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Concept, r: Concept) -> Concept {
        Concept::Or(Arc::new(l), Arc::new(r))
    }

    pub fn exists(role: RoleName, c: Concept) -> Concept {
        Concept::Exists(role, Arc::new(c))
    }

    pub fn forall(role: RoleName, c: Concept) -> Concept {
        Concept::Forall(role, Arc::new(c))
    }

    /// Is this an atom or the negation of an atom?
    pub fn is_literal(&self) -> bool {
        match self {
            Concept::Atomic(_) => true,
            Concept::Not(inner) => matches!(**inner, Concept::Atomic(_)),
            _ => false,
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => true,
            Concept::Not(inner) => matches!(**inner, Concept::Atomic(_)),
            Concept::And(l, r) | Concept::Or(l, r) => l.is_nnf() && r.is_nnf(),
            Concept::Exists(_, c) | Concept::Forall(_, c) => c.is_nnf(),
        }
    }

    /// Immediate subconcepts, left to right.
    pub fn children(&self) -> Vec<&Concept> {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => Vec::new(),
            Concept::Not(c) | Concept::Exists(_, c) | Concept::Forall(_, c) => vec![c],
            Concept::And(l, r) | Concept::Or(l, r) => vec![l, r],
        }
    }

    /// Every subterm, including the concept itself.
    pub fn subterms(&self) -> BTreeSet<Concept> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(c) = stack.pop() {
            if out.insert(c.clone()) {
                stack.extend(c.children());
            }
        }
        out
    }

    /// Maximum nesting of `some` / `all`.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => 0,
            Concept::Not(c) => c.quantifier_depth(),
            Concept::And(l, r) | Concept::Or(l, r) => {
                l.quantifier_depth().max(r.quantifier_depth())
            }
            Concept::Exists(_, c) | Concept::Forall(_, c) => 1 + c.quantifier_depth(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<ConceptName> {
        self.subterms()
            .into_iter()
            .filter_map(|c| match c {
                Concept::Atomic(a) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn roles(&self) -> BTreeSet<RoleName> {
        self.subterms()
            .into_iter()
            .filter_map(|c| match c {
                Concept::Exists(r, _) | Concept::Forall(r, _) => Some(r),
                _ => None,
            })
            .collect()
    }

    /// Number of constructor nodes in the term tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    fn precedence(&self) -> u8 {
        match self {
            Concept::Or(..) => 0,
            Concept::And(..) => 1,
            Concept::Not(_) | Concept::Exists(..) | Concept::Forall(..) => 2,
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Concept::Top => f.write_str("top"),
            Concept::Bottom => f.write_str("bot"),
            Concept::Atomic(a) => write!(f, "{a}"),
            Concept::Not(c) => {
                f.write_str("not ")?;
                c.fmt_at(f, 2)
            }
            // Both connectives parse left-associatively, so a right operand of
            // the same connective needs parentheses.
            Concept::Or(l, r) => {
                l.fmt_at(f, 0)?;
                f.write_str(" or ")?;
                r.fmt_at(f, 1)
            }
            Concept::And(l, r) => {
                l.fmt_at(f, 1)?;
                f.write_str(" and ")?;
                r.fmt_at(f, 2)
            }
            Concept::Exists(role, c) => {
                write!(f, "some {role} . ")?;
                c.fmt_at(f, 2)
            }
            Concept::Forall(role, c) => {
                write!(f, "all {role} . ")?;
                c.fmt_at(f, 2)
            }
        }
    }
}

/// Renders in the textual syntax accepted by the parser.
impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rewrites `c` so that negation only applies to atomic concepts.
pub fn nnf(c: &Concept) -> Concept {
    match c {
        Concept::Top | Concept::Bottom | Concept::Atomic(_) => c.clone(),
        Concept::And(l, r) => Concept::and(nnf(l), nnf(r)),
        Concept::Or(l, r) => Concept::or(nnf(l), nnf(r)),
        Concept::Exists(role, inner) => Concept::exists(role.clone(), nnf(inner)),
        Concept::Forall(role, inner) => Concept::forall(role.clone(), nnf(inner)),
        Concept::Not(inner) => negated_nnf(inner),
    }
}

/// `nnf(not c)` without allocating the intermediate negation.
fn negated_nnf(c: &Concept) -> Concept {
    match c {
        Concept::Top => Concept::Bottom,
        Concept::Bottom => Concept::Top,
        Concept::Atomic(_) => Concept::Not(Arc::new(c.clone())),
        Concept::Not(inner) => nnf(inner),
        Concept::And(l, r) => Concept::or(negated_nnf(l), negated_nnf(r)),
        Concept::Or(l, r) => Concept::and(negated_nnf(l), negated_nnf(r)),
        Concept::Exists(role, inner) => Concept::forall(role.clone(), negated_nnf(inner)),
        Concept::Forall(role, inner) => Concept::exists(role.clone(), negated_nnf(inner)),
    }
}

/// `~c`: the negation normal form of `not c`.
pub fn complement(c: &Concept) -> Concept {
    negated_nnf(c)
}

/// Smallest set containing `c` that is closed under direct subconcepts and
/// [`complement`]. `c` should already be in NNF.
pub fn closure(c: &Concept) -> BTreeSet<Concept> {
    let mut out = BTreeSet::new();
    for sub in c.subterms() {
        out.insert(complement(&sub));
        out.insert(sub);
    }
    out
}

/// Union of the closures of every concept asserted in `abox`, after NNF.
pub fn closure_abox(abox: &ABox) -> BTreeSet<Concept> {
    abox.concept_assertions
        .iter()
        .flat_map(|ca| closure(&nnf(&ca.concept)))
        .collect()
}

/// Compiles a TBox into a single concept: the conjunction, in inclusion
/// order and associated to the left, of `~sub or sup`. The empty TBox gives
/// `top`.
pub fn internalize(tbox: &TBox) -> Concept {
    tbox.inclusions
        .iter()
        .map(|inc| Concept::or(complement(&inc.sub), nnf(&inc.sup)))
        .reduce(Concept::and)
        .unwrap_or(Concept::Top)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ConceptAssertion {
    pub concept: Concept,
    pub individual: IndividualName,
}

impl ConceptAssertion {
    pub fn new(concept: Concept, individual: IndividualName) -> Self {
        Self {
            concept,
            individual,
        }
    }
}

impl fmt::Display for ConceptAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if matches!(
            self.concept,
            Concept::Atomic(_) | Concept::Top | Concept::Bottom
        ) {
            write!(f, "{}({})", self.concept, self.individual)
        } else {
            write!(f, "({})({})", self.concept, self.individual)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RoleAssertion {
    pub role: RoleName,
    pub subject: IndividualName,
    pub object: IndividualName,
}

impl RoleAssertion {
    pub fn new(role: RoleName, subject: IndividualName, object: IndividualName) -> Self {
        Self {
            role,
            subject,
            object,
        }
    }
}

impl fmt::Display for RoleAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.role, self.subject, self.object)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Assertion {
    Concept(ConceptAssertion),
    Role(RoleAssertion),
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Concept(a) => a.fmt(f),
            Assertion::Role(a) => a.fmt(f),
        }
    }
}

impl From<ConceptAssertion> for Assertion {
    fn from(a: ConceptAssertion) -> Self {
        Assertion::Concept(a)
    }
}

impl From<RoleAssertion> for Assertion {
    fn from(a: RoleAssertion) -> Self {
        Assertion::Role(a)
    }
}

/// A general concept inclusion `sub subclassof sup`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Inclusion {
    pub sub: Concept,
    pub sup: Concept,
}

impl Inclusion {
    pub fn new(sub: Concept, sup: Concept) -> Self {
        Self { sub, sup }
    }
}

/// Inclusions in input order; the order fixes how [`internalize`] associates.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TBox {
    pub inclusions: Vec<Inclusion>,
}

impl TBox {
    pub fn is_empty(&self) -> bool {
        self.inclusions.is_empty()
    }
}

/// Assertions kept in insertion order without duplicates.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ABox {
    pub concept_assertions: IndexSet<ConceptAssertion>,
    pub role_assertions: IndexSet<RoleAssertion>,
}

impl ABox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, assertion: impl Into<Assertion>) {
        match assertion.into() {
            Assertion::Concept(a) => {
                self.concept_assertions.insert(a);
            }
            Assertion::Role(a) => {
                self.role_assertions.insert(a);
            }
        }
    }

    pub fn with(mut self, assertion: impl Into<Assertion>) -> Self {
        self.add(assertion);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.concept_assertions.is_empty() && self.role_assertions.is_empty()
    }

    /// All assertions, concept assertions first.
    pub fn assertions(&self) -> impl Iterator<Item = Assertion> + '_ {
        self.concept_assertions
            .iter()
            .cloned()
            .map(Assertion::Concept)
            .chain(self.role_assertions.iter().cloned().map(Assertion::Role))
    }

    /// Individuals in order of first occurrence (U_A).
    pub fn individuals(&self) -> IndexSet<IndividualName> {
        let mut out = IndexSet::new();
        for a in &self.concept_assertions {
            out.insert(a.individual.clone());
        }
        for a in &self.role_assertions {
            out.insert(a.subject.clone());
            out.insert(a.object.clone());
        }
        out
    }

    /// Roles occurring in role assertions or inside asserted concepts (R_A).
    pub fn roles(&self) -> BTreeSet<RoleName> {
        let mut out: BTreeSet<RoleName> = self
            .role_assertions
            .iter()
            .map(|a| a.role.clone())
            .collect();
        for a in &self.concept_assertions {
            out.extend(a.concept.roles());
        }
        out
    }

    /// First name of the fresh namespace not used in this ABox.
    pub fn fresh_individual(&self) -> IndividualName {
        let used = self.individuals();
        (0..)
            .map(IndividualName::fresh)
            .find(|i| !used.contains(i))
            .expect("unbounded range")
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Ontology {
    pub tbox: TBox,
    pub abox: ABox,
}

impl Ontology {
    pub fn new(tbox: TBox, abox: ABox) -> Self {
        Self { tbox, abox }
    }

    pub fn from_abox(abox: ABox) -> Self {
        Self {
            tbox: TBox::default(),
            abox,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Concept {
        Concept::atom("A")
    }
    fn b() -> Concept {
        Concept::atom("B")
    }
    fn r() -> RoleName {
        RoleName::new("R").unwrap()
    }

    #[test]
    fn names_are_validated() {
        assert!(ConceptName::new("Penguin").is_ok());
        assert!(ConceptName::new("has_food2").is_ok());
        assert!(matches!(ConceptName::new("2x"), Err(Error::InvalidName(_))));
        assert!(matches!(
            ConceptName::new("a-b"),
            Err(Error::InvalidName(_))
        ));
        assert!(matches!(RoleName::new("some"), Err(Error::ReservedName(_))));
        assert!(matches!(
            IndividualName::new("_fresh0"),
            Err(Error::ReservedName(_))
        ));
        assert!(IndividualName::fresh(3).is_fresh());
    }

    #[test]
    fn nnf_examples() {
        assert_eq!(
            nnf(&Concept::not(Concept::or(a(), b()))),
            Concept::and(Concept::not(a()), Concept::not(b()))
        );
        assert_eq!(
            nnf(&Concept::not(Concept::exists(r(), a()))),
            Concept::forall(r(), Concept::not(a()))
        );
        assert_eq!(nnf(&a()), a());
        assert_eq!(nnf(&Concept::not(Concept::not(a()))), a());
        assert_eq!(nnf(&Concept::not(Concept::Top)), Concept::Bottom);
        assert_eq!(nnf(&Concept::not(Concept::Bottom)), Concept::Top);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&a()), Concept::not(a()));
        assert_eq!(
            complement(&Concept::forall(r(), a())),
            Concept::exists(r(), Concept::not(a()))
        );
        assert_eq!(
            complement(&Concept::and(a(), b())),
            Concept::or(Concept::not(a()), Concept::not(b()))
        );
    }

    #[test]
    fn closure_examples() {
        let set = |v: Vec<Concept>| v.into_iter().collect::<BTreeSet<_>>();
        assert_eq!(closure(&a()), set(vec![a(), Concept::not(a())]));
        assert_eq!(
            closure(&Concept::and(a(), b())),
            set(vec![
                Concept::and(a(), b()),
                Concept::or(Concept::not(a()), Concept::not(b())),
                a(),
                Concept::not(a()),
                b(),
                Concept::not(b()),
            ])
        );
        assert_eq!(
            closure(&Concept::exists(r(), a())),
            set(vec![
                Concept::exists(r(), a()),
                Concept::forall(r(), Concept::not(a())),
                a(),
                Concept::not(a()),
            ])
        );
    }

    #[test]
    fn closure_of_abox_is_union() {
        let i = IndividualName::new("i").unwrap();
        let abox = ABox::new()
            .with(ConceptAssertion::new(a(), i.clone()))
            .with(ConceptAssertion::new(Concept::not(Concept::not(b())), i));
        let expected: BTreeSet<_> = [a(), Concept::not(a()), b(), Concept::not(b())]
            .into_iter()
            .collect();
        assert_eq!(closure_abox(&abox), expected);
    }

    #[test]
    fn internalize_examples() {
        let e = Concept::atom("E");
        assert_eq!(internalize(&TBox::default()), Concept::Top);
        let single = TBox {
            inclusions: vec![Inclusion::new(a(), b())],
        };
        assert_eq!(internalize(&single), Concept::or(Concept::not(a()), b()));
        let two = TBox {
            inclusions: vec![Inclusion::new(a(), b()), Inclusion::new(b(), e.clone())],
        };
        assert_eq!(
            internalize(&two),
            Concept::and(
                Concept::or(Concept::not(a()), b()),
                Concept::or(Concept::not(b()), e)
            )
        );
    }

    #[test]
    fn internalize_normalizes_both_sides() {
        let t = TBox {
            inclusions: vec![Inclusion::new(
                Concept::exists(r(), a()),
                Concept::not(Concept::and(a(), b())),
            )],
        };
        let c = internalize(&t);
        assert!(c.is_nnf());
        assert_eq!(
            c,
            Concept::or(
                Concept::forall(r(), Concept::not(a())),
                Concept::or(Concept::not(a()), Concept::not(b()))
            )
        );
    }

    #[test]
    fn display_reparses_with_minimal_parentheses() {
        let c = Concept::or(
            a(),
            Concept::or(b(), Concept::and(a(), Concept::not(Concept::or(a(), b())))),
        );
        assert_eq!(c.to_string(), "A or (B or A and not (A or B))");
        let q = Concept::exists(r(), Concept::and(a(), b()));
        assert_eq!(q.to_string(), "some R . (A and B)");
    }

    #[test]
    fn abox_derived_sets() {
        let t = IndividualName::new("tweety").unwrap();
        let f = IndividualName::new("fingerling").unwrap();
        let has_food = RoleName::new("HasFood").unwrap();
        let abox = ABox::new()
            .with(ConceptAssertion::new(a(), t.clone()))
            .with(RoleAssertion::new(has_food.clone(), t.clone(), f.clone()));
        assert_eq!(
            abox.individuals().into_iter().collect::<Vec<_>>(),
            vec![t, f]
        );
        assert!(abox.roles().contains(&has_food));
        assert_eq!(abox.fresh_individual(), IndividualName::fresh(0));
    }
}
