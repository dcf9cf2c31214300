//! Test-side generators and oracles. Nothing here calls into the tableau.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use paratab::{
    ABox, Concept, ConceptAssertion, Inclusion, IndividualName, Ontology, RoleAssertion, RoleName,
    TBox,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn ind(s: &str) -> IndividualName {
    IndividualName::new(s).unwrap()
}

pub fn role(s: &str) -> RoleName {
    RoleName::new(s).unwrap()
}

/// Vocabulary for random generation.
#[derive(Clone, Debug)]
pub struct Vocab {
    pub atoms: Vec<String>,
    pub roles: Vec<String>,
    pub individuals: Vec<String>,
}

impl Vocab {
    pub fn new(atoms: usize, roles: usize, individuals: usize) -> Self {
        Self {
            atoms: ["A", "B", "C", "D"][..atoms]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            roles: ["R", "S"][..roles].iter().map(|s| s.to_string()).collect(),
            individuals: ["a", "b", "c"][..individuals]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }

    pub fn individual<R: Rng>(&self, rng: &mut R) -> IndividualName {
        ind(self.individuals.choose(rng).unwrap())
    }
}

/// A random concept of quantifier depth at most `depth` and roughly `size`
/// constructors.
pub fn random_concept<R: Rng>(rng: &mut R, v: &Vocab, depth: usize, size: usize) -> Concept {
    let atom = |rng: &mut R| match rng.gen_range(0..12) {
        0 => Concept::Top,
        1 => Concept::Bottom,
        _ => Concept::atom(v.atoms.choose(rng).unwrap()),
    };
    if size <= 1 {
        return atom(rng);
    }
    let quantifier = depth > 0 && !v.roles.is_empty();
    match rng.gen_range(0..if quantifier { 6 } else { 4 }) {
        0 => Concept::not(random_concept(rng, v, depth, size - 1)),
        1 | 2 => {
            let left = rng.gen_range(1..size);
            let (l, r) = (
                random_concept(rng, v, depth, left),
                random_concept(rng, v, depth, size - left),
            );
            if rng.gen_bool(0.5) {
                Concept::and(l, r)
            } else {
                Concept::or(l, r)
            }
        }
        3 => atom(rng),
        _ => {
            let r = role(v.roles.choose(rng).unwrap());
            let c = random_concept(rng, v, depth - 1, size - 1);
            if rng.gen_bool(0.5) {
                Concept::exists(r, c)
            } else {
                Concept::forall(r, c)
            }
        }
    }
}

/// Random ABox with up to `max_assertions` assertions, at most `max_roles`
/// of them role assertions.
pub fn random_abox<R: Rng>(
    rng: &mut R,
    v: &Vocab,
    depth: usize,
    max_assertions: usize,
    max_roles: usize,
) -> ABox {
    let mut abox = ABox::new();
    let n = rng.gen_range(1..=max_assertions);
    let mut roles = 0;
    for _ in 0..n {
        if !v.roles.is_empty() && roles < max_roles && rng.gen_bool(0.25) {
            roles += 1;
            abox.add(RoleAssertion::new(
                role(v.roles.choose(rng).unwrap()),
                v.individual(rng),
                v.individual(rng),
            ));
        } else {
            let size = rng.gen_range(1..=5);
            abox.add(ConceptAssertion::new(
                random_concept(rng, v, depth, size),
                v.individual(rng),
            ));
        }
    }
    abox
}

/// Existential restrictions that survive negation normal form.
pub fn positive_exists(c: &Concept) -> usize {
    fn go(c: &Concept, positive: bool) -> usize {
        match c {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => 0,
            Concept::Not(d) => go(d, !positive),
            Concept::And(l, r) | Concept::Or(l, r) => go(l, positive) + go(r, positive),
            Concept::Exists(_, d) => usize::from(positive) + go(d, positive),
            Concept::Forall(_, d) => usize::from(!positive) + go(d, positive),
        }
    }
    go(c, true)
}

/// Existentials required by an inclusion `sub ⊑ sup`, read as `¬sub ⊔ sup`.
pub fn inclusion_exists(inc: &Inclusion) -> usize {
    positive_exists(&Concept::or(Concept::not(inc.sub.clone()), inc.sup.clone()))
}

/// A finite interpretation over elements `0..n`.
#[derive(Clone, Debug, Default)]
pub struct Interpretation {
    pub size: usize,
    pub atoms: BTreeMap<String, BTreeSet<usize>>,
    pub roles: BTreeMap<String, BTreeSet<(usize, usize)>>,
}

impl Interpretation {
    pub fn holds(&self, c: &Concept, x: usize) -> bool {
        match c {
            Concept::Top => true,
            Concept::Bottom => false,
            Concept::Atomic(a) => self.atoms.get(a.as_str()).is_some_and(|s| s.contains(&x)),
            Concept::Not(d) => !self.holds(d, x),
            Concept::And(l, r) => self.holds(l, x) && self.holds(r, x),
            Concept::Or(l, r) => self.holds(l, x) || self.holds(r, x),
            Concept::Exists(r, d) => self.successors(r.as_str(), x).any(|y| self.holds(d, y)),
            Concept::Forall(r, d) => self.successors(r.as_str(), x).all(|y| self.holds(d, y)),
        }
    }

    fn successors<'a>(&'a self, r: &str, x: usize) -> impl Iterator<Item = usize> + 'a {
        self.roles
            .get(r)
            .into_iter()
            .flat_map(move |s| s.iter().filter(move |(a, _)| *a == x).map(|(_, b)| *b))
    }
}

/// Every subset of `items`, as bit masks.
fn subsets(n: usize) -> impl Iterator<Item = u64> {
    0..(1u64 << n)
}

/// Brute-force satisfiability for ontologies whose negation normal form has
/// quantifier depth at most 1, at most one existential in the ABox and none
/// in the TBox.
///
/// Such an ontology has a model iff it has one whose domain is the named
/// individuals plus one witness element, in which only named elements have
/// successors. The search therefore fixes a valuation of the atoms on all
/// elements, then looks for successor sets of each individual separately.
pub fn brute_force_consistent(o: &Ontology) -> bool {
    assert!(
        o.abox
            .concept_assertions
            .iter()
            .map(|a| positive_exists(&a.concept))
            .sum::<usize>()
            <= 1
    );
    assert!(o.tbox.inclusions.iter().all(|i| inclusion_exists(i) == 0));
    let individuals: Vec<IndividualName> = o.abox.individuals().into_iter().collect();
    let k = individuals.len();
    let size = k + 1;
    let witness = k;
    let mut atoms: BTreeSet<String> = BTreeSet::new();
    let mut roles: BTreeSet<String> = BTreeSet::new();
    for a in &o.abox.concept_assertions {
        atoms.extend(a.concept.atoms().iter().map(|n| n.to_string()));
        roles.extend(a.concept.roles().iter().map(|n| n.to_string()));
    }
    for a in &o.abox.role_assertions {
        roles.insert(a.role.to_string());
    }
    for i in &o.tbox.inclusions {
        for c in [&i.sub, &i.sup] {
            atoms.extend(c.atoms().iter().map(|n| n.to_string()));
            roles.extend(c.roles().iter().map(|n| n.to_string()));
        }
    }
    let atoms: Vec<String> = atoms.into_iter().collect();
    let roles: Vec<String> = roles.into_iter().collect();
    let gcis: Vec<Concept> = o
        .tbox
        .inclusions
        .iter()
        .map(|i| Concept::or(Concept::not(i.sub.clone()), i.sup.clone()))
        .collect();
    let index = |i: &IndividualName| individuals.iter().position(|j| j == i).unwrap();

    // Per individual: the assertions about it and the edges forced by role
    // assertions.
    let about: Vec<Vec<&Concept>> = (0..k)
        .map(|x| {
            o.abox
                .concept_assertions
                .iter()
                .filter(|a| index(&a.individual) == x)
                .map(|a| &a.concept)
                .chain(gcis.iter())
                .collect()
        })
        .collect();
    let edge_slots: Vec<(usize, usize)> = (0..roles.len())
        .flat_map(|r| (0..size).map(move |y| (r, y)))
        .collect();
    let forced: Vec<u64> = (0..k)
        .map(|x| {
            o.abox
                .role_assertions
                .iter()
                .filter(|a| index(&a.subject) == x)
                .map(|a| {
                    let r = roles.iter().position(|r| r == a.role.as_str()).unwrap();
                    let y = index(&a.object);
                    1u64 << edge_slots.iter().position(|s| *s == (r, y)).unwrap()
                })
                .fold(0, |m, b| m | b)
        })
        .collect();

    for valuation in subsets(atoms.len() * size) {
        let mut m = Interpretation {
            size,
            ..Default::default()
        };
        for (ai, a) in atoms.iter().enumerate() {
            let set = (0..size)
                .filter(|x| valuation >> (ai * size + x) & 1 == 1)
                .collect();
            m.atoms.insert(a.clone(), set);
        }
        if !gcis.iter().all(|g| m.holds(g, witness)) {
            continue;
        }
        let all_ok = (0..k).all(|x| {
            subsets(edge_slots.len())
                .filter(|e| e & forced[x] == forced[x])
                .any(|edges| {
                    let mut mx = m.clone();
                    for (bit, (r, y)) in edge_slots.iter().enumerate() {
                        if edges >> bit & 1 == 1 {
                            mx.roles
                                .entry(roles[*r].clone())
                                .or_default()
                                .insert((x, *y));
                        }
                    }
                    about[x].iter().all(|c| mx.holds(c, x))
                })
        });
        // Each individual's edges only affect that individual's assertions,
        // and all other elements' truths depend on atoms alone.
        if all_ok {
            return true;
        }
    }
    false
}

/// A signed propositional literal or binary disjunction of literals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Prop<'a> {
    Lit(&'a str, bool),
    Or((&'a str, bool), (&'a str, bool)),
}

/// Entailment for a single-individual propositional input, by listing every
/// combination of disjunct choices. Each input is `(formula, sign)`; the
/// query `q` enters as its negation with sign 0. A literal set conflicts on
/// an atom present both positively and negatively; the class is the sum of
/// the two signs. The forest closes iff every combination has a conflict and
/// some combination has one with sign sum below 2.
pub fn enumerate_entails(premises: &[Prop<'_>], q: (&str, bool)) -> bool {
    let mut inputs: Vec<(Prop<'_>, u8)> = premises.iter().map(|p| (*p, 1)).collect();
    inputs.push((Prop::Lit(q.0, !q.1), 0));
    let ors: Vec<usize> = (0..inputs.len())
        .filter(|&i| matches!(inputs[i].0, Prop::Or(..)))
        .collect();
    let mut all_conflict = true;
    let mut some_second = false;
    for choice in 0..(1u32 << ors.len()) {
        let mut lits: Vec<(&str, bool, u8)> = Vec::new();
        for (i, (p, s)) in inputs.iter().enumerate() {
            match p {
                Prop::Lit(a, pos) => lits.push((a, *pos, *s)),
                Prop::Or(l, r) => {
                    let k = ors.iter().position(|j| *j == i).unwrap();
                    let (a, pos) = if choice >> k & 1 == 0 { l } else { r };
                    lits.push((a, *pos, *s));
                }
            }
        }
        let mut sums = Vec::new();
        for (a, pa, sa) in &lits {
            for (b, pb, sb) in &lits {
                if a == b && *pa && !*pb {
                    sums.push(sa + sb);
                }
            }
        }
        all_conflict &= !sums.is_empty();
        some_second |= sums.iter().any(|s| *s < 2);
    }
    all_conflict && some_second
}

pub fn prop_concept(p: &Prop<'_>) -> Concept {
    let lit = |(a, pos): (&str, bool)| {
        if pos {
            Concept::atom(a)
        } else {
            Concept::not(Concept::atom(a))
        }
    };
    match *p {
        Prop::Lit(a, pos) => lit((a, pos)),
        Prop::Or(l, r) => Concept::or(lit(l), lit(r)),
    }
}

pub fn random_tbox<R: Rng>(rng: &mut R, v: &Vocab, max: usize, depth: usize) -> TBox {
    let n = rng.gen_range(0..=max);
    TBox {
        inclusions: (0..n)
            .map(|_| {
                let (l, r) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
                let sub = random_concept(rng, v, depth, l);
                Inclusion::new(sub, random_concept(rng, v, depth, r))
            })
            .collect(),
    }
}
