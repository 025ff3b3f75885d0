//! Concepts, fuzzy axioms and weighted knowledge bases.
//!
//! `Display` on these types renders the same concrete syntax the `.fkb`
//! reader accepts, so a printed concept or axiom can be pasted back into a
//! knowledge base file.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Degree, Logic};
use crate::rational::Rational;

/// An ALC concept, possibly containing the typicality constructor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Atomic(String),
    Top,
    Bottom,
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    Exists(String, Box<Concept>),
    Forall(String, Box<Concept>),
    Typical(Box<Concept>),
}

impl Concept {
    pub fn atom(name: impl Into<String>) -> Self {
        Concept::Atomic(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Self {
        Concept::Not(Box::new(c))
    }

    pub fn and(a: Concept, b: Concept) -> Self {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Self {
        Concept::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(role: impl Into<String>, c: Concept) -> Self {
        Concept::Exists(role.into(), Box::new(c))
    }

    pub fn forall(role: impl Into<String>, c: Concept) -> Self {
        Concept::Forall(role.into(), Box::new(c))
    }

    pub fn typical(c: Concept) -> Self {
        Concept::Typical(Box::new(c))
    }

    fn children(&self) -> impl Iterator<Item = &Concept> {
        let (a, b): (Option<&Concept>, Option<&Concept>) = match self {
            Concept::Atomic(_) | Concept::Top | Concept::Bottom => (None, None),
            Concept::Not(c) | Concept::Exists(_, c) | Concept::Forall(_, c) | Concept::Typical(c) => (Some(c), None),
            Concept::And(x, y) | Concept::Or(x, y) => (Some(x), Some(y)),
        };
        a.into_iter().chain(b)
    }

    pub fn has_typicality(&self) -> bool {
        matches!(self, Concept::Typical(_)) || self.children().any(Concept::has_typicality)
    }

    /// True when some `T(..)` occurs inside another `T(..)`.
    pub fn has_nested_typicality(&self) -> bool {
        match self {
            Concept::Typical(inner) => inner.has_typicality(),
            _ => self.children().any(Concept::has_nested_typicality),
        }
    }

    /// Constructor nesting depth; names, `Top` and `Bot` have depth 0.
    pub fn depth(&self) -> usize {
        self.children().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn collect_concept_names<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        if let Concept::Atomic(n) = self {
            out.insert(n);
        }
        for c in self.children() {
            c.collect_concept_names(out);
        }
    }

    pub fn collect_role_names<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        if let Concept::Exists(r, _) | Concept::Forall(r, _) = self {
            out.insert(r);
        }
        for c in self.children() {
            c.collect_role_names(out);
        }
    }

    /// Replaces atomic names according to `subst`; unmapped names stay.
    pub fn substitute(&self, subst: &dyn Fn(&str) -> Option<Concept>) -> Concept {
        match self {
            Concept::Atomic(n) => subst(n).unwrap_or_else(|| self.clone()),
            Concept::Top => Concept::Top,
            Concept::Bottom => Concept::Bottom,
            Concept::Not(c) => Concept::not(c.substitute(subst)),
            Concept::And(a, b) => Concept::and(a.substitute(subst), b.substitute(subst)),
            Concept::Or(a, b) => Concept::or(a.substitute(subst), b.substitute(subst)),
            Concept::Exists(r, c) => Concept::exists(r.clone(), c.substitute(subst)),
            Concept::Forall(r, c) => Concept::forall(r.clone(), c.substitute(subst)),
            Concept::Typical(c) => Concept::typical(c.substitute(subst)),
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Atomic(n) => f.write_str(n),
            Concept::Top => f.write_str("Top"),
            Concept::Bottom => f.write_str("Bot"),
            Concept::Not(c) => write!(f, "(not {c})"),
            Concept::And(a, b) => write!(f, "(and {a} {b})"),
            Concept::Or(a, b) => write!(f, "(or {a} {b})"),
            Concept::Exists(r, c) => write!(f, "(some {r} {c})"),
            Concept::Forall(r, c) => write!(f, "(all {r} {c})"),
            Concept::Typical(c) => write!(f, "T({c})"),
        }
    }
}

/// The comparator `θ` of a fuzzy axiom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparator {
    Ge,
    Le,
    Gt,
    Lt,
}

impl Comparator {
    pub fn holds<T: Ord>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Comparator::Ge => lhs >= rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Gt => lhs > rhs,
            Comparator::Lt => lhs < rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Ge => ">=",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Lt => "<",
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AxiomKind {
    Inclusion { lhs: Concept, rhs: Concept },
    ConceptAssertion { concept: Concept, individual: String },
    RoleAssertion { role: String, subject: String, object: String },
}

impl AxiomKind {
    pub fn is_inclusion(&self) -> bool {
        matches!(self, AxiomKind::Inclusion { .. })
    }

    fn concepts(&self) -> impl Iterator<Item = &Concept> {
        let (a, b): (Option<&Concept>, Option<&Concept>) = match self {
            AxiomKind::Inclusion { lhs, rhs } => (Some(lhs), Some(rhs)),
            AxiomKind::ConceptAssertion { concept, .. } => (Some(concept), None),
            AxiomKind::RoleAssertion { .. } => (None, None),
        };
        a.into_iter().chain(b)
    }
}

/// `C ⊑ D θ n`, `C(a) θ n` or `r(a, b) θ n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FuzzyAxiom {
    pub kind: AxiomKind,
    pub comparator: Comparator,
    pub threshold: Degree,
}

impl FuzzyAxiom {
    pub fn inclusion(lhs: Concept, rhs: Concept, comparator: Comparator, threshold: Degree) -> Self {
        FuzzyAxiom { kind: AxiomKind::Inclusion { lhs, rhs }, comparator, threshold }
    }

    pub fn concept_assertion(
        concept: Concept,
        individual: impl Into<String>,
        comparator: Comparator,
        threshold: Degree,
    ) -> Self {
        FuzzyAxiom {
            kind: AxiomKind::ConceptAssertion { concept, individual: individual.into() },
            comparator,
            threshold,
        }
    }

    pub fn role_assertion(
        role: impl Into<String>,
        subject: impl Into<String>,
        object: impl Into<String>,
        comparator: Comparator,
        threshold: Degree,
    ) -> Self {
        FuzzyAxiom {
            kind: AxiomKind::RoleAssertion { role: role.into(), subject: subject.into(), object: object.into() },
            comparator,
            threshold,
        }
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.kind.concepts()
    }

    /// The smallest signature covering every name the axiom mentions.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        sig.absorb_axiom(self);
        sig
    }
}

impl fmt::Display for FuzzyAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AxiomKind::Inclusion { lhs, rhs } => write!(f, "{lhs} <= {rhs}")?,
            AxiomKind::ConceptAssertion { concept, individual } => write!(f, "{concept}({individual})")?,
            AxiomKind::RoleAssertion { role, subject, object } => write!(f, "{role}({subject},{object})")?,
        }
        write!(f, " {} {}", self.comparator, self.threshold)
    }
}

/// `T(subject) ⊑ consequent` with a plausibility weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedInclusion {
    pub subject: String,
    pub consequent: Concept,
    pub weight: Rational,
}

impl WeightedInclusion {
    pub fn new(subject: impl Into<String>, consequent: Concept, weight: Rational) -> Self {
        WeightedInclusion { subject: subject.into(), consequent, weight }
    }
}

impl fmt::Display for WeightedInclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({}) <= {} @ {}", self.subject, self.consequent, self.weight)
    }
}

/// Declared concept, role and individual names, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub concepts: Vec<String>,
    pub roles: Vec<String>,
    pub individuals: Vec<String>,
}

fn push_unique(list: &mut Vec<String>, name: &str) {
    if !list.iter().any(|n| n == name) {
        list.push(name.to_string());
    }
}

impl Signature {
    pub fn new<S: AsRef<str>>(concepts: &[S], roles: &[S], individuals: &[S]) -> Self {
        let own = |xs: &[S]| xs.iter().map(|s| s.as_ref().to_string()).collect();
        Signature { concepts: own(concepts), roles: own(roles), individuals: own(individuals) }
    }

    pub fn has_concept(&self, name: &str) -> bool {
        self.concepts.iter().any(|n| n == name)
    }

    pub fn has_role(&self, name: &str) -> bool {
        self.roles.iter().any(|n| n == name)
    }

    pub fn has_individual(&self, name: &str) -> bool {
        self.individuals.iter().any(|n| n == name)
    }

    pub fn add_concept(&mut self, name: &str) {
        push_unique(&mut self.concepts, name);
    }

    pub fn add_role(&mut self, name: &str) {
        push_unique(&mut self.roles, name);
    }

    pub fn add_individual(&mut self, name: &str) {
        push_unique(&mut self.individuals, name);
    }

    pub fn absorb_concept(&mut self, c: &Concept) {
        let mut names = BTreeSet::new();
        c.collect_concept_names(&mut names);
        for n in names {
            self.add_concept(n);
        }
        let mut roles = BTreeSet::new();
        c.collect_role_names(&mut roles);
        for r in roles {
            self.add_role(r);
        }
    }

    pub fn absorb_axiom(&mut self, ax: &FuzzyAxiom) {
        for c in ax.concepts() {
            self.absorb_concept(c);
        }
        match &ax.kind {
            AxiomKind::Inclusion { .. } => {}
            AxiomKind::ConceptAssertion { individual, .. } => self.add_individual(individual),
            AxiomKind::RoleAssertion { role, subject, object } => {
                self.add_role(role);
                self.add_individual(subject);
                self.add_individual(object);
            }
        }
    }

    /// Names of `other` appended after ours.
    pub fn union(&self, other: &Signature) -> Signature {
        let mut out = self.clone();
        for c in &other.concepts {
            out.add_concept(c);
        }
        for r in &other.roles {
            out.add_role(r);
        }
        for i in &other.individuals {
            out.add_individual(i);
        }
        out
    }
}

/// A weighted knowledge base `⟨T_f, T_C1, …, T_Ck, A_f⟩`.
///
/// The weighted TBoxes are stored as one flat list in file order; the
/// TBox of a distinguished concept is the sub-list with that subject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedKb {
    pub logic: Logic,
    pub signature: Signature,
    pub distinguished: Vec<String>,
    pub tbox: Vec<FuzzyAxiom>,
    pub abox: Vec<FuzzyAxiom>,
    pub weighted: Vec<WeightedInclusion>,
}

impl WeightedKb {
    pub fn new(logic: Logic, signature: Signature) -> Self {
        WeightedKb {
            logic,
            signature,
            distinguished: Vec::new(),
            tbox: Vec::new(),
            abox: Vec::new(),
            weighted: Vec::new(),
        }
    }

    pub fn weighted_tbox<'a>(&'a self, concept: &'a str) -> impl Iterator<Item = &'a WeightedInclusion> + 'a {
        self.weighted.iter().filter(move |w| w.subject == concept)
    }

    pub fn is_distinguished(&self, concept: &str) -> bool {
        self.distinguished.iter().any(|d| d == concept)
    }

    /// Strict TBox and ABox axioms together.
    pub fn strict_axioms(&self) -> impl Iterator<Item = &FuzzyAxiom> {
        self.tbox.iter().chain(&self.abox)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_kb(self)
    }
}

/// Location of an offending item inside a knowledge base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomPath {
    Signature,
    Distinguished(usize),
    Tbox(usize),
    Abox(usize),
    Weighted(usize),
}

impl fmt::Display for AxiomPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomPath::Signature => f.write_str("signature"),
            AxiomPath::Distinguished(i) => write!(f, "distinguished[{i}]"),
            AxiomPath::Tbox(i) => write!(f, "tbox[{i}]"),
            AxiomPath::Abox(i) => write!(f, "abox[{i}]"),
            AxiomPath::Weighted(i) => write!(f, "wtbox[{i}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    NestedTypicality,
    TypicalityInWeightedConsequent,
    SubjectNotDistinguished(String),
    DistinguishedNotDeclared(String),
    DuplicateDistinguished(String),
    DuplicateName(String),
    UndeclaredConcept(String),
    UndeclaredRole(String),
    UndeclaredIndividual(String),
    AssertionInTbox,
    InclusionInAbox,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::NestedTypicality => f.write_str("nested typicality operator"),
            ViolationKind::TypicalityInWeightedConsequent => {
                f.write_str("typicality operator in the consequent of a weighted inclusion")
            }
            ViolationKind::SubjectNotDistinguished(n) => write!(f, "`{n}` is not a distinguished concept"),
            ViolationKind::DistinguishedNotDeclared(n) => {
                write!(f, "distinguished concept `{n}` is not a declared concept name")
            }
            ViolationKind::DuplicateDistinguished(n) => write!(f, "`{n}` is distinguished twice"),
            ViolationKind::DuplicateName(n) => write!(f, "`{n}` is declared twice"),
            ViolationKind::UndeclaredConcept(n) => write!(f, "undeclared concept name `{n}`"),
            ViolationKind::UndeclaredRole(n) => write!(f, "undeclared role name `{n}`"),
            ViolationKind::UndeclaredIndividual(n) => write!(f, "undeclared individual `{n}`"),
            ViolationKind::AssertionInTbox => f.write_str("assertion in the TBox"),
            ViolationKind::InclusionInAbox => f.write_str("inclusion in the ABox"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub path: AxiomPath,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.kind)
    }
}

/// Every invariant violation found in a knowledge base; empty iff valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Validator<'a> {
    sig: &'a Signature,
    out: Vec<Violation>,
}

impl Validator<'_> {
    fn push(&mut self, path: AxiomPath, kind: ViolationKind) {
        self.out.push(Violation { path, kind });
    }

    fn concept(&mut self, path: AxiomPath, c: &Concept) {
        if c.has_nested_typicality() {
            self.push(path, ViolationKind::NestedTypicality);
        }
        let mut names = BTreeSet::new();
        c.collect_concept_names(&mut names);
        for n in names {
            if !self.sig.has_concept(n) {
                self.push(path, ViolationKind::UndeclaredConcept(n.to_string()));
            }
        }
        let mut roles = BTreeSet::new();
        c.collect_role_names(&mut roles);
        for r in roles {
            if !self.sig.has_role(r) {
                self.push(path, ViolationKind::UndeclaredRole(r.to_string()));
            }
        }
    }

    fn individual(&mut self, path: AxiomPath, name: &str) {
        if !self.sig.has_individual(name) {
            self.push(path, ViolationKind::UndeclaredIndividual(name.to_string()));
        }
    }

    fn axiom(&mut self, path: AxiomPath, ax: &FuzzyAxiom) {
        for c in ax.concepts() {
            self.concept(path, c);
        }
        match &ax.kind {
            AxiomKind::Inclusion { .. } => {}
            AxiomKind::ConceptAssertion { individual, .. } => self.individual(path, individual),
            AxiomKind::RoleAssertion { role, subject, object } => {
                if !self.sig.has_role(role) {
                    self.push(path, ViolationKind::UndeclaredRole(role.clone()));
                }
                self.individual(path, subject);
                self.individual(path, object);
            }
        }
    }
}

/// Reports every structural violation of `kb` with its location.
pub fn validate_kb(kb: &WeightedKb) -> ValidationReport {
    let mut v = Validator { sig: &kb.signature, out: Vec::new() };

    for list in [&kb.signature.concepts, &kb.signature.roles, &kb.signature.individuals] {
        let mut seen = BTreeSet::new();
        for n in list {
            if !seen.insert(n.as_str()) {
                v.push(AxiomPath::Signature, ViolationKind::DuplicateName(n.clone()));
            }
        }
    }

    let mut seen = BTreeSet::new();
    for (i, d) in kb.distinguished.iter().enumerate() {
        if !kb.signature.has_concept(d) {
            v.push(AxiomPath::Distinguished(i), ViolationKind::DistinguishedNotDeclared(d.clone()));
        }
        if !seen.insert(d.as_str()) {
            v.push(AxiomPath::Distinguished(i), ViolationKind::DuplicateDistinguished(d.clone()));
        }
    }

    for (i, ax) in kb.tbox.iter().enumerate() {
        if !ax.kind.is_inclusion() {
            v.push(AxiomPath::Tbox(i), ViolationKind::AssertionInTbox);
        }
        v.axiom(AxiomPath::Tbox(i), ax);
    }
    for (i, ax) in kb.abox.iter().enumerate() {
        if ax.kind.is_inclusion() {
            v.push(AxiomPath::Abox(i), ViolationKind::InclusionInAbox);
        }
        v.axiom(AxiomPath::Abox(i), ax);
    }
    for (i, w) in kb.weighted.iter().enumerate() {
        let path = AxiomPath::Weighted(i);
        if !kb.is_distinguished(&w.subject) {
            v.push(path, ViolationKind::SubjectNotDistinguished(w.subject.clone()));
        }
        if w.consequent.has_typicality() {
            v.push(path, ViolationKind::TypicalityInWeightedConsequent);
        }
        v.concept(path, &w.consequent);
    }

    ValidationReport { violations: v.out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    fn a(n: &str) -> Concept {
        Concept::atom(n)
    }

    #[test]
    fn nesting_detection() {
        assert!(!Concept::typical(a("Bird")).has_nested_typicality());
        assert!(Concept::typical(Concept::typical(a("Bird"))).has_nested_typicality());
        assert!(Concept::typical(Concept::and(a("A"), Concept::typical(a("B")))).has_nested_typicality());
        assert!(!Concept::and(Concept::typical(a("A")), Concept::typical(a("B"))).has_nested_typicality());
    }

    #[test]
    fn depth_and_display() {
        let c = Concept::and(a("A"), Concept::exists("r", Concept::Top));
        assert_eq!(c.depth(), 2);
        assert_eq!(format!("{c}"), "(and A (some r Top))");
        assert_eq!(format!("{}", Concept::typical(Concept::not(a("A")))), "T((not A))");
    }

    fn small_kb() -> WeightedKb {
        let mut kb = WeightedKb::new(Logic::Godel, Signature::new(&["Bird", "Fly"], &["r"], &["tweety"]));
        kb.distinguished = vec!["Bird".into()];
        kb.weighted.push(WeightedInclusion::new("Bird", a("Fly"), Rational::from_integer(20)));
        kb
    }

    #[test]
    fn valid_kb_has_empty_report() {
        assert!(small_kb().validate().is_valid());
    }

    #[test]
    fn typicality_in_weighted_consequent() {
        let mut kb = small_kb();
        kb.weighted[0].consequent = Concept::typical(a("Fly"));
        let report = kb.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::TypicalityInWeightedConsequent);
    }

    #[test]
    fn subject_not_distinguished() {
        let mut kb = small_kb();
        kb.weighted.push(WeightedInclusion::new("Fly", a("Bird"), Rational::one()));
        let report = kb.validate();
        assert_eq!(
            report.violations,
            vec![Violation {
                path: AxiomPath::Weighted(1),
                kind: ViolationKind::SubjectNotDistinguished("Fly".into())
            }]
        );
    }

    #[test]
    fn undeclared_names_and_misplaced_axioms() {
        let mut kb = small_kb();
        kb.tbox.push(FuzzyAxiom::concept_assertion(a("Bird"), "opus", Comparator::Ge, Degree::one()));
        kb.abox.push(FuzzyAxiom::inclusion(a("Penguin"), a("Bird"), Comparator::Ge, Degree::one()));
        let kinds: Vec<_> = kb.validate().violations.into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::AssertionInTbox));
        assert!(kinds.contains(&ViolationKind::UndeclaredIndividual("opus".into())));
        assert!(kinds.contains(&ViolationKind::InclusionInAbox));
        assert!(kinds.contains(&ViolationKind::UndeclaredConcept("Penguin".into())));
    }

    #[test]
    fn substitution() {
        let schema = Concept::and(a("X"), a("Y"));
        let c = schema.substitute(&|n| match n {
            "X" => Some(Concept::Top),
            _ => None,
        });
        assert_eq!(c, Concept::and(Concept::Top, a("Y")));
    }
}
