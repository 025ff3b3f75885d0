//! Finite fuzzy interpretations and the compositional semantics of concepts,
//! typicality and axioms.
//!
//! Concepts are evaluated as whole extensions (one degree per domain
//! element) because `T(C)` needs the degrees of `C` on the entire domain.
//! Suprema and infima are maxima and minima over the finite domain.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Degree, Logic};
use crate::syntax::{AxiomKind, AxiomPath, Concept, FuzzyAxiom, Signature, WeightedKb};

/// Index of a domain element.
pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("undeclared concept name `{0}`")]
    UndeclaredConcept(String),
    #[error("undeclared role name `{0}`")]
    UndeclaredRole(String),
    #[error("individual `{0}` is not mapped to a domain element")]
    UndeclaredIndividual(String),
    #[error("nested typicality in `{0}`")]
    NestedTypicality(Concept),
    #[error("element {0} is outside the domain")]
    NoSuchElement(Element),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterpretationError {
    #[error("the domain must be nonempty")]
    EmptyDomain,
    #[error("duplicate domain element `{0}`")]
    DuplicateElement(String),
    #[error("element {0} is outside the domain")]
    NoSuchElement(Element),
    #[error("valuation of `{name}` has {got} entries, expected {expected}")]
    WrongLength { name: String, got: usize, expected: usize },
}

/// A fuzzy interpretation over a finite domain.
///
/// Every declared concept and role name has a total valuation; names are
/// declared with a zero valuation and then updated entry by entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyInterpretation {
    logic: Logic,
    domain: Vec<String>,
    concepts: BTreeMap<String, Vec<Degree>>,
    // Row-major |Δ| × |Δ|.
    roles: BTreeMap<String, Vec<Degree>>,
    individuals: BTreeMap<String, Element>,
}

impl FuzzyInterpretation {
    pub fn new(logic: Logic, domain: Vec<String>) -> Result<Self, InterpretationError> {
        if domain.is_empty() {
            return Err(InterpretationError::EmptyDomain);
        }
        for (i, e) in domain.iter().enumerate() {
            if domain[..i].contains(e) {
                return Err(InterpretationError::DuplicateElement(e.clone()));
            }
        }
        Ok(FuzzyInterpretation {
            logic,
            domain,
            concepts: BTreeMap::new(),
            roles: BTreeMap::new(),
            individuals: BTreeMap::new(),
        })
    }

    /// Domain `d0, d1, …` of the given size.
    pub fn with_size(logic: Logic, size: usize) -> Result<Self, InterpretationError> {
        Self::new(logic, (0..size).map(|i| alloc::format!("d{i}")).collect())
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    pub fn set_logic(&mut self, logic: Logic) {
        self.logic = logic;
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn element(&self, name: &str) -> Option<Element> {
        self.domain.iter().position(|e| e == name)
    }

    /// Adds an all-zero valuation for every name of `sig` not yet present.
    pub fn declare(&mut self, sig: &Signature) {
        for c in &sig.concepts {
            self.declare_concept(c);
        }
        for r in &sig.roles {
            self.declare_role(r);
        }
    }

    pub fn declare_concept(&mut self, name: &str) {
        let n = self.size();
        self.concepts.entry(name.to_string()).or_insert_with(|| vec![Degree::zero(); n]);
    }

    pub fn declare_role(&mut self, name: &str) {
        let n = self.size();
        self.roles.entry(name.to_string()).or_insert_with(|| vec![Degree::zero(); n * n]);
    }

    fn check_element(&self, x: Element) -> Result<(), InterpretationError> {
        if x < self.size() {
            Ok(())
        } else {
            Err(InterpretationError::NoSuchElement(x))
        }
    }

    /// Sets `name^I(x)`, declaring `name` if needed.
    pub fn set_concept(&mut self, name: &str, x: Element, degree: Degree) -> Result<(), InterpretationError> {
        self.check_element(x)?;
        self.declare_concept(name);
        self.concepts.get_mut(name).expect("declared")[x] = degree;
        Ok(())
    }

    pub fn set_concept_values(&mut self, name: &str, values: Vec<Degree>) -> Result<(), InterpretationError> {
        if values.len() != self.size() {
            return Err(InterpretationError::WrongLength {
                name: name.to_string(),
                got: values.len(),
                expected: self.size(),
            });
        }
        self.concepts.insert(name.to_string(), values);
        Ok(())
    }

    /// Sets `name^I(x, y)`, declaring `name` if needed.
    pub fn set_role(&mut self, name: &str, x: Element, y: Element, degree: Degree) -> Result<(), InterpretationError> {
        self.check_element(x)?;
        self.check_element(y)?;
        let n = self.size();
        self.declare_role(name);
        self.roles.get_mut(name).expect("declared")[x * n + y] = degree;
        Ok(())
    }

    pub fn bind_individual(&mut self, name: &str, x: Element) -> Result<(), InterpretationError> {
        self.check_element(x)?;
        self.individuals.insert(name.to_string(), x);
        Ok(())
    }

    pub fn concept_values(&self, name: &str) -> Option<&[Degree]> {
        self.concepts.get(name).map(Vec::as_slice)
    }

    pub fn role_degree(&self, name: &str, x: Element, y: Element) -> Option<&Degree> {
        let n = self.size();
        if x >= n || y >= n {
            return None;
        }
        self.roles.get(name).map(|v| &v[x * n + y])
    }

    pub fn individual(&self, name: &str) -> Option<Element> {
        self.individuals.get(name).copied()
    }

    /// Concept valuations in name order.
    pub fn concept_valuations(&self) -> impl Iterator<Item = (&str, &[Degree])> {
        self.concepts.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Role valuations in name order, as row-major `|Δ|×|Δ|` slices.
    pub fn role_valuations(&self) -> impl Iterator<Item = (&str, &[Degree])> {
        self.roles.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn individual_bindings(&self) -> impl Iterator<Item = (&str, Element)> {
        self.individuals.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// `C^I` as one degree per domain element.
    pub fn extension(&self, c: &Concept) -> Result<Vec<Degree>, EvalError> {
        if c.has_nested_typicality() {
            return Err(EvalError::NestedTypicality(c.clone()));
        }
        self.ext(c)
    }

    fn role(&self, r: &str) -> Result<&[Degree], EvalError> {
        self.roles.get(r).map(Vec::as_slice).ok_or_else(|| EvalError::UndeclaredRole(r.to_string()))
    }

    fn ext(&self, c: &Concept) -> Result<Vec<Degree>, EvalError> {
        let logic = self.logic;
        let n = self.size();
        Ok(match c {
            Concept::Atomic(name) => {
                self.concepts.get(name).cloned().ok_or_else(|| EvalError::UndeclaredConcept(name.clone()))?
            }
            Concept::Top => vec![Degree::one(); n],
            Concept::Bottom => vec![Degree::zero(); n],
            Concept::Not(inner) => self.ext(inner)?.iter().map(|a| logic.negation(a)).collect(),
            Concept::And(a, b) => {
                let (a, b) = (self.ext(a)?, self.ext(b)?);
                a.iter().zip(&b).map(|(x, y)| logic.tnorm(x, y)).collect()
            }
            Concept::Or(a, b) => {
                let (a, b) = (self.ext(a)?, self.ext(b)?);
                a.iter().zip(&b).map(|(x, y)| logic.snorm(x, y)).collect()
            }
            Concept::Exists(r, inner) => {
                let rel = self.role(r)?;
                let filler = self.ext(inner)?;
                (0..n)
                    .map(|x| (0..n).map(|y| logic.tnorm(&rel[x * n + y], &filler[y])).max().expect("nonempty domain"))
                    .collect()
            }
            Concept::Forall(r, inner) => {
                let rel = self.role(r)?;
                let filler = self.ext(inner)?;
                (0..n)
                    .map(|x| {
                        (0..n).map(|y| logic.implication(&rel[x * n + y], &filler[y])).min().expect("nonempty domain")
                    })
                    .collect()
            }
            Concept::Typical(inner) => {
                let values = self.ext(inner)?;
                let top = values.iter().max().expect("nonempty domain").clone();
                values
                    .iter()
                    .map(|v| if !top.is_zero() && *v == top { Degree::one() } else { Degree::zero() })
                    .collect()
            }
        })
    }

    /// `C^I(x)`.
    pub fn eval_concept(&self, c: &Concept, x: Element) -> Result<Degree, EvalError> {
        if x >= self.size() {
            return Err(EvalError::NoSuchElement(x));
        }
        Ok(self.extension(c)?.swap_remove(x))
    }

    /// The preference `<_C` induced by the degrees of `C`.
    pub fn induced_preference(&self, c: &Concept) -> Result<InducedPreference, EvalError> {
        let degrees = self.extension(c)?;
        Ok(InducedPreference::from_degrees(c.clone(), &degrees))
    }

    /// The `<_C`-minimal elements among those with `C^I(x) > 0`.
    pub fn typical_elements(&self, c: &Concept) -> Result<Vec<Element>, EvalError> {
        let degrees = self.extension(c)?;
        let pref = InducedPreference::from_degrees(c.clone(), &degrees);
        let positive: Vec<Element> = (0..self.size()).filter(|&x| !degrees[x].is_zero()).collect();
        Ok(pref.minimal_among(&positive))
    }

    fn individual_element(&self, name: &str) -> Result<Element, EvalError> {
        self.individual(name).ok_or_else(|| EvalError::UndeclaredIndividual(name.to_string()))
    }

    /// `(C ⊑ D)^I`, `C^I(a^I)` or `r^I(a^I, b^I)`.
    pub fn axiom_degree(&self, kind: &AxiomKind) -> Result<Degree, EvalError> {
        match kind {
            AxiomKind::Inclusion { lhs, rhs } => {
                let (l, r) = (self.extension(lhs)?, self.extension(rhs)?);
                Ok(l.iter().zip(&r).map(|(a, b)| self.logic.implication(a, b)).min().expect("nonempty domain"))
            }
            AxiomKind::ConceptAssertion { concept, individual } => {
                let x = self.individual_element(individual)?;
                Ok(self.extension(concept)?.swap_remove(x))
            }
            AxiomKind::RoleAssertion { role, subject, object } => {
                let (x, y) = (self.individual_element(subject)?, self.individual_element(object)?);
                Ok(self.role(role)?[x * self.size() + y].clone())
            }
        }
    }

    pub fn satisfies(&self, ax: &FuzzyAxiom) -> Result<bool, EvalError> {
        let degree = self.axiom_degree(&ax.kind)?;
        Ok(ax.comparator.holds(&degree, &ax.threshold))
    }

    /// Checks the strict TBox and ABox of `kb` (weighted TBoxes are ignored).
    pub fn is_model_strict(&self, kb: &WeightedKb) -> Result<StrictReport, EvalError> {
        let mut violations = Vec::new();
        let tagged = kb
            .tbox
            .iter()
            .enumerate()
            .map(|(i, a)| (AxiomPath::Tbox(i), a))
            .chain(kb.abox.iter().enumerate().map(|(i, a)| (AxiomPath::Abox(i), a)));
        for (path, ax) in tagged {
            let degree = self.axiom_degree(&ax.kind)?;
            if !ax.comparator.holds(&degree, &ax.threshold) {
                violations.push(StrictViolation { path, axiom: ax.clone(), degree });
            }
        }
        Ok(StrictReport { violations })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictViolation {
    pub path: AxiomPath,
    pub axiom: FuzzyAxiom,
    pub degree: Degree,
}

/// Outcome of checking the strict part of a knowledge base.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrictReport {
    pub violations: Vec<StrictViolation>,
}

impl StrictReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `x <_C y  iff  C^I(x) > C^I(y)`, materialized as a relation matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedPreference {
    pub concept: Concept,
    size: usize,
    less: Vec<bool>,
}

impl InducedPreference {
    pub fn from_degrees(concept: Concept, degrees: &[Degree]) -> Self {
        let n = degrees.len();
        let mut less = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                less[x * n + y] = degrees[x] > degrees[y];
            }
        }
        InducedPreference { concept, size: n, less }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `x <_C y`: `x` is strictly more typical than `y`.
    pub fn prefers(&self, x: Element, y: Element) -> bool {
        self.less[x * self.size + y]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Element, Element)> + '_ {
        let n = self.size;
        (0..n).flat_map(move |x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| self.prefers(x, y))
    }

    /// `{u ∈ set : no z ∈ set with z < u}`.
    pub fn minimal_among(&self, set: &[Element]) -> Vec<Element> {
        set.iter().copied().filter(|&u| !set.iter().any(|&z| self.prefers(z, u))).collect()
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.size).all(|x| !self.prefers(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.size;
        (0..n).all(|x| (0..n).all(|y| !self.prefers(x, y) || (0..n).all(|z| !self.prefers(y, z) || self.prefers(x, z))))
    }

    /// `x < y` implies `x < z` or `z < y`, for all `z`.
    pub fn is_modular(&self) -> bool {
        let n = self.size;
        (0..n).all(|x| (0..n).all(|y| !self.prefers(x, y) || (0..n).all(|z| self.prefers(x, z) || self.prefers(z, y))))
    }

    /// No infinite descending chain; on a finite domain, no cycle.
    pub fn is_well_founded(&self) -> bool {
        // Repeatedly strip elements with nothing below them.
        let n = self.size;
        let mut alive = vec![true; n];
        loop {
            let minimal: Vec<Element> =
                (0..n).filter(|&u| alive[u] && !(0..n).any(|z| alive[z] && self.prefers(z, u))).collect();
            if minimal.is_empty() {
                return alive.iter().all(|a| !a);
            }
            for u in minimal {
                alive[u] = false;
            }
        }
    }
}
