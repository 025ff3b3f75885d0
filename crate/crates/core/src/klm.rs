//! KLM postulates for fuzzy typicality inclusions.
//!
//! A conditional `A |~ C` is read as `T(A) ⊑ C ≥ 1` in the strong family
//! (`*1` postulates) and as `T(A) ⊑ C > 0` in the weak family (`*0`).
//! `CMSTAR` mixes them: a strong `D` premise, weak `C` premise and weak
//! conclusion.
//!
//! The postulates quantify over single interpretations, so the checkers work
//! interpretation by interpretation. The validity side-conditions of LLE and
//! RW (`⊨ A ≡ B`, `⊨ C ⊑ D`) are certified by a [`ValidityOracle`].

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Degree, Logic};
use crate::engine::{self, EngineError, SearchConfig};
use crate::interpretation::{EvalError, FuzzyInterpretation};
use crate::syntax::{Comparator, Concept, FuzzyAxiom, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Postulate {
    Refl1,
    Lle1,
    Rw1,
    And1,
    Or1,
    Cm1,
    Refl0,
    Lle0,
    Rw0,
    And0,
    Or0,
    Cm0,
    CmStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metavar {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Metavar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metavar::A => "A",
            Metavar::B => "B",
            Metavar::C => "C",
            Metavar::D => "D",
        })
    }
}

/// The validity side-condition of a postulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidityPremise {
    None,
    /// `⊨ A ≡ B`
    Equivalence(Metavar, Metavar),
    /// `⊨ C ⊑ D`
    Inclusion(Metavar, Metavar),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Strength {
    /// `≥ 1`
    Full,
    /// `> 0`
    Positive,
}

impl Strength {
    fn bound(self) -> (Comparator, Degree) {
        match self {
            Strength::Full => (Comparator::Ge, Degree::one()),
            Strength::Positive => (Comparator::Gt, Degree::zero()),
        }
    }
}

impl Postulate {
    pub const ALL: [Postulate; 13] = [
        Postulate::Refl1,
        Postulate::Lle1,
        Postulate::Rw1,
        Postulate::And1,
        Postulate::Or1,
        Postulate::Cm1,
        Postulate::Refl0,
        Postulate::Lle0,
        Postulate::Rw0,
        Postulate::And0,
        Postulate::Or0,
        Postulate::Cm0,
        Postulate::CmStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Postulate::Refl1 => "REFL1",
            Postulate::Lle1 => "LLE1",
            Postulate::Rw1 => "RW1",
            Postulate::And1 => "AND1",
            Postulate::Or1 => "OR1",
            Postulate::Cm1 => "CM1",
            Postulate::Refl0 => "REFL0",
            Postulate::Lle0 => "LLE0",
            Postulate::Rw0 => "RW0",
            Postulate::And0 => "AND0",
            Postulate::Or0 => "OR0",
            Postulate::Cm0 => "CM0",
            Postulate::CmStar => "CMSTAR",
        }
    }

    pub fn metavariables(self) -> &'static [Metavar] {
        use Metavar::*;
        match self {
            Postulate::Refl1 | Postulate::Refl0 => &[C],
            Postulate::Lle1 | Postulate::Lle0 | Postulate::Or1 | Postulate::Or0 => &[A, B, C],
            Postulate::Rw1
            | Postulate::Rw0
            | Postulate::And1
            | Postulate::And0
            | Postulate::Cm1
            | Postulate::Cm0
            | Postulate::CmStar => &[A, C, D],
        }
    }

    pub fn validity_premise(self) -> ValidityPremise {
        match self {
            Postulate::Lle1 | Postulate::Lle0 => ValidityPremise::Equivalence(Metavar::A, Metavar::B),
            Postulate::Rw1 | Postulate::Rw0 => ValidityPremise::Inclusion(Metavar::C, Metavar::D),
            _ => ValidityPremise::None,
        }
    }

    fn strength(self) -> Strength {
        match self {
            Postulate::Refl1 | Postulate::Lle1 | Postulate::Rw1 | Postulate::And1 | Postulate::Or1 | Postulate::Cm1 => {
                Strength::Full
            }
            _ => Strength::Positive,
        }
    }

    /// Premise and conclusion axioms for a complete instantiation.
    pub fn axioms(self, inst: &Instantiation) -> Result<(Vec<FuzzyAxiom>, FuzzyAxiom), KlmError> {
        inst.check_arity(self)?;
        let get = |m: Metavar| inst.get(m).cloned().expect("arity checked");
        let t = Concept::typical;
        let incl = |lhs: Concept, rhs: Concept, s: Strength| {
            let (cmp, n) = s.bound();
            FuzzyAxiom::inclusion(lhs, rhs, cmp, n)
        };
        let s = self.strength();
        use Metavar::*;
        Ok(match self {
            Postulate::Refl1 | Postulate::Refl0 => (vec![], incl(t(get(C)), get(C), s)),
            Postulate::Lle1 | Postulate::Lle0 => (vec![incl(t(get(A)), get(C), s)], incl(t(get(B)), get(C), s)),
            Postulate::Rw1 | Postulate::Rw0 => (vec![incl(t(get(A)), get(C), s)], incl(t(get(A)), get(D), s)),
            Postulate::And1 | Postulate::And0 => (
                vec![incl(t(get(A)), get(C), s), incl(t(get(A)), get(D), s)],
                incl(t(get(A)), Concept::and(get(C), get(D)), s),
            ),
            Postulate::Or1 | Postulate::Or0 => (
                vec![incl(t(get(A)), get(C), s), incl(t(get(B)), get(C), s)],
                incl(t(Concept::or(get(A), get(B))), get(C), s),
            ),
            Postulate::Cm1 | Postulate::Cm0 => (
                vec![incl(t(get(A)), get(D), s), incl(t(get(A)), get(C), s)],
                incl(t(Concept::and(get(A), get(D))), get(C), s),
            ),
            Postulate::CmStar => (
                vec![incl(t(get(A)), get(D), Strength::Full), incl(t(get(A)), get(C), Strength::Positive)],
                incl(t(Concept::and(get(A), get(D))), get(C), Strength::Positive),
            ),
        })
    }
}

impl fmt::Display for Postulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Postulate {
    type Err = KlmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.to_ascii_uppercase();
        Postulate::ALL
            .into_iter()
            .find(|p| p.name() == upper || (upper == "CM*" && *p == Postulate::CmStar))
            .ok_or_else(|| KlmError::UnknownPostulate(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KlmError {
    #[error("unknown postulate `{0}`")]
    UnknownPostulate(String),
    #[error("{postulate} needs metavariable {var}")]
    MissingMetavar { postulate: Postulate, var: Metavar },
    #[error("{postulate} does not use metavariable {var}")]
    ExtraMetavar { postulate: Postulate, var: Metavar },
    #[error("instantiation of {0} contains the typicality operator")]
    TypicalityInInstantiation(Metavar),
    #[error("validity premise of {0} is not certified")]
    Uncertified(Postulate),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Concepts substituted for the metavariables of a postulate.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Instantiation {
    vars: BTreeMap<Metavar, Concept>,
}

impl Instantiation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: Metavar, concept: Concept) -> Self {
        self.vars.insert(var, concept);
        self
    }

    pub fn get(&self, var: Metavar) -> Option<&Concept> {
        self.vars.get(&var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Metavar, &Concept)> {
        self.vars.iter().map(|(k, v)| (*k, v))
    }

    fn check_arity(&self, p: Postulate) -> Result<(), KlmError> {
        let wanted = p.metavariables();
        for &var in wanted {
            match self.vars.get(&var) {
                None => return Err(KlmError::MissingMetavar { postulate: p, var }),
                Some(c) if c.has_typicality() => return Err(KlmError::TypicalityInInstantiation(var)),
                Some(_) => {}
            }
        }
        if let Some(&var) = self.vars.keys().find(|v| !wanted.contains(v)) {
            return Err(KlmError::ExtraMetavar { postulate: p, var });
        }
        Ok(())
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for c in self.vars.values() {
            sig.absorb_concept(c);
        }
        sig
    }
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

/// Certifies the validity side-conditions of LLE and RW.
pub trait ValidityOracle {
    /// `⊨ sub ⊑ sup ≥ 1`.
    fn certifies_inclusion(&self, sub: &Concept, sup: &Concept) -> bool;

    /// `⊨ a ⊑ b ≥ 1` and `⊨ b ⊑ a ≥ 1`.
    fn certifies_equivalence(&self, a: &Concept, b: &Concept) -> bool {
        self.certifies_inclusion(a, b) && self.certifies_inclusion(b, a)
    }
}

/// Accepts nothing; for postulates without validity premises.
pub struct NoOracle;

impl ValidityOracle for NoOracle {
    fn certifies_inclusion(&self, _: &Concept, _: &Concept) -> bool {
        false
    }
}

/// Certifies by bounded countermodel search: no falsifying interpretation
/// within the configured bounds.
pub struct BoundedValidity {
    pub config: SearchConfig,
}

impl ValidityOracle for BoundedValidity {
    fn certifies_inclusion(&self, sub: &Concept, sup: &Concept) -> bool {
        let ax = FuzzyAxiom::inclusion(sub.clone(), sup.clone(), Comparator::Ge, Degree::one());
        matches!(
            engine::check_validity_bounded(&ax, &self.config),
            Ok(v) if !v.is_refuted() && !v.stats().truncated
        )
    }
}

/// Placeholder names in catalog schemas.
pub const PLACEHOLDERS: [&str; 3] = ["X", "Y", "Z"];

/// A valid schema `lhs ⊑ rhs` (or `lhs ≡ rhs`) over [`PLACEHOLDERS`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub lhs: Concept,
    pub rhs: Concept,
    pub note: &'static str,
}

impl CatalogEntry {
    fn new(lhs: Concept, rhs: Concept, note: &'static str) -> Self {
        CatalogEntry { lhs, rhs, note }
    }

    pub fn placeholders(&self) -> usize {
        let mut names = alloc::collections::BTreeSet::new();
        self.lhs.collect_concept_names(&mut names);
        self.rhs.collect_concept_names(&mut names);
        names.len()
    }

    /// Substitutes `fill[i]` for the i-th placeholder.
    pub fn instantiate(&self, fill: &[Concept]) -> (Concept, Concept) {
        let subst = |n: &str| PLACEHOLDERS.iter().position(|p| *p == n).and_then(|i| fill.get(i).cloned());
        (self.lhs.substitute(&subst), self.rhs.substitute(&subst))
    }

    /// Bounds used to certify this entry: `q = 6`, domain up to 3 elements
    /// (2 when the schema has three placeholders).
    pub fn certification_config(&self, logic: Logic) -> SearchConfig {
        let max_domain = if self.placeholders() >= 3 { 2 } else { 3 };
        SearchConfig::new(logic, max_domain, 6).with_budget(u64::MAX)
    }
}

/// Per-logic schemas whose validity is known, used to certify LLE/RW
/// premises by syntactic matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub logic: Logic,
    pub equivalences: Vec<CatalogEntry>,
    pub inclusions: Vec<CatalogEntry>,
}

fn matches<'a>(pattern: &Concept, c: &'a Concept, bind: &mut BTreeMap<String, &'a Concept>) -> bool {
    match (pattern, c) {
        (Concept::Atomic(p), _) if PLACEHOLDERS.contains(&p.as_str()) => match bind.get(p) {
            Some(prev) => *prev == c,
            None => {
                bind.insert(p.clone(), c);
                true
            }
        },
        (Concept::Atomic(p), Concept::Atomic(n)) => p == n,
        (Concept::Top, Concept::Top) | (Concept::Bottom, Concept::Bottom) => true,
        (Concept::Not(p), Concept::Not(x)) | (Concept::Typical(p), Concept::Typical(x)) => matches(p, x, bind),
        (Concept::And(p1, p2), Concept::And(x1, x2)) | (Concept::Or(p1, p2), Concept::Or(x1, x2)) => {
            matches(p1, x1, bind) && matches(p2, x2, bind)
        }
        (Concept::Exists(r, p), Concept::Exists(s, x)) | (Concept::Forall(r, p), Concept::Forall(s, x)) => {
            r == s && matches(p, x, bind)
        }
        _ => false,
    }
}

fn instance_of(entry: &CatalogEntry, lhs: &Concept, rhs: &Concept) -> bool {
    let mut bind = BTreeMap::new();
    matches(&entry.lhs, lhs, &mut bind) && matches(&entry.rhs, rhs, &mut bind)
}

impl Catalog {
    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.equivalences.iter().chain(&self.inclusions)
    }

    /// Runs the bounded validity check on every entry (both directions for
    /// equivalences). Returns the entries that failed.
    pub fn certify(&self) -> Result<Vec<CatalogEntry>, EngineError> {
        let mut failed = Vec::new();
        let valid = |lhs: &Concept, rhs: &Concept, cfg: &SearchConfig| -> Result<bool, EngineError> {
            let ax = FuzzyAxiom::inclusion(lhs.clone(), rhs.clone(), Comparator::Ge, Degree::one());
            Ok(!engine::check_validity_bounded(&ax, cfg)?.is_refuted())
        };
        for e in &self.equivalences {
            let cfg = e.certification_config(self.logic);
            if !(valid(&e.lhs, &e.rhs, &cfg)? && valid(&e.rhs, &e.lhs, &cfg)?) {
                failed.push(e.clone());
            }
        }
        for e in &self.inclusions {
            if !valid(&e.lhs, &e.rhs, &e.certification_config(self.logic))? {
                failed.push(e.clone());
            }
        }
        Ok(failed)
    }
}

impl ValidityOracle for Catalog {
    fn certifies_inclusion(&self, sub: &Concept, sup: &Concept) -> bool {
        self.inclusions.iter().any(|e| instance_of(e, sub, sup))
            || self.equivalences.iter().any(|e| instance_of(e, sub, sup) || instance_of(e, sup, sub))
    }

    fn certifies_equivalence(&self, a: &Concept, b: &Concept) -> bool {
        self.equivalences.iter().any(|e| instance_of(e, a, b) || instance_of(e, b, a))
    }
}

/// The certified premise catalog of `logic`.
///
/// Gödel equivalences are pointwise identities of min/max. Łukasiewicz and
/// product share the commutativity, associativity and unit laws but not
/// idempotence. In Zadeh logic `A ⊑ B ≥ 1` is valid only when every
/// interpretation forces `A` to 0 or `B` to 1, so only degree-forcing
/// schemas qualify.
pub fn valid_premise_catalog(logic: Logic) -> Catalog {
    let x = || Concept::atom("X");
    let y = || Concept::atom("Y");
    let z = || Concept::atom("Z");
    let and = Concept::and;
    let or = Concept::or;
    let e = CatalogEntry::new;

    let mut equivalences = vec![
        e(or(x(), Concept::Top), Concept::Top, "top absorbs disjunction"),
        e(and(x(), Concept::Bottom), Concept::Bottom, "bottom absorbs conjunction"),
    ];
    let mut inclusions =
        vec![e(x(), Concept::Top, "implication into 1 is 1"), e(Concept::Bottom, x(), "implication from 0 is 1")];
    if logic == Logic::Zadeh {
        inclusions.push(e(and(x(), Concept::Bottom), y(), "lhs forced to 0"));
        inclusions.push(e(x(), or(y(), Concept::Top), "rhs forced to 1"));
        return Catalog { logic, equivalences, inclusions };
    }

    // Residuated families: A ⊑ B ≥ 1 is valid iff A ≤ B pointwise.
    equivalences.extend([
        e(x(), x(), "reflexivity of the residuum"),
        e(and(x(), y()), and(y(), x()), "t-norm commutativity"),
        e(or(x(), y()), or(y(), x()), "s-norm commutativity"),
        e(and(and(x(), y()), z()), and(x(), and(y(), z())), "t-norm associativity"),
        e(or(or(x(), y()), z()), or(x(), or(y(), z())), "s-norm associativity"),
        e(and(x(), Concept::Top), x(), "t-norm unit"),
        e(or(x(), Concept::Bottom), x(), "s-norm unit"),
    ]);
    inclusions.extend([
        e(and(x(), y()), x(), "t-norm below its arguments"),
        e(x(), or(x(), y()), "s-norm above its arguments"),
        e(and(x(), y()), or(x(), y()), "t-norm below s-norm"),
    ]);
    if logic == Logic::Godel {
        equivalences.extend([
            e(and(x(), x()), x(), "min idempotence"),
            e(or(x(), x()), x(), "max idempotence"),
            e(and(x(), or(y(), z())), or(and(x(), y()), and(x(), z())), "min distributes over max"),
            e(or(x(), and(x(), y())), x(), "absorption"),
        ]);
    }
    Catalog { logic, equivalences, inclusions }
}

/// Degrees observed when a postulate instance fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub postulate: Postulate,
    pub interpretation: FuzzyInterpretation,
    pub instantiation: Instantiation,
    pub premises: Vec<(FuzzyAxiom, Degree)>,
    pub conclusion: (FuzzyAxiom, Degree),
}

impl Witness {
    /// Re-evaluates premises and conclusion: premises hold, conclusion fails.
    pub fn recheck(&self) -> Result<bool, EvalError> {
        let i = &self.interpretation;
        for (ax, _) in &self.premises {
            if !i.satisfies(ax)? {
                return Ok(false);
            }
        }
        Ok(!i.satisfies(&self.conclusion.0)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PostulateVerdict {
    /// The instance holds; `premises_met` is false when it holds vacuously.
    Holds {
        premises_met: bool,
    },
    Violated(Box<Witness>),
}

impl PostulateVerdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, PostulateVerdict::Violated(_))
    }
}

/// A postulate instance with its axioms built and its validity premise
/// certified, ready to be checked against many interpretations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreparedInstance {
    pub postulate: Postulate,
    pub instantiation: Instantiation,
    pub premises: Vec<FuzzyAxiom>,
    pub conclusion: FuzzyAxiom,
}

impl PreparedInstance {
    pub fn new(postulate: Postulate, inst: &Instantiation, oracle: &dyn ValidityOracle) -> Result<Self, KlmError> {
        let (premises, conclusion) = postulate.axioms(inst)?;
        let get = |m: Metavar| inst.get(m).expect("arity checked");
        let certified = match postulate.validity_premise() {
            ValidityPremise::None => true,
            ValidityPremise::Equivalence(a, b) => oracle.certifies_equivalence(get(a), get(b)),
            ValidityPremise::Inclusion(c, d) => oracle.certifies_inclusion(get(c), get(d)),
        };
        if !certified {
            return Err(KlmError::Uncertified(postulate));
        }
        Ok(PreparedInstance { postulate, instantiation: inst.clone(), premises, conclusion })
    }

    pub fn check(&self, interp: &FuzzyInterpretation) -> Result<PostulateVerdict, EvalError> {
        let mut degrees = Vec::with_capacity(self.premises.len());
        for ax in &self.premises {
            let d = interp.axiom_degree(&ax.kind)?;
            if !ax.comparator.holds(&d, &ax.threshold) {
                return Ok(PostulateVerdict::Holds { premises_met: false });
            }
            degrees.push(d);
        }
        let d = interp.axiom_degree(&self.conclusion.kind)?;
        if self.conclusion.comparator.holds(&d, &self.conclusion.threshold) {
            return Ok(PostulateVerdict::Holds { premises_met: true });
        }
        Ok(PostulateVerdict::Violated(Box::new(Witness {
            postulate: self.postulate,
            interpretation: interp.clone(),
            instantiation: self.instantiation.clone(),
            premises: self.premises.iter().cloned().zip(degrees).collect(),
            conclusion: (self.conclusion.clone(), d),
        })))
    }
}

/// Checks one instance of `postulate` in `interp`.
pub fn check_instance(
    interp: &FuzzyInterpretation,
    postulate: Postulate,
    inst: &Instantiation,
    oracle: &dyn ValidityOracle,
) -> Result<PostulateVerdict, KlmError> {
    Ok(PreparedInstance::new(postulate, inst, oracle)?.check(interp)?)
}

/// Vocabulary and depth bound for generated concept instantiations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptShape {
    pub atoms: Vec<String>,
    pub roles: Vec<String>,
    pub max_depth: usize,
}

impl Default for ConceptShape {
    /// Depth ≤ 2 over atoms `P`, `Q`, `R` and role `r`.
    fn default() -> Self {
        ConceptShape { atoms: vec!["P".into(), "Q".into(), "R".into()], roles: vec!["r".into()], max_depth: 2 }
    }
}

impl ConceptShape {
    pub fn signature(&self) -> Signature {
        Signature::new(&self.atoms, &self.roles, &[])
    }
}

/// A random typicality-free concept of depth at most `depth`.
pub fn random_concept(rng: &mut impl Rng, shape: &ConceptShape, depth: usize) -> Concept {
    let leaf = depth == 0 || rng.random_bool(0.4);
    if leaf {
        let k = rng.random_range(0..shape.atoms.len() + 2);
        return match k.checked_sub(shape.atoms.len()) {
            None => Concept::atom(shape.atoms[k].clone()),
            Some(0) => Concept::Top,
            Some(_) => Concept::Bottom,
        };
    }
    let sub = |rng: &mut _| random_concept(rng, shape, depth - 1);
    let with_roles = !shape.roles.is_empty();
    match rng.random_range(0..if with_roles { 5 } else { 3 }) {
        0 => Concept::not(sub(rng)),
        1 => Concept::and(sub(rng), sub(rng)),
        2 => Concept::or(sub(rng), sub(rng)),
        k => {
            let role = shape.roles[rng.random_range(0..shape.roles.len())].clone();
            if k == 3 {
                Concept::exists(role, sub(rng))
            } else {
                Concept::forall(role, sub(rng))
            }
        }
    }
}

/// A random degree on the grid with denominator `q`; the endpoints 0 and 1
/// each get probability 1/4 so that typicality premises are met often.
pub fn random_degree(rng: &mut impl Rng, q: u32) -> Degree {
    let q = i64::from(q);
    match rng.random_range(0..4) {
        0 => Degree::zero(),
        1 => Degree::one(),
        _ => Degree::ratio(rng.random_range(0..=q), q),
    }
}

/// A random interpretation of `sig` with `1..=max_domain` elements and
/// degrees on a grid with denominator in `1..=max_q`.
pub fn random_interpretation(
    rng: &mut impl Rng,
    sig: &Signature,
    logic: Logic,
    max_domain: usize,
    max_q: u32,
) -> FuzzyInterpretation {
    let n = rng.random_range(1..=max_domain);
    let q = rng.random_range(1..=max_q);
    let mut interp = FuzzyInterpretation::with_size(logic, n).expect("positive size");
    for c in &sig.concepts {
        let values = (0..n).map(|_| random_degree(rng, q)).collect();
        interp.set_concept_values(c, values).expect("length n");
    }
    for r in &sig.roles {
        interp.declare_role(r);
        for x in 0..n {
            for y in 0..n {
                interp.set_role(r, x, y, random_degree(rng, q)).expect("within domain");
            }
        }
    }
    for (k, ind) in sig.individuals.iter().enumerate() {
        interp.bind_individual(ind, (k + rng.random_range(0..n)) % n).expect("within domain");
    }
    interp
}

/// A random instantiation of `postulate`; LLE and RW draw their validity
/// premise from `catalog` so that it is certified.
pub fn random_instantiation(
    rng: &mut impl Rng,
    postulate: Postulate,
    shape: &ConceptShape,
    catalog: &Catalog,
) -> Instantiation {
    let mut inst = Instantiation::new();
    let pick_entry = |rng: &mut _, entries: &[CatalogEntry]| -> Option<(Concept, Concept)> {
        if entries.is_empty() {
            return None;
        }
        let e = &entries[Rng::random_range(rng, 0..entries.len())];
        let depth = shape.max_depth.saturating_sub(e.lhs.depth().max(e.rhs.depth()));
        let fill: Vec<Concept> = (0..PLACEHOLDERS.len()).map(|_| random_concept(rng, shape, depth)).collect();
        Some(e.instantiate(&fill))
    };
    match postulate.validity_premise() {
        ValidityPremise::Equivalence(a, b) => {
            if let Some((l, r)) = pick_entry(rng, &catalog.equivalences) {
                let (l, r) = if rng.random_bool(0.5) { (l, r) } else { (r, l) };
                inst = inst.with(a, l).with(b, r);
            }
        }
        ValidityPremise::Inclusion(c, d) => {
            if let Some((l, r)) = pick_entry(rng, &catalog.inclusions) {
                inst = inst.with(c, l).with(d, r);
            }
        }
        ValidityPremise::None => {}
    }
    for &var in postulate.metavariables() {
        if inst.get(var).is_none() {
            let depth = rng.random_range(0..=shape.max_depth);
            inst = inst.with(var, random_concept(rng, shape, depth));
        }
    }
    inst
}

/// Parameters of a randomized property run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialConfig {
    pub trials: u64,
    pub max_domain: usize,
    pub max_denominator: u32,
    pub shape: ConceptShape,
    pub seed: u64,
}

impl TrialConfig {
    /// 10,000 trials, `|Δ| ≤ 5`, `q ≤ 6`, depth ≤ 2.
    pub fn standard(seed: u64) -> Self {
        TrialConfig { trials: 10_000, max_domain: 5, max_denominator: 6, shape: ConceptShape::default(), seed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialReport {
    pub postulate: Postulate,
    pub logic: Logic,
    pub trials: u64,
    /// Trials whose premises all held.
    pub non_vacuous: u64,
    /// Trials skipped because the validity premise was not certified.
    pub uncertified: u64,
    pub violation_count: u64,
    /// The first violations found (at most 8).
    pub witnesses: Vec<Witness>,
}

/// Runs `config.trials` random interpretation/instantiation trials.
pub fn run_trials(postulate: Postulate, logic: Logic, config: &TrialConfig) -> Result<TrialReport, KlmError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let catalog = valid_premise_catalog(logic);
    let sig = config.shape.signature();
    let mut report = TrialReport {
        postulate,
        logic,
        trials: 0,
        non_vacuous: 0,
        uncertified: 0,
        violation_count: 0,
        witnesses: Vec::new(),
    };
    for _ in 0..config.trials {
        let interp = random_interpretation(&mut rng, &sig, logic, config.max_domain, config.max_denominator);
        let inst = random_instantiation(&mut rng, postulate, &config.shape, &catalog);
        report.trials += 1;
        match check_instance(&interp, postulate, &inst, &catalog) {
            Err(KlmError::Uncertified(_)) => report.uncertified += 1,
            Err(e) => return Err(e),
            Ok(PostulateVerdict::Holds { premises_met }) => report.non_vacuous += u64::from(premises_met),
            Ok(PostulateVerdict::Violated(w)) => {
                report.non_vacuous += 1;
                report.violation_count += 1;
                if report.witnesses.len() < 8 {
                    report.witnesses.push(*w);
                }
            }
        }
    }
    Ok(report)
}

/// Outcome of a counterexample search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub verdict: PostulateVerdict,
    /// Interpretation/instantiation pairs examined.
    pub examined: u64,
    pub uncertified: u64,
    /// Every atomic instantiation was checked against the whole bounded
    /// space.
    pub atomic_complete: bool,
    /// The budget ran out before a violation was found.
    pub budget_exhausted: bool,
}

/// Instantiations of `postulate` by plain atoms: distinct atoms for the
/// metavariables, and for LLE/RW every catalog schema with atoms for its
/// placeholders.
fn atomic_instantiations(postulate: Postulate, shape: &ConceptShape, catalog: &Catalog) -> Vec<Instantiation> {
    let mut atoms: Vec<Concept> = shape.atoms.iter().map(|a| Concept::atom(a.clone())).collect();
    for k in atoms.len()..4 {
        atoms.push(Concept::atom(format!("P{k}")));
    }
    let fill = |inst: Instantiation, used: usize| {
        let mut inst = inst;
        let mut next = used;
        for &var in postulate.metavariables() {
            if inst.get(var).is_none() {
                inst = inst.with(var, atoms[next % atoms.len()].clone());
                next += 1;
            }
        }
        inst
    };
    let schemas = |entries: &[CatalogEntry], a: Metavar, b: Metavar, both_ways: bool| {
        let mut out = Vec::new();
        for e in entries {
            let (l, r) = e.instantiate(&atoms[..PLACEHOLDERS.len()]);
            let used = e.placeholders();
            out.push(fill(Instantiation::new().with(a, l.clone()).with(b, r.clone()), used));
            if both_ways && l != r {
                out.push(fill(Instantiation::new().with(a, r).with(b, l), used));
            }
        }
        out
    };
    match postulate.validity_premise() {
        ValidityPremise::None => vec![fill(Instantiation::new(), 0)],
        ValidityPremise::Equivalence(a, b) => schemas(&catalog.equivalences, a, b, true),
        ValidityPremise::Inclusion(c, d) => schemas(&catalog.inclusions, c, d, false),
    }
}

/// Searches for a violation of `postulate` in `logic`.
///
/// First every atomic instantiation is checked against every interpretation
/// within `config`'s domain and grid bounds, in enumeration order; then the
/// remaining budget goes to seeded random trials with concepts up to
/// `shape.max_depth`. The first violation found is returned.
pub fn search_counterexample(
    postulate: Postulate,
    config: &SearchConfig,
    shape: &ConceptShape,
) -> Result<SearchReport, KlmError> {
    config.validate()?;
    let logic = config.logic;
    let catalog = valid_premise_catalog(logic);
    let mut report = SearchReport {
        verdict: PostulateVerdict::Holds { premises_met: false },
        examined: 0,
        uncertified: 0,
        atomic_complete: false,
        budget_exhausted: false,
    };
    let mut non_vacuous = false;

    for inst in atomic_instantiations(postulate, shape, &catalog) {
        let prepared = match PreparedInstance::new(postulate, &inst, &catalog) {
            Ok(p) => p,
            Err(KlmError::Uncertified(_)) => {
                report.uncertified += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let space = engine::enumerate_interpretations(&inst.signature(), config);
        let remaining = config.budget - report.examined;
        let limit = space.len().min(u128::from(remaining));
        let found = space.scan(0..limit, |_, interp| {
            report.examined += 1;
            match prepared.check(interp) {
                Err(e) => ControlFlow::Break(Err(e)),
                Ok(PostulateVerdict::Holds { premises_met }) => {
                    non_vacuous |= premises_met;
                    ControlFlow::Continue(())
                }
                Ok(v) => ControlFlow::Break(Ok(v)),
            }
        });
        match found {
            Some(Err(e)) => return Err(e.into()),
            Some(Ok(v)) => {
                report.verdict = v;
                return Ok(report);
            }
            None => {}
        }
        if limit < space.len() {
            report.budget_exhausted = true;
            report.verdict = PostulateVerdict::Holds { premises_met: non_vacuous };
            return Ok(report);
        }
    }
    report.atomic_complete = true;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sig = shape.signature();
    while report.examined < config.budget {
        let interp = random_interpretation(&mut rng, &sig, logic, config.max_domain, config.denominator);
        let inst = random_instantiation(&mut rng, postulate, shape, &catalog);
        report.examined += 1;
        match check_instance(&interp, postulate, &inst, &catalog) {
            Err(KlmError::Uncertified(_)) => report.uncertified += 1,
            Err(e) => return Err(e),
            Ok(PostulateVerdict::Holds { premises_met }) => non_vacuous |= premises_met,
            Ok(v) => {
                report.verdict = v;
                return Ok(report);
            }
        }
    }
    report.budget_exhausted = true;
    report.verdict = PostulateVerdict::Holds { premises_met: non_vacuous };
    Ok(report)
}
