//! Bounded enumeration of finite interpretations and countermodel search.
//!
//! Atomic concept and role degrees range over the grid `{0, 1/q, …, 1}`;
//! every complex degree is then computed exactly. Entailment over all
//! models cannot be decided this way, so a search either returns a
//! countermodel (a sound refutation) or reports that none exists within the
//! bounds.
//!
//! # Enumeration order
//!
//! Domain sizes ascend from 1, so the first countermodel is size-minimal.
//! Within one size an interpretation is a mixed-radix number whose digits
//! are, from least to most significant: the element of each individual
//! (declaration order), then `A^I(x)` for each concept name `A` and element
//! `x`, then `r^I(x, y)` for each role name. The first digit varies fastest.
//! The order does not depend on the seed.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{ControlFlow, Range};
use core::sync::atomic::{AtomicBool, Ordering};

use crate::algebra::{Degree, Logic};
use crate::interpretation::{EvalError, FuzzyInterpretation};
use crate::syntax::{FuzzyAxiom, Signature, ValidationReport, WeightedKb};
use crate::weighted;

/// Which interpretations count as models of the knowledge base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Models of the strict TBox and ABox.
    Plain,
    /// Faithful multipreference models.
    Fm,
}

impl core::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Mode::Plain),
            "fm" => Ok(Mode::Fm),
            _ => Err(alloc::format!("unknown mode `{s}` (expected plain or fm)")),
        }
    }
}

/// Bounds and options for interpretation enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SearchConfig {
    pub max_domain: usize,
    /// Grid denominator `q`.
    pub denominator: u32,
    pub logic: Logic,
    /// Maximum number of interpretations examined.
    pub budget: u64,
    pub mode: Mode,
    /// Seeds randomized searches; exhaustive enumeration ignores it.
    pub seed: u64,
}

impl SearchConfig {
    pub const DEFAULT_BUDGET: u64 = 1_000_000;

    pub fn new(logic: Logic, max_domain: usize, denominator: u32) -> Self {
        SearchConfig { max_domain, denominator, logic, budget: Self::DEFAULT_BUDGET, mode: Mode::Plain, seed: 0 }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.max_domain == 0 {
            return Err(EngineError::InvalidConfig("max domain size must be at least 1"));
        }
        if self.denominator == 0 {
            return Err(EngineError::InvalidConfig("grid denominator must be at least 1"));
        }
        if self.budget == 0 {
            return Err(EngineError::InvalidConfig("budget must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("invalid axiom `{0}`: nested typicality")]
    InvalidAxiom(Box<FuzzyAxiom>),
    #[error("invalid knowledge base ({} violations)", .0.violations.len())]
    InvalidKb(Box<ValidationReport>),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone)]
struct Block {
    size: usize,
    start: u128,
    count: u128,
}

/// All grid interpretations of a signature up to a domain size, indexable
/// in enumeration order.
#[derive(Debug, Clone)]
pub struct InterpretationSpace {
    signature: Signature,
    logic: Logic,
    grid: Vec<Degree>,
    blocks: Vec<Block>,
    len: u128,
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Number of grid interpretations with exactly `size` elements, or `None`
/// if it does not fit in `u128`.
pub fn count_for_size(signature: &Signature, size: usize, denominator: u32) -> Option<u128> {
    let q1 = u128::from(denominator) + 1;
    let entries = signature.concepts.len() * size + signature.roles.len() * size * size;
    checked_pow(q1, entries)?.checked_mul(checked_pow(size as u128, signature.individuals.len())?)
}

impl InterpretationSpace {
    pub fn new(signature: Signature, logic: Logic, max_domain: usize, denominator: u32) -> Self {
        let mut blocks = Vec::new();
        let mut start: u128 = 0;
        for size in 1..=max_domain {
            let count = count_for_size(&signature, size, denominator).unwrap_or(u128::MAX);
            blocks.push(Block { size, start, count });
            start = start.saturating_add(count);
        }
        InterpretationSpace { signature, logic, grid: Degree::grid(denominator), blocks, len: start }
    }

    /// Total number of interpretations, saturating at `u128::MAX`.
    pub fn len(&self) -> u128 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Exact total, or `None` when it overflows `u128`.
    pub fn exact_len(&self) -> Option<u128> {
        if self.len == u128::MAX {
            None
        } else {
            Some(self.len)
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    fn radices(&self, size: usize) -> Vec<u128> {
        let q1 = self.grid.len() as u128;
        let sig = &self.signature;
        let mut r = vec![size as u128; sig.individuals.len()];
        r.extend(core::iter::repeat_n(q1, sig.concepts.len() * size + sig.roles.len() * size * size));
        r
    }

    fn apply_digit(&self, interp: &mut FuzzyInterpretation, size: usize, pos: usize, digit: u128) {
        let sig = &self.signature;
        let d = digit as usize;
        let ni = sig.individuals.len();
        if pos < ni {
            interp.bind_individual(&sig.individuals[pos], d).expect("digit within domain");
            return;
        }
        let k = pos - ni;
        let nc = sig.concepts.len() * size;
        if k < nc {
            let (c, x) = (k / size, k % size);
            interp.set_concept(&sig.concepts[c], x, self.grid[d].clone()).expect("element within domain");
        } else {
            let k = k - nc;
            let per_role = size * size;
            let (r, xy) = (k / per_role, k % per_role);
            interp.set_role(&sig.roles[r], xy / size, xy % size, self.grid[d].clone()).expect("element within domain");
        }
    }

    fn blank(&self, size: usize) -> FuzzyInterpretation {
        let mut interp = FuzzyInterpretation::with_size(self.logic, size).expect("positive size");
        interp.declare(&self.signature);
        for ind in &self.signature.individuals {
            interp.bind_individual(ind, 0).expect("nonempty domain");
        }
        interp
    }

    fn decode(&self, block: &Block, local: u128) -> (FuzzyInterpretation, Vec<u128>) {
        let radices = self.radices(block.size);
        let mut interp = self.blank(block.size);
        let mut digits = vec![0u128; radices.len()];
        let mut rest = local;
        for (pos, &radix) in radices.iter().enumerate() {
            digits[pos] = rest % radix;
            rest /= radix;
            if digits[pos] != 0 {
                self.apply_digit(&mut interp, block.size, pos, digits[pos]);
            }
        }
        (interp, digits)
    }

    /// The interpretation at `index` in enumeration order.
    pub fn get(&self, index: u128) -> Option<FuzzyInterpretation> {
        let block = self.blocks.iter().find(|b| index >= b.start && index - b.start < b.count)?;
        Some(self.decode(block, index - block.start).0)
    }

    /// Visits the interpretations with indices in `range`, in order, until
    /// `visit` breaks. Returns the break value, if any.
    pub fn scan<B>(
        &self,
        range: Range<u128>,
        mut visit: impl FnMut(u128, &FuzzyInterpretation) -> ControlFlow<B>,
    ) -> Option<B> {
        let end = range.end.min(self.len);
        let mut index = range.start;
        for block in &self.blocks {
            let block_end = block.start.saturating_add(block.count);
            if index >= end {
                break;
            }
            if index >= block_end {
                continue;
            }
            let radices = self.radices(block.size);
            let (mut interp, mut digits) = self.decode(block, index - block.start);
            let stop = end.min(block_end);
            loop {
                if let ControlFlow::Break(b) = visit(index, &interp) {
                    return Some(b);
                }
                index += 1;
                if index >= stop {
                    break;
                }
                // Odometer step: bump the fastest digit, carrying upward.
                for (pos, &radix) in radices.iter().enumerate() {
                    digits[pos] += 1;
                    if digits[pos] < radix {
                        self.apply_digit(&mut interp, block.size, pos, digits[pos]);
                        break;
                    }
                    digits[pos] = 0;
                    self.apply_digit(&mut interp, block.size, pos, 0);
                }
            }
        }
        None
    }

    /// Owned interpretations in enumeration order.
    pub fn iter(&self) -> impl Iterator<Item = FuzzyInterpretation> + '_ {
        (0..self.len.min(u128::from(u64::MAX))).map_while(move |i| self.get(i))
    }
}

/// All interpretations of `signature` within the bounds of `config`.
pub fn enumerate_interpretations(signature: &Signature, config: &SearchConfig) -> InterpretationSpace {
    InterpretationSpace::new(signature.clone(), config.logic, config.max_domain, config.denominator)
}

/// Search statistics; `examined` counts interpretations up to and including
/// the countermodel, in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    pub examined: u64,
    /// Examined interpretations that passed the model filter.
    pub models: u64,
    /// Size of the whole space, `None` if it overflows `u128`.
    pub space: Option<u128>,
    /// The space was larger than the budget.
    pub truncated: bool,
    /// The search was stopped from outside before finishing.
    pub cancelled: bool,
    pub max_domain: usize,
    pub denominator: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntailmentVerdict {
    Refuted { countermodel: FuzzyInterpretation, index: u128, stats: SearchStats },
    NoCountermodelWithinBounds { stats: SearchStats },
}

impl EntailmentVerdict {
    pub fn stats(&self) -> &SearchStats {
        match self {
            EntailmentVerdict::Refuted { stats, .. } | EntailmentVerdict::NoCountermodelWithinBounds { stats } => stats,
        }
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, EntailmentVerdict::Refuted { .. })
    }

    pub fn countermodel(&self) -> Option<&FuzzyInterpretation> {
        match self {
            EntailmentVerdict::Refuted { countermodel, .. } => Some(countermodel),
            EntailmentVerdict::NoCountermodelWithinBounds { .. } => None,
        }
    }
}

/// How one interpretation relates to a knowledge base and a goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub is_model: bool,
    pub is_countermodel: bool,
}

/// A knowledge base, goal axiom and mode, ready to classify interpretations.
#[derive(Debug, Clone)]
pub struct EntailmentProblem<'a> {
    pub kb: Option<&'a WeightedKb>,
    pub goal: &'a FuzzyAxiom,
    pub mode: Mode,
}

impl EntailmentProblem<'_> {
    pub fn signature(&self) -> Signature {
        match self.kb {
            Some(kb) => kb.signature.union(&self.goal.signature()),
            None => self.goal.signature(),
        }
    }

    pub fn classify(&self, interp: &FuzzyInterpretation) -> Result<Classification, EvalError> {
        let is_model = match (self.kb, self.mode) {
            (None, _) => true,
            (Some(kb), Mode::Plain) => interp.is_model_strict(kb)?.holds(),
            (Some(kb), Mode::Fm) => weighted::is_fm_model(interp, kb)?.is_fm_model(),
        };
        let is_countermodel = is_model && !interp.satisfies(self.goal)?;
        Ok(Classification { is_model, is_countermodel })
    }

    /// Rejects a nested-typicality goal or a structurally invalid KB.
    pub fn check(&self) -> Result<(), EngineError> {
        if self.goal.concepts().any(|c| c.has_nested_typicality()) {
            return Err(EngineError::InvalidAxiom(Box::new(self.goal.clone())));
        }
        if let Some(kb) = self.kb {
            let report = kb.validate();
            if !report.is_valid() {
                return Err(EngineError::InvalidKb(Box::new(report)));
            }
        }
        Ok(())
    }
}

/// Runs `problem` over the first `config.budget` interpretations of the
/// bounded space. `cancel`, when set from elsewhere, stops the scan early.
pub fn search(
    problem: &EntailmentProblem<'_>,
    config: &SearchConfig,
    cancel: Option<&AtomicBool>,
) -> Result<EntailmentVerdict, EngineError> {
    config.validate()?;
    problem.check()?;
    let space = enumerate_interpretations(&problem.signature(), config);
    let limit = space.len().min(u128::from(config.budget));
    let mut stats = SearchStats {
        examined: 0,
        models: 0,
        space: space.exact_len(),
        truncated: space.len() > u128::from(config.budget),
        cancelled: false,
        max_domain: config.max_domain,
        denominator: config.denominator,
    };
    let found = space.scan(0..limit, |index, interp| {
        if stats.examined.is_multiple_of(1024) && cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            stats.cancelled = true;
            return ControlFlow::Break(Ok(None));
        }
        stats.examined += 1;
        match problem.classify(interp) {
            Err(e) => ControlFlow::Break(Err(e)),
            Ok(c) => {
                stats.models += u64::from(c.is_model);
                if c.is_countermodel {
                    ControlFlow::Break(Ok(Some((index, interp.clone()))))
                } else {
                    ControlFlow::Continue(())
                }
            }
        }
    });
    match found.transpose()? {
        Some(Some((index, countermodel))) => Ok(EntailmentVerdict::Refuted { countermodel, index, stats }),
        _ => Ok(EntailmentVerdict::NoCountermodelWithinBounds { stats }),
    }
}

/// Looks for a model of `kb` (strict part, or fm-model in `Mode::Fm`) that
/// falsifies `goal`.
pub fn check_entailment_bounded(
    kb: &WeightedKb,
    goal: &FuzzyAxiom,
    config: &SearchConfig,
) -> Result<EntailmentVerdict, EngineError> {
    search(&EntailmentProblem { kb: Some(kb), goal, mode: config.mode }, config, None)
}

/// Looks for a faithful multipreference model of `kb` that falsifies `goal`.
pub fn check_fm_entailment_bounded(
    kb: &WeightedKb,
    goal: &FuzzyAxiom,
    config: &SearchConfig,
) -> Result<EntailmentVerdict, EngineError> {
    search(&EntailmentProblem { kb: Some(kb), goal, mode: Mode::Fm }, config, None)
}

/// Looks for any interpretation falsifying `axiom`.
pub fn check_validity_bounded(axiom: &FuzzyAxiom, config: &SearchConfig) -> Result<EntailmentVerdict, EngineError> {
    search(&EntailmentProblem { kb: None, goal: axiom, mode: Mode::Plain }, config, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Comparator, Concept};

    fn sig(concepts: &[&str], roles: &[&str], inds: &[&str]) -> Signature {
        Signature::new(concepts, roles, inds)
    }

    fn count(s: &Signature, n: usize, q: u32) -> u128 {
        enumerate_interpretations(s, &SearchConfig::new(Logic::Godel, n, q)).len()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(&sig(&["C"], &[], &[]), 1, 1), 2);
        assert_eq!(count(&sig(&["C"], &[], &[]), 1, 2), 3);
        // sizes 1 and 2 with two names: 3^2 + 3^4
        assert_eq!(count(&sig(&["A", "B"], &[], &[]), 2, 2), 9 + 81);
        assert_eq!(count_for_size(&sig(&["A", "B"], &[], &[]), 2, 2), Some(81));
    }

    #[test]
    fn scan_visits_everything_once_in_index_order() {
        let s = sig(&["A"], &["r"], &["a", "b"]);
        let space = enumerate_interpretations(&s, &SearchConfig::new(Logic::Godel, 2, 1));
        let mut seen = Vec::new();
        space.scan(0..space.len(), |i, interp| {
            assert_eq!(Some(interp.clone()), space.get(i));
            seen.push(i);
            ControlFlow::<()>::Continue(())
        });
        assert_eq!(seen.len() as u128, space.len());
        assert!(seen.windows(2).all(|w| w[0] + 1 == w[1]));
        // size 1: 2^(1+1) * 1^2 = 4; size 2: 2^(2+4) * 2^2 = 256
        assert_eq!(space.len(), 4 + 256);
        let distinct: alloc::collections::BTreeSet<_> = space.iter().map(|i| alloc::format!("{i:?}")).collect();
        assert_eq!(distinct.len() as u128, space.len());
    }

    #[test]
    fn scan_from_the_middle_matches_get() {
        let s = sig(&["A", "B"], &[], &[]);
        let space = enumerate_interpretations(&s, &SearchConfig::new(Logic::Godel, 2, 2));
        let mut first = None;
        space.scan(40..space.len(), |i, interp| {
            if i == 57 {
                first = Some(interp.clone());
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        assert_eq!(first, space.get(57));
    }

    #[test]
    fn refl_counterexample_in_godel() {
        let goal = FuzzyAxiom::inclusion(
            Concept::typical(Concept::atom("C")),
            Concept::atom("C"),
            Comparator::Ge,
            Degree::one(),
        );
        let verdict = check_validity_bounded(&goal, &SearchConfig::new(Logic::Godel, 1, 2)).unwrap();
        let model = verdict.countermodel().expect("refuted");
        assert_eq!(model.concept_values("C").unwrap(), &[Degree::ratio(1, 2)]);
    }

    #[test]
    fn budget_truncates() {
        let goal = FuzzyAxiom::inclusion(Concept::atom("C"), Concept::Top, Comparator::Ge, Degree::one());
        let cfg = SearchConfig::new(Logic::Godel, 3, 4).with_budget(10);
        let verdict = check_validity_bounded(&goal, &cfg).unwrap();
        assert!(!verdict.is_refuted());
        assert!(verdict.stats().truncated);
        assert_eq!(verdict.stats().examined, 10);
    }

    #[test]
    fn invalid_inputs() {
        let nested = FuzzyAxiom::inclusion(
            Concept::typical(Concept::typical(Concept::atom("C"))),
            Concept::Top,
            Comparator::Ge,
            Degree::one(),
        );
        let cfg = SearchConfig::new(Logic::Godel, 1, 1);
        assert!(matches!(check_validity_bounded(&nested, &cfg), Err(EngineError::InvalidAxiom(_))));
        let good = FuzzyAxiom::inclusion(Concept::atom("C"), Concept::Top, Comparator::Ge, Degree::one());
        let zero = SearchConfig::new(Logic::Godel, 0, 1);
        assert!(matches!(check_validity_bounded(&good, &zero), Err(EngineError::InvalidConfig(_))));
    }

    #[test]
    fn cancellation_stops_the_scan() {
        let goal = FuzzyAxiom::inclusion(Concept::atom("C"), Concept::Top, Comparator::Ge, Degree::one());
        let cancel = AtomicBool::new(true);
        let problem = EntailmentProblem { kb: None, goal: &goal, mode: Mode::Plain };
        let verdict = search(&problem, &SearchConfig::new(Logic::Godel, 2, 2), Some(&cancel)).unwrap();
        assert!(verdict.stats().cancelled);
        assert_eq!(verdict.stats().examined, 0);
    }
}
