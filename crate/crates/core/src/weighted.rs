//! Weights of domain elements with respect to distinguished concepts, and
//! the faithfulness / coherence conditions tying them to the induced
//! preferences.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::Degree;
use crate::interpretation::{Element, EvalError, FuzzyInterpretation, StrictReport};
use crate::rational::Rational;
use crate::syntax::{Concept, WeightedKb};

/// A weight, or `-∞` for elements outside the concept.
///
/// The derived order puts `NegInfinity` below every finite value and makes
/// `-∞ > -∞` false.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedWeight {
    NegInfinity,
    Finite(Rational),
}

impl ExtendedWeight {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedWeight::NegInfinity => None,
            ExtendedWeight::Finite(r) => Some(r),
        }
    }
}

impl fmt::Display for ExtendedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedWeight::NegInfinity => f.write_str("-inf"),
            ExtendedWeight::Finite(r) => fmt::Display::fmt(r, f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("`{0}` is not a distinguished concept")]
    NotDistinguished(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Degrees and weights of every element for one distinguished concept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    pub concept: String,
    pub degrees: Vec<Degree>,
    pub weights: Vec<ExtendedWeight>,
}

/// `W_i` for every element: the weighted sum of consequent degrees where
/// `C_i^I(x) > 0`, `-∞` elsewhere.
pub fn weight_table(interp: &FuzzyInterpretation, kb: &WeightedKb, concept: &str) -> Result<WeightTable, WeightError> {
    if !kb.is_distinguished(concept) {
        return Err(WeightError::NotDistinguished(concept.to_string()));
    }
    let degrees = interp.extension(&Concept::atom(concept))?;
    let mut sums = alloc::vec![Rational::zero(); interp.size()];
    for inc in kb.weighted_tbox(concept) {
        let consequent = interp.extension(&inc.consequent)?;
        for (sum, d) in sums.iter_mut().zip(&consequent) {
            if !d.is_zero() {
                *sum = &*sum + &(&inc.weight * d.value());
            }
        }
    }
    let weights = degrees
        .iter()
        .zip(sums)
        .map(|(d, s)| if d.is_zero() { ExtendedWeight::NegInfinity } else { ExtendedWeight::Finite(s) })
        .collect();
    Ok(WeightTable { concept: concept.to_string(), degrees, weights })
}

/// `W_i(x)` for a single element.
pub fn weight(
    interp: &FuzzyInterpretation,
    kb: &WeightedKb,
    concept: &str,
    x: Element,
) -> Result<ExtendedWeight, WeightError> {
    if x >= interp.size() {
        return Err(EvalError::NoSuchElement(x).into());
    }
    Ok(weight_table(interp, kb, concept)?.weights.swap_remove(x))
}

pub fn weight_tables(interp: &FuzzyInterpretation, kb: &WeightedKb) -> Result<Vec<WeightTable>, EvalError> {
    kb.distinguished
        .iter()
        .map(|c| {
            weight_table(interp, kb, c).map_err(|e| match e {
                WeightError::Eval(e) => e,
                WeightError::NotDistinguished(_) => unreachable!("iterating distinguished concepts"),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairViolationKind {
    /// `x <_C y` but not `W(x) > W(y)`.
    PreferenceWithoutWeight,
    /// `W(x) > W(y)` but not `x <_C y`; only coherence rules this out.
    WeightWithoutPreference,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairViolation {
    pub concept: String,
    pub x: Element,
    pub y: Element,
    pub degree_x: Degree,
    pub degree_y: Degree,
    pub weight_x: ExtendedWeight,
    pub weight_y: ExtendedWeight,
    pub kind: PairViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairReport {
    pub violations: Vec<PairViolation>,
}

impl PairReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn scan(tables: &[WeightTable], coherence: bool) -> PairReport {
    let mut violations = Vec::new();
    for t in tables {
        let n = t.degrees.len();
        for x in 0..n {
            for y in 0..n {
                let preferred = t.degrees[x] > t.degrees[y];
                let heavier = t.weights[x] > t.weights[y];
                let kind = match (preferred, heavier) {
                    (true, false) => PairViolationKind::PreferenceWithoutWeight,
                    (false, true) if coherence => PairViolationKind::WeightWithoutPreference,
                    _ => continue,
                };
                violations.push(PairViolation {
                    concept: t.concept.clone(),
                    x,
                    y,
                    degree_x: t.degrees[x].clone(),
                    degree_y: t.degrees[y].clone(),
                    weight_x: t.weights[x].clone(),
                    weight_y: t.weights[y].clone(),
                    kind,
                });
            }
        }
    }
    PairReport { violations }
}

/// Faithfulness: `x <_Ci y ⇒ W_i(x) > W_i(y)` for every distinguished `C_i`.
pub fn is_faithful(interp: &FuzzyInterpretation, kb: &WeightedKb) -> Result<PairReport, EvalError> {
    Ok(scan(&weight_tables(interp, kb)?, false))
}

/// Coherence: `x <_Ci y ⇔ W_i(x) > W_i(y)` for every distinguished `C_i`.
pub fn is_coherent(interp: &FuzzyInterpretation, kb: &WeightedKb) -> Result<PairReport, EvalError> {
    Ok(scan(&weight_tables(interp, kb)?, true))
}

/// Why an interpretation is or is not a faithful multipreference model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FmDiagnosis {
    pub strict: StrictReport,
    pub faithfulness: PairReport,
}

impl FmDiagnosis {
    pub fn is_fm_model(&self) -> bool {
        self.strict.holds() && self.faithfulness.holds()
    }
}

/// Strict part satisfied and every distinguished preference faithful.
pub fn is_fm_model(interp: &FuzzyInterpretation, kb: &WeightedKb) -> Result<FmDiagnosis, EvalError> {
    Ok(FmDiagnosis { strict: interp.is_model_strict(kb)?, faithfulness: is_faithful(interp, kb)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Logic;
    use crate::syntax::{Signature, WeightedInclusion};
    use alloc::vec;

    fn d(s: &str) -> Degree {
        s.parse().unwrap()
    }

    fn kb() -> WeightedKb {
        let mut kb = WeightedKb::new(Logic::Godel, Signature::new(&["C", "D", "E"], &[], &[]));
        kb.distinguished = vec!["C".into()];
        kb.weighted.push(WeightedInclusion::new("C", Concept::atom("D"), Rational::from_integer(3)));
        kb.weighted.push(WeightedInclusion::new("C", Concept::atom("E"), Rational::from_integer(-2)));
        kb
    }

    fn interp(c: [&str; 2], dd: [&str; 2], e: [&str; 2]) -> FuzzyInterpretation {
        let mut i = FuzzyInterpretation::with_size(Logic::Godel, 2).unwrap();
        i.set_concept_values("C", c.iter().map(|v| d(v)).collect()).unwrap();
        i.set_concept_values("D", dd.iter().map(|v| d(v)).collect()).unwrap();
        i.set_concept_values("E", e.iter().map(|v| d(v)).collect()).unwrap();
        i
    }

    #[test]
    fn weights_and_minus_infinity() {
        let i = interp(["1/2", "0"], ["1", "1"], ["1/4", "0"]);
        assert_eq!(weight(&i, &kb(), "C", 0).unwrap(), ExtendedWeight::Finite(Rational::new(5, 2)));
        assert_eq!(weight(&i, &kb(), "C", 1).unwrap(), ExtendedWeight::NegInfinity);
        assert!(matches!(weight(&i, &kb(), "D", 0), Err(WeightError::NotDistinguished(_))));
    }

    #[test]
    fn empty_weighted_tbox_gives_zero() {
        let mut k = kb();
        k.weighted.clear();
        let i = interp(["1/2", "0"], ["1", "1"], ["1/4", "0"]);
        assert_eq!(weight(&i, &k, "C", 0).unwrap(), ExtendedWeight::Finite(Rational::zero()));
    }

    #[test]
    fn minus_infinity_order() {
        let neg = ExtendedWeight::NegInfinity;
        assert!(!(neg > neg.clone()));
        assert!(ExtendedWeight::Finite(Rational::from_integer(-1_000_000)) > neg);
    }

    #[test]
    fn member_over_non_member_is_faithful() {
        // x0 is a C-member, x1 is not: finite > -∞.
        let i = interp(["1/2", "0"], ["0", "1"], ["1", "0"]);
        assert!(is_faithful(&i, &kb()).unwrap().holds());
    }

    #[test]
    fn faithfulness_violation_is_reported_as_pair() {
        let i = interp(["1", "1/2"], ["0", "1"], ["0", "0"]);
        let report = is_faithful(&i, &kb()).unwrap();
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!((v.x, v.y), (0, 1));
        assert_eq!(v.kind, PairViolationKind::PreferenceWithoutWeight);
    }

    #[test]
    fn faithful_but_not_coherent() {
        // Equal C degrees, different weights.
        let i = interp(["1/2", "1/2"], ["1", "0"], ["0", "0"]);
        assert!(is_faithful(&i, &kb()).unwrap().holds());
        let coherence = is_coherent(&i, &kb()).unwrap();
        assert_eq!(coherence.violations.len(), 1);
        assert_eq!(coherence.violations[0].kind, PairViolationKind::WeightWithoutPreference);
    }

    #[test]
    fn singleton_is_coherent() {
        let mut i = FuzzyInterpretation::with_size(Logic::Godel, 1).unwrap();
        i.declare(&kb().signature);
        i.set_concept("C", 0, d("0.3")).unwrap();
        assert!(is_coherent(&i, &kb()).unwrap().holds());
    }
}
