//! The bird/penguin/canary weighted knowledge base and its two-element
//! interpretation, built by hand.

#![allow(dead_code)]

use alcft_core::syntax::{Comparator, Concept, FuzzyAxiom, Signature, WeightedInclusion, WeightedKb};
use alcft_core::{Degree, FuzzyInterpretation, Logic, Rational};

pub const REDDY: usize = 0;
pub const OPUS: usize = 1;

pub fn kb() -> WeightedKb {
    let sig = Signature::new(
        &["Bird", "Penguin", "Canary", "Fly", "Black", "Yellow", "Red"],
        &["has_Wings", "has_Feather"],
        &[] as &[&str],
    );
    let mut kb = WeightedKb::new(Logic::Godel, sig);
    kb.distinguished = vec!["Bird".into(), "Penguin".into(), "Canary".into()];
    for (a, b) in [("Yellow", "Black"), ("Yellow", "Red"), ("Black", "Red")] {
        kb.tbox.push(FuzzyAxiom::inclusion(
            Concept::and(Concept::atom(a), Concept::atom(b)),
            Concept::Bottom,
            Comparator::Ge,
            Degree::one(),
        ));
    }
    let w = |s: &str, c: Concept, n: i64| WeightedInclusion::new(s, c, Rational::from_integer(n));
    kb.weighted = vec![
        w("Bird", Concept::atom("Fly"), 20),
        w("Bird", Concept::exists("has_Wings", Concept::Top), 50),
        w("Bird", Concept::exists("has_Feather", Concept::Top), 50),
        w("Penguin", Concept::atom("Bird"), 100),
        w("Penguin", Concept::atom("Fly"), -70),
        w("Penguin", Concept::atom("Black"), 50),
        w("Canary", Concept::atom("Bird"), 100),
        w("Canary", Concept::atom("Yellow"), 30),
        w("Canary", Concept::atom("Red"), 20),
    ];
    kb
}

/// Reddy flies, is red, has wings and feathers; Opus does not fly, is black
/// to degree 0.8, has wings and feathers. Bird: reddy 1, opus 0.8; Penguin:
/// reddy `penguin_reddy`, opus 0.8; Canary 0 everywhere.
pub fn interpretation(penguin_reddy: Degree) -> FuzzyInterpretation {
    let mut i = FuzzyInterpretation::new(Logic::Godel, vec!["reddy".into(), "opus".into()]).unwrap();
    i.declare(&kb().signature);
    let d = |s: &str| s.parse::<Degree>().unwrap();
    i.set_concept_values("Fly", vec![d("1"), d("0")]).unwrap();
    i.set_concept_values("Red", vec![d("1"), d("0")]).unwrap();
    i.set_concept_values("Black", vec![d("0"), d("0.8")]).unwrap();
    i.set_concept_values("Bird", vec![d("1"), d("0.8")]).unwrap();
    i.set_concept_values("Penguin", vec![penguin_reddy, d("0.8")]).unwrap();
    for r in ["has_Wings", "has_Feather"] {
        for x in [REDDY, OPUS] {
            i.set_role(r, x, x, Degree::one()).unwrap();
        }
    }
    i
}
