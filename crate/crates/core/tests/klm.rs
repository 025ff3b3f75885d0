mod oracle;

use alcft_core::engine::{check_validity_bounded, SearchConfig};
use alcft_core::klm::{
    check_instance, run_trials, search_counterexample, valid_premise_catalog, BoundedValidity, ConceptShape,
    Instantiation, Metavar, NoOracle, Postulate, PostulateVerdict, TrialConfig, ValidityOracle, Witness,
};
use alcft_core::syntax::{Comparator, Concept, FuzzyAxiom};
use alcft_core::{Degree, FuzzyInterpretation, Logic};
use oracle::RefInterp;

fn atom(n: &str) -> Concept {
    Concept::atom(n)
}

/// Premises hold and the conclusion fails under the reference semantics.
fn recheck(w: &Witness) -> bool {
    let r = RefInterp::from(&w.interpretation);
    w.premises.iter().all(|(ax, _)| r.satisfies(ax)) && !r.satisfies(&w.conclusion.0)
}

fn find(p: Postulate, logic: Logic) -> Witness {
    let cfg = SearchConfig::new(logic, 3, 4).with_budget(3_000_000);
    let report = search_counterexample(p, &cfg, &ConceptShape::default()).unwrap();
    match report.verdict {
        PostulateVerdict::Violated(w) => *w,
        v => panic!("{p} in {logic}: no witness ({v:?})"),
    }
}

#[test]
fn catalogs_certify() {
    for logic in Logic::ALL {
        let catalog = valid_premise_catalog(logic);
        assert!(catalog.certify().unwrap().is_empty(), "{logic}");
    }
}

#[test]
fn zadeh_identity_is_not_valid() {
    let zadeh = valid_premise_catalog(Logic::Zadeh);
    assert!(!zadeh.certifies_equivalence(&atom("A"), &atom("A")));
    let ax = FuzzyAxiom::inclusion(atom("C"), atom("C"), Comparator::Ge, Degree::one());
    let v = check_validity_bounded(&ax, &SearchConfig::new(Logic::Zadeh, 3, 2)).unwrap();
    assert_eq!(v.countermodel().unwrap().concept_values("C").unwrap(), &[Degree::ratio(1, 2)]);

    let godel = valid_premise_catalog(Logic::Godel);
    let (a, b) = (atom("A"), atom("B"));
    assert!(godel.certifies_equivalence(&Concept::and(a.clone(), b.clone()), &Concept::and(b, a)));
}

#[test]
fn catalog_agrees_with_bounded_validity_on_samples() {
    let (a, b) = (atom("A"), atom("B"));
    let samples = [
        (Concept::and(a.clone(), b.clone()), a.clone()),
        (a.clone(), Concept::or(a.clone(), b.clone())),
        (a.clone(), Concept::Top),
        (Concept::Bottom, b.clone()),
        (Concept::or(a.clone(), Concept::Top), Concept::Top),
    ];
    for logic in Logic::ALL {
        let catalog = valid_premise_catalog(logic);
        let bounded = BoundedValidity { config: SearchConfig::new(logic, 2, 4) };
        for (sub, sup) in &samples {
            // The catalog is sound: whatever it certifies survives search.
            if catalog.certifies_inclusion(sub, sup) {
                assert!(bounded.certifies_inclusion(sub, sup), "{logic}: {sub} <= {sup}");
            }
        }
    }
}

#[test]
fn refl_instances() {
    let inst = Instantiation::new().with(Metavar::C, atom("C"));
    for logic in Logic::ALL {
        for v in ["0", "1/4", "1/2", "1"] {
            let mut i = FuzzyInterpretation::with_size(logic, 2).unwrap();
            i.set_concept_values("C", vec![v.parse().unwrap(), Degree::zero()]).unwrap();
            assert!(!check_instance(&i, Postulate::Refl0, &inst, &NoOracle).unwrap().is_violated());
        }
    }
    let mut i = FuzzyInterpretation::with_size(Logic::Godel, 1).unwrap();
    i.set_concept("C", 0, Degree::ratio(1, 2)).unwrap();
    let PostulateVerdict::Violated(w) = check_instance(&i, Postulate::Refl1, &inst, &NoOracle).unwrap() else {
        panic!("REFL1 should fail at 1/2")
    };
    assert_eq!(w.conclusion.1, Degree::ratio(1, 2));
    assert!(recheck(&w));
}

#[test]
fn and_strong_holds_in_zadeh_trials() {
    let cfg = TrialConfig { trials: 2_000, ..TrialConfig::standard(5) };
    let report = run_trials(Postulate::And1, Logic::Zadeh, &cfg).unwrap();
    assert_eq!(report.violation_count, 0);
    assert!(report.non_vacuous > 0);
}

#[test]
fn and_strong_godel_exhaustive_atomic() {
    // Atomic A, C, D over |Δ| ≤ 3 and q = 4: 5^3 + 5^6 + 5^9 interpretations.
    let space = 125 + 15_625 + 1_953_125;
    let cfg = SearchConfig::new(Logic::Godel, 3, 4).with_budget(space);
    let report = search_counterexample(Postulate::And1, &cfg, &ConceptShape::default()).unwrap();
    assert!(report.atomic_complete);
    assert_eq!(report.examined, space);
    assert_eq!(report.verdict, PostulateVerdict::Holds { premises_met: true });
}

#[test]
fn known_failures_have_witnesses() {
    let cases = [
        (Postulate::Refl1, Logic::Godel),
        (Postulate::Refl1, Logic::Lukasiewicz),
        (Postulate::Refl1, Logic::Product),
        (Postulate::Or1, Logic::Lukasiewicz),
        (Postulate::Or1, Logic::Product),
        (Postulate::Cm0, Logic::Godel),
        (Postulate::Cm0, Logic::Zadeh),
    ];
    for (p, logic) in cases {
        let w = find(p, logic);
        assert!(w.recheck().unwrap(), "{p} {logic}");
        assert!(recheck(&w), "{p} {logic}: reference semantics disagrees");
        assert!(w.interpretation.size() <= 3);
    }
}

#[test]
fn product_or_needs_three_elements() {
    let w = find(Postulate::Or1, Logic::Product);
    assert_eq!(w.interpretation.size(), 3);
}

#[test]
fn search_is_deterministic() {
    let cfg = SearchConfig::new(Logic::Godel, 2, 3).with_budget(50_000).with_seed(4);
    let a = search_counterexample(Postulate::Cm0, &cfg, &ConceptShape::default()).unwrap();
    let b = search_counterexample(Postulate::Cm0, &cfg, &ConceptShape::default()).unwrap();
    assert_eq!(a, b);
    let t = TrialConfig { trials: 300, ..TrialConfig::standard(4) };
    assert_eq!(run_trials(Postulate::Or0, Logic::Godel, &t), run_trials(Postulate::Or0, Logic::Godel, &t));
}
