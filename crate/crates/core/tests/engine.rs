mod oracle;
mod penguin;

use alcft_core::engine::{
    self, check_entailment_bounded, check_fm_entailment_bounded, check_validity_bounded, count_for_size,
    enumerate_interpretations, EntailmentVerdict, Mode, SearchConfig,
};
use alcft_core::syntax::{Comparator, Concept, FuzzyAxiom, Signature, WeightedInclusion, WeightedKb};
use alcft_core::{Degree, Logic, Rational};
use oracle::RefInterp;

fn atom(n: &str) -> Concept {
    Concept::atom(n)
}

fn t(c: Concept) -> Concept {
    Concept::typical(c)
}

fn incl(lhs: Concept, rhs: Concept, cmp: Comparator, n: &str) -> FuzzyAxiom {
    FuzzyAxiom::inclusion(lhs, rhs, cmp, n.parse().unwrap())
}

fn sig(c: &[&str], r: &[&str], i: &[&str]) -> Signature {
    Signature::new(c, r, i)
}

#[test]
fn enumeration_counts_match_closed_forms() {
    // (signature, max domain, q, hand count)
    let cases: [(Signature, usize, u32, u128); 7] = [
        (sig(&["C"], &[], &[]), 1, 1, 2),
        (sig(&["C"], &[], &[]), 1, 2, 3),
        // 3^2 + 3^4
        (sig(&["A", "B"], &[], &[]), 2, 2, 9 + 81),
        // one role, q = 1: 2^1 + 2^4 + 2^9
        (sig(&[], &["r"], &[]), 3, 1, 2 + 16 + 512),
        // one concept, two individuals: 3^1·1 + 3^2·4
        (sig(&["C"], &[], &["a", "b"]), 2, 2, 3 + 36),
        // concept and role, q = 3: 4^2 + 4^6
        (sig(&["C"], &["r"], &[]), 2, 3, 16 + 4096),
        // empty signature: one interpretation per size
        (sig(&[], &[], &[]), 4, 5, 4),
    ];
    for (s, n, q, expected) in cases {
        let space = enumerate_interpretations(&s, &SearchConfig::new(Logic::Godel, n, q));
        assert_eq!(space.len(), expected, "{s:?} n={n} q={q}");
        let per_size: u128 = (1..=n).map(|k| count_for_size(&s, k, q).unwrap()).sum();
        assert_eq!(per_size, expected);
        assert_eq!(space.iter().count() as u128, expected);
    }
}

#[test]
fn exhaustive_search_examines_whole_space() {
    let goal = incl(atom("C"), Concept::Top, Comparator::Ge, "1");
    let v = check_validity_bounded(&goal, &SearchConfig::new(Logic::Lukasiewicz, 3, 2)).unwrap();
    assert!(!v.is_refuted());
    assert_eq!(v.stats().examined, 3 + 9 + 27);
    assert_eq!(v.stats().space, Some(39));
    assert!(!v.stats().truncated);
}

#[test]
fn entailment_examples() {
    let mut kb = WeightedKb::new(Logic::Godel, sig(&["A", "B"], &[], &[]));
    kb.tbox.push(incl(atom("A"), atom("B"), Comparator::Ge, "1"));
    let v = check_entailment_bounded(&kb, &kb.tbox[0].clone(), &SearchConfig::new(Logic::Godel, 2, 3)).unwrap();
    assert!(!v.is_refuted());
    assert!(v.stats().models > 0);

    let empty = WeightedKb::new(Logic::Godel, Signature::default());
    let refl1 = incl(t(atom("C")), atom("C"), Comparator::Ge, "1");
    let v = check_entailment_bounded(&empty, &refl1, &SearchConfig::new(Logic::Godel, 2, 2)).unwrap();
    let m = v.countermodel().expect("refuted");
    assert_eq!(m.size(), 1);
    assert_eq!(m.concept_values("C").unwrap(), &[Degree::ratio(1, 2)]);

    let refl0 = incl(t(atom("C")), atom("C"), Comparator::Gt, "0");
    for logic in Logic::ALL {
        let v = check_entailment_bounded(&empty, &refl0, &SearchConfig::new(logic, 3, 3)).unwrap();
        assert!(!v.is_refuted());
    }
}

#[test]
fn validity_examples() {
    let v = check_validity_bounded(
        &incl(Concept::and(atom("C"), atom("D")), atom("C"), Comparator::Ge, "1"),
        &SearchConfig::new(Logic::Godel, 3, 6),
    )
    .unwrap();
    assert!(!v.is_refuted());
    assert!(!v.stats().truncated);

    let v = check_validity_bounded(
        &incl(atom("C"), atom("C"), Comparator::Ge, "1"),
        &SearchConfig::new(Logic::Zadeh, 2, 2),
    )
    .unwrap();
    assert_eq!(v.countermodel().unwrap().concept_values("C").unwrap(), &[Degree::ratio(1, 2)]);

    for logic in Logic::ALL {
        let v = check_validity_bounded(
            &incl(atom("C"), Concept::Top, Comparator::Ge, "1"),
            &SearchConfig::new(logic, 3, 4),
        )
        .unwrap();
        assert!(!v.is_refuted());
    }
}

#[test]
fn fm_entailment_penguin() {
    let kb = penguin::kb();
    let goal = incl(t(atom("Penguin")), atom("Fly"), Comparator::Ge, "0.9");

    // The two-element interpretation itself is an fm-model where the
    // typical penguin (opus) does not fly.
    let i = penguin::interpretation("0.2".parse().unwrap());
    assert!(RefInterp::from(&i).fm_model(&kb));
    assert!(!RefInterp::from(&i).satisfies(&goal));

    let v = check_fm_entailment_bounded(&kb, &goal, &SearchConfig::new(Logic::Godel, 2, 10)).unwrap();
    let m = v.countermodel().expect("refuted");
    let r = RefInterp::from(m);
    assert!(r.fm_model(&kb));
    assert!(!r.satisfies(&goal));
}

#[test]
fn unsatisfiable_strict_part_is_vacuous() {
    let mut kb = WeightedKb::new(Logic::Godel, sig(&["C"], &[], &[]));
    kb.tbox.push(incl(Concept::Top, Concept::Bottom, Comparator::Ge, "1"));
    let goal = incl(atom("C"), Concept::Bottom, Comparator::Ge, "1");
    for mode in [Mode::Plain, Mode::Fm] {
        let v = check_entailment_bounded(&kb, &goal, &SearchConfig::new(Logic::Godel, 2, 2).with_mode(mode)).unwrap();
        assert!(!v.is_refuted());
        assert_eq!(v.stats().models, 0);
        assert!(v.stats().examined > 0);
    }
}

#[test]
fn countermodels_of_larger_kbs_refute_smaller_ones() {
    let mut small = WeightedKb::new(Logic::Godel, sig(&["A", "B"], &[], &[]));
    small.tbox.push(incl(atom("A"), atom("B"), Comparator::Ge, "1/2"));
    let mut large = small.clone();
    large.tbox.push(incl(atom("B"), atom("A"), Comparator::Ge, "1/2"));
    let goal = incl(t(atom("A")), atom("B"), Comparator::Ge, "1");
    let cfg = SearchConfig::new(Logic::Godel, 2, 4);
    let v = check_entailment_bounded(&large, &goal, &cfg).unwrap();
    let m = v.countermodel().expect("refuted");
    assert!(RefInterp::from(m).strict_model(&small));
    assert!(check_entailment_bounded(&small, &goal, &cfg).unwrap().is_refuted());
}

#[test]
fn countermodels_recheck_and_searches_are_deterministic() {
    let goals = [
        incl(t(atom("C")), atom("C"), Comparator::Ge, "1"),
        incl(atom("C"), Concept::exists("r", atom("C")), Comparator::Ge, "1/2"),
        incl(t(Concept::or(atom("A"), atom("C"))), atom("C"), Comparator::Gt, "0"),
        incl(Concept::forall("r", atom("A")), Concept::not(atom("A")), Comparator::Ge, "1"),
    ];
    for logic in Logic::ALL {
        for goal in &goals {
            let cfg = SearchConfig::new(logic, 2, 3).with_seed(9);
            let a = check_validity_bounded(goal, &cfg).unwrap();
            let b = check_validity_bounded(goal, &cfg.clone().with_seed(10)).unwrap();
            assert_eq!(a, b);
            if let EntailmentVerdict::Refuted { countermodel, index, .. } = &a {
                assert!(!RefInterp::from(countermodel).satisfies(goal), "{logic} {goal}");
                let space = enumerate_interpretations(&goal.signature(), &cfg);
                assert_eq!(space.get(*index).as_ref(), Some(countermodel));
                assert_eq!(a.stats().examined as u128, index + 1);
            }
        }
    }
}

fn on_grid(v: &Rational, q: i64) -> bool {
    (v * &Rational::from_integer(q)).is_integer()
}

#[test]
fn grid_closure() {
    let q = 4;
    let grid = Degree::grid(q as u32);
    for logic in Logic::ALL {
        for a in &grid {
            for b in &grid {
                let outs = [logic.tnorm(a, b), logic.snorm(a, b), logic.implication(a, b), logic.negation(a)];
                if logic != Logic::Product {
                    assert!(outs.iter().all(|o| on_grid(o.value(), q)), "{logic} {a} {b}");
                }
            }
        }
    }
    // 1/4 ⊗ 1/4 = 1/16 in product logic.
    let quarter = Degree::ratio(1, 4);
    assert!(!on_grid(Logic::Product.tnorm(&quarter, &quarter).value(), q));
}

fn premise_kb(logic: Logic, premises: Vec<FuzzyAxiom>) -> WeightedKb {
    let mut kb = WeightedKb::new(logic, sig(&["A", "C", "D"], &[], &[]));
    kb.tbox = premises;
    kb.distinguished = vec!["A".into()];
    kb.weighted.push(WeightedInclusion::new("A", atom("C"), Rational::from_integer(2)));
    kb.weighted.push(WeightedInclusion::new("A", atom("D"), Rational::from_integer(-1)));
    kb
}

#[test]
fn strong_family_lifts_to_fm_entailment() {
    let ge = Comparator::Ge;
    for logic in [Logic::Zadeh, Logic::Godel] {
        let kb =
            premise_kb(logic, vec![incl(t(atom("A")), atom("C"), ge, "1"), incl(t(atom("A")), atom("D"), ge, "1")]);
        let cfg = SearchConfig::new(logic, 2, 3);
        for goal in [
            incl(t(atom("A")), Concept::and(atom("C"), atom("D")), ge, "1"),
            incl(t(Concept::and(atom("A"), atom("D"))), atom("C"), ge, "1"),
        ] {
            let v = check_fm_entailment_bounded(&kb, &goal, &cfg).unwrap();
            assert!(!v.is_refuted(), "{logic} {goal}");
            assert!(v.stats().models > 0);
        }
    }
}

#[test]
fn weak_family_lifts_to_fm_entailment() {
    for logic in [Logic::Zadeh, Logic::Godel] {
        let kb = premise_kb(
            logic,
            vec![
                incl(t(atom("A")), atom("D"), Comparator::Ge, "1"),
                incl(t(atom("A")), atom("C"), Comparator::Gt, "0"),
            ],
        );
        let cfg = SearchConfig::new(logic, 2, 3);
        for goal in [
            incl(t(Concept::and(atom("A"), atom("D"))), atom("C"), Comparator::Gt, "0"),
            incl(t(atom("A")), Concept::and(atom("C"), atom("D")), Comparator::Gt, "0"),
        ] {
            let v = check_fm_entailment_bounded(&kb, &goal, &cfg).unwrap();
            assert!(!v.is_refuted(), "{logic} {goal}");
            assert!(v.stats().models > 0);
        }
    }
}

#[test]
fn weak_cautious_monotonicity_fails_at_entailment_level() {
    let kb = premise_kb(
        Logic::Godel,
        vec![incl(t(atom("A")), atom("D"), Comparator::Gt, "0"), incl(t(atom("A")), atom("C"), Comparator::Gt, "0")],
    );
    let goal = incl(t(Concept::and(atom("A"), atom("D"))), atom("C"), Comparator::Gt, "0");
    let v = engine::check_entailment_bounded(&kb, &goal, &SearchConfig::new(Logic::Godel, 2, 4)).unwrap();
    let m = v.countermodel().expect("refuted");
    let r = RefInterp::from(m);
    assert!(r.strict_model(&kb) && !r.satisfies(&goal));
}
