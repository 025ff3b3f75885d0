//! Reference semantics for cross-checking the library.
//!
//! Everything here works on `BigRational` directly and is written from the
//! definitions, without calling the library's evaluator, connectives or
//! weight code. Only the data structures (concepts, axioms, the valuations
//! stored in an interpretation) are shared.

#![allow(dead_code)]

use std::collections::BTreeMap;

use alcft_core::syntax::{AxiomKind, Comparator, Concept, FuzzyAxiom, WeightedKb};
use alcft_core::{FuzzyInterpretation, Logic};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn zero() -> Q {
    Q::zero()
}

fn one() -> Q {
    Q::one()
}

fn clamp01(x: Q) -> Q {
    if x < zero() {
        zero()
    } else if x > one() {
        one()
    } else {
        x
    }
}

pub fn t(logic: Logic, a: &Q, b: &Q) -> Q {
    match logic {
        Logic::Zadeh | Logic::Godel => a.min(b).clone(),
        Logic::Lukasiewicz => clamp01(a + b - one()),
        Logic::Product => a * b,
    }
}

pub fn s(logic: Logic, a: &Q, b: &Q) -> Q {
    match logic {
        Logic::Zadeh | Logic::Godel => a.max(b).clone(),
        Logic::Lukasiewicz => clamp01(a + b),
        Logic::Product => a + b - a * b,
    }
}

pub fn imp(logic: Logic, a: &Q, b: &Q) -> Q {
    match logic {
        Logic::Zadeh => (one() - a).max(b.clone()),
        Logic::Godel => {
            if a <= b {
                one()
            } else {
                b.clone()
            }
        }
        Logic::Lukasiewicz => clamp01(one() - a + b),
        Logic::Product => {
            if a <= b {
                one()
            } else {
                b / a
            }
        }
    }
}

pub fn neg(logic: Logic, a: &Q) -> Q {
    match logic {
        Logic::Zadeh | Logic::Lukasiewicz => one() - a,
        Logic::Godel | Logic::Product => {
            if a.is_zero() {
                one()
            } else {
                zero()
            }
        }
    }
}

/// An interpretation copied into plain tables.
#[derive(Debug, Clone)]
pub struct RefInterp {
    pub logic: Logic,
    pub n: usize,
    pub concepts: BTreeMap<String, Vec<Q>>,
    pub roles: BTreeMap<String, Vec<Vec<Q>>>,
    pub individuals: BTreeMap<String, usize>,
}

impl RefInterp {
    pub fn from(i: &FuzzyInterpretation) -> Self {
        let n = i.size();
        let concepts = i
            .concept_valuations()
            .map(|(c, v)| (c.to_string(), v.iter().map(|d| d.value().to_big()).collect()))
            .collect();
        let roles = i
            .role_valuations()
            .map(|(r, v)| {
                let rows = (0..n).map(|x| (0..n).map(|y| v[x * n + y].value().to_big()).collect()).collect();
                (r.to_string(), rows)
            })
            .collect();
        let individuals = i.individual_bindings().map(|(a, x)| (a.to_string(), x)).collect();
        RefInterp { logic: i.logic(), n, concepts, roles, individuals }
    }

    /// `C^I(x)` for every `x`, by direct recursion on the definitions.
    pub fn eval(&self, c: &Concept) -> Vec<Q> {
        let l = self.logic;
        let n = self.n;
        match c {
            Concept::Top => vec![one(); n],
            Concept::Bottom => vec![zero(); n],
            Concept::Atomic(a) => self.concepts[a].clone(),
            Concept::Not(d) => self.eval(d).iter().map(|v| neg(l, v)).collect(),
            Concept::And(a, b) => self.eval(a).iter().zip(self.eval(b)).map(|(x, y)| t(l, x, &y)).collect(),
            Concept::Or(a, b) => self.eval(a).iter().zip(self.eval(b)).map(|(x, y)| s(l, x, &y)).collect(),
            Concept::Exists(r, d) => {
                let dv = self.eval(d);
                let rel = &self.roles[r];
                (0..n).map(|x| (0..n).map(|y| t(l, &rel[x][y], &dv[y])).fold(zero(), |m, v| m.max(v))).collect()
            }
            Concept::Forall(r, d) => {
                let dv = self.eval(d);
                let rel = &self.roles[r];
                (0..n).map(|x| (0..n).map(|y| imp(l, &rel[x][y], &dv[y])).fold(one(), |m, v| m.min(v))).collect()
            }
            Concept::Typical(d) => {
                let dv = self.eval(d);
                // x is typical iff positive and no y has a strictly larger degree.
                (0..n)
                    .map(|x| {
                        let minimal = dv[x] > zero() && (0..n).all(|y| dv[y] <= dv[x]);
                        if minimal {
                            one()
                        } else {
                            zero()
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn degree(&self, kind: &AxiomKind) -> Q {
        match kind {
            AxiomKind::Inclusion { lhs, rhs } => {
                let a = self.eval(lhs);
                let b = self.eval(rhs);
                a.iter().zip(&b).map(|(x, y)| imp(self.logic, x, y)).fold(one(), |m, v| m.min(v))
            }
            AxiomKind::ConceptAssertion { concept, individual } => {
                self.eval(concept)[self.individuals[individual]].clone()
            }
            AxiomKind::RoleAssertion { role, subject, object } => {
                self.roles[role][self.individuals[subject]][self.individuals[object]].clone()
            }
        }
    }

    pub fn satisfies(&self, ax: &FuzzyAxiom) -> bool {
        let d = self.degree(&ax.kind);
        let n = ax.threshold.value().to_big();
        match ax.comparator {
            Comparator::Ge => d >= n,
            Comparator::Le => d <= n,
            Comparator::Gt => d > n,
            Comparator::Lt => d < n,
        }
    }

    pub fn strict_model(&self, kb: &WeightedKb) -> bool {
        kb.tbox.iter().chain(&kb.abox).all(|ax| self.satisfies(ax))
    }

    /// `W_C(x)`; `None` stands for minus infinity.
    pub fn weights(&self, kb: &WeightedKb, concept: &str) -> Vec<Option<Q>> {
        let cv = &self.concepts[concept];
        let terms: Vec<(Q, Vec<Q>)> = kb
            .weighted
            .iter()
            .filter(|w| w.subject == concept)
            .map(|w| (w.weight.to_big(), self.eval(&w.consequent)))
            .collect();
        (0..self.n)
            .map(
                |x| {
                    if cv[x].is_zero() {
                        None
                    } else {
                        Some(terms.iter().fold(zero(), |acc, (w, d)| acc + w * &d[x]))
                    }
                },
            )
            .collect()
    }

    fn pair_check(&self, kb: &WeightedKb, both_ways: bool) -> bool {
        kb.distinguished.iter().all(|c| {
            let cv = &self.concepts[c];
            let w = self.weights(kb, c);
            // Option's order puts None below every Some, as -inf should be.
            (0..self.n).all(|x| {
                (0..self.n).all(|y| {
                    let pref = cv[x] > cv[y];
                    let heavier = w[x] > w[y];
                    if both_ways {
                        pref == heavier
                    } else {
                        !pref || heavier
                    }
                })
            })
        })
    }

    pub fn faithful(&self, kb: &WeightedKb) -> bool {
        self.pair_check(kb, false)
    }

    pub fn coherent(&self, kb: &WeightedKb) -> bool {
        self.pair_check(kb, true)
    }

    pub fn fm_model(&self, kb: &WeightedKb) -> bool {
        self.strict_model(kb) && self.faithful(kb)
    }
}
