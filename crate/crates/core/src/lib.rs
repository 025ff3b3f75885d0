//! Fuzzy ALC with typicality.
//!
//! Exact-rational semantics for fuzzy ALC interpretations under Zadeh,
//! Gödel, Łukasiewicz and product combination functions, the typicality
//! operator `T(C)` with its induced preference, weighted conditional
//! knowledge bases and their faithful multipreference models, bounded
//! (counter)model search, KLM postulate checking, and the translation of
//! feed-forward networks into weighted knowledge bases.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod engine;
pub mod interpretation;
pub mod klm;
pub mod mlp;
pub mod rational;
pub mod syntax;
pub mod weighted;

pub use algebra::{Degree, Logic};
pub use engine::{EntailmentVerdict, Mode, SearchConfig};
pub use interpretation::{Element, FuzzyInterpretation};
pub use rational::Rational;
pub use syntax::{AxiomKind, Comparator, Concept, FuzzyAxiom, Signature, WeightedInclusion, WeightedKb};
