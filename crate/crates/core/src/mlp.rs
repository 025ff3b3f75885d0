//! Feed-forward networks as weighted conditional knowledge bases.
//!
//! Every unit `h` becomes a concept name `C_h`. A synapse `(h, i, w)` becomes
//! the weighted inclusion `T(C_i) ⊑ C_h` with weight `w`, and every
//! non-input unit is distinguished. A bias is a synapse from a bias unit whose
//! activation is constantly 1. Over a set of stimuli, the activation of `h`
//! on stimulus `x` is the membership degree `C_h^I(x)`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Degree, Logic};
use crate::interpretation::{FuzzyInterpretation, InterpretationError};
use crate::rational::Rational;
use crate::syntax::{Concept, Signature, WeightedInclusion, WeightedKb};
use crate::weighted::{self, FmDiagnosis, PairReport, WeightTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    Input,
    Hidden,
    Output,
    /// Constant activation 1.
    Bias,
}

impl UnitKind {
    /// Units whose activation is computed from incoming synapses.
    pub fn is_computed(self) -> bool {
        matches!(self, UnitKind::Hidden | UnitKind::Output)
    }
}

/// Monotone non-decreasing piecewise-rational activations into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activation {
    /// `clip(x/6 + 1/2, 0, 1)`
    HardSigmoid,
    /// `clip(x, 0, 1)`
    ClippedLinear,
    /// 1 for `x ≥ 0`, else 0.
    Step,
}

fn clip(x: Rational) -> Rational {
    x.max(Rational::zero()).min(Rational::one())
}

impl Activation {
    pub const ALL: [Activation; 3] = [Activation::HardSigmoid, Activation::ClippedLinear, Activation::Step];

    pub fn apply(self, x: &Rational) -> Rational {
        match self {
            Activation::HardSigmoid => clip(&(x / &Rational::from_integer(6)) + &Rational::new(1, 2)),
            Activation::ClippedLinear => clip(x.clone()),
            Activation::Step => {
                if x.is_negative() {
                    Rational::zero()
                } else {
                    Rational::one()
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::HardSigmoid => "hard-sigmoid",
            Activation::ClippedLinear => "clipped-linear",
            Activation::Step => "step",
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Activation {
    type Err = MlpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hard-sigmoid" | "hardsigmoid" => Ok(Activation::HardSigmoid),
            "clipped-linear" | "clipped" | "relu1" => Ok(Activation::ClippedLinear),
            "step" | "heaviside" => Ok(Activation::Step),
            _ => Err(MlpError::UnknownActivation(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    pub name: String,
    pub kind: UnitKind,
    /// Present exactly for hidden and output units.
    pub activation: Option<Activation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synapse {
    pub from: usize,
    pub to: usize,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MlpError {
    #[error("unknown activation `{0}`")]
    UnknownActivation(String),
    #[error("duplicate unit name `{0}`")]
    DuplicateUnit(String),
    #[error("unit `{0}` is not a valid concept name")]
    BadUnitName(String),
    #[error("no unit with index {0}")]
    NoSuchUnit(usize),
    #[error("no unit named `{0}`")]
    UnknownUnit(String),
    #[error("synapse into {0} unit `{1}`")]
    SynapseIntoSource(&'static str, String),
    #[error("the network has a cycle through `{0}`")]
    Cyclic(String),
    #[error("the stimulus set is empty")]
    EmptyStimuli,
    #[error("duplicate stimulus name `{0}`")]
    DuplicateStimulus(String),
    #[error("stimulus `{name}` has {found} components, expected {expected}")]
    DimensionMismatch { name: String, expected: usize, found: usize },
    #[error("activation of `{unit}` on `{stimulus}` is {value}, outside [0, 1]")]
    ActivationOutOfRange { unit: String, stimulus: String, value: Rational },
    #[error(transparent)]
    Interpretation(#[from] InterpretationError),
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A feed-forward network with exact rational weights.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeedForwardNet {
    units: Vec<Unit>,
    synapses: Vec<Synapse>,
}

impl FeedForwardNet {
    pub fn new() -> Self {
        Self::default()
    }

    /// A fully connected layered net with zero weights and no bias. Units are
    /// named `I1…`, `H1_1…` (hidden layer, index) and `O1…`.
    pub fn dense(sizes: &[usize], activations: &[Activation]) -> Self {
        assert!(sizes.len() >= 2, "need input and output layers");
        assert_eq!(activations.len(), sizes.len() - 1, "one activation per non-input layer");
        let mut net = Self::new();
        let mut prev: Vec<usize> = Vec::new();
        let last = sizes.len() - 1;
        for (l, &n) in sizes.iter().enumerate() {
            let layer: Vec<usize> = (1..=n)
                .map(|k| {
                    let (name, kind, act) = match l {
                        0 => (format!("I{k}"), UnitKind::Input, None),
                        _ if l == last => (format!("O{k}"), UnitKind::Output, Some(activations[l - 1])),
                        _ => (format!("H{l}_{k}"), UnitKind::Hidden, Some(activations[l - 1])),
                    };
                    net.push_unit(name, kind, act).expect("generated names are fresh")
                })
                .collect();
            for &to in &layer {
                for &from in &prev {
                    net.synapses.push(Synapse { from, to, weight: Rational::zero() });
                }
            }
            prev = layer;
        }
        net
    }

    fn push_unit(&mut self, name: String, kind: UnitKind, activation: Option<Activation>) -> Result<usize, MlpError> {
        if !valid_name(&name) {
            return Err(MlpError::BadUnitName(name));
        }
        if self.units.iter().any(|u| u.name == name) {
            return Err(MlpError::DuplicateUnit(name));
        }
        self.units.push(Unit { name, kind, activation });
        Ok(self.units.len() - 1)
    }

    pub fn add_input(&mut self, name: impl Into<String>) -> Result<usize, MlpError> {
        self.push_unit(name.into(), UnitKind::Input, None)
    }

    pub fn add_bias(&mut self, name: impl Into<String>) -> Result<usize, MlpError> {
        self.push_unit(name.into(), UnitKind::Bias, None)
    }

    pub fn add_hidden(&mut self, name: impl Into<String>, activation: Activation) -> Result<usize, MlpError> {
        self.push_unit(name.into(), UnitKind::Hidden, Some(activation))
    }

    pub fn add_output(&mut self, name: impl Into<String>, activation: Activation) -> Result<usize, MlpError> {
        self.push_unit(name.into(), UnitKind::Output, Some(activation))
    }

    pub fn connect(&mut self, from: usize, to: usize, weight: Rational) -> Result<(), MlpError> {
        self.unit(from)?;
        let target = self.unit(to)?;
        match target.kind {
            UnitKind::Input => return Err(MlpError::SynapseIntoSource("input", target.name.clone())),
            UnitKind::Bias => return Err(MlpError::SynapseIntoSource("bias", target.name.clone())),
            _ => {}
        }
        self.synapses.push(Synapse { from, to, weight });
        Ok(())
    }

    fn unit(&self, i: usize) -> Result<&Unit, MlpError> {
        self.units.get(i).ok_or(MlpError::NoSuchUnit(i))
    }

    pub fn unit_index(&self, name: &str) -> Option<usize> {
        self.units.iter().position(|u| u.name == name)
    }

    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    pub fn synapses(&self) -> &[Synapse] {
        &self.synapses
    }

    pub fn synapses_mut(&mut self) -> &mut [Synapse] {
        &mut self.synapses
    }

    pub fn inputs(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.units.len()).filter(|&i| self.units[i].kind == UnitKind::Input)
    }

    /// Units in an order where every synapse goes forward.
    pub fn topological_order(&self) -> Result<Vec<usize>, MlpError> {
        let n = self.units.len();
        let mut indegree = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in &self.synapses {
            if s.from >= n || s.to >= n {
                return Err(MlpError::NoSuchUnit(s.from.max(s.to)));
            }
            indegree[s.to] += 1;
            out[s.from].push(s.to);
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &out[u] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        match (0..n).find(|&i| indegree[i] > 0) {
            Some(i) => Err(MlpError::Cyclic(self.units[i].name.clone())),
            None => Ok(order),
        }
    }

    /// Checks names, activations, synapse targets and acyclicity.
    pub fn validate(&self) -> Result<(), MlpError> {
        let mut seen = BTreeSet::new();
        for u in &self.units {
            if !valid_name(&u.name) {
                return Err(MlpError::BadUnitName(u.name.clone()));
            }
            if !seen.insert(u.name.as_str()) {
                return Err(MlpError::DuplicateUnit(u.name.clone()));
            }
        }
        for s in &self.synapses {
            match self.unit(s.to)?.kind {
                UnitKind::Input => return Err(MlpError::SynapseIntoSource("input", self.units[s.to].name.clone())),
                UnitKind::Bias => return Err(MlpError::SynapseIntoSource("bias", self.units[s.to].name.clone())),
                _ => {}
            }
        }
        self.topological_order().map(|_| ())
    }

    /// Exact activations of all units on one input vector.
    pub fn forward(&self, input: &[Degree]) -> Result<Vec<Rational>, MlpError> {
        let order = self.topological_order()?;
        let mut incoming: Vec<Vec<&Synapse>> = vec![Vec::new(); self.units.len()];
        for s in &self.synapses {
            incoming[s.to].push(s);
        }
        let input_index: BTreeMap<usize, usize> = self.inputs().enumerate().map(|(k, u)| (u, k)).collect();
        if input.len() != input_index.len() {
            return Err(MlpError::DimensionMismatch {
                name: String::new(),
                expected: input_index.len(),
                found: input.len(),
            });
        }
        let mut act = vec![Rational::zero(); self.units.len()];
        for u in order {
            act[u] = match self.units[u].kind {
                UnitKind::Input => input[input_index[&u]].value().clone(),
                UnitKind::Bias => Rational::one(),
                UnitKind::Hidden | UnitKind::Output => {
                    let net: Rational = incoming[u].iter().map(|s| &s.weight * &act[s.from]).sum();
                    self.units[u].activation.expect("computed units carry an activation").apply(&net)
                }
            };
        }
        Ok(act)
    }
}

/// Named input vectors with components in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StimulusSet {
    stimuli: Vec<(String, Vec<Degree>)>,
}

impl StimulusSet {
    pub fn new(stimuli: Vec<(String, Vec<Degree>)>) -> Result<Self, MlpError> {
        let Some(dim) = stimuli.first().map(|s| s.1.len()) else {
            return Err(MlpError::EmptyStimuli);
        };
        let mut seen = BTreeSet::new();
        for (name, v) in &stimuli {
            if !seen.insert(name.as_str()) {
                return Err(MlpError::DuplicateStimulus(name.clone()));
            }
            if v.len() != dim {
                return Err(MlpError::DimensionMismatch { name: name.clone(), expected: dim, found: v.len() });
            }
        }
        Ok(StimulusSet { stimuli })
    }

    pub fn len(&self) -> usize {
        self.stimuli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stimuli.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.stimuli[0].1.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Degree])> {
        self.stimuli.iter().map(|(n, v)| (n.as_str(), v.as_slice()))
    }
}

/// The weighted conditional knowledge base of `net` (Gödel logic; the KB has
/// only atomic concepts, so the choice of logic does not affect it).
pub fn mlp_to_kb(net: &FeedForwardNet) -> Result<WeightedKb, MlpError> {
    net.validate()?;
    let names: Vec<&str> = net.units.iter().map(|u| u.name.as_str()).collect();
    let mut kb = WeightedKb::new(Logic::Godel, Signature::new(&names, &[] as &[&str], &[] as &[&str]));
    for (i, unit) in net.units.iter().enumerate() {
        if !unit.kind.is_computed() {
            continue;
        }
        kb.distinguished.push(unit.name.clone());
        for s in net.synapses.iter().filter(|s| s.to == i) {
            kb.weighted.push(WeightedInclusion::new(
                unit.name.clone(),
                Concept::atom(net.units[s.from].name.clone()),
                s.weight.clone(),
            ));
        }
    }
    Ok(kb)
}

/// The interpretation over the stimuli: `C_h^I(x)` is the activation of `h`
/// on stimulus `x`.
pub fn build_interpretation(net: &FeedForwardNet, stimuli: &StimulusSet) -> Result<FuzzyInterpretation, MlpError> {
    net.validate()?;
    let domain: Vec<String> = stimuli.iter().map(|(n, _)| n.to_string()).collect();
    let mut interp = FuzzyInterpretation::new(Logic::Godel, domain)?;
    let mut columns: Vec<Vec<Degree>> = vec![Vec::with_capacity(stimuli.len()); net.units.len()];
    for (name, input) in stimuli.iter() {
        let acts = net.forward(input).map_err(|e| match e {
            MlpError::DimensionMismatch { expected, found, .. } => {
                MlpError::DimensionMismatch { name: name.to_string(), expected, found }
            }
            e => e,
        })?;
        for (u, a) in acts.into_iter().enumerate() {
            let d = Degree::new(a.clone()).map_err(|_| MlpError::ActivationOutOfRange {
                unit: net.units[u].name.clone(),
                stimulus: name.to_string(),
                value: a,
            })?;
            columns[u].push(d);
        }
    }
    for (unit, values) in net.units.iter().zip(columns) {
        interp.set_concept_values(&unit.name, values)?;
    }
    Ok(interp)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkReport {
    pub kb: WeightedKb,
    pub interpretation: FuzzyInterpretation,
    pub fm: FmDiagnosis,
    pub coherence: PairReport,
    pub tables: Vec<WeightTable>,
}

impl NetworkReport {
    pub fn is_faithful(&self) -> bool {
        self.fm.is_fm_model()
    }

    pub fn is_coherent(&self) -> bool {
        self.coherence.holds()
    }
}

/// Builds the KB and interpretation of `net` over `stimuli` and checks that
/// the interpretation is a faithful multipreference model of the KB.
pub fn verify_network_faithfulness(net: &FeedForwardNet, stimuli: &StimulusSet) -> Result<NetworkReport, MlpError> {
    let kb = mlp_to_kb(net)?;
    let interpretation = build_interpretation(net, stimuli)?;
    let eval = |e| -> MlpError { unreachable!("atomic KB over declared names: {e}") };
    let fm = weighted::is_fm_model(&interpretation, &kb).map_err(eval)?;
    let coherence = weighted::is_coherent(&interpretation, &kb).map_err(eval)?;
    let tables = weighted::weight_tables(&interpretation, &kb).map_err(eval)?;
    Ok(NetworkReport { kb, interpretation, fm, coherence, tables })
}
