//! JSON-lines output.
//!
//! Every stream starts with a header record naming the format version and
//! the command; each later line is one object with a `record` field giving
//! its type. Rationals are written as strings (`"4/5"`, `"-70"`) so no
//! precision is lost.

use std::io::{self, Write};

use alcft_core::engine::SearchStats;
use alcft_core::interpretation::{FuzzyInterpretation, StrictViolation};
use alcft_core::klm::Witness;
use alcft_core::weighted::{PairViolation, PairViolationKind, WeightTable};
use serde_json::{json, Value};

pub const FORMAT: &str = "alcft-records";
pub const VERSION: u32 = 1;

pub fn header(command: &str) -> Value {
    json!({ "record": "header", "format": FORMAT, "version": VERSION, "command": command })
}

pub fn write(out: &mut dyn Write, record: &Value) -> io::Result<()> {
    writeln!(out, "{record}")
}

pub fn interpretation(i: &FuzzyInterpretation) -> Value {
    let n = i.size();
    let concepts: serde_json::Map<String, Value> = i
        .concept_valuations()
        .map(|(name, values)| (name.to_string(), values.iter().map(|d| d.to_string()).collect()))
        .collect();
    let roles: serde_json::Map<String, Value> = i
        .role_valuations()
        .map(|(name, values)| {
            let rows: Vec<Vec<String>> = values.chunks(n).map(|r| r.iter().map(|d| d.to_string()).collect()).collect();
            (name.to_string(), json!(rows))
        })
        .collect();
    let individuals: serde_json::Map<String, Value> =
        i.individual_bindings().map(|(name, x)| (name.to_string(), json!(i.domain()[x]))).collect();
    json!({
        "logic": i.logic().name(),
        "domain": i.domain(),
        "concepts": concepts,
        "roles": roles,
        "individuals": individuals,
    })
}

pub fn strict_violation(v: &StrictViolation) -> Value {
    json!({
        "record": "strict-violation",
        "path": v.path.to_string(),
        "axiom": v.axiom.to_string(),
        "degree": v.degree.to_string(),
    })
}

pub fn weight_table(t: &WeightTable, domain: &[String]) -> Value {
    let rows: Vec<Value> = t
        .degrees
        .iter()
        .zip(&t.weights)
        .zip(domain)
        .map(|((d, w), x)| json!({ "element": x, "degree": d.to_string(), "weight": w.to_string() }))
        .collect();
    json!({ "record": "weights", "concept": t.concept, "elements": rows })
}

pub fn pair_violation(v: &PairViolation, domain: &[String]) -> Value {
    let kind = match v.kind {
        PairViolationKind::PreferenceWithoutWeight => "preference-without-weight",
        PairViolationKind::WeightWithoutPreference => "weight-without-preference",
    };
    json!({
        "record": "pair-violation",
        "kind": kind,
        "concept": v.concept,
        "x": domain[v.x],
        "y": domain[v.y],
        "degree_x": v.degree_x.to_string(),
        "degree_y": v.degree_y.to_string(),
        "weight_x": v.weight_x.to_string(),
        "weight_y": v.weight_y.to_string(),
    })
}

pub fn search_stats(s: &SearchStats) -> Value {
    json!({
        "record": "search",
        "examined": s.examined,
        "models": s.models,
        "space": s.space.map(|n| n.to_string()),
        "truncated": s.truncated,
        "cancelled": s.cancelled,
        "max_domain": s.max_domain,
        "denominator": s.denominator,
    })
}

pub fn witness(w: &Witness) -> Value {
    let premises: Vec<Value> =
        w.premises.iter().map(|(ax, d)| json!({ "axiom": ax.to_string(), "degree": d.to_string() })).collect();
    let instantiation: serde_json::Map<String, Value> =
        w.instantiation.iter().map(|(m, c)| (m.to_string(), json!(c.to_string()))).collect();
    json!({
        "record": "witness",
        "postulate": w.postulate.name(),
        "instantiation": instantiation,
        "premises": premises,
        "conclusion": { "axiom": w.conclusion.0.to_string(), "degree": w.conclusion.1.to_string() },
        "interpretation": interpretation(&w.interpretation),
    })
}
