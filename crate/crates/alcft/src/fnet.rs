//! The `.fnet` network and `.fstim` stimulus formats.
//!
//! ```text
//! layer input I1 I2
//! layer hidden hard-sigmoid H1 H2 H3
//! layer output clipped-linear O1
//! bias B
//! synapse I1 H1 1/2
//! synapse B H1 -3
//! ```
//!
//! Units are declared before synapses are read, so the two kinds of line
//! may be interleaved. A stimulus file has one line per stimulus, giving
//! the input activations in the order the input units were declared:
//!
//! ```text
//! stimulus x1 0 1/2
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use alcft_core::mlp::{Activation, FeedForwardNet, MlpError, StimulusSet, UnitKind};
use alcft_core::{Degree, Rational};

use crate::error::{ParseError, ParseErrorKind};
use crate::lex::{tokenize, Cursor, Spanned, Tok};

type Res<T> = Result<T, (usize, ParseErrorKind)>;

fn syntax(cur: &Cursor<'_>, expected: &[&str]) -> (usize, ParseErrorKind) {
    let expected = expected.iter().map(|s| s.to_string()).collect();
    (cur.col(), ParseErrorKind::Syntax { expected, found: cur.found() })
}

fn ident<'a>(cur: &mut Cursor<'a>, what: &str) -> Res<(usize, &'a str)> {
    let col = cur.col();
    match cur.peek() {
        Some(Tok::Ident(s)) => {
            cur.next();
            Ok((col, s.as_str()))
        }
        _ => Err(syntax(cur, &[what])),
    }
}

fn number(cur: &mut Cursor<'_>) -> Res<(usize, Rational)> {
    let col = cur.col();
    let Some(Tok::Number(s)) = cur.peek() else {
        return Err(syntax(cur, &["number"]));
    };
    cur.next();
    let r = s.parse().map_err(|_| (col, ParseErrorKind::BadNumber(s.clone())))?;
    Ok((col, r))
}

fn end(cur: &Cursor<'_>) -> Res<()> {
    if cur.at_end() {
        Ok(())
    } else {
        Err(syntax(cur, &["end of line"]))
    }
}

fn lines(text: &str, keywords: &[&str]) -> Result<Vec<(usize, String, Vec<Spanned>)>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks = tokenize(line).map_err(|e| ParseError::at(i + 1, e.col, ParseErrorKind::BadCharacter(e.ch)))?;
        if toks.is_empty() {
            continue;
        }
        match &toks[0].tok {
            Tok::Ident(k) if keywords.contains(&k.as_str()) => out.push((i + 1, line.to_string(), toks)),
            other => {
                let expected = keywords.iter().map(|k| format!("`{k}`")).collect();
                return Err(ParseError::at(i + 1, 1, ParseErrorKind::Syntax { expected, found: other.to_string() }));
            }
        }
    }
    Ok(out)
}

/// Parses a `.fnet` text into a validated network.
pub fn parse_network(text: &str) -> Result<FeedForwardNet, ParseError> {
    let lines = lines(text, &["layer", "bias", "synapse"])?;
    let mut net = FeedForwardNet::new();
    let mut declared_at = HashMap::new();

    for (line_no, text, toks) in &lines {
        let err = |(c, k)| ParseError::at(*line_no, c, k);
        let mut cur = Cursor::new(toks, text);
        let Some(Tok::Ident(keyword)) = cur.next() else { unreachable!() };
        let (kind, activation) = match keyword.as_str() {
            "bias" => (UnitKind::Bias, None),
            "layer" => {
                let (col, kind) = ident(&mut cur, "`input`, `hidden` or `output`").map_err(err)?;
                let kind = match kind {
                    "input" => UnitKind::Input,
                    "hidden" => UnitKind::Hidden,
                    "output" => UnitKind::Output,
                    other => {
                        let expected = vec!["`input`".into(), "`hidden`".into(), "`output`".into()];
                        return Err(err((col, ParseErrorKind::Syntax { expected, found: format!("`{other}`") })));
                    }
                };
                let activation = if kind.is_computed() {
                    let (col, name) = ident(&mut cur, "activation").map_err(err)?;
                    let a: Activation = name.parse().map_err(|e| err((col, ParseErrorKind::Network(e))))?;
                    Some(a)
                } else {
                    None
                };
                (kind, activation)
            }
            _ => continue,
        };
        if cur.at_end() {
            return Err(err(syntax(&cur, &["unit name"])));
        }
        while !cur.at_end() {
            let (col, name) = ident(&mut cur, "unit name").map_err(err)?;
            let added = match (kind, activation) {
                (UnitKind::Input, _) => net.add_input(name),
                (UnitKind::Bias, _) => net.add_bias(name),
                (UnitKind::Hidden, Some(a)) => net.add_hidden(name, a),
                (_, a) => net.add_output(name, a.expect("computed")),
            };
            added.map_err(|e| err((col, ParseErrorKind::Network(e))))?;
            declared_at.insert(name.to_string(), *line_no);
        }
    }

    for (line_no, text, toks) in &lines {
        let err = |(c, k)| ParseError::at(*line_no, c, k);
        let mut cur = Cursor::new(toks, text);
        if cur.next() != Some(&Tok::Ident("synapse".into())) {
            continue;
        }
        let unit = |cur: &mut Cursor<'_>| -> Res<usize> {
            let (col, name) = ident(cur, "unit name")?;
            net.unit_index(name).ok_or_else(|| (col, ParseErrorKind::UnknownUnit(name.to_string())))
        };
        let from = unit(&mut cur).map_err(err)?;
        let tcol = cur.col();
        let to = unit(&mut cur).map_err(err)?;
        let (_, weight) = number(&mut cur).map_err(err)?;
        end(&cur).map_err(err)?;
        net.connect(from, to, weight).map_err(|e| err((tcol, ParseErrorKind::Network(e))))?;
    }

    net.validate().map_err(|e| {
        let line = match &e {
            MlpError::Cyclic(name) => declared_at.get(name).copied().unwrap_or(1),
            _ => 1,
        };
        ParseError::at(line, 1, ParseErrorKind::Network(e))
    })?;
    Ok(net)
}

/// Canonical `.fnet` text. Consecutive units of the same kind and
/// activation share a `layer` line.
pub fn serialize_network(net: &FeedForwardNet) -> String {
    let mut out = String::new();
    let units = net.units();
    let mut i = 0;
    while i < units.len() {
        let (kind, act) = (units[i].kind, units[i].activation);
        let j = (i..units.len()).find(|&j| units[j].kind != kind || units[j].activation != act).unwrap_or(units.len());
        let names: Vec<&str> = units[i..j].iter().map(|u| u.name.as_str()).collect();
        let head = match (kind, act) {
            (UnitKind::Input, _) => "layer input".to_string(),
            (UnitKind::Bias, _) => "bias".to_string(),
            (UnitKind::Hidden, Some(a)) => format!("layer hidden {a}"),
            (_, a) => format!("layer output {}", a.expect("computed")),
        };
        let _ = writeln!(out, "{head} {}", names.join(" "));
        i = j;
    }
    for s in net.synapses() {
        let _ = writeln!(out, "synapse {} {} {}", units[s.from].name, units[s.to].name, s.weight);
    }
    out
}

/// Parses a `.fstim` text.
pub fn parse_stimuli(text: &str) -> Result<StimulusSet, ParseError> {
    let lines = lines(text, &["stimulus"])?;
    let mut stimuli = Vec::new();
    for (line_no, text, toks) in &lines {
        let err = |(c, k)| ParseError::at(*line_no, c, k);
        let mut cur = Cursor::new(toks, text);
        cur.next();
        let (_, name) = ident(&mut cur, "stimulus name").map_err(err)?;
        let mut values = Vec::new();
        while !cur.at_end() {
            let (col, r) = number(&mut cur).map_err(err)?;
            values.push(Degree::new(r).map_err(|e| err((col, ParseErrorKind::DegreeOutOfRange(e.0))))?);
        }
        stimuli.push((name.to_string(), values));
    }
    StimulusSet::new(stimuli).map_err(|e| {
        let line = match &e {
            MlpError::DuplicateStimulus(n) | MlpError::DimensionMismatch { name: n, .. } => lines
                .iter()
                .rev()
                .find(|(_, _, t)| t.get(1).map(|s| &s.tok) == Some(&Tok::Ident(n.clone())))
                .map_or(1, |l| l.0),
            _ => 1,
        };
        ParseError::at(line, 1, ParseErrorKind::Network(e))
    })
}

pub fn serialize_stimuli(stimuli: &StimulusSet) -> String {
    let mut out = String::new();
    for (name, values) in stimuli.iter() {
        out.push_str("stimulus ");
        out.push_str(name);
        for v in values {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}
