//! The `.fint` interpretation format.
//!
//! ```text
//! logic godel
//! domain reddy opus
//! concept Bird reddy=1 opus=0.8
//! role has_Wings reddy,reddy=1 opus,opus=1
//! individual tweety reddy
//! ```
//!
//! Entries that are not listed are 0. A concept or role line without
//! entries declares an all-zero valuation. Without a `logic` line the
//! interpretation uses Gödel logic; callers that evaluate against a
//! knowledge base override it with the knowledge base's logic.

use std::collections::HashSet;
use std::fmt::Write as _;

use alcft_core::{Degree, Element, FuzzyInterpretation, Logic, Rational};

use crate::error::{ParseError, ParseErrorKind};
use crate::lex::{tokenize, Cursor, Spanned, Tok};

const KEYWORDS: [&str; 5] = ["logic", "domain", "concept", "role", "individual"];

type Res<T> = Result<T, (usize, ParseErrorKind)>;

fn syntax(cur: &Cursor<'_>, expected: &str) -> (usize, ParseErrorKind) {
    (cur.col(), ParseErrorKind::Syntax { expected: vec![expected.to_string()], found: cur.found() })
}

fn ident<'a>(cur: &mut Cursor<'a>, what: &str) -> Res<(usize, &'a str)> {
    let col = cur.col();
    match cur.peek() {
        Some(Tok::Ident(s)) => {
            cur.next();
            Ok((col, s.as_str()))
        }
        _ => Err(syntax(cur, what)),
    }
}

fn expect(cur: &mut Cursor<'_>, tok: Tok) -> Res<()> {
    if cur.peek() == Some(&tok) {
        cur.next();
        Ok(())
    } else {
        Err(syntax(cur, &tok.to_string()))
    }
}

fn element(cur: &mut Cursor<'_>, interp: &FuzzyInterpretation) -> Res<Element> {
    let (col, name) = ident(cur, "domain element")?;
    interp.element(name).ok_or_else(|| (col, ParseErrorKind::UnknownElement(name.to_string())))
}

fn degree(cur: &mut Cursor<'_>) -> Res<Degree> {
    let col = cur.col();
    let Some(Tok::Number(s)) = cur.peek() else {
        return Err(syntax(cur, "degree"));
    };
    cur.next();
    let r: Rational = s.parse().map_err(|_| (col, ParseErrorKind::BadNumber(s.clone())))?;
    Degree::new(r).map_err(|e| (col, ParseErrorKind::DegreeOutOfRange(e.0)))
}

struct Line<'t> {
    number: usize,
    text: &'t str,
    toks: Vec<Spanned>,
}

/// Parses a `.fint` text.
pub fn parse_interpretation(text: &str) -> Result<FuzzyInterpretation, ParseError> {
    let mut lines = Vec::new();
    for (i, text) in text.lines().enumerate() {
        let toks = tokenize(text).map_err(|e| ParseError::at(i + 1, e.col, ParseErrorKind::BadCharacter(e.ch)))?;
        if toks.is_empty() {
            continue;
        }
        match &toks[0].tok {
            Tok::Ident(k) if KEYWORDS.contains(&k.as_str()) => {}
            other => {
                let expected = KEYWORDS.iter().map(|k| format!("`{k}`")).collect();
                return Err(ParseError::at(i + 1, 1, ParseErrorKind::Syntax { expected, found: other.to_string() }));
            }
        }
        lines.push(Line { number: i + 1, text, toks });
    }
    let keyword = |l: &Line<'_>| match &l.toks[0].tok {
        Tok::Ident(k) => k.clone(),
        _ => unreachable!(),
    };

    let mut logic = None;
    let mut domain: Vec<String> = Vec::new();
    for line in &lines {
        let err = |(c, k)| ParseError::at(line.number, c, k);
        let mut cur = Cursor::new(&line.toks, line.text);
        cur.next();
        match keyword(line).as_str() {
            "logic" => {
                let (col, name) = ident(&mut cur, "logic name").map_err(err)?;
                if logic.is_some() {
                    return Err(err((1, ParseErrorKind::Duplicate("logic".into()))));
                }
                let l: Logic = name.parse().map_err(|_| err((col, ParseErrorKind::UnknownLogic(name.into()))))?;
                logic = Some(l);
            }
            "domain" => {
                while !cur.at_end() {
                    let (col, name) = ident(&mut cur, "element name").map_err(err)?;
                    if domain.iter().any(|d| d == name) {
                        return Err(err((col, ParseErrorKind::Duplicate(name.into()))));
                    }
                    domain.push(name.to_string());
                }
            }
            _ => continue,
        }
        if !cur.at_end() {
            return Err(err(syntax(&cur, "end of line")));
        }
    }
    if domain.is_empty() {
        return Err(ParseError::at(1, 1, ParseErrorKind::Missing("domain")));
    }
    let mut interp = FuzzyInterpretation::new(logic.unwrap_or(Logic::Godel), domain).expect("nonempty, distinct");

    let mut seen = HashSet::new();
    for line in &lines {
        let err = |(c, k)| ParseError::at(line.number, c, k);
        let mut cur = Cursor::new(&line.toks, line.text);
        cur.next();
        let k = keyword(line);
        match k.as_str() {
            "concept" => {
                let (_, name) = ident(&mut cur, "concept name").map_err(err)?;
                interp.declare_concept(name);
                while !cur.at_end() {
                    let col = cur.col();
                    let x = element(&mut cur, &interp).map_err(err)?;
                    expect(&mut cur, Tok::Eq).map_err(err)?;
                    let d = degree(&mut cur).map_err(err)?;
                    if !seen.insert(("c", name, x, 0)) {
                        let entry = format!("{name}({})", interp.domain()[x]);
                        return Err(err((col, ParseErrorKind::Duplicate(entry))));
                    }
                    interp.set_concept(name, x, d).expect("element in range");
                }
            }
            "role" => {
                let (_, name) = ident(&mut cur, "role name").map_err(err)?;
                interp.declare_role(name);
                while !cur.at_end() {
                    let col = cur.col();
                    let x = element(&mut cur, &interp).map_err(err)?;
                    expect(&mut cur, Tok::Comma).map_err(err)?;
                    let y = element(&mut cur, &interp).map_err(err)?;
                    expect(&mut cur, Tok::Eq).map_err(err)?;
                    let d = degree(&mut cur).map_err(err)?;
                    if !seen.insert(("r", name, x, y)) {
                        let entry = format!("{name}({},{})", interp.domain()[x], interp.domain()[y]);
                        return Err(err((col, ParseErrorKind::Duplicate(entry))));
                    }
                    interp.set_role(name, x, y, d).expect("elements in range");
                }
            }
            "individual" => {
                let (col, name) = ident(&mut cur, "individual name").map_err(err)?;
                let x = element(&mut cur, &interp).map_err(err)?;
                if interp.individual(name).is_some() {
                    return Err(err((col, ParseErrorKind::Duplicate(name.into()))));
                }
                interp.bind_individual(name, x).expect("element in range");
                if !cur.at_end() {
                    return Err(err(syntax(&cur, "end of line")));
                }
            }
            _ => {}
        }
    }
    Ok(interp)
}

/// Canonical `.fint` text listing only the nonzero entries.
pub fn serialize_interpretation(interp: &FuzzyInterpretation) -> String {
    let dom = interp.domain();
    let n = dom.len();
    let mut out = format!("logic {}\ndomain {}\n", interp.logic().name(), dom.join(" "));
    for (name, values) in interp.concept_valuations() {
        out.push_str("concept ");
        out.push_str(name);
        for (x, d) in values.iter().enumerate().filter(|(_, d)| !d.is_zero()) {
            let _ = write!(out, " {}={d}", dom[x]);
        }
        out.push('\n');
    }
    for (name, values) in interp.role_valuations() {
        out.push_str("role ");
        out.push_str(name);
        for (k, d) in values.iter().enumerate().filter(|(_, d)| !d.is_zero()) {
            let _ = write!(out, " {},{}={d}", dom[k / n], dom[k % n]);
        }
        out.push('\n');
    }
    for (name, x) in interp.individual_bindings() {
        let _ = writeln!(out, "individual {name} {}", dom[x]);
    }
    out
}
