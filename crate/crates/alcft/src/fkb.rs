//! The `.fkb` knowledge base format.
//!
//! ```text
//! logic godel
//! concepts Bird Penguin Fly
//! roles has_Wings
//! individuals tweety
//! distinguished Bird Penguin
//! tbox: (and Bird Penguin) <= Bot >= 1
//! wtbox Penguin: T(Penguin) <= Fly @ -70
//! abox: Bird(tweety) >= 0.9
//! abox: has_Wings(tweety,tweety) >= 1
//! ```
//!
//! Declarations are read first, so axioms may precede the names they use.
//! Declaration lines may repeat; their names accumulate.

use std::collections::HashMap;
use std::fmt::Write as _;

use alcft_core::syntax::{
    AxiomKind, AxiomPath, Comparator, Concept, FuzzyAxiom, Signature, ViolationKind, WeightedInclusion, WeightedKb,
};
use alcft_core::{Degree, Logic, Rational};

use crate::error::{NameKind, ParseError, ParseErrorKind};
use crate::lex::{tokenize, Cursor, Tok};

/// Names that cannot be declared because the concept syntax uses them.
pub const RESERVED: [&str; 3] = ["Top", "Bot", "T"];

const DECLARATIONS: [&str; 5] = ["logic", "concepts", "roles", "individuals", "distinguished"];

fn syntax(cur: &Cursor<'_>, expected: &[&str]) -> (usize, ParseErrorKind) {
    let expected = expected.iter().map(|s| s.to_string()).collect();
    (cur.col(), ParseErrorKind::Syntax { expected, found: cur.found() })
}

type Res<T> = Result<T, (usize, ParseErrorKind)>;

/// Parses one line's worth of concept and axiom syntax against a signature.
struct LineParser<'a, 's> {
    cur: Cursor<'a>,
    sig: &'s Signature,
}

impl<'a> LineParser<'a, '_> {
    fn expect(&mut self, tok: Tok) -> Res<()> {
        if self.cur.peek() == Some(&tok) {
            self.cur.next();
            Ok(())
        } else {
            Err(syntax(&self.cur, &[&tok.to_string()]))
        }
    }

    fn ident(&mut self, what: &str) -> Res<(usize, &'a str)> {
        let col = self.cur.col();
        match self.cur.peek() {
            Some(Tok::Ident(s)) => {
                self.cur.next();
                Ok((col, s.as_str()))
            }
            _ => Err(syntax(&self.cur, &[what])),
        }
    }

    fn declared(&self, col: usize, kind: NameKind, name: &str) -> Res<()> {
        let ok = match kind {
            NameKind::Concept => self.sig.has_concept(name),
            NameKind::Role => self.sig.has_role(name),
            NameKind::Individual => self.sig.has_individual(name),
        };
        if ok {
            Ok(())
        } else {
            Err((col, ParseErrorKind::Undeclared(kind, name.to_string())))
        }
    }

    fn name(&mut self, kind: NameKind) -> Res<String> {
        let what = format!("{kind} name");
        let (col, name) = self.ident(&what)?;
        self.declared(col, kind, name)?;
        Ok(name.to_string())
    }

    fn end(&self) -> Res<()> {
        if self.cur.at_end() {
            Ok(())
        } else {
            Err(syntax(&self.cur, &["end of line"]))
        }
    }

    fn concept(&mut self, in_typicality: bool) -> Res<Concept> {
        let col = self.cur.col();
        match self.cur.peek() {
            Some(Tok::Ident(s)) if s == "T" && self.cur.peek2() == Some(&Tok::LParen) => {
                if in_typicality {
                    return Err((col, ParseErrorKind::NestedTypicality));
                }
                self.cur.next();
                self.cur.next();
                let c = self.concept(true)?;
                self.expect(Tok::RParen)?;
                Ok(Concept::typical(c))
            }
            Some(Tok::Ident(s)) if s == "Top" => {
                self.cur.next();
                Ok(Concept::Top)
            }
            Some(Tok::Ident(s)) if s == "Bot" => {
                self.cur.next();
                Ok(Concept::Bottom)
            }
            Some(Tok::Ident(_)) => Ok(Concept::atom(self.name(NameKind::Concept)?)),
            Some(Tok::LParen) => {
                self.cur.next();
                let (kcol, keyword) = self.ident("`not`, `and`, `or`, `some` or `all`")?;
                let c = match keyword {
                    "not" => Concept::not(self.concept(in_typicality)?),
                    "and" | "or" => {
                        let a = self.concept(in_typicality)?;
                        let b = self.concept(in_typicality)?;
                        if keyword == "and" {
                            Concept::and(a, b)
                        } else {
                            Concept::or(a, b)
                        }
                    }
                    "some" | "all" => {
                        let r = self.name(NameKind::Role)?;
                        let c = self.concept(in_typicality)?;
                        if keyword == "some" {
                            Concept::exists(r, c)
                        } else {
                            Concept::forall(r, c)
                        }
                    }
                    other => {
                        let expected = ["not", "and", "or", "some", "all"].iter().map(|k| format!("`{k}`")).collect();
                        return Err((kcol, ParseErrorKind::Syntax { expected, found: format!("`{other}`") }));
                    }
                };
                self.expect(Tok::RParen)?;
                Ok(c)
            }
            _ => Err(syntax(&self.cur, &["concept"])),
        }
    }

    fn number(&mut self) -> Res<(usize, Rational)> {
        let col = self.cur.col();
        match self.cur.peek() {
            Some(Tok::Number(s)) => {
                self.cur.next();
                let r = s.parse().map_err(|_| (col, ParseErrorKind::BadNumber(s.clone())))?;
                Ok((col, r))
            }
            _ => Err(syntax(&self.cur, &["number"])),
        }
    }

    fn comparator(&mut self) -> Res<Comparator> {
        let c = match self.cur.peek() {
            Some(Tok::Ge) => Comparator::Ge,
            Some(Tok::Le) => Comparator::Le,
            Some(Tok::Gt) => Comparator::Gt,
            Some(Tok::Lt) => Comparator::Lt,
            _ => return Err(syntax(&self.cur, &["`>=`", "`<=`", "`>`", "`<`"])),
        };
        self.cur.next();
        Ok(c)
    }

    fn threshold(&mut self) -> Res<(Comparator, Degree)> {
        let cmp = self.comparator()?;
        let (col, value) = self.number()?;
        let n = Degree::new(value).map_err(|e| (col, ParseErrorKind::ThresholdOutOfRange(e.0)))?;
        Ok((cmp, n))
    }

    /// `E <= E θ n`, `E(a) θ n` or `r(a,b) θ n`.
    fn axiom(&mut self) -> Res<FuzzyAxiom> {
        let kind = match (self.cur.peek(), self.cur.peek2()) {
            (Some(Tok::Ident(name)), Some(Tok::LParen)) if !RESERVED.contains(&name.as_str()) => {
                let col = self.cur.col();
                self.cur.next();
                self.cur.next();
                let a = self.name(NameKind::Individual)?;
                if self.cur.peek() == Some(&Tok::Comma) {
                    self.declared(col, NameKind::Role, name)?;
                    self.cur.next();
                    let b = self.name(NameKind::Individual)?;
                    self.expect(Tok::RParen)?;
                    AxiomKind::RoleAssertion { role: name.clone(), subject: a, object: b }
                } else {
                    self.declared(col, NameKind::Concept, name)?;
                    self.expect(Tok::RParen)?;
                    AxiomKind::ConceptAssertion { concept: Concept::atom(name.clone()), individual: a }
                }
            }
            _ => {
                let c = self.concept(false)?;
                if self.cur.peek() == Some(&Tok::LParen) {
                    self.cur.next();
                    let a = self.name(NameKind::Individual)?;
                    self.expect(Tok::RParen)?;
                    AxiomKind::ConceptAssertion { concept: c, individual: a }
                } else {
                    if self.cur.peek() != Some(&Tok::Le) {
                        return Err(syntax(&self.cur, &["`<=`", "`(`"]));
                    }
                    self.cur.next();
                    let d = self.concept(false)?;
                    AxiomKind::Inclusion { lhs: c, rhs: d }
                }
            }
        };
        let (comparator, threshold) = self.threshold()?;
        self.end()?;
        Ok(FuzzyAxiom { kind, comparator, threshold })
    }

    /// `Name: T(Name) <= E @ w`, after the `wtbox` keyword.
    fn weighted(&mut self, kb: &WeightedKb) -> Res<WeightedInclusion> {
        let (hcol, header) = self.ident("concept name")?;
        if !kb.is_distinguished(header) {
            return Err((hcol, ParseErrorKind::Invalid(ViolationKind::SubjectNotDistinguished(header.to_string()))));
        }
        self.expect(Tok::Colon)?;
        let scol = self.cur.col();
        match self.cur.peek() {
            Some(Tok::Ident(t)) if t == "T" => {
                self.cur.next();
            }
            _ => return Err(syntax(&self.cur, &["`T`"])),
        }
        self.expect(Tok::LParen)?;
        let subject = self.concept(true)?;
        self.expect(Tok::RParen)?;
        if subject != Concept::atom(header) {
            let subject = subject.to_string();
            return Err((scol, ParseErrorKind::SubjectMismatch { header: header.to_string(), subject }));
        }
        self.expect(Tok::Le)?;
        let ccol = self.cur.col();
        let consequent = self.concept(false)?;
        if consequent.has_typicality() {
            return Err((ccol, ParseErrorKind::TypicalityInConsequent));
        }
        self.expect(Tok::At)?;
        let (_, weight) = self.number()?;
        self.end()?;
        Ok(WeightedInclusion::new(header, consequent, weight))
    }
}

fn on_line(line: usize) -> impl Fn((usize, ParseErrorKind)) -> ParseError {
    move |(column, kind)| ParseError { line, column, kind }
}

fn parse_single<T>(
    text: &str,
    sig: &Signature,
    f: impl FnOnce(&mut LineParser<'_, '_>) -> Res<T>,
) -> Result<T, ParseError> {
    let toks =
        tokenize(text).map_err(|e| ParseError { line: 1, column: e.col, kind: ParseErrorKind::BadCharacter(e.ch) })?;
    let mut p = LineParser { cur: Cursor::new(&toks, text), sig };
    f(&mut p).map_err(on_line(1))
}

/// Parses a single axiom such as `T(Penguin) <= Fly >= 0.5`.
pub fn parse_axiom(text: &str, sig: &Signature) -> Result<FuzzyAxiom, ParseError> {
    parse_single(text, sig, |p| p.axiom())
}

/// Parses a single concept expression.
pub fn parse_concept(text: &str, sig: &Signature) -> Result<Concept, ParseError> {
    parse_single(text, sig, |p| {
        let c = p.concept(false)?;
        p.end()?;
        Ok(c)
    })
}

struct Line<'t> {
    number: usize,
    text: &'t str,
    toks: Vec<crate::lex::Spanned>,
}

fn declare(kb: &mut WeightedKb, logic_seen: &mut bool, line: &Line<'_>) -> Result<(), ParseError> {
    let err = on_line(line.number);
    let mut cur = Cursor::new(&line.toks, line.text);
    let Some(Tok::Ident(keyword)) = cur.next() else { unreachable!() };
    if keyword == "logic" {
        let col = cur.col();
        let Some(Tok::Ident(name)) = cur.next() else {
            return Err(err(syntax(&cur, &["logic name"])));
        };
        if *logic_seen {
            return Err(err((1, ParseErrorKind::Duplicate("logic".into()))));
        }
        kb.logic = name.parse().map_err(|_| err((col, ParseErrorKind::UnknownLogic(name.clone()))))?;
        *logic_seen = true;
        if !cur.at_end() {
            return Err(err(syntax(&cur, &["end of line"])));
        }
        return Ok(());
    }
    while !cur.at_end() {
        let col = cur.col();
        let Some(Tok::Ident(name)) = cur.next() else {
            cur = Cursor::new(&line.toks, line.text);
            while cur.col() < col {
                cur.next();
            }
            return Err(err(syntax(&cur, &["name"])));
        };
        let invalid = |v: ViolationKind| err((col, ParseErrorKind::Invalid(v)));
        if keyword == "distinguished" {
            if !kb.signature.has_concept(name) {
                return Err(invalid(ViolationKind::DistinguishedNotDeclared(name.clone())));
            }
            if kb.is_distinguished(name) {
                return Err(invalid(ViolationKind::DuplicateDistinguished(name.clone())));
            }
            kb.distinguished.push(name.clone());
            continue;
        }
        if RESERVED.contains(&name.as_str()) {
            return Err(err((col, ParseErrorKind::ReservedName(name.clone()))));
        }
        let list = match keyword.as_str() {
            "concepts" => &mut kb.signature.concepts,
            "roles" => &mut kb.signature.roles,
            _ => &mut kb.signature.individuals,
        };
        if list.contains(name) {
            return Err(invalid(ViolationKind::DuplicateName(name.clone())));
        }
        list.push(name.clone());
    }
    Ok(())
}

/// Parses a `.fkb` text into a structurally valid knowledge base.
pub fn parse_kb(text: &str) -> Result<WeightedKb, ParseError> {
    let mut lines = Vec::new();
    for (i, text) in text.lines().enumerate() {
        let toks = tokenize(text).map_err(|e| ParseError {
            line: i + 1,
            column: e.col,
            kind: ParseErrorKind::BadCharacter(e.ch),
        })?;
        if !toks.is_empty() {
            lines.push(Line { number: i + 1, text, toks });
        }
    }

    let keyword = |l: &Line<'_>| match &l.toks[0].tok {
        Tok::Ident(k) => Some(k.clone()),
        _ => None,
    };
    let mut kb = WeightedKb::new(Logic::Godel, Signature::default());
    let mut logic_seen = false;
    // Names first, then distinguished concepts, so every reference resolves.
    for pass in ["names", "distinguished"] {
        for line in &lines {
            let Some(k) = keyword(line) else { continue };
            let is_decl = DECLARATIONS.contains(&k.as_str());
            if is_decl && ((k == "distinguished") == (pass == "distinguished")) {
                declare(&mut kb, &mut logic_seen, line)?;
            }
        }
    }
    if !logic_seen {
        return Err(ParseError { line: 1, column: 1, kind: ParseErrorKind::Missing("logic") });
    }

    let mut origin = HashMap::new();
    for line in &lines {
        let err = on_line(line.number);
        let mut cur = Cursor::new(&line.toks, line.text);
        let k = keyword(line);
        match k.as_deref() {
            Some(k) if DECLARATIONS.contains(&k) => continue,
            Some("tbox") | Some("abox") | Some("wtbox") => {}
            _ => {
                let expected =
                    [&DECLARATIONS[..], &["tbox", "wtbox", "abox"]].concat().iter().map(|k| format!("`{k}`")).collect();
                return Err(err((1, ParseErrorKind::Syntax { expected, found: cur.found() })));
            }
        }
        let k = k.unwrap();
        cur.next();
        let mut p = LineParser { cur, sig: &kb.signature };
        if k == "wtbox" {
            let w = p.weighted(&kb).map_err(&err)?;
            origin.insert(AxiomPath::Weighted(kb.weighted.len()), line.number);
            kb.weighted.push(w);
            continue;
        }
        p.expect(Tok::Colon).map_err(&err)?;
        let ax = p.axiom().map_err(&err)?;
        let wrong_section = match (k.as_str(), ax.kind.is_inclusion()) {
            ("tbox", false) => Some(ViolationKind::AssertionInTbox),
            ("abox", true) => Some(ViolationKind::InclusionInAbox),
            _ => None,
        };
        if let Some(v) = wrong_section {
            return Err(err((line.toks[0].col, ParseErrorKind::Invalid(v))));
        }
        if k == "tbox" {
            origin.insert(AxiomPath::Tbox(kb.tbox.len()), line.number);
            kb.tbox.push(ax);
        } else {
            origin.insert(AxiomPath::Abox(kb.abox.len()), line.number);
            kb.abox.push(ax);
        }
    }

    if let Some(v) = kb.validate().violations.into_iter().next() {
        let line = origin.get(&v.path).copied().unwrap_or(1);
        return Err(ParseError { line, column: 1, kind: ParseErrorKind::Invalid(v.kind) });
    }
    Ok(kb)
}

/// Canonical `.fkb` text; `parse_kb` maps it back to an equal knowledge base.
pub fn serialize_kb(kb: &WeightedKb) -> String {
    let mut out = format!("logic {}\n", kb.logic.name());
    let lists = [
        ("concepts", &kb.signature.concepts),
        ("roles", &kb.signature.roles),
        ("individuals", &kb.signature.individuals),
        ("distinguished", &kb.distinguished),
    ];
    for (keyword, names) in lists {
        if !names.is_empty() {
            let _ = writeln!(out, "{keyword} {}", names.join(" "));
        }
    }
    for ax in &kb.tbox {
        let _ = writeln!(out, "tbox: {ax}");
    }
    for w in &kb.weighted {
        let _ = writeln!(out, "wtbox {}: {w}", w.subject);
    }
    for ax in &kb.abox {
        let _ = writeln!(out, "abox: {ax}");
    }
    out
}
