//! Errors shared by the text formats.

use std::fmt;

use alcft_core::mlp::MlpError;
use alcft_core::syntax::ViolationKind;
use alcft_core::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameKind {
    Concept,
    Role,
    Individual,
}

impl fmt::Display for NameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NameKind::Concept => "concept",
            NameKind::Role => "role",
            NameKind::Individual => "individual",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("expected {}, found {found}", expected.join(" or "))]
    Syntax { expected: Vec<String>, found: String },
    #[error("unexpected character `{0}`")]
    BadCharacter(char),
    #[error("nested typicality operator")]
    NestedTypicality,
    #[error("typicality operator in the consequent of a weighted inclusion")]
    TypicalityInConsequent,
    #[error("undeclared {0} `{1}`")]
    Undeclared(NameKind, String),
    #[error("threshold {0} is outside [0,1]")]
    ThresholdOutOfRange(Rational),
    #[error("invalid number `{0}`")]
    BadNumber(String),
    #[error("unknown logic `{0}` (expected zadeh, godel, lukasiewicz or product)")]
    UnknownLogic(String),
    #[error("`{0}` is reserved")]
    ReservedName(String),
    #[error("weighted inclusion under `{header}` has subject `{subject}`")]
    SubjectMismatch { header: String, subject: String },
    #[error("{0}")]
    Invalid(ViolationKind),
    #[error("degree {0} is outside [0,1]")]
    DegreeOutOfRange(Rational),
    #[error("missing `{0}` declaration")]
    Missing(&'static str),
    #[error("`{0}` declared twice")]
    Duplicate(String),
    #[error("unknown domain element `{0}`")]
    UnknownElement(String),
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("{0}")]
    Network(MlpError),
}

impl ParseError {
    pub(crate) fn at(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }
}
