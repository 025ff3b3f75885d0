//! File formats, parallel search and the command-line front end for
//! `alcft-core`.

#![allow(clippy::result_large_err)]

pub mod cli;
mod error;
pub mod fint;
pub mod fkb;
pub mod fnet;
mod lex;
pub mod parallel;
pub mod records;

pub use error::{NameKind, ParseError, ParseErrorKind};
