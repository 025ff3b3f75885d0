//! Line tokenizer shared by the text formats.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    Comma,
    Colon,
    At,
    Eq,
    Ge,
    Le,
    Gt,
    Lt,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Number(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::At => f.write_str("`@`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Ge => f.write_str("`>=`"),
            Tok::Le => f.write_str("`<=`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Lt => f.write_str("`<`"),
        }
    }
}

/// A token with its 1-based column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {col}: unexpected character `{ch}`")]
pub struct LexError {
    pub col: usize,
    pub ch: char,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenizes one line; everything after `#` is a comment.
pub fn tokenize(line: &str) -> Result<Vec<Spanned>, LexError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two = chars.get(i + 1).copied();
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            ':' => (Tok::Colon, 1),
            '@' => (Tok::At, 1),
            '=' => (Tok::Eq, 1),
            '>' if two == Some('=') => (Tok::Ge, 2),
            '<' if two == Some('=') => (Tok::Le, 2),
            '>' => (Tok::Gt, 1),
            '<' => (Tok::Lt, 1),
            c if is_ident_start(c) => {
                // `-` joins two words, as in `hard-sigmoid`.
                let joins = |j: usize| chars[j] == '-' && chars.get(j + 1).is_some_and(|c| c.is_ascii_alphabetic());
                let end = (i..chars.len()).find(|&j| !is_ident_char(chars[j]) && !joins(j)).unwrap_or(chars.len());
                (Tok::Ident(chars[i..end].iter().collect()), end - i)
            }
            c if c.is_ascii_digit() || c == '.' || c == '-' || c == '+' => {
                let end = (i + 1..chars.len())
                    .find(|&j| !(chars[j].is_ascii_digit() || chars[j] == '.' || chars[j] == '/'))
                    .unwrap_or(chars.len());
                (Tok::Number(chars[i..end].iter().collect()), end - i)
            }
            ch => return Err(LexError { col, ch }),
        };
        out.push(Spanned { tok, col });
        i += len;
    }
    Ok(out)
}

/// Cursor over the tokens of one line.
pub struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Spanned], line: &str) -> Self {
        Cursor { toks, pos: 0, end_col: line.chars().count() + 1 }
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    pub fn peek2(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos + 1).map(|s| &s.tok)
    }

    /// Column of the next token, or one past the end of the line.
    pub fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |s| s.col)
    }

    pub fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|s| &s.tok);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// Description of the next token for error messages.
    pub fn found(&self) -> String {
        self.peek().map_or_else(|| "end of line".to_string(), Tok::to_string)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_columns() {
        let toks = tokenize("wtbox Penguin: T(Penguin) <= Fly @ -70 # d5").unwrap();
        let kinds: Vec<_> = toks.iter().map(|s| s.tok.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("wtbox".into()),
                Tok::Ident("Penguin".into()),
                Tok::Colon,
                Tok::Ident("T".into()),
                Tok::LParen,
                Tok::Ident("Penguin".into()),
                Tok::RParen,
                Tok::Le,
                Tok::Ident("Fly".into()),
                Tok::At,
                Tok::Number("-70".into()),
            ]
        );
        assert_eq!(toks[3].col, 16);
    }

    #[test]
    fn numbers() {
        let toks = tokenize(">= 0.8 < 3/4 > .5").unwrap();
        assert_eq!(toks[1].tok, Tok::Number("0.8".into()));
        assert_eq!(toks[3].tok, Tok::Number("3/4".into()));
        assert_eq!(toks[5].tok, Tok::Number(".5".into()));
    }

    #[test]
    fn hyphenated_words() {
        let toks = tokenize("hidden hard-sigmoid H1 x=-1").unwrap();
        assert_eq!(toks[1].tok, Tok::Ident("hard-sigmoid".into()));
        assert_eq!(toks[5].tok, Tok::Number("-1".into()));
    }

    #[test]
    fn bad_character() {
        assert_eq!(tokenize("A ⊑ B"), Err(LexError { col: 3, ch: '⊑' }));
    }
}
