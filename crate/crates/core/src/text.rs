//! Text forms of words and presentations.
//!
//! ```text
//! presentation := '<' names '|' relations? '>'
//! relations    := relation (',' relation)*
//! relation     := word ('=' word)*          a chain u = v = w gives u v^-1, v w^-1
//! word         := factor (['*'] factor)*    factors separated by '*' or whitespace
//! factor       := atom ('^' integer)?
//! atom         := name | '(' word ')' | '1'
//! ```
//!
//! A name that is not a generator but whose lowercase form is reads as the
//! inverse (`A` is `a^-1`).

use thiserror::Error;

use crate::presentation::{Presentation, PresentationError};
use crate::words::{GeneratorIndex, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

pub(crate) fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.chars().count(), |nl| before[nl + 1..].chars().count()) + 1;
    (line, column)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, column) = line_col(self.text, self.pos);
        Err(ParseError::Syntax { line, column, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars.find(|&(_, c)| !(c.is_alphanumeric() || c == '_' || c == '\'')).map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Some(&rest[..end])
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            if c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+')) {
                end = i + 1;
            } else {
                break;
            }
        }
        match rest[..end].parse() {
            Ok(v) => {
                self.pos += end;
                Ok(v)
            }
            Err(_) => self.err("expected an integer exponent"),
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }
}

struct WordParser<'n, S> {
    names: &'n [S],
}

impl<S: AsRef<str>> WordParser<'_, S> {
    fn lookup(&self, name: &str) -> Option<Letter> {
        if let Some(i) = self.names.iter().position(|n| n.as_ref() == name) {
            return Some(Letter::pos(GeneratorIndex::from_zero_based(i)));
        }
        let lower = name.to_lowercase();
        if lower != name {
            if let Some(i) = self.names.iter().position(|n| n.as_ref() == lower) {
                return Some(Letter::neg(GeneratorIndex::from_zero_based(i)));
            }
        }
        None
    }

    fn starts_factor(c: Option<char>) -> bool {
        matches!(c, Some(c) if c.is_alphabetic() || c == '_' || c == '(' || c == '1')
    }

    fn word(&self, cur: &mut Cursor<'_>) -> Result<Word, ParseError> {
        let mut w = self.factor(cur)?;
        loop {
            if cur.eat('*') || Self::starts_factor(cur.peek()) {
                w = w.mul(&self.factor(cur)?);
            } else {
                return Ok(w);
            }
        }
    }

    fn factor(&self, cur: &mut Cursor<'_>) -> Result<Word, ParseError> {
        let base = match cur.peek() {
            Some('(') => {
                cur.expect('(')?;
                let w = self.word(cur)?;
                cur.expect(')')?;
                w
            }
            Some('1') => {
                cur.pos += 1;
                Word::identity()
            }
            _ => {
                let start = cur.pos;
                match cur.ident() {
                    Some(name) => match self.lookup(name) {
                        Some(l) => Word::from_letter(l),
                        None => {
                            cur.pos = start;
                            cur.skip_ws();
                            return cur.err(format!("unknown generator {name:?}"));
                        }
                    },
                    None => return cur.err("expected a generator name, '(' or '1'"),
                }
            }
        };
        if cur.eat('^') {
            let e = cur.integer()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }
}

/// Parses a word over the given generator names.
pub fn parse_word<S: AsRef<str>>(text: &str, names: &[S]) -> Result<Word, ParseError> {
    let mut cur = Cursor::new(text);
    let w = WordParser { names }.word(&mut cur)?;
    if !cur.at_end() {
        return cur.err("unexpected trailing input");
    }
    Ok(w)
}

/// Parses `<a,b | a*b*a = b*a*b>`.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut cur = Cursor::new(text);
    cur.expect('<')?;
    let mut names: Vec<String> = Vec::new();
    if cur.peek() != Some('|') {
        loop {
            match cur.ident() {
                Some(n) => names.push(n.to_string()),
                None => return cur.err("expected a generator name"),
            }
            if !cur.eat(',') {
                break;
            }
        }
    }
    cur.expect('|')?;
    let parser = WordParser { names: &names };
    let mut relators = Vec::new();
    if cur.peek() != Some('>') {
        loop {
            let mut lhs = parser.word(&mut cur)?;
            let mut chained = false;
            while cur.eat('=') {
                let rhs = parser.word(&mut cur)?;
                relators.push(lhs.mul(&rhs.inverse()));
                lhs = rhs;
                chained = true;
            }
            if !chained {
                relators.push(lhs);
            }
            if !cur.eat(',') {
                break;
            }
        }
    }
    cur.expect('>')?;
    if !cur.at_end() {
        return cur.err("unexpected trailing input");
    }
    Ok(Presentation::new(names, relators)?)
}
