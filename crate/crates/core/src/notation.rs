//! Text notation for entities.
//!
//! ```text
//! entity := qset | atom
//! qset   := '[' (elem (',' elem)*)? ']'
//! elem   := 'm:' ident ('*' nat)? | 'M:' ident | 'n:' nat | qset ('*' nat)?
//! ident  := [a-zA-Z][a-zA-Z0-9_]*
//! nat    := [0-9]+
//! ```
//!
//! Whitespace may appear between tokens. The canonical printer lists
//! m-atom species by name, then M-atoms by name, then labels ascending,
//! then nested classes by their own canonical text; a count of 1 is omitted.

use std::fmt::Write as _;

use crate::entity::{Entity, MAtomId, Species};
use crate::error::{Error, Result};
use crate::qset::{QSet, MAX_DEPTH};

/// Canonical text of an entity, without a trailing newline.
pub fn print_canonical(e: &Entity) -> String {
    match e {
        Entity::MAtom(s) => format!("m:{s}"),
        Entity::Macro(m) => format!("M:{m}"),
        Entity::Nat(n) => format!("n:{n}"),
        Entity::Q(q) => q.text().to_owned(),
    }
}

pub(crate) fn render_qset(q: &QSet) -> String {
    let mut out = String::from("[");
    let mut first = true;
    let mut sep = |out: &mut String| {
        if !first {
            out.push_str(", ");
        }
        first = false;
    };
    for (s, c) in q.atoms() {
        sep(&mut out);
        write!(out, "m:{s}").unwrap();
        push_count(&mut out, c);
    }
    for m in q.macros() {
        sep(&mut out);
        write!(out, "M:{m}").unwrap();
    }
    for n in q.labels() {
        sep(&mut out);
        write!(out, "n:{n}").unwrap();
    }
    for (inner, c) in q.nested() {
        sep(&mut out);
        out.push_str(inner.text());
        push_count(&mut out, c);
    }
    out.push(']');
    out
}

fn push_count(out: &mut String, count: u64) {
    if count != 1 {
        write!(out, "*{count}").unwrap();
    }
}

/// Parses any entity and returns it in canonical form.
pub fn parse(text: &str) -> Result<Entity> {
    let mut p = Parser::new(text);
    p.skip_ws();
    let e = match p.peek() {
        Some('[') => Entity::Q(p.qset(1)?),
        Some(_) => p.atom()?,
        None => return Err(p.error("expected an entity")),
    };
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses text that must denote a qset.
pub fn parse_qset(text: &str) -> Result<QSet> {
    match parse(text)? {
        Entity::Q(q) => Ok(q),
        _ => Err(Error::Syntax {
            offset: 1,
            message: "expected a qset".into(),
        }),
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    /// 1-based offset of the current character.
    fn offset(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, message: &str) -> Error {
        let found = match self.peek() {
            Some(c) => format!("found {c:?}"),
            None => "found end of input".to_owned(),
        };
        Error::Syntax {
            offset: self.offset(),
            message: format!("{message}, {found}"),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {c:?}")))
        }
    }

    fn qset(&mut self, depth: usize) -> Result<QSet> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthExceeded { depth, max: MAX_DEPTH });
        }
        self.expect('[')?;
        let mut b = QSet::builder();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(b.build());
        }
        loop {
            self.skip_ws();
            let (e, count) = self.elem(depth)?;
            b.insert(e, count)?;
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(b.build());
                }
                _ => return Err(self.error("expected ',' or ']'")),
            }
        }
    }

    fn elem(&mut self, depth: usize) -> Result<(Entity, u64)> {
        if self.peek() == Some('[') {
            let q = self.qset(depth + 1)?;
            let count = self.count()?;
            return Ok((Entity::Q(q), count));
        }
        let e = self.atom()?;
        let count = if e.is_m_atom() { self.count()? } else { 1 };
        Ok((e, count))
    }

    fn atom(&mut self) -> Result<Entity> {
        let kind = self.peek();
        if !matches!(kind, Some('m' | 'M' | 'n')) || self.chars.get(self.pos + 1) != Some(&':') {
            return Err(self.error("expected 'm:', 'M:', 'n:' or '['"));
        }
        self.pos += 2;
        match kind {
            Some('m') => Ok(Entity::MAtom(Species::new(self.ident()?)?)),
            Some('M') => Ok(Entity::Macro(MAtomId::new(self.ident()?)?)),
            _ => Ok(Entity::label(self.nat()?)),
        }
    }

    fn ident(&mut self) -> Result<String> {
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            return Err(self.error("expected an identifier"));
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn nat(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| Error::Syntax {
            offset: start + 1,
            message: format!("number {digits} is out of range"),
        })
    }

    /// Optional `'*' nat` suffix; defaults to 1.
    fn count(&mut self) -> Result<u64> {
        self.skip_ws();
        if self.peek() != Some('*') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let offset = self.offset();
        match self.nat()? {
            0 => Err(Error::CountZero { offset }),
            n => Ok(n),
        }
    }
}
