//! Minimal s-expression reader shared by the proof file formats.
//!
//! Three node kinds: bare symbols (rule names, labels, `:discharge`),
//! double-quoted strings (formulas and basic sentences; no escape sequences,
//! quotes and newlines are not allowed inside), and parenthesized lists.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Sexpr {
    Sym(String, usize),
    Str(String, usize),
    List(Vec<Sexpr>, usize),
}

impl Sexpr {
    pub(crate) fn offset(&self) -> usize {
        match self {
            Sexpr::Sym(_, o) | Sexpr::Str(_, o) | Sexpr::List(_, o) => *o,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at byte {offset}: {message}")]
pub struct SexprError {
    pub offset: usize,
    pub message: String,
}

fn err(offset: usize, message: impl Into<String>) -> SexprError {
    SexprError {
        offset,
        message: message.into(),
    }
}

/// Parses exactly one s-expression; trailing whitespace is allowed.
pub(crate) fn parse(input: &str) -> Result<Sexpr, SexprError> {
    let bytes = input.as_bytes();
    let mut pos = 0;
    let node = parse_at(input, bytes, &mut pos)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(err(pos, "expected end of input"));
    }
    Ok(node)
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() {
        match bytes[*pos] {
            b' ' | b'\t' | b'\n' | b'\r' => *pos += 1,
            b';' => {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
            }
            _ => break,
        }
    }
}

fn parse_at(input: &str, bytes: &[u8], pos: &mut usize) -> Result<Sexpr, SexprError> {
    skip_ws(bytes, pos);
    let start = *pos;
    match bytes.get(*pos) {
        None => Err(err(start, "expected an expression")),
        Some(b'(') => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                skip_ws(bytes, pos);
                match bytes.get(*pos) {
                    None => return Err(err(*pos, "unclosed `(`")),
                    Some(b')') => {
                        *pos += 1;
                        return Ok(Sexpr::List(items, start));
                    }
                    Some(_) => items.push(parse_at(input, bytes, pos)?),
                }
            }
        }
        Some(b')') => Err(err(start, "unmatched `)`")),
        Some(b'"') => {
            *pos += 1;
            let content_start = *pos;
            while *pos < bytes.len() && bytes[*pos] != b'"' && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            if bytes.get(*pos) != Some(&b'"') {
                return Err(err(start, "unclosed string"));
            }
            let s = input[content_start..*pos].to_string();
            *pos += 1;
            Ok(Sexpr::Str(s, start))
        }
        Some(_) => {
            while *pos < bytes.len()
                && !matches!(bytes[*pos], b' ' | b'\t' | b'\n' | b'\r' | b'(' | b')' | b'"' | b';')
            {
                *pos += 1;
            }
            Ok(Sexpr::Sym(input[start..*pos].to_string(), start))
        }
    }
}

pub(crate) fn quote(s: &str) -> String {
    debug_assert!(!s.contains('"') && !s.contains('\n'));
    format!("\"{s}\"")
}

impl fmt::Display for Sexpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexpr::Sym(s, _) => write!(f, "{s}"),
            Sexpr::Str(s, _) => write!(f, "{}", quote(s)),
            Sexpr::List(items, _) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}
