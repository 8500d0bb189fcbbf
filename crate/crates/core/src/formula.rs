//! Ecumenical propositional formulas.
//!
//! Atoms and the absurdity constant carry their own annotation
//! (intuitionistic or classical); compound formulas are intuitionistic by
//! default and become classical only through the explicit classical wrapper,
//! which may not be nested.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Reserved first character for machine-generated atoms. The formula parser
/// rejects it so user formulas can never collide with atoms minted by the
/// simulation layer. Base files accept it, since exported simulation bases
/// must round-trip.
pub const FRESH_SIGIL: char = '$';

/// Basic sentence: an atom or the absurdity constant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basic {
    Falsum,
    Atom(String),
}

impl Basic {
    pub fn atom(name: impl Into<String>) -> Self {
        Basic::Atom(name.into())
    }

    pub fn is_falsum(&self) -> bool {
        matches!(self, Basic::Falsum)
    }
}

impl fmt::Display for Basic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basic::Falsum => write!(f, "bot"),
            Basic::Atom(name) => write!(f, "{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// Intuitionistic basic sentence `p^i` (or plain `bot`).
    BasicI(Basic),
    /// Classical basic sentence `p^c`.
    BasicC(Basic),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    /// Classical wrapper `(A)^c` around a compound. Invariant: the child is
    /// And/Or/Imp, never a basic sentence or another wrapper.
    Classical(Box<Formula>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("classical-wrap nesting violation: operand is already classical")]
    NestedClassical,
}

impl Formula {
    pub fn atom_i(name: impl Into<String>) -> Self {
        Formula::BasicI(Basic::atom(name))
    }

    pub fn atom_c(name: impl Into<String>) -> Self {
        Formula::BasicC(Basic::atom(name))
    }

    pub fn falsum() -> Self {
        Formula::BasicI(Basic::Falsum)
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Self {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    /// `~A` is sugar for `A -> bot`.
    pub fn neg(a: Formula) -> Self {
        Formula::imp(a, Formula::falsum())
    }

    /// The classical version of a formula: `p^i` becomes `p^c`, a compound
    /// gets the classical wrapper. Already-classical formulas are rejected.
    pub fn classical_version(&self) -> Result<Formula, FormulaError> {
        match self {
            Formula::BasicI(b) => Ok(Formula::BasicC(b.clone())),
            Formula::And(..) | Formula::Or(..) | Formula::Imp(..) => {
                Ok(Formula::Classical(Box::new(self.clone())))
            }
            Formula::BasicC(_) | Formula::Classical(_) => Err(FormulaError::NestedClassical),
        }
    }

    /// Number of connectives. Classical annotations on basics and the
    /// classical wrapper each count as one connective.
    pub fn complexity(&self) -> usize {
        match self {
            Formula::BasicI(_) => 0,
            Formula::BasicC(_) => 1,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                1 + l.complexity() + r.complexity()
            }
            Formula::Classical(inner) => 1 + inner.complexity(),
        }
    }

    pub fn is_intuitionistic(&self) -> bool {
        match self {
            Formula::BasicI(_) => true,
            Formula::BasicC(_) | Formula::Classical(_) => false,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.is_intuitionistic() && r.is_intuitionistic()
            }
        }
    }

    /// The classical wrapper only applies to compounds.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Formula::BasicI(_) | Formula::BasicC(_) => true,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.is_well_formed() && r.is_well_formed()
            }
            Formula::Classical(inner) => {
                matches!(**inner, Formula::And(..) | Formula::Or(..) | Formula::Imp(..))
                    && inner.is_well_formed()
            }
        }
    }

    /// Subformula closure, including the formula itself. A classical basic
    /// contributes its intuitionistic version as well.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        out.insert(self.clone());
        match self {
            Formula::BasicI(_) => {}
            Formula::BasicC(b) => {
                out.insert(Formula::BasicI(b.clone()));
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
            Formula::Classical(inner) => inner.collect_subformulas(out),
        }
    }

    /// Double-negation translation: classical basics and wrappers become
    /// double negations, everything else is mapped structurally. The result
    /// is always intuitionistic.
    pub fn dn_translate(&self) -> Formula {
        match self {
            Formula::BasicI(b) => Formula::BasicI(b.clone()),
            Formula::BasicC(b) => Formula::neg(Formula::neg(Formula::BasicI(b.clone()))),
            Formula::And(l, r) => Formula::and(l.dn_translate(), r.dn_translate()),
            Formula::Or(l, r) => Formula::or(l.dn_translate(), r.dn_translate()),
            Formula::Imp(l, r) => Formula::imp(l.dn_translate(), r.dn_translate()),
            Formula::Classical(inner) => Formula::neg(Formula::neg(inner.dn_translate())),
        }
    }

    /// Atom names occurring anywhere in the formula (excluding `bot`).
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::BasicI(Basic::Atom(a)) | Formula::BasicC(Basic::Atom(a)) => {
                out.insert(a.clone());
            }
            Formula::BasicI(Basic::Falsum) | Formula::BasicC(Basic::Falsum) => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
            Formula::Classical(inner) => inner.collect_atoms(out),
        }
    }

    pub fn parse(input: &str) -> Result<Formula, ParseError> {
        Parser::new(input)?.parse_formula()
    }
}

// Rendering. Never emits `~` or `<->`; annotations are always explicit
// except on `bot`. `parse(render(f)) == f` for every well-formed formula.

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Formula {
    // Precedence: Imp = 1 (right-assoc), Or = 2, And = 3 (both left-assoc).
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        match self {
            Formula::BasicI(Basic::Falsum) => write!(f, "bot"),
            Formula::BasicI(Basic::Atom(a)) => write!(f, "{a}^i"),
            Formula::BasicC(b) => write!(f, "{b}^c"),
            Formula::Imp(l, r) => {
                let paren = min > 1;
                if paren {
                    write!(f, "(")?;
                }
                l.fmt_prec(f, 2)?;
                write!(f, " -> ")?;
                r.fmt_prec(f, 1)?;
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Or(l, r) => {
                let paren = min > 2;
                if paren {
                    write!(f, "(")?;
                }
                l.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                r.fmt_prec(f, 3)?;
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::And(l, r) => {
                let paren = min > 3;
                if paren {
                    write!(f, "(")?;
                }
                l.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                r.fmt_prec(f, 4)?;
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Classical(inner) => {
                write!(f, "(")?;
                inner.fmt_prec(f, 0)?;
                write!(f, ")^c")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("classical-wrap nesting violation at byte {offset}")]
    NestedClassical { offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bot,
    Arrow,  // ->
    Iff,    // <->
    Pipe,   // |
    Amp,    // &
    Tilde,  // ~
    LParen,
    RParen,
    SupI, // ^i
    SupC, // ^c
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(input: &str) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        let bytes = input.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '(' => {
                    toks.push((Tok::LParen, i));
                    i += 1;
                }
                ')' => {
                    toks.push((Tok::RParen, i));
                    i += 1;
                }
                '|' => {
                    if bytes.get(i + 1) == Some(&b'-') {
                        return Err(ParseError::Syntax {
                            offset: i,
                            expected: "formula syntax (`|-` belongs to base files)".into(),
                        });
                    }
                    toks.push((Tok::Pipe, i));
                    i += 1;
                }
                '&' => {
                    toks.push((Tok::Amp, i));
                    i += 1;
                }
                '~' => {
                    toks.push((Tok::Tilde, i));
                    i += 1;
                }
                '-' => {
                    if bytes.get(i + 1) == Some(&b'>') {
                        toks.push((Tok::Arrow, i));
                        i += 2;
                    } else {
                        return Err(ParseError::Syntax {
                            offset: i,
                            expected: "`->`".into(),
                        });
                    }
                }
                '<' => {
                    if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                        toks.push((Tok::Iff, i));
                        i += 3;
                    } else {
                        return Err(ParseError::Syntax {
                            offset: i,
                            expected: "`<->`".into(),
                        });
                    }
                }
                '^' => {
                    match bytes.get(i + 1) {
                        Some(b'i') => toks.push((Tok::SupI, i)),
                        Some(b'c') => toks.push((Tok::SupC, i)),
                        _ => {
                            return Err(ParseError::Syntax {
                                offset: i,
                                expected: "`^i` or `^c`".into(),
                            })
                        }
                    }
                    i += 2;
                }
                'a'..='z' => {
                    let start = i;
                    while i < bytes.len()
                        && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    let word = &input[start..i];
                    if word == "bot" {
                        toks.push((Tok::Bot, start));
                    } else {
                        toks.push((Tok::Ident(word.to_string()), start));
                    }
                }
                FRESH_SIGIL => {
                    return Err(ParseError::Syntax {
                        offset: i,
                        expected: format!("atom name (`{FRESH_SIGIL}` is reserved)"),
                    })
                }
                _ => {
                    return Err(ParseError::Syntax {
                        offset: i,
                        expected: "formula syntax".into(),
                    })
                }
            }
        }
        Ok(Parser {
            toks,
            pos: 0,
            end: input.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_formula(&mut self) -> Result<Formula, ParseError> {
        let f = self.parse_imp()?;
        if self.pos != self.toks.len() {
            return Err(ParseError::Syntax {
                offset: self.offset(),
                expected: "end of input".into(),
            });
        }
        Ok(f)
    }

    fn parse_imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_or()?;
        match self.peek() {
            Some(Tok::Arrow) => {
                self.bump();
                let rhs = self.parse_imp()?;
                Ok(Formula::imp(lhs, rhs))
            }
            Some(Tok::Iff) => {
                self.bump();
                let rhs = self.parse_imp()?;
                Ok(Formula::and(
                    Formula::imp(lhs.clone(), rhs.clone()),
                    Formula::imp(rhs, lhs),
                ))
            }
            _ => Ok(lhs),
        }
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_and()?;
        while matches!(self.peek(), Some(Tok::Pipe)) {
            self.bump();
            let rhs = self.parse_and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_unit()?;
        while matches!(self.peek(), Some(Tok::Amp)) {
            self.bump();
            let rhs = self.parse_unit()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_unit(&mut self) -> Result<Formula, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Tilde) => {
                let inner = self.parse_unit()?;
                Ok(Formula::neg(inner))
            }
            Some(Tok::LParen) => {
                let inner = self.parse_imp()?;
                match self.bump() {
                    Some(Tok::RParen) => {}
                    _ => {
                        return Err(ParseError::Syntax {
                            offset: self.offset(),
                            expected: "`)`".into(),
                        })
                    }
                }
                self.apply_superscript(inner, offset)
            }
            Some(Tok::Ident(name)) => {
                self.apply_superscript(Formula::atom_i(name), offset)
            }
            Some(Tok::Bot) => self.apply_superscript(Formula::falsum(), offset),
            _ => Err(ParseError::Syntax {
                offset,
                expected: "formula".into(),
            }),
        }
    }

    fn apply_superscript(&mut self, f: Formula, offset: usize) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::SupI) => {
                self.bump();
                match f {
                    Formula::BasicI(_) | Formula::And(..) | Formula::Or(..) | Formula::Imp(..) => {
                        Ok(f)
                    }
                    Formula::BasicC(_) | Formula::Classical(_) => Err(ParseError::Syntax {
                        offset,
                        expected: "intuitionistic operand before `^i`".into(),
                    }),
                }
            }
            Some(Tok::SupC) => {
                self.bump();
                f.classical_version()
                    .map_err(|_| ParseError::NestedClassical { offset })
            }
            _ => Ok(f),
        }
    }
}
