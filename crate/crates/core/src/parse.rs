//! Class expressions such as `2H - E1 - E2` or `3T + 2F - 1/2 E3`.
//!
//! Grammar (whitespace is insignificant, symbols are case-insensitive):
//!
//! ```text
//! expr   := '0' | ['+'|'-'] term (('+'|'-') term)*
//! term   := [coef] ['*'] symbol
//! coef   := digits ['/' digits]
//! symbol := 'H' | 'T' | 'F' | 'E' index      (index without leading zeros)
//! ```

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::lattice::{FormClass, HomClass, LatticeModel};
use crate::{Int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnexpectedChar(char),
    ExpectedSymbol,
    UnknownSymbol(String),
    LeadingZero,
    IndexOutOfRange { index: usize, n: usize },
    MixedBasis,
    WrongModel,
    NonInteger,
    MalformedRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match &self.kind {
            Empty => write!(f, "empty input")?,
            UnexpectedChar(c) => write!(f, "unexpected character {c:?}")?,
            ExpectedSymbol => write!(f, "expected a basis symbol")?,
            UnknownSymbol(s) => write!(f, "unknown symbol {s:?}")?,
            LeadingZero => write!(f, "index with leading zero")?,
            IndexOutOfRange { index, n } => write!(f, "index out of range: E{index} with n = {n}")?,
            MixedBasis => write!(f, "mixed basis symbols")?,
            WrongModel => write!(f, "symbol from wrong model kind")?,
            NonInteger => write!(f, "non-integer coefficient")?,
            MalformedRational => write!(f, "malformed rational")?,
        }
        write!(f, " at position {}", self.pos)
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symbol {
    H,
    T,
    F,
    E(usize),
}

struct Term {
    pos: usize,
    coef: Rational,
    symbol: Symbol,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { pos: self.pos, kind }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn coefficient(&mut self) -> Result<Option<Rational>, ParseError> {
        let start = self.pos;
        let num = self.digits();
        if num.is_empty() {
            return Ok(None);
        }
        let num = Int::from_str(num).map_err(|_| self.err(ParseErrorKind::MalformedRational))?;
        self.skip_ws();
        if self.peek() != Some('/') {
            return Ok(Some(Rational::from(num)));
        }
        self.pos += 1;
        self.skip_ws();
        let den = self.digits();
        if den.is_empty() {
            return Err(self.err(ParseErrorKind::MalformedRational));
        }
        let den = Int::from_str(den).map_err(|_| self.err(ParseErrorKind::MalformedRational))?;
        if den.is_zero() {
            return Err(ParseError {
                pos: start,
                kind: ParseErrorKind::MalformedRational,
            });
        }
        Ok(Some(Rational::new(num, den)))
    }

    fn symbol(&mut self) -> Result<Symbol, ParseError> {
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Err(self.err(ParseErrorKind::ExpectedSymbol));
        };
        if !c.is_ascii_alphabetic() {
            return Err(self.err(ParseErrorKind::ExpectedSymbol));
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let word = &self.src[start..self.pos];
        let unknown = || ParseError {
            pos: start,
            kind: ParseErrorKind::UnknownSymbol(word.to_string()),
        };
        let (head, tail) = word.split_at(1);
        match (head.to_ascii_uppercase().as_str(), tail) {
            ("H", "") => Ok(Symbol::H),
            ("T", "") => Ok(Symbol::T),
            ("F", "") => Ok(Symbol::F),
            ("E", idx) if !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit()) => {
                if idx.len() > 1 && idx.starts_with('0') {
                    return Err(ParseError {
                        pos: start,
                        kind: ParseErrorKind::LeadingZero,
                    });
                }
                idx.parse().map(Symbol::E).map_err(|_| unknown())
            }
            _ => Err(unknown()),
        }
    }
}

fn parse_terms(text: &str) -> Result<Vec<Term>, ParseError> {
    let mut lx = Lexer { src: text, pos: 0 };
    lx.skip_ws();
    if lx.peek().is_none() {
        return Err(lx.err(ParseErrorKind::Empty));
    }
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        lx.skip_ws();
        let mut negative = false;
        match lx.peek() {
            Some('+') | Some('-') => {
                negative = lx.peek() == Some('-');
                lx.pos += 1;
                lx.skip_ws();
            }
            Some(c) if !first => return Err(lx.err(ParseErrorKind::UnexpectedChar(c))),
            None if !first => break,
            _ => {}
        }
        let pos = lx.pos;
        let coef = lx.coefficient()?;
        lx.skip_ws();
        if lx.peek() == Some('*') {
            lx.pos += 1;
            lx.skip_ws();
        }
        // a bare `0` denotes the zero class
        if first && lx.peek().is_none() && coef.as_ref().is_some_and(Zero::is_zero) && !negative {
            return Ok(terms);
        }
        let symbol = lx.symbol()?;
        let coef = coef.unwrap_or_else(Rational::one);
        terms.push(Term {
            pos,
            coef: if negative { -coef } else { coef },
            symbol,
        });
        first = false;
        lx.skip_ws();
        if lx.peek().is_none() {
            break;
        }
    }
    Ok(terms)
}

fn assemble(terms: Vec<Term>, model: LatticeModel) -> Result<Vec<Rational>, ParseError> {
    let has_h = terms.iter().find(|t| t.symbol == Symbol::H);
    let has_tf = terms
        .iter()
        .find(|t| matches!(t.symbol, Symbol::T | Symbol::F));
    if let (Some(a), Some(b)) = (has_h, has_tf) {
        return Err(ParseError {
            pos: a.pos.max(b.pos),
            kind: ParseErrorKind::MixedBasis,
        });
    }
    let mut coeffs = vec![Rational::zero(); model.rank()];
    for term in terms {
        let idx = match (term.symbol, model) {
            (Symbol::H, LatticeModel::Rational { .. }) => 0,
            (Symbol::T, LatticeModel::Ruled { .. }) => 0,
            (Symbol::F, LatticeModel::Ruled { .. }) => 1,
            (Symbol::E(i), _) if (1..=model.n()).contains(&i) => model.e_index(i),
            (Symbol::E(i), _) => {
                return Err(ParseError {
                    pos: term.pos,
                    kind: ParseErrorKind::IndexOutOfRange {
                        index: i,
                        n: model.n(),
                    },
                })
            }
            _ => {
                return Err(ParseError {
                    pos: term.pos,
                    kind: ParseErrorKind::WrongModel,
                })
            }
        };
        coeffs[idx] += term.coef;
    }
    Ok(coeffs)
}

/// Parse an integral class expression.
pub fn parse_class(text: &str, model: LatticeModel) -> Result<HomClass, ParseError> {
    let terms = parse_terms(text)?;
    if let Some(t) = terms.iter().find(|t| !t.coef.is_integer()) {
        return Err(ParseError {
            pos: t.pos,
            kind: ParseErrorKind::NonInteger,
        });
    }
    let coeffs = assemble(terms, model)?;
    let coeffs = coeffs.into_iter().map(|c| c.to_integer()).collect();
    Ok(HomClass::new(model, coeffs).expect("assembled vector has model rank"))
}

/// Parse a cohomology class expression; rational coefficients allowed.
pub fn parse_form(text: &str, model: LatticeModel) -> Result<FormClass, ParseError> {
    let coeffs = assemble(parse_terms(text)?, model)?;
    Ok(FormClass::new(model, coeffs).expect("assembled vector has model rank"))
}

fn symbol_name(model: LatticeModel, idx: usize) -> String {
    match (model, idx) {
        (LatticeModel::Rational { .. }, 0) => "H".to_string(),
        (LatticeModel::Ruled { .. }, 0) => "T".to_string(),
        (LatticeModel::Ruled { .. }, 1) => "F".to_string(),
        _ => alloc::format!("E{}", idx + 1 - model.e_offset()),
    }
}

fn print_terms(model: LatticeModel, coeffs: &[Rational]) -> String {
    let mut out = String::new();
    for (idx, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push(' ');
            out.push_str(sign);
            out.push(' ');
        }
        let a = c.abs();
        if !a.is_one() {
            if a.is_integer() {
                out.push_str(&a.numer().to_string());
            } else {
                out.push_str(&alloc::format!("{}/{} ", a.numer(), a.denom()));
            }
        }
        out.push_str(&symbol_name(model, idx));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text for a class: basis order, zero terms omitted, `0` for the zero class.
pub fn print_class(x: &HomClass) -> String {
    let coeffs: Vec<Rational> = x.coeffs().iter().map(|c| Rational::from(c.clone())).collect();
    print_terms(x.model(), &coeffs)
}

pub fn print_form(x: &FormClass) -> String {
    print_terms(x.model(), x.coeffs())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelParseError(pub String);

impl fmt::Display for ModelParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid model spec {:?} (expected rational:N or ruled:h=H,n=N)", self.0)
    }
}

impl core::error::Error for ModelParseError {}

impl FromStr for LatticeModel {
    type Err = ModelParseError;

    /// `rational:6` or `ruled:h=2,n=3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelParseError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (kind, rest) = compact.split_once(':').ok_or_else(bad)?;
        match kind.to_ascii_lowercase().as_str() {
            "rational" => rest.parse().map(LatticeModel::rational).map_err(|_| bad()),
            "ruled" => {
                let mut genus = None;
                let mut n = None;
                for part in rest.split(',') {
                    let (key, value) = part.split_once('=').ok_or_else(bad)?;
                    match key {
                        "h" | "genus" => genus = Some(value.parse::<u32>().map_err(|_| bad())?),
                        "n" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
                        _ => return Err(bad()),
                    }
                }
                match (genus, n) {
                    (Some(g), Some(n)) if g >= 1 => Ok(LatticeModel::ruled(g, n)),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}
