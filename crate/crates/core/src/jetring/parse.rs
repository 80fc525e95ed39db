//! Parser for the ascii expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' INT)?
//! atom   := INT | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers: `z`, `zb`, `u`, `u<N>`, `ub<N>`, `F<N>`, `F-1`, `f`, `fu`, `Sf`, `i`.
//! Anything else beginning with `u` or `F` is rejected; all other names are parameters.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{DiffPoly, VarId};
use crate::error::ParseError;
use crate::scalar::{GaussScalar, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Int(src[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            // `F-1` is a single token.
            if &src[start..i] == "F" && src[i..].starts_with("-1") {
                let rest = &bytes[i + 2..];
                if rest.first().is_none_or(|b| !b.is_ascii_alphanumeric()) {
                    i += 2;
                }
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

fn index_suffix(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn identifier(name: &str, pos: usize) -> Result<DiffPoly, ParseError> {
    let var = match name {
        "i" => return Ok(DiffPoly::i()),
        "z" => VarId::Z,
        "zb" => VarId::Zbar,
        "u" => VarId::U,
        "f" => VarId::FTower(0),
        "fu" => VarId::FTower(1),
        "Sf" | "F-1" => VarId::FTower(-1),
        _ => {
            let unknown = || ParseError::UnknownIdentifier { pos, name: name.to_string() };
            if let Some(rest) = name.strip_prefix("ub") {
                VarId::UjBar(index_suffix(rest).ok_or_else(unknown)?)
            } else if let Some(rest) = name.strip_prefix('u') {
                VarId::Uj(index_suffix(rest).ok_or_else(unknown)?)
            } else if let Some(rest) = name.strip_prefix('F') {
                let n = index_suffix(rest).ok_or_else(unknown)?;
                VarId::FTower(i32::try_from(n).map_err(|_| unknown())?)
            } else {
                VarId::param(name)
            }
        }
    };
    Ok(DiffPoly::var(var))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.to_string() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<DiffPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let pos = self.pos();
                self.at += 1;
                let divisor = self.unary()?;
                let inv = divisor
                    .as_constant()
                    .and_then(|c| c.inv())
                    .ok_or_else(|| ParseError::Syntax {
                        pos,
                        msg: "division only by a nonzero constant".into(),
                    })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<DiffPoly, ParseError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<DiffPoly, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                let e = n.to_u32().filter(|e| *e <= 1000);
                match e {
                    Some(e) => {
                        self.at += 1;
                        Ok(base.pow(e))
                    }
                    None => self.err("exponent too large"),
                }
            }
            Some(Tok::Sym('-')) => self.err("negative exponents are not allowed"),
            _ => self.err("expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<DiffPoly, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(DiffPoly::constant(GaussScalar::real(Rational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                identifier(&name, pos)
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(Tok::Sym(c)) => self.err(&format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression into a canonical polynomial.
pub fn parse_expr(text: &str) -> Result<DiffPoly, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, at: 0, end: text.len() };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

/// Parses a rational constant such as `-3/4`.
pub fn parse_constant(text: &str) -> Result<GaussScalar, ParseError> {
    let p = parse_expr(text)?;
    p.as_constant().ok_or(ParseError::Syntax { pos: 0, msg: "expected a constant".into() })
}
