//! Text grammar for rational functions:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' exponent)?
//! atom   := integer | 'q' | 'T' | name | '(' expr ')'
//! exponent := integer | '-' integer | '(' exponent ')' | '{' exponent '}'
//! ```
//!
//! Named parameters (for example `c`) are substituted by integer values.

use super::{QTPoly, QTRational};
use crate::error::{AskError, Result};
use num_bigint::BigInt;

pub fn parse_qt(text: &str) -> Result<QTRational> {
    parse_qt_with(text, &[])
}

pub fn parse_qt_with(text: &str, params: &[(&str, BigInt)]) -> Result<QTRational> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, params };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    params: &'a [(&'a str, BigInt)],
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AskError {
        AskError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<QTRational> {
        let mut v = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    v = v.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    v = v.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<QTRational> {
        let mut v = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    v = v.mul(&self.unary()?);
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    v = v.div(&rhs).map_err(|_| AskError::Parse { pos: at, msg: "division by zero".into() })?;
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<QTRational> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<QTRational> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.exponent()?;
            return base.pow(e).map_err(|_| AskError::Parse { pos: at, msg: "negative power of zero".into() });
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        match self.peek() {
            Some(b'(') | Some(b'{') => {
                let close = if self.s[self.pos] == b'(' { b')' } else { b'}' };
                self.pos += 1;
                let e = self.exponent()?;
                if self.peek() != Some(close) {
                    return Err(self.err("unclosed exponent"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.exponent()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                i64::try_from(n).map_err(|_| self.err("exponent too large"))
            }
            _ => Err(self.err("expected exponent")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        txt.parse::<BigInt>().map_err(|_| AskError::Parse { pos: start, msg: "expected integer".into() })
    }

    fn atom(&mut self) -> Result<QTRational> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(QTRational::from_poly(QTPoly::term_big(n, 0, 0)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                match name {
                    "q" => Ok(QTRational::from_poly(QTPoly::q())),
                    "T" => Ok(QTRational::from_poly(QTPoly::t())),
                    _ => match self.params.iter().find(|(k, _)| *k == name) {
                        Some((_, v)) => Ok(QTRational::from_poly(QTPoly::term_big(v.clone(), 0, 0))),
                        None => Err(AskError::Parse { pos: start, msg: format!("unknown symbol {name:?}") }),
                    },
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }
}
