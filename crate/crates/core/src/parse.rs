//! Recursive-descent parser for rational-function expressions in `t`.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' uint)?
//! base   := '(' expr ')' | int | 't'
//! ```
//!
//! Whitespace is insignificant. The optional leading minus is what lets
//! rendered output with a negative first coefficient parse back.

use num_bigint::BigInt;
use thiserror::Error;

use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::Rational;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 10_000;
/// Largest polynomial degree an exponentiation may produce.
pub const MAX_DEGREE: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("exponent overflow at position {position}")]
    ExponentOverflow { position: usize },
    #[error("division by zero at position {position}")]
    DivisionByZero { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::ExponentOverflow { position }
            | ParseError::DivisionByZero { position } => *position,
        }
    }
}

pub fn parse(text: &str) -> Result<RatFun, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<RatFun, ParseError> {
        let negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.factor()?;
                    acc = acc
                        .checked_div(&rhs)
                        .map_err(|_| ParseError::DivisionByZero { position: at })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFun, ParseError> {
        let base = self.base()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.syntax("expected nonnegative integer exponent"));
        }
        let e: u32 = digits
            .parse()
            .ok()
            .filter(|e| *e <= MAX_EXPONENT)
            .ok_or(ParseError::ExponentOverflow { position: at })?;
        let width = base.numer().degree().unwrap_or(0).max(base.denom().degree().unwrap_or(0));
        if width.saturating_mul(e as usize) > MAX_DEGREE {
            return Err(ParseError::ExponentOverflow { position: at });
        }
        Ok(base.pow(e))
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn base(&mut self) -> Result<RatFun, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(RatFun::t_pow(1))
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits().parse().expect("digit run");
                Ok(RatFun::from_poly(Poly::constant(Rational::from_integer(n))))
            }
            Some(c) => Err(self.syntax(format!("unexpected '{}'", c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}
