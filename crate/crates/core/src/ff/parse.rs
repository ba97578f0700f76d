//! Tokenizer and parser for the shared polynomial text syntax.
//!
//! A polynomial is a signed sum of monomials; a monomial is a `*`-separated
//! product of integer literals and variables with optional `^exponent`.
//! Whitespace is ignored. Coefficients are kept as big integers and reduced
//! modulo `p` by the caller.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Largest exponent accepted on any variable.
pub const MAX_EXPONENT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct PolyParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigInt,
    pub t: usize,
    pub x: usize,
    pub y: usize,
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    allowed: &'a [char],
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map_or_else(|| self.chars.last().map_or(1, |&(i, _)| i + 2), |&(i, _)| i + 1)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, PolyParseError> {
        Err(PolyParseError { column: self.column(), message: message.into() })
    }

    fn integer(&mut self) -> Result<BigInt, PolyParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected integer");
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn exponent(&mut self) -> Result<usize, PolyParseError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let col = self.column();
        let value = self.integer()?;
        match usize::try_from(&value) {
            Ok(v) if v <= MAX_EXPONENT => Ok(v),
            _ => Err(PolyParseError { column: col, message: format!("exponent exceeds {MAX_EXPONENT}") }),
        }
    }

    fn factor(&mut self, mono: &mut Monomial) -> Result<(), PolyParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let value = self.integer()?;
                if self.peek() == Some('^') {
                    let exp = self.exponent()?;
                    mono.coeff *= num_traits::pow(value, exp);
                } else {
                    mono.coeff *= value;
                }
                Ok(())
            }
            Some(c) if self.allowed.contains(&c) => {
                self.pos += 1;
                let exp = self.exponent()?;
                let slot = match c {
                    't' => &mut mono.t,
                    'x' => &mut mono.x,
                    _ => &mut mono.y,
                };
                *slot += exp;
                if *slot > MAX_EXPONENT {
                    return self.error(format!("exponent exceeds {MAX_EXPONENT}"));
                }
                Ok(())
            }
            Some(c) if c.is_alphabetic() => {
                let names: Vec<String> = self.allowed.iter().map(|c| c.to_string()).collect();
                self.error(format!("unknown variable '{c}' (allowed: {})", names.join(", ")))
            }
            Some(c) => self.error(format!("unexpected character '{c}'")),
            None => self.error("unexpected end of input"),
        }
    }

    fn monomial(&mut self, negative: bool) -> Result<Monomial, PolyParseError> {
        let mut mono = Monomial { coeff: BigInt::one(), t: 0, x: 0, y: 0 };
        self.factor(&mut mono)?;
        while self.peek() == Some('*') {
            self.pos += 1;
            self.factor(&mut mono)?;
        }
        if negative {
            mono.coeff = -mono.coeff;
        }
        Ok(mono)
    }
}

/// Parses `text` into monomials over the variables in `allowed`.
pub fn parse_monomials(text: &str, allowed: &[char]) -> Result<Vec<Monomial>, PolyParseError> {
    let chars: Vec<(usize, char)> = text.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut cur = Cursor { chars, pos: 0, allowed };
    if cur.peek().is_none() {
        return cur.error("empty polynomial");
    }
    let mut out = Vec::new();
    let mut negative = match cur.peek() {
        Some('-') => {
            cur.pos += 1;
            true
        }
        Some('+') => {
            cur.pos += 1;
            false
        }
        _ => false,
    };
    loop {
        let mono = cur.monomial(negative)?;
        if !mono.coeff.is_zero() {
            out.push(mono);
        }
        match cur.peek() {
            None => return Ok(out),
            Some('+') => negative = false,
            Some('-') => negative = true,
            Some(c) => return cur.error(format!("expected '+' or '-', found '{c}'")),
        }
        cur.pos += 1;
    }
}
