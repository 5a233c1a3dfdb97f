//! Recursive-descent parser for the polynomial grammar.
//!
//! ```text
//! expr     := term (("+"|"-") term)*
//! term     := factor ("*" factor)*
//! factor   := atom ("^" nat)? | "-" factor
//! atom     := rational | var | "(" expr ")"
//! rational := int ("/" posint)?
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{Poly, VarId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { offset: usize, name: String },
    #[error("zero denominator at offset {offset}")]
    ZeroDenominator { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownVariable { offset, .. }
            | ParseError::ZeroDenominator { offset } => *offset,
        }
    }
}

/// Variable names accepted in algebra files: `D` and the single formal `L`.
pub const FILE_VARS: &[(&str, VarId)] = &[("D", VarId::D), ("L", VarId::LAMBDA)];

/// All five canonical names, as produced by `Display for Poly`.
pub const ALL_VARS: &[(&str, VarId)] = &[
    ("D", VarId::D),
    ("L", VarId::LAMBDA),
    ("M", VarId::MU),
    ("G", VarId::GAMMA),
    ("N", VarId::SCRATCH),
];

/// Names for a two-variable parameter polynomial Φ(s, t).
pub const PHI_VARS: &[(&str, VarId)] = &[("s", VarId::D), ("t", VarId::LAMBDA)];

/// Parses a polynomial in the file variables `D` and `L`.
pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    parse_poly_with(text, FILE_VARS)
}

/// Parses with a custom variable-name table.
pub fn parse_poly_with(text: &str, vars: &[(&str, VarId)]) -> Result<Poly, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [(&'a str, VarId)],
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

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.syntax("expected exponent"));
            }
            let n: u32 = digits.parse().map_err(|_| ParseError::Syntax {
                offset: start,
                message: "exponent too large".to_string(),
            })?;
            if n > 255 {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: "exponent too large".to_string(),
                });
            }
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.vars.iter().find(|(n, _)| *n == name) {
                    Some((_, v)) => Ok(Poly::var(*v)),
                    None => Err(ParseError::UnknownVariable {
                        offset: start,
                        name: name.to_string(),
                    }),
                }
            }
            Some(_) => Err(self.syntax("expected number, variable or `(`")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn rational(&mut self) -> Result<Poly, ParseError> {
        let num: BigInt = self.digits().parse().expect("digits");
        let mut value = BigRational::from_integer(num);
        // A `/` directly after an integer belongs to the literal.
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let den = self.digits();
            if den.is_empty() {
                return Err(self.syntax("expected denominator"));
            }
            let den: BigInt = den.parse().expect("digits");
            if den.is_zero() {
                return Err(ParseError::ZeroDenominator { offset: start });
            }
            value /= BigRational::from_integer(den);
        }
        Ok(Poly::<Scalar>::constant(value))
    }
}
