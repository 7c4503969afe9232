//! Univariate polynomials with real coefficients in ascending degree order.
//!
//! `coeffs[k]` is the coefficient of `x^k`. Trailing zeros are trimmed on
//! construction, so the representation is canonical: the last coefficient is
//! nonzero unless the polynomial is identically zero, which is stored as the
//! single coefficient `0`. The zero polynomial has degree 0 by convention,
//! which keeps the Gram pipeline well-defined for constant inputs.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialWire", into = "PolynomialWire")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

/// Wire form: `{"coeffs": [c0, c1, ...]}`.
#[derive(Serialize, Deserialize)]
struct PolynomialWire {
    coeffs: Vec<f64>,
}

impl TryFrom<PolynomialWire> for Polynomial {
    type Error = Error;
    fn try_from(w: PolynomialWire) -> Result<Self> {
        if w.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { what: "polynomial coefficient" });
        }
        Ok(Polynomial::new(w.coeffs))
    }
}

impl From<Polynomial> for PolynomialWire {
    fn from(p: Polynomial) -> Self {
        PolynomialWire { coeffs: p.coeffs }
    }
}

impl Polynomial {
    /// Builds a polynomial, trimming exactly-zero trailing coefficients.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Degree of the stored representation; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    /// Evaluation by Horner's scheme.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        let d: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Polynomial::new(d)
    }

    /// Antiderivative with integration constant `c0`.
    pub fn antiderivative(&self, c0: f64) -> Polynomial {
        if self.is_zero() {
            return Polynomial::constant(c0);
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(c0);
        for (k, &c) in self.coeffs.iter().enumerate() {
            out.push(c / (k + 1) as f64);
        }
        Polynomial::new(out)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out: Vec<f64> = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Polynomial::new(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out: Vec<f64> = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Polynomial::new(out)
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Parses the term grammar `c`, `c*x`, `c*x^k`, `x^k`, `x` joined by
    /// `+`/`-`; coefficients are decimal (optionally with an exponent part)
    /// or rational literals `a/b`.
    pub fn parse(text: &str) -> std::result::Result<Polynomial, ParseError> {
        Parser::new(text).parse()
    }

    /// Canonical text form; `parse(format(p)) == p` exactly.
    pub fn format(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let mag = c.abs();
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                1 if mag == 1.0 => write!(f, "x")?,
                1 => write!(f, "{mag}*x")?,
                _ if mag == 1.0 => write!(f, "x^{k}")?,
                _ => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Syntax error with the byte offset where parsing failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { bytes: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, pos: usize, message: impl Into<String>) -> std::result::Result<T, ParseError> {
        Err(ParseError { pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse(&mut self) -> std::result::Result<Polynomial, ParseError> {
        let mut coeffs: Vec<f64> = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err(self.pos, "empty input");
        }
        let mut sign = 1.0;
        if let Some(b) = self.peek() {
            if b == b'+' || b == b'-' {
                if b == b'-' {
                    sign = -1.0;
                }
                self.pos += 1;
            }
        }
        loop {
            let (deg, coeff) = self.term()?;
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, 0.0);
            }
            coeffs[deg] += sign * coeff;
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    sign = 1.0;
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -1.0;
                    self.pos += 1;
                }
                Some(c) => {
                    return self.err(self.pos, format!("expected '+' or '-', found '{}'", c as char))
                }
            }
        }
        Ok(Polynomial::new(coeffs))
    }

    /// One signed-stripped term; returns (degree, coefficient magnitude part).
    fn term(&mut self) -> std::result::Result<(usize, f64), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok((self.exponent()?, 1.0))
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => {
                let mut value = self.number()?;
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let denom_pos = self.pos;
                    let denom = self.number()?;
                    if denom == 0.0 {
                        return self.err(denom_pos, "division by zero in rational literal");
                    }
                    value /= denom;
                }
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    if self.peek() != Some(b'x') {
                        return self.err(self.pos, "expected 'x' after '*'");
                    }
                    self.pos += 1;
                    Ok((self.exponent()?, value))
                } else {
                    Ok((0, value))
                }
            }
            Some(c) => self.err(self.pos, format!("expected a term, found '{}'", c as char)),
            None => self.err(self.pos, "expected a term, found end of input"),
        }
    }

    /// Exponent after an `x`: absent (degree 1) or `^k` with k a nonnegative integer.
    fn exponent(&mut self) -> std::result::Result<usize, ParseError> {
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            return self.err(start, "negative exponent is not allowed");
        }
        let mut digits = String::new();
        while let Some(b) = self.peek() {
            if b.is_ascii_digit() {
                digits.push(b as char);
                self.pos += 1;
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return self.err(start, "expected an integer exponent after '^'");
        }
        if self.peek() == Some(b'.') {
            return self.err(start, "exponent must be an integer");
        }
        digits
            .parse::<usize>()
            .map_err(|_| ParseError { pos: start, message: "exponent out of range".into() })
    }

    /// Unsigned decimal literal with optional `e`/`E` exponent part.
    fn number(&mut self) -> std::result::Result<f64, ParseError> {
        let start = self.pos;
        let mut seen_digit = false;
        while let Some(b) = self.peek() {
            if b.is_ascii_digit() {
                seen_digit = true;
                self.pos += 1;
            } else if b == b'.' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if !seen_digit {
            return self.err(start, "expected a number");
        }
        if let Some(b'e' | b'E') = self.peek() {
            self.pos += 1;
            if let Some(b'+' | b'-') = self.peek() {
                self.pos += 1;
            }
            let mut exp_digit = false;
            while let Some(b) = self.peek() {
                if b.is_ascii_digit() {
                    exp_digit = true;
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if !exp_digit {
                return self.err(self.pos, "expected digits in exponent");
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        text.parse::<f64>()
            .map_err(|_| ParseError { pos: start, message: format!("invalid number '{text}'") })
    }
}
