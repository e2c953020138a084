//! The extended complex plane `C ∪ {∞}`: points, the chordal metric, and the
//! text form of complex literals.
//!
//! Literal grammar:
//!
//! ```text
//! literal := 'inf' | [SIGN] DEC [SIGN DEC 'i'] | [SIGN] DEC 'i'
//! DEC     := digits ['.' digits] [('e'|'E') [SIGN] digits]   (or '.' digits ...)
//! ```
//!
//! The imaginary unit alone is written `1i`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of the Riemann sphere.
///
/// `Infinity` is a dedicated variant; a `Finite` value never carries an
/// IEEE infinity or NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub const ZERO: ExtendedComplex = ExtendedComplex::Finite(Complex64 { re: 0.0, im: 0.0 });
    pub const ONE: ExtendedComplex = ExtendedComplex::Finite(Complex64 { re: 1.0, im: 0.0 });

    /// Checked constructor; rejects NaN and infinite components.
    pub fn finite(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(ExtendedComplex::Finite(z))
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::finite(Complex64::new(re, im))
    }

    /// Maps any non-finite value (overflowed quotient, division by zero) to ∞.
    pub fn from_complex(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ExtendedComplex::Finite(z)
        } else {
            ExtendedComplex::Infinity
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match *self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity => None,
        }
    }

    /// `1/z` on the sphere, with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(&self) -> Self {
        match *self {
            ExtendedComplex::Infinity => Self::ZERO,
            ExtendedComplex::Finite(z) if z.re == 0.0 && z.im == 0.0 => ExtendedComplex::Infinity,
            ExtendedComplex::Finite(z) => Self::from_complex(z.inv()),
        }
    }

    pub fn conj(&self) -> Self {
        match *self {
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(z.conj()),
            ExtendedComplex::Infinity => ExtendedComplex::Infinity,
        }
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

impl From<f64> for ExtendedComplex {
    fn from(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }
}

impl fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_point(*self))
    }
}

impl FromStr for ExtendedComplex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_point(s)
    }
}

/// Chordal distance on the Riemann sphere of diameter 2.
pub fn chordal_distance(p: ExtendedComplex, q: ExtendedComplex) -> f64 {
    use ExtendedComplex::*;
    let d = match (p, q) {
        (Infinity, Infinity) => 0.0,
        (Finite(z), Infinity) | (Infinity, Finite(z)) => 2.0 / 1f64.hypot(z.norm()),
        (Finite(z), Finite(w)) => 2.0 * ((z - w).norm() / 1f64.hypot(z.norm())) / 1f64.hypot(w.norm()),
    };
    d.clamp(0.0, 2.0)
}

/// Formats a real number so that parsing the text recovers it exactly.
///
/// Shortest round-trip digits (never more than 17 significant); scientific
/// notation outside `[1e-5, 1e16)`.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Formats a finite complex number as a literal of the grammar.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format_real(z.re)
    } else if z.re == 0.0 {
        format!("{}i", format_real(z.im))
    } else {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        format!("{}{}{}i", format_real(z.re), sign, format_real(z.im.abs()))
    }
}

pub fn format_point(p: ExtendedComplex) -> String {
    match p {
        ExtendedComplex::Finite(z) => format_complex(z),
        ExtendedComplex::Infinity => "inf".to_string(),
    }
}

/// Parses a complex literal or `inf`.
pub fn parse_point(text: &str) -> Result<ExtendedComplex> {
    let offset = text.len() - text.trim_start().len();
    let body = text.trim();
    if body == "inf" {
        return Ok(ExtendedComplex::Infinity);
    }
    let z = Lexer::new(body, offset).literal()?;
    ExtendedComplex::finite(z).map_err(|_| Error::Parse {
        position: offset,
        message: "literal overflows to a non-finite value".into(),
    })
}

/// Parses a finite complex literal (`inf` is rejected).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    match parse_point(text)? {
        ExtendedComplex::Finite(z) => Ok(z),
        ExtendedComplex::Infinity => Err(Error::Parse {
            position: text.len() - text.trim_start().len(),
            message: "expected a finite complex number, found 'inf'".into(),
        }),
    }
}

struct Lexer<'a> {
    bytes: &'a [u8],
    text: &'a str,
    pos: usize,
    offset: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, offset: usize) -> Self {
        Lexer {
            bytes: text.as_bytes(),
            text,
            pos: 0,
            offset,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.offset + self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn sign(&mut self) -> Option<u8> {
        match self.peek() {
            Some(c @ (b'+' | b'-')) => {
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        self.pos - start
    }

    /// Scans an unsigned DEC and returns its value.
    fn decimal(&mut self) -> Result<f64> {
        let start = self.pos;
        let mut mantissa = self.digits();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            mantissa += self.digits();
        }
        if mantissa == 0 {
            self.pos = start;
            return Err(match self.peek() {
                Some(b'i') => self.error("the imaginary unit must be written '1i'"),
                Some(c) => self.error(format!("expected a digit, found '{}'", c as char)),
                None => self.error("expected a number"),
            });
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let before = self.pos;
            self.pos += 1;
            self.sign();
            if self.digits() == 0 {
                self.pos = before;
                return Err(self.error("malformed exponent"));
            }
        }
        self.text[start..self.pos]
            .parse::<f64>()
            .map_err(|e| Error::Parse {
                position: self.offset + start,
                message: e.to_string(),
            })
    }

    fn signed_decimal(&mut self) -> Result<f64> {
        let negative = self.sign() == Some(b'-');
        let v = self.decimal()?;
        Ok(if negative { -v } else { v })
    }

    fn literal(&mut self) -> Result<Complex64> {
        if self.bytes.is_empty() {
            return Err(self.error("empty literal"));
        }
        let first = self.signed_decimal()?;
        let z = match self.peek() {
            None => Complex64::new(first, 0.0),
            Some(b'i') => {
                self.pos += 1;
                Complex64::new(0.0, first)
            }
            Some(b'+' | b'-') => {
                let second = self.signed_decimal()?;
                if self.peek() != Some(b'i') {
                    return Err(self.error("expected 'i' after the imaginary part"));
                }
                self.pos += 1;
                Complex64::new(first, second)
            }
            Some(c) => return Err(self.error(format!("unexpected character '{}'", c as char))),
        };
        if self.pos != self.bytes.len() {
            return Err(self.error("trailing characters after literal"));
        }
        Ok(z)
    }
}
