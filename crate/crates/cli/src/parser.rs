//! Recursive-descent parser for the textual expression form.
//!
//! ```text
//! expr   := [ '+' | '-' ] term ( ( '+' | '-' ) term )*
//! term   := factor ( '*' factor )*
//! factor := rational | 'c' [ '^' posint ] | 'l' '[' int ']' [ '^' posint ]
//! ```
//!
//! Whitespace is insignificant, exponents must be positive, and rational
//! literals are `p` or `p/q` with unlimited precision. Products multiply in
//! the enveloping algebra, so the parsed element is already in normal form
//! and `parse(e.to_string()) == e` for every element.

use std::fmt;
use std::str::FromStr;
use virasoro_core::lie::PBWMonomial;
use virasoro_core::{Scalar, UElement};

/// A syntax error with the byte offset where parsing stopped.
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

/// Parse an expression into its PBW normal form.
pub fn parse(text: &str) -> Result<UElement, ParseError> {
    let mut cursor = Cursor { bytes: text.as_bytes(), pos: 0 };
    let out = cursor.expr()?;
    cursor.skip_ws();
    if cursor.pos < cursor.bytes.len() {
        return Err(cursor.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    /// Current byte after skipping whitespace.
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    /// A maximal run of ASCII digits starting at the cursor.
    fn digits(&mut self) -> Result<&str, ParseError> {
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits are ascii"))
    }

    fn expr(&mut self) -> Result<UElement, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(b'+') => self.bump(),
            Some(b'-') => {
                negate = true;
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<UElement, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.bump();
            acc = acc.multiply(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<UElement, ParseError> {
        match self.peek() {
            Some(d) if d.is_ascii_digit() => self.rational(),
            Some(b'c') => {
                self.bump();
                let e = self.exponent()?;
                Ok(UElement::monomial(PBWMonomial::c_power(e)))
            }
            Some(b'l') => {
                self.bump();
                if self.peek() != Some(b'[') {
                    return Err(self.error("expected `[` after `l`"));
                }
                self.bump();
                let index = self.index()?;
                if self.peek() != Some(b']') {
                    return Err(self.error("expected `]` after the generator index"));
                }
                self.bump();
                let e = self.exponent()?;
                Ok(UElement::monomial(PBWMonomial::l_power(index, e)))
            }
            Some(_) => Err(self.error("expected a rational, `c`, or `l[<index>]`")),
            None => Err(self.error("expected a factor, found end of input")),
        }
    }

    /// Unsigned rational literal `p` or `p/q`.
    fn rational(&mut self) -> Result<UElement, ParseError> {
        self.skip_ws();
        let num = self.digits()?.to_string();
        let text = if self.peek() == Some(b'/') {
            self.bump();
            self.skip_ws();
            let den_pos = self.pos;
            let den = self.digits()?;
            if den.bytes().all(|b| b == b'0') {
                return Err(ParseError { pos: den_pos, message: "zero denominator".into() });
            }
            format!("{num}/{den}")
        } else {
            num
        };
        let value = Scalar::from_str(&text)
            .map_err(|e| self.error(format!("bad rational literal: {e}")))?;
        Ok(UElement::constant(value))
    }

    /// Signed integer inside generator brackets.
    fn index(&mut self) -> Result<i64, ParseError> {
        let negative = self.peek() == Some(b'-');
        if negative {
            self.bump();
            self.skip_ws();
        }
        let start = self.pos;
        let digits = self.digits()?;
        let magnitude: i64 = digits
            .parse()
            .map_err(|_| ParseError { pos: start, message: "generator index out of range".into() })?;
        Ok(if negative { -magnitude } else { magnitude })
    }

    /// Optional `^<posint>`; defaults to 1 and rejects zero.
    fn exponent(&mut self) -> Result<u32, ParseError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.bump();
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits()?;
        let e: u32 = digits
            .parse()
            .map_err(|_| ParseError { pos: start, message: "exponent out of range".into() })?;
        if e == 0 {
            return Err(ParseError { pos: start, message: "exponent must be positive".into() });
        }
        Ok(e)
    }
}
