//! Recursive-descent parsing of ring and homomorphism expressions.
//!
//! Grammar (whitespace-insensitive):
//!   ring     := atom ("x" atom)*
//!   atom     := "Z/" NAT
//!             | "Z/" NAT "[" IDENT "]" "/(" poly ")"
//!             | "(" ring ")"
//!   poly     := ["-"] term (("+" | "-") term)*
//!   term     := NAT | [NAT] IDENT ["^" NAT]
//!   hom      := ring "->" ring (":" bindings)?
//!   bindings := IDENT "->" poly ("," IDENT "->" poly)*
//!
//! Errors carry the byte offset of the offending token and, for syntax
//! errors, the set of tokens that would have been accepted there.

use std::fmt;

use crate::ast::{HomExpr, Poly, RingExpr};

/// A parse failure: where it happened and what would have been accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input text.
    pub offset: usize,
    /// What was found there, rendered for humans.
    pub found: String,
    /// Acceptable tokens at this position (empty for semantic errors).
    pub expected: Vec<String>,
    /// For semantic errors (non-monic modulus, zero modulus, unbound
    /// generator), the rule that was violated.
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: ", self.offset)?;
        if let Some(message) = &self.message {
            write!(f, "{message}")
        } else {
            write!(f, "found {}, expected {}", self.found, self.expected.join(" or "))
        }
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    fn syntax(offset: usize, found: impl Into<String>, expected: &[&str]) -> ParseError {
        ParseError {
            offset,
            found: found.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: None,
        }
    }

    fn semantic(offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset,
            found: String::new(),
            expected: Vec::new(),
            message: Some(message.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Nat(u64),
    Ident(String),
    Slash,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Plus,
    Minus,
    Caret,
    Comma,
    Colon,
    Arrow,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Nat(n) => format!("number {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Slash => "'/'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Comma => "','".into(),
            Tok::Colon => "':'".into(),
            Tok::Arrow => "'->'".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                let value: u64 = digits.parse().map_err(|_| {
                    ParseError::semantic(start, format!("number {digits} is out of range"))
                })?;
                tokens.push((start, Tok::Nat(value)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push((start, Tok::Ident(text[start..i].to_string())));
            }
            b'-' if i + 1 < bytes.len() && bytes[i + 1] == b'>' => {
                tokens.push((i, Tok::Arrow));
                i += 2;
            }
            b'-' => {
                tokens.push((i, Tok::Minus));
                i += 1;
            }
            b'/' => {
                tokens.push((i, Tok::Slash));
                i += 1;
            }
            b'[' => {
                tokens.push((i, Tok::LBracket));
                i += 1;
            }
            b']' => {
                tokens.push((i, Tok::RBracket));
                i += 1;
            }
            b'(' => {
                tokens.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                tokens.push((i, Tok::RParen));
                i += 1;
            }
            b'+' => {
                tokens.push((i, Tok::Plus));
                i += 1;
            }
            b'^' => {
                tokens.push((i, Tok::Caret));
                i += 1;
            }
            b',' => {
                tokens.push((i, Tok::Comma));
                i += 1;
            }
            b':' => {
                tokens.push((i, Tok::Colon));
                i += 1;
            }
            other => {
                return Err(ParseError::syntax(
                    i,
                    format!("character '{}'", other as char),
                    &["a token"],
                ))
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    end_offset: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            tokens: lex(text)?,
            pos: 0,
            end_offset: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(o, _)| o)
            .unwrap_or(self.end_offset)
    }

    fn found(&self) -> String {
        self.tokens
            .get(self.pos)
            .map(|(_, t)| t.describe())
            .unwrap_or_else(|| "end of input".into())
    }

    fn expect(&mut self, want: &Tok, label: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::syntax(self.offset(), self.found(), &[label]))
        }
    }

    fn expect_nat(&mut self, label: &str) -> Result<(usize, u64), ParseError> {
        let offset = self.offset();
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let n = *n;
                self.pos += 1;
                Ok((offset, n))
            }
            _ => Err(ParseError::syntax(offset, self.found(), &[label])),
        }
    }

    fn expect_ident(&mut self, label: &str) -> Result<(usize, String), ParseError> {
        let offset = self.offset();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((offset, s))
            }
            _ => Err(ParseError::syntax(offset, self.found(), &[label])),
        }
    }

    fn ring(&mut self) -> Result<RingExpr, ParseError> {
        let first = self.atom()?;
        let mut factors = vec![first];
        while matches!(self.peek(), Some(Tok::Ident(s)) if s == "x") {
            self.pos += 1;
            factors.push(self.atom()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            RingExpr::Product(factors)
        })
    }

    fn atom(&mut self) -> Result<RingExpr, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "Z" => {
                self.pos += 1;
                self.expect(&Tok::Slash, "'/'")?;
                let (nat_offset, modulus) = self.expect_nat("a modulus")?;
                if modulus == 0 {
                    return Err(ParseError::semantic(
                        nat_offset,
                        "the modulus must be at least 1",
                    ));
                }
                if self.peek() != Some(&Tok::LBracket) {
                    return Ok(RingExpr::Modular(modulus));
                }
                self.pos += 1;
                let (_, var) = self.expect_ident("a variable name")?;
                self.expect(&Tok::RBracket, "']'")?;
                self.expect(&Tok::Slash, "'/'")?;
                self.expect(&Tok::LParen, "'('")?;
                let poly_offset = self.offset();
                let poly = self.poly(Some(&var))?;
                self.expect(&Tok::RParen, "')'")?;
                if poly.degree().unwrap_or(0) < 1 {
                    return Err(ParseError::semantic(
                        poly_offset,
                        "the modulus polynomial must have degree at least 1",
                    ));
                }
                if !poly.is_monic() {
                    return Err(ParseError::semantic(
                        poly_offset,
                        "the modulus polynomial must be monic",
                    ));
                }
                Ok(RingExpr::PolyQuotient { modulus, var, poly })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.ring()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(ParseError::syntax(
                self.offset(),
                self.found(),
                &["'Z'", "'('"],
            )),
        }
    }

    /// Parses a polynomial whose variable must be `var`; other identifiers
    /// are rejected with a semantic error, and any identifier is rejected
    /// when `var` is None (constants only).
    fn poly(&mut self, var: Option<&str>) -> Result<Poly, ParseError> {
        let mut coeffs: Vec<i64> = Vec::new();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                Some(Tok::Plus) if !first => {
                    self.pos += 1;
                    false
                }
                _ if first => false,
                _ => break,
            };
            let (coefficient, raw_seen) = match self.peek() {
                Some(Tok::Nat(n)) => {
                    let n = *n;
                    let offset = self.offset();
                    self.pos += 1;
                    let c = i64::try_from(n).map_err(|_| {
                        ParseError::semantic(offset, format!("coefficient {n} is out of range"))
                    })?;
                    (c, true)
                }
                _ => (1, false),
            };
            let degree = match self.peek() {
                Some(Tok::Ident(name)) => {
                    match var {
                        None => {
                            return Err(ParseError::semantic(
                                self.offset(),
                                "the target ring declares no generator; only constant images are possible",
                            ))
                        }
                        Some(v) if name != v => {
                            return Err(ParseError::semantic(
                                self.offset(),
                                format!("unknown variable '{name}'; this polynomial is in '{v}'"),
                            ))
                        }
                        Some(_) => {}
                    }
                    self.pos += 1;
                    if self.peek() == Some(&Tok::Caret) {
                        self.pos += 1;
                        let (offset, d) = self.expect_nat("an exponent")?;
                        usize::try_from(d).ok().filter(|&d| d <= 64).ok_or_else(|| {
                            ParseError::semantic(offset, format!("exponent {d} is out of range"))
                        })?
                    } else {
                        1
                    }
                }
                _ if raw_seen => 0,
                _ => {
                    return Err(ParseError::syntax(
                        self.offset(),
                        self.found(),
                        &["a coefficient", "a variable"],
                    ))
                }
            };
            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, 0);
            }
            coeffs[degree] += if negative { -coefficient } else { coefficient };
            first = false;
            match self.peek() {
                Some(Tok::Plus) | Some(Tok::Minus) => continue,
                _ => break,
            }
        }
        Ok(Poly::new(coeffs))
    }

    fn hom(&mut self) -> Result<HomExpr, ParseError> {
        let source = self.ring()?;
        self.expect(&Tok::Arrow, "'->'")?;
        let target = self.ring()?;
        let mut bindings = Vec::new();
        let declared = source.generator_names();
        if self.peek() == Some(&Tok::Colon) {
            self.pos += 1;
            let target_var = match &target {
                RingExpr::PolyQuotient { var, .. } => Some(var.clone()),
                _ => None,
            };
            loop {
                let (name_offset, name) = self.expect_ident("a generator name")?;
                if !declared.contains(&name) {
                    return Err(ParseError::semantic(
                        name_offset,
                        format!("the source ring declares no generator named '{name}'"),
                    ));
                }
                if bindings.iter().any(|(n, _)| *n == name) {
                    return Err(ParseError::semantic(
                        name_offset,
                        format!("generator '{name}' is bound twice"),
                    ));
                }
                self.expect(&Tok::Arrow, "'->'")?;
                let poly = self.poly(target_var.as_deref())?;
                bindings.push((name, poly));
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }

        // bindings must cover exactly the source's declared generators
        if let Some(missing) = declared.iter().find(|d| !bindings.iter().any(|(n, _)| n == *d)) {
            return Err(ParseError::semantic(
                self.end_offset,
                format!("unbound generator '{missing}': add ': {missing} -> <image>'"),
            ));
        }
        Ok(HomExpr {
            source,
            target,
            bindings,
        })
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(ParseError::syntax(
                self.offset(),
                self.found(),
                &["end of input"],
            ))
        }
    }
}

pub fn parse_ring(text: &str) -> Result<RingExpr, ParseError> {
    let mut parser = Parser::new(text)?;
    let expr = parser.ring()?;
    parser.finish()?;
    Ok(expr)
}

pub fn parse_hom(text: &str) -> Result<HomExpr, ParseError> {
    let mut parser = Parser::new(text)?;
    let expr = parser.hom()?;
    parser.finish()?;
    Ok(expr)
}
