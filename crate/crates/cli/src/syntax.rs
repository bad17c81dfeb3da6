//! Surface syntax for Weyl algebra elements.
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary ("*" unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" integer)?
//! atom    := integer ("/" integer)? | "x" | "D" | "z" | "Dz" | "(" expr ")"
//! ```
//!
//! `*` is the noncommutative product, so `D*x` parses to `x*D + 1`.
//! Juxtaposition is rejected. An expression uses either `x, D` or `z, Dz`;
//! one with no symbols lives on the `x` side.

use num::{BigInt, Zero};
use weyl_core::{Error, Rational, Result, Side, WeylElement};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Sym { side: Side, is_d: bool },
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            b'x' => Tok::Sym { side: Side::X, is_d: false },
            b'z' => Tok::Sym { side: Side::Z, is_d: false },
            b'D' if bytes.get(i + 1) == Some(&b'z') => {
                i += 1;
                Tok::Sym { side: Side::Z, is_d: true }
            }
            b'D' => Tok::Sym { side: Side::X, is_d: true },
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(Error::Parse { pos: i, msg: format!("unexpected character {ch:?}") });
            }
        };
        i += 1;
        if let Tok::Sym { .. } = tok {
            if bytes.get(i).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') {
                return Err(Error::Parse { pos: i, msg: "symbols must be separated by an operator".into() });
            }
        }
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    side: Side,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<WeylElement> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc += &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WeylElement> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<WeylElement> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<WeylElement> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let Some(Tok::Int(n)) = self.bump() else {
            return Err(Error::Parse { pos: at, msg: "expected a nonnegative integer exponent".into() });
        };
        let exp = u32::try_from(&n)
            .ok()
            .filter(|e| *e <= MAX_EXPONENT)
            .ok_or_else(|| Error::Parse { pos: at, msg: format!("exponent {n} exceeds {MAX_EXPONENT}") })?;
        if self.peek() == Some(&Tok::Caret) {
            return self.err("chained exponents need parentheses");
        }
        Ok(base.pow(exp))
    }

    fn atom(&mut self) -> Result<WeylElement> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(p)) => {
                let mut value = Rational::from_integer(p);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let den_at = self.offset();
                    match self.bump() {
                        Some(Tok::Int(q)) if !q.is_zero() => value /= Rational::from_integer(q),
                        Some(Tok::Int(_)) => return Err(Error::Parse { pos: den_at, msg: "zero denominator".into() }),
                        _ => return Err(Error::Parse { pos: den_at, msg: "expected an integer denominator".into() }),
                    }
                }
                self.no_juxtaposition()?;
                Ok(WeylElement::constant(self.side, value))
            }
            Some(Tok::Sym { is_d, .. }) => {
                let e = if is_d { WeylElement::d(self.side) } else { WeylElement::x(self.side) };
                self.no_juxtaposition()?;
                Ok(e)
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return self.err("expected ')'");
                }
                self.no_juxtaposition()?;
                Ok(inner)
            }
            Some(_) => Err(Error::Parse { pos: at, msg: "expected a literal, symbol or '('".into() }),
            None => Err(Error::Parse { pos: at, msg: "unexpected end of input".into() }),
        }
    }

    fn no_juxtaposition(&self) -> Result<()> {
        match self.peek() {
            Some(Tok::Int(_) | Tok::Sym { .. } | Tok::LParen) => self.err("juxtaposition is not a product; use '*'"),
            _ => Ok(()),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<WeylElement> {
    let toks = lex(text)?;
    let mut side = None;
    for (pos, t) in &toks {
        if let Tok::Sym { side: s, .. } = t {
            match side {
                None => side = Some(*s),
                Some(prev) if prev != *s => {
                    return Err(Error::Parse { pos: *pos, msg: "cannot mix x/D with z/Dz".into() })
                }
                Some(_) => {}
            }
        }
    }
    let mut p = Parser { toks, pos: 0, end: text.len(), side: side.unwrap_or(Side::X) };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected token");
    }
    Ok(e)
}

/// Canonical text; terms by descending `D`-power, then descending
/// `x`-power. `parse_expression(&format_element(e)) == e`.
pub fn format_element(e: &WeylElement) -> String {
    e.to_string()
}

/// `p/q`, `p`, `-p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}
