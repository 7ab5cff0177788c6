//! Text grammar for polynomials and the canonical printer.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := '-' factor | '+' factor | power
//! power    := atom ('^' INTEGER)?
//! atom     := INTEGER ('/' INTEGER)? | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers: `x`, `y` (when `m = 2`), `z1..zm`, `x1..xn`/`y1..yn` (even `m`),
//! `s` (when `m2 = 1`), `s1..sm2`, and `t`.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::poly::{Layout, Poly};
use crate::error::{Error, Result};
use crate::group::GroupSpec;

pub fn parse_poly(text: &str, spec: &GroupSpec) -> Result<Poly> {
    parse_with_layout(text, Layout::of(spec))
}

pub fn parse_with_layout(text: &str, layout: Layout) -> Result<Poly> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        layout,
    };
    let p = parser.expr()?;
    match parser.peek() {
        (Tok::End, _) => Ok(p),
        (tok, at) => Err(parse_err(at, format!("unexpected {tok}"))),
    }
}

/// Printable name of variable index `var`.
pub fn var_name(layout: &Layout, var: usize) -> String {
    if var < layout.m {
        if layout.m == 2 {
            ["x", "y"][var].to_string()
        } else {
            format!("z{}", var + 1)
        }
    } else if var < layout.m + layout.m2 {
        if layout.m2 == 1 {
            "s".to_string()
        } else {
            format!("s{}", var - layout.m + 1)
        }
    } else {
        "t".to_string()
    }
}

fn resolve(layout: &Layout, name: &str) -> Option<usize> {
    let index = |prefix: &str| -> Option<usize> {
        name.strip_prefix(prefix)?
            .parse::<usize>()
            .ok()
            .filter(|&i| i >= 1)
    };
    match name {
        "x" if layout.m == 2 => return Some(0),
        "y" if layout.m == 2 => return Some(1),
        "s" if layout.m2 == 1 => return Some(layout.m),
        "t" => return Some(layout.time()),
        _ => {}
    }
    if let Some(i) = index("z").filter(|&i| i <= layout.m) {
        return Some(i - 1);
    }
    if let Some(l) = index("s").filter(|&l| l <= layout.m2) {
        return Some(layout.m + l - 1);
    }
    if layout.m % 2 == 0 {
        let n = layout.m / 2;
        if let Some(i) = index("x").filter(|&i| i <= n) {
            return Some(i - 1);
        }
        if let Some(i) = index("y").filter(|&i| i <= n) {
            return Some(n + i - 1);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            other => return Err(parse_err(start, format!("unexpected character '{other}'"))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    layout: Layout,
}

impl Parser {
    fn peek(&self) -> (Tok, usize) {
        self.tokens[self.pos].clone()
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.peek();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek().0 == Tok::Star {
            self.bump();
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        match self.peek().0 {
            Tok::Minus => {
                self.bump();
                Ok(-self.factor()?)
            }
            Tok::Plus => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek().0 != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (Tok::Int(n), at) => {
                let e = n
                    .to_u32()
                    .filter(|&e| e <= 64)
                    .ok_or_else(|| parse_err(at, "exponent too large"))?;
                Ok(base.pow(e))
            }
            (_, at) => Err(parse_err(at, "exponent must be a non-negative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.bump() {
            (Tok::Int(p), _) => {
                if self.peek().0 == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        (Tok::Int(q), at) => {
                            if q.is_zero() {
                                return Err(parse_err(at, "zero denominator"));
                            }
                            Ok(Poly::constant(self.layout, BigRational::new(p, q)))
                        }
                        (_, at) => Err(parse_err(at, "expected integer denominator after '/'")),
                    }
                } else {
                    Ok(Poly::constant(self.layout, BigRational::from_integer(p)))
                }
            }
            (Tok::Ident(name), at) => resolve(&self.layout, &name)
                .map(|v| Poly::var(self.layout, v))
                .ok_or_else(|| parse_err(at, format!("unknown identifier '{name}'"))),
            (Tok::LParen, _) => {
                let inner = self.expr()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (tok, at) => Err(parse_err(at, format!("expected ')', found {tok}"))),
                }
            }
            (tok, at) => Err(parse_err(at, format!("unexpected {tok}"))),
        }
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical form: terms in descending graded-lex order, `*` between factors.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let layout = self.layout();
        for (k, (mono, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let factors: Vec<String> = mono
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let name = var_name(&layout, v);
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}
