//! Recursive-descent parser for the plain grammar produced by
//! [`super::render::to_plain`].
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' integer]
//! atom   := integer | 'i' | 'h' | 'e' | jet | '(' expr ')'
//! jet    := 'u' [color] ['_' order]
//! ```
//! Division is only allowed by a nonzero constant.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::jet::JetVar;
use super::poly::DiffPoly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Jet(Option<usize>, u32),
    H,
    E,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| -> Option<String> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        (*i > start).then(|| chars[start..*i].iter().collect())
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            'h' => Some(Tok::H),
            'e' => Some(Tok::E),
            'i' => Some(Tok::I),
            _ => None,
        };
        if let Some(t) = single {
            i += 1;
            if matches!(t, Tok::H | Tok::E | Tok::I)
                && i < chars.len()
                && chars[i].is_ascii_alphanumeric()
            {
                return Err(Error::Parse(format!("unexpected identifier at offset {}", i - 1)));
            }
            out.push(t);
            continue;
        }
        if c.is_ascii_digit() {
            let d = digits(&mut i).expect("digit present");
            out.push(Tok::Int(d.parse().expect("decimal digits")));
            continue;
        }
        if c == 'u' {
            i += 1;
            let color = match digits(&mut i) {
                Some(d) => {
                    let n: usize = d
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad color {d}")))?;
                    if n == 0 {
                        return Err(Error::Parse("colors are numbered from 1".into()));
                    }
                    Some(n - 1)
                }
                None => None,
            };
            let mut order = 0;
            if i < chars.len() && chars[i] == '_' {
                i += 1;
                let d = digits(&mut i)
                    .ok_or_else(|| Error::Parse("expected jet order after '_'".into()))?;
                order = d
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad jet order {d}")))?;
            }
            if i < chars.len() && chars[i].is_ascii_alphabetic() {
                return Err(Error::Parse(format!("unexpected identifier at offset {i}")));
            }
            out.push(Tok::Jet(color, order));
            continue;
        }
        return Err(Error::Parse(format!("unexpected character {c:?} at offset {i}")));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<DiffPoly> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                neg = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.factor()?;
                    let c = as_constant(&d)
                        .ok_or_else(|| Error::Parse("division by a non-constant".into()))?;
                    let inv = c
                        .inv()
                        .map_err(|_| Error::Parse("division by zero".into()))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<DiffPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(n)) => {
                    let k: u32 = n
                        .try_into()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow_trunc(k, &super::Truncation::unbounded()))
                }
                _ => Err(Error::Parse("expected integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<DiffPoly> {
        let dim = self.dim;
        match self.next() {
            Some(Tok::Int(n)) => Ok(DiffPoly::constant(
                dim,
                Scalar::from_rational(BigRational::from_integer(n)),
            )),
            Some(Tok::I) => Ok(DiffPoly::constant(dim, Scalar::i())),
            Some(Tok::H) => Ok(DiffPoly::monomial(dim, Scalar::one(), 1, 0, vec![])),
            Some(Tok::E) => Ok(DiffPoly::monomial(dim, Scalar::one(), 0, 1, vec![])),
            Some(Tok::Jet(color, order)) => {
                let color = match color {
                    Some(c) => c,
                    None if dim == 1 => 0,
                    None => {
                        return Err(Error::Parse(format!(
                            "bare 'u' is ambiguous with {dim} colors"
                        )))
                    }
                };
                if color >= dim {
                    return Err(Error::Parse(format!(
                        "color {} exceeds dimension {dim}",
                        color + 1
                    )));
                }
                Ok(DiffPoly::monomial(
                    dim,
                    Scalar::one(),
                    0,
                    0,
                    vec![JetVar::new(color, order)],
                ))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse("expected ')'".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn as_constant(p: &DiffPoly) -> Option<Scalar> {
    if p.is_zero() {
        return Some(Scalar::zero());
    }
    if p.len() != 1 {
        return None;
    }
    let (k, c) = p.terms().iter().next()?;
    (k.hpow == 0 && k.epow == 0 && k.mono.arity() == 0).then(|| c.clone())
}

/// Parses a differential polynomial in `dim` colors.
pub fn parse_poly(s: &str, dim: usize) -> Result<DiffPoly> {
    if dim == 0 {
        return Err(Error::Invalid("dimension must be positive".into()));
    }
    let mut p = Parser {
        toks: lex(s)?,
        pos: 0,
        dim,
    };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {}",
            p.pos
        )));
    }
    Ok(out)
}
