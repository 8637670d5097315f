//! Operator grammar.
//!
//! ```text
//! list    := item (';' item)*
//! item    := vector | expr
//! vector  := '[' expr (',' expr)* ']'
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' INT)?
//! atom    := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers: `x1..xn`, `t` (or `t1..tp`), `dx1..dxn`, `dt` (or `dt1..dtp`), `h`; the
//! polynomial mode used for b-functions knows only `s`. Offsets are byte offsets into the
//! input.

use std::sync::Arc;

use dfilt::weyl::{AlgebraKind, Operator, Rat, Signature};
use dfilt::ModuleElement;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Largest exponent accepted in `a^k`.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { offset, message: message.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Rational(BigInt, BigInt),
    Var { name: String, offset: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// One entry of a relation list: a bare expression or a bracketed vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Scalar(Expr),
    Vector(Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Int,
    Ident,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    start: usize,
    text: String,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'/' => Some(Tok::Slash),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b',' => Some(Tok::Comma),
            b';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(kind) = single {
            out.push(Token { kind, start, text: (c as char).to_string() });
            i += 1;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token { kind: Tok::Int, start, text: src[start..i].to_string() });
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { kind: Tok::Ident, start, text: src[start..i].to_string() });
        } else {
            let ch = src[start..].chars().next().unwrap();
            return err(start, format!("unexpected character '{ch}'"));
        }
    }
    out.push(Token { kind: Tok::End, start: src.len(), text: String::new() });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.kind != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: Tok, what: &str) -> Result<Token, ParseError> {
        let t = self.peek().clone();
        if t.kind == kind {
            Ok(self.bump())
        } else {
            err(t.start, format!("expected {what}, found {}", describe(&t)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().kind {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().kind == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().kind != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.expect(Tok::Int, "an exponent")?;
        let k: u32 = match t.text.parse() {
            Ok(k) if k <= MAX_EXPONENT => k,
            _ => return err(t.start, format!("exponent {} exceeds {MAX_EXPONENT}", t.text)),
        };
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.kind {
            Tok::Int => {
                self.bump();
                let num: BigInt = t.text.parse().unwrap();
                if self.peek().kind == Tok::Slash {
                    self.bump();
                    let d = self.expect(Tok::Int, "a denominator")?;
                    let den: BigInt = d.text.parse().unwrap();
                    if den.is_zero() {
                        return err(d.start, "zero denominator");
                    }
                    return Ok(Expr::Rational(num, den));
                }
                Ok(Expr::Int(num))
            }
            Tok::Ident => {
                self.bump();
                Ok(Expr::Var { name: t.text, offset: t.start })
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => err(t.start, format!("expected a number, variable or '(', found {}", describe(&t))),
        }
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        if self.peek().kind != Tok::LBracket {
            return Ok(Item::Scalar(self.expr()?));
        }
        self.bump();
        let mut entries = vec![self.expr()?];
        while self.peek().kind == Tok::Comma {
            self.bump();
            entries.push(self.expr()?);
        }
        self.expect(Tok::RBracket, "',' or ']'")?;
        Ok(Item::Vector(entries))
    }

    fn finish(&self) -> Result<(), ParseError> {
        let t = self.peek();
        if t.kind == Tok::End {
            Ok(())
        } else {
            err(t.start, format!("unexpected {}", describe(t)))
        }
    }
}

fn describe(t: &Token) -> String {
    match t.kind {
        Tok::End => "end of input".into(),
        _ => format!("'{}'", t.text),
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// A `;`-separated list of scalars or vectors.
pub fn parse_list(src: &str) -> Result<Vec<Item>, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let mut items = vec![p.item()?];
    while p.peek().kind == Tok::Semi {
        p.bump();
        items.push(p.item()?);
    }
    p.finish()?;
    Ok(items)
}

/// Resolves identifiers against a signature and evaluates in normal form.
pub fn elaborate(e: &Expr, sig: &Arc<Signature>) -> Result<Operator, ParseError> {
    Ok(match e {
        Expr::Int(n) => Operator::constant(sig, Rat::from_integer(n.clone())),
        Expr::Rational(n, d) => Operator::constant(sig, Rat::new(n.clone(), d.clone())),
        Expr::Var { name, offset } => variable(name, *offset, sig)?,
        Expr::Neg(a) => -elaborate(a, sig)?,
        Expr::Add(a, b) => &elaborate(a, sig)? + &elaborate(b, sig)?,
        Expr::Sub(a, b) => &elaborate(a, sig)? - &elaborate(b, sig)?,
        Expr::Mul(a, b) => &elaborate(a, sig)? * &elaborate(b, sig)?,
        Expr::Pow(a, k) => elaborate(a, sig)?.pow(*k),
    })
}

fn variable(name: &str, offset: usize, sig: &Arc<Signature>) -> Result<Operator, ParseError> {
    let unknown = || err(offset, format!("unknown variable '{name}' for n = {}, p = {}", sig.n, sig.p));
    let index = |rest: &str, bound: usize| -> Option<usize> {
        let i: usize = rest.parse().ok()?;
        (rest.chars().next()? != '0' && (1..=bound).contains(&i)).then(|| i - 1)
    };
    if name == "h" {
        if sig.kind == AlgebraKind::Weyl {
            return err(offset, "h is not available in the Weyl algebra (use --kind homogenized)");
        }
        return Ok(Operator::h(sig));
    }
    if let Some(rest) = name.strip_prefix("dx") {
        return index(rest, sig.n).map(|i| Operator::dx(sig, i)).map_or_else(unknown, Ok);
    }
    if let Some(rest) = name.strip_prefix("dt") {
        if rest.is_empty() && sig.p == 1 {
            return Ok(Operator::dt(sig, 0));
        }
        return index(rest, sig.p).filter(|_| sig.p > 1).map(|j| Operator::dt(sig, j)).map_or_else(unknown, Ok);
    }
    if let Some(rest) = name.strip_prefix('x') {
        return index(rest, sig.n).map(|i| Operator::x(sig, i)).map_or_else(unknown, Ok);
    }
    if let Some(rest) = name.strip_prefix('t') {
        if rest.is_empty() && sig.p == 1 {
            return Ok(Operator::t(sig, 0));
        }
        return index(rest, sig.p).filter(|_| sig.p > 1).map(|j| Operator::t(sig, j)).map_or_else(unknown, Ok);
    }
    unknown()
}

pub fn parse_operator(src: &str, sig: &Arc<Signature>) -> Result<Operator, ParseError> {
    elaborate(&parse_expr(src)?, sig)
}

/// Parses relations; scalars are rank-one elements, every item must have the same rank.
pub fn parse_elements(src: &str, sig: &Arc<Signature>) -> Result<Vec<ModuleElement>, ParseError> {
    let items = parse_list(src)?;
    let mut out = Vec::with_capacity(items.len());
    for item in &items {
        out.push(match item {
            Item::Scalar(e) => ModuleElement::scalar(elaborate(e, sig)?),
            Item::Vector(es) => {
                ModuleElement::new(sig, es.iter().map(|e| elaborate(e, sig)).collect::<Result<_, _>>()?)
            }
        });
    }
    if let Some(first) = out.first() {
        if out.iter().any(|e| e.rank() != first.rank()) {
            return err(0, "relations have different lengths");
        }
    }
    Ok(out)
}

/// A polynomial in `s`, as used for b-functions.
pub fn parse_univariate(src: &str) -> Result<dfilt::restriction::UniPoly, ParseError> {
    use dfilt::restriction::UniPoly;
    fn go(e: &Expr) -> Result<UniPoly, ParseError> {
        Ok(match e {
            Expr::Int(n) => UniPoly::new(vec![Rat::from_integer(n.clone())]),
            Expr::Rational(n, d) => UniPoly::new(vec![Rat::new(n.clone(), d.clone())]),
            Expr::Var { name, offset } => {
                if name != "s" {
                    return err(*offset, format!("unknown variable '{name}', b-functions use s"));
                }
                UniPoly::new(vec![Rat::zero(), Rat::one()])
            }
            Expr::Neg(a) => go(a)?.scale(&-Rat::one()),
            Expr::Add(a, b) => go(a)?.add(&go(b)?),
            Expr::Sub(a, b) => go(a)?.add(&go(b)?.scale(&-Rat::one())),
            Expr::Mul(a, b) => go(a)?.mul(&go(b)?),
            Expr::Pow(a, k) => {
                let base = go(a)?;
                (0..*k).fold(UniPoly::one(), |acc, _| acc.mul(&base))
            }
        })
    }
    go(&parse_expr(src)?)
}

/// Comma-separated rationals such as `1/2,1/3`.
pub fn parse_rationals(src: &str) -> Result<Vec<Rat>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in src.split(',') {
        let trimmed = part.trim();
        let lead = part.len() - part.trim_start().len();
        let e = parse_expr(trimmed).map_err(|mut e| {
            e.offset += offset + lead;
            e
        })?;
        out.push(constant(&e).ok_or(ParseError { offset: offset + lead, message: format!("'{trimmed}' is not a rational") })?);
        offset += part.len() + 1;
    }
    Ok(out)
}

/// Comma-separated integers.
pub fn parse_integers(src: &str) -> Result<Vec<i64>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in src.split(',') {
        let lead = part.len() - part.trim_start().len();
        match part.trim().parse::<i64>() {
            Ok(v) => out.push(v),
            Err(_) => return err(offset + lead, format!("'{}' is not an integer", part.trim())),
        }
        offset += part.len() + 1;
    }
    Ok(out)
}

fn constant(e: &Expr) -> Option<Rat> {
    match e {
        Expr::Int(n) => Some(Rat::from_integer(n.clone())),
        Expr::Rational(n, d) => Some(Rat::new(n.clone(), d.clone())),
        Expr::Neg(a) => constant(a).map(|r| -r),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutation_on_input() {
        let s = Signature::weyl(0, 1);
        let p = parse_operator("dt*t", &s).unwrap();
        assert_eq!(p.to_string(), "t*dt + 1");
    }

    #[test]
    fn offsets() {
        let s = Signature::weyl(2, 0);
        assert_eq!(parse_operator("x1*(", &s).unwrap_err().offset, 4);
        assert_eq!(parse_operator("x1 + y", &s).unwrap_err().offset, 5);
        assert_eq!(parse_operator("x3", &s).unwrap_err().offset, 0);
        assert_eq!(parse_operator("x1^99999", &s).unwrap_err().offset, 3);
        assert_eq!(parse_operator("2 * h", &s).unwrap_err().offset, 4);
    }

    #[test]
    fn s12_literal() {
        let s = Signature::weyl(2, 0);
        let p = parse_operator("2*x1*dx2 - 3*x2^2*dx1", &s).unwrap();
        assert_eq!(p.to_string(), "2*x1*dx2 - 3*x2^2*dx1");
    }

    #[test]
    fn lists_and_polys() {
        let s = Signature::weyl(1, 0);
        let els = parse_elements("[x1, 1]; [dx1, 0]", &s).unwrap();
        assert_eq!(els.len(), 2);
        assert!(parse_elements("[x1, 1]; x1", &s).is_err());
        assert_eq!(parse_univariate("(s+1)^2").unwrap().to_string(), "(s+1)^2");
        assert_eq!(parse_rationals("1/2, 1/3").unwrap().len(), 2);
        assert_eq!(parse_rationals("1/2,x").unwrap_err().offset, 4);
    }
}
