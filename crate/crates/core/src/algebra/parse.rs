//! Text syntax for elements and presentations.
//!
//! ```text
//! expr    = [ "+" | "-" ] term { ( "+" | "-" ) term } ;
//! term    = factor { "*" factor | "/" integer | factor } ;
//! factor  = primary [ "^" integer ] ;
//! primary = integer | "a" | "b" | "(" expr ")" | "inv" "(" expr ")" ;
//! ```
//!
//! Juxtaposition is multiplication, so `3/2 b` reads as `(3/2)*b`. The
//! argument of `inv` must be a series in `b` with nonzero constant term.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::element::AbElement;
use crate::error::{Error, Result};
use crate::fresco::FrescoPresentation;
use crate::scalars::{Rational, TruncatedSeries};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    A,
    B,
    Inv,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
enum Expr {
    Num(Rational),
    A,
    B,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, BigInt),
    Pow(Box<Expr>, usize),
    Inv(Box<Expr>, usize),
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::SyntaxError { pos, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Num(s.parse().unwrap()), start));
                continue;
            }
            'a' => out.push((Tok::A, start)),
            'b' => out.push((Tok::B, start)),
            'i' if chars[i..].starts_with(&['i', 'n', 'v']) => {
                out.push((Tok::Inv, start));
                i += 3;
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '-' | '\u{2212}' => out.push((Tok::Minus, start)),
            '*' | '.' | '\u{b7}' => out.push((Tok::Star, start)),
            '/' => out.push((Tok::Slash, start)),
            '^' => out.push((Tok::Caret, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            _ => return Err(syntax(start, format!("unexpected character '{c}'"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.here(), format!("expected {what}")))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(n),
            _ => {
                self.pos -= 1;
                Err(syntax(self.here(), "expected an integer"))
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Expr::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(syntax(at, "division by zero"));
                    }
                    lhs = Expr::Div(Box::new(lhs), d);
                }
                Some(Tok::Num(_)) | Some(Tok::A) | Some(Tok::B) | Some(Tok::Inv)
                | Some(Tok::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.here();
            let e = self.integer()?;
            let e: usize = e
                .try_into()
                .map_err(|_| syntax(at, "exponent must be a small nonnegative integer"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Expr::Num(Rational::from_integer(n))),
            Some(Tok::A) => Ok(Expr::A),
            Some(Tok::B) => Ok(Expr::B),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Inv) => {
                self.expect(Tok::LParen, "'(' after inv")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Expr::Inv(Box::new(e), at))
            }
            Some(_) => Err(syntax(at, "unexpected token")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

fn parse_ast(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.chars().count() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.here(), "trailing input"));
    }
    Ok(e)
}

fn unit_series(e: &Expr, at: usize, precision: usize) -> Result<TruncatedSeries> {
    let x = eval(e, precision)?;
    let s = x
        .as_series()
        .ok_or_else(|| Error::NotAUnit(format!("inv argument at {at} depends on a")))?;
    if s.coeff(0).is_zero() {
        return Err(Error::NotAUnit(format!("{x} (zero constant term)")));
    }
    Ok(s)
}

fn eval(e: &Expr, n: usize) -> Result<AbElement> {
    Ok(match e {
        Expr::Num(q) => AbElement::monomial(q.clone(), 0, 0, n),
        Expr::A => AbElement::a(n),
        Expr::B => AbElement::b(n),
        Expr::Neg(x) => eval(x, n)?.neg(),
        Expr::Add(x, y) => eval(x, n)?.add(&eval(y, n)?),
        Expr::Sub(x, y) => eval(x, n)?.sub(&eval(y, n)?),
        Expr::Mul(x, y) => eval(x, n)?.mul(&eval(y, n)?),
        Expr::Div(x, d) => eval(x, n)?.scale(&Rational::new(BigInt::one(), d.clone())),
        Expr::Pow(x, k) => eval(x, n)?.pow(*k),
        Expr::Inv(x, at) => AbElement::from_series(&unit_series(x, *at, n)?.invert()?),
    })
}

/// Parses an expression into its left normal form modulo `b^precision`.
pub fn parse_element(src: &str, precision: usize) -> Result<AbElement> {
    eval(&parse_ast(src)?, precision)
}

/// Result of [`parse`]: either a presentation `(a-λ_1 b) S_1^{-1} ... (a-λ_k b)`
/// or a general element.
#[derive(Clone, Debug, PartialEq)]
pub enum Parsed {
    Presentation(FrescoPresentation),
    Element(AbElement),
}

enum Piece {
    Linear(Rational),
    Unit(TruncatedSeries),
}

fn flatten_product(e: &Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::Mul(x, y) => {
            flatten_product(x, out);
            flatten_product(y, out);
        }
        _ => out.push(e.clone()),
    }
}

fn as_linear(x: &AbElement) -> Option<Rational> {
    if x.a_degree() != Some(1) {
        return None;
    }
    let mut lambda = Rational::zero();
    for (&(m, d), c) in x.terms() {
        match (m, d) {
            (0, 1) if c.is_one() => {}
            (1, 0) => lambda = -c.clone(),
            _ => return None,
        }
    }
    Some(lambda)
}

fn pieces(e: &Expr, n: usize) -> Result<Option<Vec<Piece>>> {
    let mut factors = Vec::new();
    flatten_product(e, &mut factors);
    let mut out = Vec::new();
    for f in &factors {
        match f {
            Expr::Inv(inner, at) => out.push(Piece::Unit(unit_series(inner, *at, n)?)),
            Expr::Pow(base, k) => match as_linear(&eval(base, n)?) {
                Some(l) => out.extend((0..*k).map(|_| Piece::Linear(l.clone()))),
                None => return Ok(None),
            },
            _ => match as_linear(&eval(f, n)?) {
                Some(l) => out.push(Piece::Linear(l)),
                None => return Ok(None),
            },
        }
    }
    Ok(Some(out))
}

/// Parses text and recognizes the presentation shape when present.
pub fn parse(src: &str, precision: usize) -> Result<Parsed> {
    let ast = parse_ast(src)?;
    let element = eval(&ast, precision)?;
    let Some(ps) = pieces(&ast, precision)? else {
        return Ok(Parsed::Element(element));
    };
    let mut lambdas = Vec::new();
    let mut units: Vec<TruncatedSeries> = Vec::new();
    let mut pending: Option<TruncatedSeries> = None;
    for (i, p) in ps.into_iter().enumerate() {
        match p {
            Piece::Linear(l) => {
                if i > 0 {
                    units.push(pending.take().unwrap_or_else(|| TruncatedSeries::one(precision)));
                }
                lambdas.push(l);
            }
            Piece::Unit(s) => {
                if lambdas.is_empty() || pending.is_some() {
                    return Ok(Parsed::Element(element));
                }
                pending = Some(s);
            }
        }
    }
    if pending.is_some() || lambdas.is_empty() {
        return Ok(Parsed::Element(element));
    }
    // S_j is only defined up to a constant; normalize S_j(0) = 1
    let units = units
        .into_iter()
        .map(|s| {
            let c = s.coeff(0).recip();
            s.scale(&c)
        })
        .collect();
    Ok(Parsed::Presentation(FrescoPresentation::new(lambdas, units)?))
}
