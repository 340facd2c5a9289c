//! Expression grammar shared by equations and coefficient strings.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | '+' unary | power
//! power   := atom ('^' INT)?
//! atom    := INT | 'i' | 'x' | 't' | 'y' DIGITS | '(' expr ')'
//! ```
//!
//! Implicit multiplication is rejected. Division by a non-constant is only
//! meaningful for rational functions in `t`.

use crate::error::{Error, Result};
use crate::exact::{GaussianRational, RatFunc};

use super::ode::{AlgebraicOde, XyPoly};

const MAX_Y: usize = 99;
const MAX_EXPONENT: u32 = 10_000;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(num_bigint::BigInt),
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

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            column += i - start;
            out.push(Spanned { tok: Tok::Int(s.parse().unwrap()), line: l0, column: c0 });
            continue;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            column += i - start;
            out.push(Spanned { tok: Tok::Ident(s), line: l0, column: c0 });
            continue;
        } else {
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(syntax(l0, c0, format!("unexpected character '{c}'"))),
            }
        };
        out.push(Spanned { tok, line: l0, column: c0 });
        i += 1;
        column += 1;
    }
    out.push(Spanned { tok: Tok::End, line, column });
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Int(num_bigint::BigInt),
    I,
    X,
    T,
    Y(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, (usize, usize)),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> Error {
        let s = self.peek();
        syntax(s.line, s.column, message)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
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

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    let at = self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), (at.line, at.column));
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::LParen => {
                    return Err(self.err_here("implicit multiplication is not allowed; use '*'"));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.peek().clone();
        match at.tok {
            Tok::Int(ref n) => {
                let e: u32 =
                    u32::try_from(n).ok().filter(|&e| e <= MAX_EXPONENT).ok_or_else(|| syntax(at.line, at.column, "exponent too large"))?;
                self.bump();
                if self.peek().tok == Tok::Caret {
                    return Err(self.err_here("chained '^' is ambiguous; use parentheses"));
                }
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => Err(syntax(at.line, at.column, "'^' takes a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let s = self.bump();
        match s.tok {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(Expr::I),
                "x" => Ok(Expr::X),
                "t" => Ok(Expr::T),
                _ => {
                    let idx = name
                        .strip_prefix('y')
                        .filter(|d| !d.is_empty() && d.len() <= 2 && d.bytes().all(|b| b.is_ascii_digit()))
                        .and_then(|d| d.parse::<usize>().ok())
                        .filter(|&j| j <= MAX_Y);
                    idx.map(Expr::Y).ok_or_else(|| syntax(s.line, s.column, format!("unknown identifier '{name}'")))
                }
            },
            Tok::LParen => {
                let e = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.err_here("expected ')'"));
                }
                self.bump();
                Ok(e)
            }
            Tok::End => Err(syntax(s.line, s.column, "unexpected end of input")),
            _ => Err(syntax(s.line, s.column, "expected a number, variable or '('")),
        }
    }
}

fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.err_here("unexpected token after expression"));
    }
    Ok(e)
}

fn max_y(e: &Expr) -> Option<usize> {
    match e {
        Expr::Y(j) => Some(*j),
        Expr::Int(_) | Expr::I | Expr::X | Expr::T => None,
        Expr::Neg(a) | Expr::Pow(a, _) => max_y(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => max_y(a).max(max_y(b)),
    }
}

fn to_xy(e: &Expr, vars: usize) -> Result<XyPoly> {
    Ok(match e {
        Expr::Int(n) => XyPoly::constant(vars, GaussianRational::real(n.clone().into())),
        Expr::I => XyPoly::constant(vars, GaussianRational::i()),
        Expr::X => XyPoly::x(vars),
        Expr::T => return Err(Error::InvalidProblem("'t' is not allowed in an equation".into())),
        Expr::Y(j) => XyPoly::y(vars, *j),
        Expr::Neg(a) => to_xy(a, vars)?.neg(),
        Expr::Add(a, b) => to_xy(a, vars)?.add(&to_xy(b, vars)?),
        Expr::Sub(a, b) => to_xy(a, vars)?.sub(&to_xy(b, vars)?),
        Expr::Mul(a, b) => to_xy(a, vars)?.mul(&to_xy(b, vars)?),
        Expr::Pow(a, k) => to_xy(a, vars)?.pow(*k),
        Expr::Div(a, b, (line, column)) => {
            let d = to_xy(b, vars)?.as_constant().ok_or_else(|| syntax(*line, *column, "equations may only be divided by constants"))?;
            let inv = d.inv().ok_or(Error::DivisionByZeroPolynomial)?;
            to_xy(a, vars)?.scale(&inv)
        }
    })
}

fn to_ratfunc(e: &Expr) -> Result<RatFunc> {
    Ok(match e {
        Expr::Int(n) => RatFunc::constant(GaussianRational::real(n.clone().into())),
        Expr::I => RatFunc::constant(GaussianRational::i()),
        Expr::T => RatFunc::t(),
        Expr::X | Expr::Y(_) => {
            return Err(Error::InvalidProblem("coefficients are functions of 't' only".into()));
        }
        Expr::Neg(a) => -to_ratfunc(a)?,
        Expr::Add(a, b) => &to_ratfunc(a)? + &to_ratfunc(b)?,
        Expr::Sub(a, b) => &to_ratfunc(a)? - &to_ratfunc(b)?,
        Expr::Mul(a, b) => &to_ratfunc(a)? * &to_ratfunc(b)?,
        Expr::Pow(a, k) => to_ratfunc(a)?.pow(*k),
        Expr::Div(a, b, _) => to_ratfunc(a)?.checked_div(&to_ratfunc(b)?)?,
    })
}

/// Parses `F(x, y0, …, yn)`. With `order` given, `n` is fixed to it and any
/// higher y-index is an error; otherwise `n` is the highest index mentioned.
pub fn parse_ode(text: &str, order: Option<usize>) -> Result<AlgebraicOde> {
    let e = parse_expr(text)?;
    let top = max_y(&e);
    let n = match (order, top) {
        (Some(n), Some(j)) if j > n => {
            return Err(Error::InvalidProblem(format!("y{j} exceeds the declared order {n}")));
        }
        (Some(n), _) => n,
        (None, Some(j)) => j,
        (None, None) => return Err(Error::InvalidProblem("equation does not involve the unknown".into())),
    };
    AlgebraicOde::new(to_xy(&e, n + 1)?)
}

/// Parses a rational function of `t`.
pub fn parse_ratfunc(text: &str) -> Result<RatFunc> {
    to_ratfunc(&parse_expr(text)?)
}
