//! Scalar expressions in the surface parameters `u` and `v`.
//!
//! Infix grammar, from loosest to tightest binding:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?            right-associative
//! atom   := number | 'u' | 'v' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | tan | sinh | cosh | tanh | exp | log | sqrt | abs
//! ```
//!
//! `-u^2` is `-(u^2)` and `2^3^2` is `2^9`. A power whose exponent is free of
//! variables and evaluates to an integer is computed by repeated multiplication,
//! so negative bases are allowed; any other power is `exp(b log a)` and needs
//! `a > 0`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

use crate::jets::{Jet2, JetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    U,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply_jet(self, a: Jet2) -> Result<Jet2, JetError> {
        Ok(match self {
            Func::Sin => a.sin(),
            Func::Cos => a.cos(),
            Func::Tan => a.tan()?,
            Func::Sinh => a.sinh(),
            Func::Cosh => a.cosh(),
            Func::Tanh => a.tanh(),
            Func::Exp => a.exp(),
            Func::Log => a.ln()?,
            Func::Sqrt => a.sqrt()?,
            Func::Abs => a.abs()?,
        })
    }

    fn apply_f64(self, a: f64) -> Result<f64, EvalError> {
        let domain = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(EvalError::Domain { op: self.name(), value: a })
            }
        };
        Ok(match self {
            Func::Sin => a.sin(),
            Func::Cos => a.cos(),
            Func::Tan => a.tan(),
            Func::Sinh => a.sinh(),
            Func::Cosh => a.cosh(),
            Func::Tanh => a.tanh(),
            Func::Exp => a.exp(),
            Func::Log => {
                domain(a > 0.0)?;
                a.ln()
            }
            Func::Sqrt => {
                domain(a >= 0.0)?;
                a.sqrt()
            }
            Func::Abs => a.abs(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

/// Expression tree. Immutable once built; evaluation is pure.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Neg(Box<Expr>),
    Func(Func, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyInput,
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    UnbalancedParenthesis,
    UnknownIdentifier(String),
    InvalidNumber(String),
    UnexpectedCharacter(char),
}

/// Syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {}", describe(.kind))]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::EmptyInput => "empty expression".into(),
        ParseErrorKind::UnexpectedToken { found, expected } => {
            format!("unexpected `{found}`, expected {expected}")
        }
        ParseErrorKind::UnexpectedEnd { expected } => {
            format!("unexpected end of input, expected {expected}")
        }
        ParseErrorKind::UnbalancedParenthesis => "unbalanced parenthesis".into(),
        ParseErrorKind::UnknownIdentifier(name) => format!("unknown identifier `{name}`"),
        ParseErrorKind::InvalidNumber(text) => format!("invalid number `{text}`"),
        ParseErrorKind::UnexpectedCharacter(c) => format!("unexpected character `{c}`"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{op} is undefined or not differentiable at {value}")]
    Domain { op: &'static str, value: f64 },
    #[error("evaluation produced a non-finite value")]
    NonFinite,
}

impl From<JetError> for EvalError {
    fn from(e: JetError) -> Self {
        match e {
            JetError::DivisionByZero => EvalError::DivisionByZero,
            JetError::Domain { op, value } => EvalError::Domain { op, value },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
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

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Num(x) => format!("{x}"),
            Tok::Ident(s) => s.clone(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((start, tok));
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // Exponent only when digits follow, so `2e` stays `2` then `e`.
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            match text.parse::<f64>() {
                Ok(x) if x.is_finite() => out.push((start, Tok::Num(x))),
                _ => {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::InvalidNumber(text.to_string()),
                    })
                }
            }
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else {
            let ch = src[start..].chars().next().unwrap_or('?');
            return Err(ParseError { offset: start, kind: ParseErrorKind::UnexpectedCharacter(ch) });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    open: Vec<usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &'static str) -> ParseError {
        let kind = match self.peek() {
            Tok::End => match self.open.last() {
                Some(&at) => return ParseError { offset: at, kind: ParseErrorKind::UnbalancedParenthesis },
                None => ParseErrorKind::UnexpectedEnd { expected },
            },
            Tok::RParen if self.open.is_empty() => ParseErrorKind::UnbalancedParenthesis,
            t => ParseErrorKind::UnexpectedToken { found: t.text(), expected },
        };
        ParseError { offset: self.offset(), kind }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn parenthesized(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        if *self.peek() != Tok::LParen {
            return Err(self.error("`(`"));
        }
        self.bump();
        self.open.push(at);
        let inner = self.expr()?;
        if *self.peek() != Tok::RParen {
            return Err(self.error("`)`"));
        }
        self.bump();
        self.open.pop();
        Ok(inner)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(x) => {
                self.bump();
                Ok(Expr::Const(x))
            }
            Tok::LParen => self.parenthesized(),
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "u" => Ok(Expr::Var(Var::U)),
                    "v" => Ok(Expr::Var(Var::V)),
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "e" => Ok(Expr::Const(std::f64::consts::E)),
                    other => match Func::from_name(other) {
                        Some(f) => Ok(Expr::Func(f, Box::new(self.parenthesized()?))),
                        None => Err(ParseError {
                            offset: at,
                            kind: ParseErrorKind::UnknownIdentifier(name),
                        }),
                    },
                }
            }
            _ => Err(self.error("a number, variable, function or `(`")),
        }
    }
}

impl Expr {
    /// Parse infix source text. The first error aborts parsing.
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        let toks = lex(src)?;
        if toks.len() == 1 {
            return Err(ParseError { offset: 0, kind: ParseErrorKind::EmptyInput });
        }
        let mut p = Parser { toks, pos: 0, open: Vec::new() };
        let e = p.expr()?;
        if *p.peek() != Tok::End {
            return Err(p.error("an operator or end of input"));
        }
        Ok(e)
    }

    pub fn constant(x: f64) -> Expr {
        Expr::Const(x)
    }

    pub fn u() -> Expr {
        Expr::Var(Var::U)
    }

    pub fn v() -> Expr {
        Expr::Var(Var::V)
    }

    pub fn apply(self, f: Func) -> Expr {
        Expr::Func(f, Box::new(self))
    }

    pub fn pow(self, exponent: Expr) -> Expr {
        Expr::Binary(BinOp::Pow, Box::new(self), Box::new(exponent))
    }

    /// True when the tree mentions `u` or `v`.
    pub fn has_vars(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(_) => true,
            Expr::Neg(a) | Expr::Func(_, a) => a.has_vars(),
            Expr::Binary(_, a, b) => a.has_vars() || b.has_vars(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Func(_, a) => 1 + a.size(),
            Expr::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Replace `u` and `v` by the given trees.
    pub fn substitute(&self, u: &Expr, v: &Expr) -> Expr {
        match self {
            Expr::Const(x) => Expr::Const(*x),
            Expr::Var(Var::U) => u.clone(),
            Expr::Var(Var::V) => v.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(u, v))),
            Expr::Func(f, a) => Expr::Func(*f, Box::new(a.substitute(u, v))),
            Expr::Binary(op, a, b) => {
                Expr::Binary(*op, Box::new(a.substitute(u, v)), Box::new(b.substitute(u, v)))
            }
        }
    }

    /// Plain value at `(u, v)`.
    pub fn eval(&self, u: f64, v: f64) -> Result<f64, EvalError> {
        let x = match self {
            Expr::Const(x) => *x,
            Expr::Var(Var::U) => u,
            Expr::Var(Var::V) => v,
            Expr::Neg(a) => -a.eval(u, v)?,
            Expr::Func(f, a) => f.apply_f64(a.eval(u, v)?)?,
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.eval(u, v)?, b.eval(u, v)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        x / y
                    }
                    BinOp::Pow => match integer_exponent(b, y) {
                        Some(n) => {
                            if x == 0.0 && n < 0 {
                                return Err(EvalError::DivisionByZero);
                            }
                            x.powi(n as i32)
                        }
                        None => {
                            if !(x > 0.0) {
                                return Err(EvalError::Domain { op: "non-integer power", value: x });
                            }
                            x.powf(y)
                        }
                    },
                }
            }
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    /// Value and partials through second order at `(u, v)`.
    pub fn eval_jet2(&self, u: f64, v: f64) -> Result<Jet2, EvalError> {
        self.eval_jets(Jet2::seed_u(u), Jet2::seed_v(v))
    }

    /// Evaluate with arbitrary jets substituted for `u` and `v`; this is how a
    /// one-variable profile `f(u)` is composed with `u + v` and similar.
    pub fn eval_jets(&self, u: Jet2, v: Jet2) -> Result<Jet2, EvalError> {
        let j = match self {
            Expr::Const(x) => Jet2::constant(*x),
            Expr::Var(Var::U) => u,
            Expr::Var(Var::V) => v,
            Expr::Neg(a) => -a.eval_jets(u, v)?,
            Expr::Func(f, a) => f.apply_jet(a.eval_jets(u, v)?)?,
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.eval_jets(u, v)?, b.eval_jets(u, v)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x.checked_div(y)?,
                    BinOp::Pow => match integer_exponent(b, y.val) {
                        Some(n) => x.powi(n)?,
                        None => x.powj(y)?,
                    },
                }
            }
        };
        if j.is_finite() {
            Ok(j)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Neg(_) => PREC_NEG,
            // A constant printed in exponent form still lexes as one token.
            Expr::Const(_) | Expr::Var(_) | Expr::Func(..) => PREC_ATOM,
        }
    }
}

fn integer_exponent(exponent: &Expr, value: f64) -> Option<i64> {
    if exponent.has_vars() || value.fract() != 0.0 || value.abs() > 1e9 {
        None
    } else {
        Some(value as i64)
    }
}

impl FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

/// Prints with the minimum parentheses needed to re-parse to the same tree.
/// Constants use the shortest representation that reads back exactly.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Const(x) if *x < 0.0 || (*x == 0.0 && x.is_sign_negative()) => {
                write!(f, "(-{:?})", -x)
            }
            Expr::Const(x) => write!(f, "{x:?}"),
            Expr::Var(Var::U) => f.write_str("u"),
            Expr::Var(Var::V) => f.write_str("v"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                child(f, a, a.precedence() < PREC_NEG)
            }
            Expr::Func(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                let (left_parens, right_parens) = if *op == BinOp::Pow {
                    (a.precedence() <= p, b.precedence() < PREC_NEG)
                } else {
                    (a.precedence() < p, b.precedence() <= p)
                };
                child(f, a, left_parens)?;
                write!(f, " {} ", op.symbol())?;
                child(f, b, right_parens)
            }
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, b: Expr) -> Expr {
        Expr::Binary(BinOp::Add, Box::new(self), Box::new(b))
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, b: Expr) -> Expr {
        Expr::Binary(BinOp::Sub, Box::new(self), Box::new(b))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, b: Expr) -> Expr {
        Expr::Binary(BinOp::Mul, Box::new(self), Box::new(b))
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, b: Expr) -> Expr {
        Expr::Binary(BinOp::Div, Box::new(self), Box::new(b))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn atoms() {
        assert_eq!(p("u"), Expr::Var(Var::U));
        assert_eq!(p("v"), Expr::Var(Var::V));
        assert_eq!(p("pi"), Expr::Const(std::f64::consts::PI));
        assert_eq!(p("e"), Expr::Const(std::f64::consts::E));
        assert_eq!(p("1.5e-3"), Expr::Const(1.5e-3));
        assert_eq!(p(".5"), Expr::Const(0.5));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("2^3^2").eval(0.3, -1.0).unwrap(), 512.0);
        assert_eq!(p("-2^2").eval(0.0, 0.0).unwrap(), -4.0);
        assert_eq!(p("(-2)^2").eval(0.0, 0.0).unwrap(), 4.0);
        assert_eq!(p("1 - 2 - 3").eval(0.0, 0.0).unwrap(), -4.0);
        assert_eq!(p("8 / 4 / 2").eval(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(p("1 + 2 * 3").eval(0.0, 0.0).unwrap(), 7.0);
        assert_eq!(p("2^-1").eval(0.0, 0.0).unwrap(), 0.5);
        assert_eq!(p("-u*v").eval(2.0, 3.0).unwrap(), -6.0);
        assert_eq!(
            p("2*u^2"),
            Expr::constant(2.0) * Expr::u().pow(Expr::constant(2.0))
        );
    }

    #[test]
    fn sphere_graph_structure_survives_printing() {
        let e = p("(u^2+v^2)/4 - 1");
        let want = (Expr::u().pow(Expr::constant(2.0)) + Expr::v().pow(Expr::constant(2.0)))
            / Expr::constant(4.0)
            - Expr::constant(1.0);
        assert_eq!(e, want);
        let printed = e.to_string();
        assert_eq!(printed, "(u ^ 2.0 + v ^ 2.0) / 4.0 - 1.0");
        assert_eq!(p(&printed), e);
    }

    #[test]
    fn printing_keeps_required_parentheses() {
        for src in [
            "(u - v) - (u - v)",
            "u - (v - u)",
            "u / (v * u)",
            "(-u)^2",
            "-(u + v)",
            "(u^v)^2",
            "u^v^2",
            "2^-u",
            "--u",
            "sin(u)^2",
            "exp(-u^2/2)",
            "1e-7 * u + 1e22",
        ] {
            let e = p(src);
            assert_eq!(p(&e.to_string()), e, "{src} -> {e}");
        }
    }

    #[test]
    fn jets_of_simple_expressions() {
        let j = p("u*v").eval_jet2(2.0, 3.0).unwrap();
        assert_eq!(j, Jet2::new(6.0, 3.0, 2.0, 0.0, 1.0, 0.0));

        let j = p("sin(u)").eval_jet2(0.0, 0.7).unwrap();
        assert_eq!((j.val, j.du, j.duu), (0.0, 1.0, 0.0));

        let j = p("(u^2+v^2)/4 - 1").eval_jet2(2.0, 0.0).unwrap();
        assert_eq!(j, Jet2::new(0.0, 1.0, 0.0, 0.5, 0.0, 0.5));
    }

    #[test]
    fn negative_base_with_integer_exponent() {
        let j = p("u^3").eval_jet2(-2.0, 0.0).unwrap();
        assert_eq!((j.val, j.du, j.duu), (-8.0, 12.0, -12.0));
        assert_eq!(p("u^(1+1)").eval(-3.0, 0.0).unwrap(), 9.0);
        assert!(matches!(
            p("u^0.5").eval_jet2(-1.0, 0.0),
            Err(EvalError::Domain { .. })
        ));
        // Variable exponents always take the exp-log route.
        assert!(p("u^v").eval_jet2(-1.0, 2.0).is_err());
        let j = p("u^v").eval_jet2(2.0, 3.0).unwrap();
        assert!((j.val - 8.0).abs() < 1e-13);
        assert!((j.dv - 8.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn evaluation_errors() {
        assert!(matches!(p("log(u)").eval_jet2(-1.0, 0.0), Err(EvalError::Domain { op: "log", .. })));
        assert!(matches!(p("log(u)").eval(-1.0, 0.0), Err(EvalError::Domain { op: "log", .. })));
        assert_eq!(p("1/u").eval_jet2(0.0, 0.0), Err(EvalError::DivisionByZero));
        assert_eq!(p("1/u").eval(0.0, 0.0), Err(EvalError::DivisionByZero));
        assert_eq!(p("u^-1").eval(0.0, 1.0), Err(EvalError::DivisionByZero));
        assert_eq!(p("exp(exp(u))").eval(10.0, 0.0), Err(EvalError::NonFinite));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let err = |s: &str| Expr::parse(s).unwrap_err();
        assert_eq!(err("").kind, ParseErrorKind::EmptyInput);
        assert_eq!(err("   ").kind, ParseErrorKind::EmptyInput);

        let e = err("u + w");
        assert_eq!((e.offset, e.kind), (4, ParseErrorKind::UnknownIdentifier("w".into())));

        let e = err("(u + v");
        assert_eq!((e.offset, e.kind), (0, ParseErrorKind::UnbalancedParenthesis));

        let e = err("sin((u)");
        assert_eq!((e.offset, e.kind), (3, ParseErrorKind::UnbalancedParenthesis));

        let e = err("u + v)");
        assert_eq!((e.offset, e.kind), (5, ParseErrorKind::UnbalancedParenthesis));

        let e = err("u * * v");
        assert_eq!(e.offset, 4);
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedToken { .. }));

        let e = err("u v");
        assert_eq!(e.offset, 2);

        let e = err("sin u");
        assert_eq!(e.offset, 4);

        let e = err("u +");
        assert_eq!((e.offset, e.kind), (3, ParseErrorKind::UnexpectedEnd { expected: "a number, variable, function or `(`" }));

        let e = err("u # 2");
        assert_eq!((e.offset, e.kind), (2, ParseErrorKind::UnexpectedCharacter('#')));

        let e = err("1.2.3");
        assert_eq!((e.offset, e.kind), (0, ParseErrorKind::InvalidNumber("1.2.3".into())));

        let e = err("1e999");
        assert!(matches!(e.kind, ParseErrorKind::InvalidNumber(_)));

        assert!(err("u + w").to_string().contains("byte 4"));
    }

    #[test]
    fn substitution_composes() {
        let f = p("sin(u) * v");
        let g = f.substitute(&p("u + v"), &p("2"));
        let (a, b) = (0.3, -0.4);
        assert_eq!(g.eval(a, b).unwrap(), (a + b).sin() * 2.0);
    }
}
