//! Small infix expression language shared by the polynomial parser and the
//! chart-field evaluator.
//!
//! Grammar (usual precedence, `^` right-associative and binding tighter than
//! unary minus):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary | implicit)*
//! unary   := '-' unary | '+' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | ident | ident '(' sum ')' | '(' sum ')'
//! ```
//!
//! A number directly followed by an identifier or `(` is an implicit product
//! (`2z1`, `3(x1+1)`).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Numeric literal kept as source text so each evaluator can read it exactly.
    Num(String),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(String, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit()
            || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit()))
        {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent only when followed by a digit (optionally signed)
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let next = chars.get(i + 1).copied();
                let after = chars.get(i + 2).copied();
                let signed = matches!(next, Some('+') | Some('-'))
                    && after.is_some_and(|c| c.is_ascii_digit());
                if next.is_some_and(|c| c.is_ascii_digit()) || signed {
                    i += if signed { 2 } else { 1 };
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if ch == '*' && chars.get(i + 1) == Some(&'*') {
            out.push(Tok::Op('^'));
            i += 2;
        } else if "+-*/^".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else if ch == '(' {
            out.push(Tok::LParen);
            i += 1;
        } else if ch == ')' {
            out.push(Tok::RParen);
            i += 1;
        } else {
            return Err(Error::Parse(format!(
                "unexpected character `{ch}` in `{s}`"
            )));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
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

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.product()?;
            lhs = if op == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op(op @ ('*' | '/'))) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = if op == '*' {
                        Expr::Mul(Box::new(lhs), Box::new(rhs))
                    } else {
                        Expr::Div(Box::new(lhs), Box::new(rhs))
                    };
                }
                Some(Tok::Ident(_)) | Some(Tok::LParen)
                    if matches!(self.toks.get(self.pos - 1), Some(Tok::Num(_))) =>
                {
                    let rhs = self.power()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(Expr::Num(n)),
            Some(Tok::Ident(name)) => {
                if let Some(Tok::LParen) = self.peek() {
                    self.pos += 1;
                    let arg = self.sum()?;
                    self.expect_rparen()?;
                    Ok(Expr::Call(name, Box::new(arg)))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        match self.next() {
            Some(Tok::RParen) => Ok(()),
            other => Err(Error::Parse(format!("expected `)`, found {other:?}"))),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input after position {} in `{s}`",
            p.pos
        )));
    }
    Ok(e)
}

/// Reads a decimal literal (`12`, `0.25`, `1e-3`, `2.5E2`) as an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad number `{text}`"));
    let lower = text.to_ascii_lowercase();
    let (mantissa, exp) = match lower.split_once('e') {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (lower.as_str(), 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let factor = if scale >= 0 {
        Pow::pow(&ten, scale as u32)
    } else {
        BigRational::one() / Pow::pow(&ten, (-scale) as u32)
    };
    Ok(BigRational::from_integer(numer) * factor)
}

/// A real-valued expression compiled against the chart coordinates `x1..x4`.
#[derive(Clone, Debug)]
pub struct RealExpr {
    source: String,
    node: Node,
}

#[derive(Clone, Debug)]
enum Node {
    Const(f64),
    Coord(usize),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Fn(fn(f64) -> f64, Box<Node>),
}

impl RealExpr {
    pub fn parse(s: &str) -> Result<RealExpr> {
        let e = parse(s)?;
        Ok(RealExpr {
            source: s.trim().to_string(),
            node: compile(&e)?,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, p: &[f64; 4]) -> f64 {
        eval_node(&self.node, p)
    }
}

impl fmt::Display for RealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

fn compile(e: &Expr) -> Result<Node> {
    Ok(match e {
        Expr::Num(t) => Node::Const(
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{t}`")))?,
        ),
        Expr::Var(v) => match v.as_str() {
            "x1" => Node::Coord(0),
            "x2" => Node::Coord(1),
            "x3" => Node::Coord(2),
            "x4" => Node::Coord(3),
            "pi" => Node::Const(std::f64::consts::PI),
            "e" => Node::Const(std::f64::consts::E),
            _ => return Err(Error::Parse(format!("unknown variable `{v}` (use x1..x4)"))),
        },
        Expr::Neg(a) => Node::Neg(Box::new(compile(a)?)),
        Expr::Add(a, b) => Node::Bin('+', Box::new(compile(a)?), Box::new(compile(b)?)),
        Expr::Sub(a, b) => Node::Bin('-', Box::new(compile(a)?), Box::new(compile(b)?)),
        Expr::Mul(a, b) => Node::Bin('*', Box::new(compile(a)?), Box::new(compile(b)?)),
        Expr::Div(a, b) => Node::Bin('/', Box::new(compile(a)?), Box::new(compile(b)?)),
        Expr::Pow(a, b) => Node::Bin('^', Box::new(compile(a)?), Box::new(compile(b)?)),
        Expr::Call(name, arg) => {
            let f: fn(f64) -> f64 = match name.as_str() {
                "sin" => f64::sin,
                "cos" => f64::cos,
                "tan" => f64::tan,
                "exp" => f64::exp,
                "ln" | "log" => f64::ln,
                "sqrt" => f64::sqrt,
                "sinh" => f64::sinh,
                "cosh" => f64::cosh,
                "tanh" => f64::tanh,
                "abs" => f64::abs,
                _ => return Err(Error::Parse(format!("unknown function `{name}`"))),
            };
            Node::Fn(f, Box::new(compile(arg)?))
        }
    })
}

fn eval_node(n: &Node, p: &[f64; 4]) -> f64 {
    match n {
        Node::Const(c) => *c,
        Node::Coord(i) => p[*i],
        Node::Neg(a) => -eval_node(a, p),
        Node::Bin(op, a, b) => {
            let (x, y) = (eval_node(a, p), eval_node(b, p));
            match op {
                '+' => x + y,
                '-' => x - y,
                '*' => x * y,
                '/' => x / y,
                _ => {
                    // integer exponents stay exact for negative bases
                    if y.fract() == 0.0 && y.abs() < 64.0 {
                        x.powi(y as i32)
                    } else {
                        x.powf(y)
                    }
                }
            }
        }
        Node::Fn(f, a) => f(eval_node(a, p)),
    }
}

/// Evaluates a constant subexpression exactly, if it is one.
pub fn constant_rational(e: &Expr) -> Option<BigRational> {
    match e {
        Expr::Num(t) => parse_rational(t).ok(),
        Expr::Neg(a) => constant_rational(a).map(|v| -v),
        Expr::Add(a, b) => Some(constant_rational(a)? + constant_rational(b)?),
        Expr::Sub(a, b) => Some(constant_rational(a)? - constant_rational(b)?),
        Expr::Mul(a, b) => Some(constant_rational(a)? * constant_rational(b)?),
        Expr::Div(a, b) => {
            let d = constant_rational(b)?;
            if d.is_zero() {
                None
            } else {
                Some(constant_rational(a)? / d)
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = RealExpr::parse("-x1^2 + 2*x2").unwrap();
        assert_eq!(e.eval(&[3.0, 1.0, 0.0, 0.0]), -9.0 + 2.0);
        let e = RealExpr::parse("2^3^2").unwrap();
        assert_eq!(e.eval(&[0.0; 4]), 512.0);
        let e = RealExpr::parse("2x1 + 3(x2 - 1)").unwrap();
        assert_eq!(e.eval(&[1.0, 2.0, 0.0, 0.0]), 5.0);
    }

    #[test]
    fn functions_and_constants() {
        let e = RealExpr::parse("sin(pi/2) + exp(0) + 1e-3").unwrap();
        assert!((e.eval(&[0.0; 4]) - 2.001).abs() < 1e-15);
        assert!(RealExpr::parse("foo(x1)").is_err());
        assert!(RealExpr::parse("y").is_err());
        assert!(RealExpr::parse("(x1").is_err());
        assert!(RealExpr::parse("x1 x2").is_err());
    }

    #[test]
    fn exact_literals() {
        let r = parse_rational("0.25").unwrap();
        assert_eq!(r, BigRational::new(1.into(), 4.into()));
        let r = parse_rational("1e-3").unwrap();
        assert_eq!(r, BigRational::new(1.into(), 1000.into()));
        let r = parse_rational("2.5E2").unwrap();
        assert_eq!(r, BigRational::from_integer(250.into()));
    }
}
