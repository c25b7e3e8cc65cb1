//! A small arithmetic-expression language in one variable `t`, used for
//! parametric curve coordinates.
//!
//! Grammar, loosest binding first: `+ -` (left associative), `* /` (left
//! associative), unary `-`, `^` (right associative). `-t^2` therefore means
//! `-(t^2)`. Primaries are numeric literals, `t`, `pi`, parenthesized
//! expressions and calls to `sin cos tan exp log sqrt abs`.

use std::fmt;

use thiserror::Error;

/// A syntax error together with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("at offset {offset}: {message}")]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Pi,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Parses `source` into an expression tree.
pub fn parse_expression(source: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        src: source.as_bytes(),
        pos: 0,
    };
    let e = p.expr(0)?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

const UNARY_PREC: u8 = 3;

fn binary_op(c: u8) -> Option<(BinOp, u8, bool)> {
    // (operator, precedence, right associative)
    Some(match c {
        b'+' => (BinOp::Add, 1, false),
        b'-' => (BinOp::Sub, 1, false),
        b'*' => (BinOp::Mul, 2, false),
        b'/' => (BinOp::Div, 2, false),
        b'^' => (BinOp::Pow, 4, true),
        _ => return None,
    })
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self, min_prec: u8) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some((op, prec, right)) = self.peek().and_then(binary_op) {
            if prec < min_prec {
                break;
            }
            self.pos += 1;
            let next = if right { prec } else { prec + 1 };
            let rhs = self.expr(next)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.expr(UNARY_PREC)?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let Some(c) = self.peek() else {
            return Err(self.error("expected expression"));
        };
        if c == b'(' {
            self.pos += 1;
            let e = self.expr(0)?;
            self.expect_close()?;
            return Ok(e);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            return match name {
                "t" => Ok(Expr::Var),
                "pi" => Ok(Expr::Pi),
                _ => match Func::from_name(name) {
                    Some(f) => {
                        if self.peek() != Some(b'(') {
                            return Err(self.error(format!("expected '(' after '{name}'")));
                        }
                        self.pos += 1;
                        let arg = self.expr(0)?;
                        self.expect_close()?;
                        Ok(Expr::Call(f, Box::new(arg)))
                    }
                    None => Err(ExprError {
                        offset: start,
                        message: format!("unknown identifier '{name}'"),
                    }),
                },
            };
        }
        Err(self.error("expected expression"))
    }

    fn expect_close(&mut self) -> Result<(), ExprError> {
        if self.peek() == Some(b')') {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error("expected ')'"))
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
        };
        let mut p = self.pos;
        digits(&mut p);
        if p < s.len() && s[p] == b'.' {
            p += 1;
            digits(&mut p);
        }
        if p < s.len() && (s[p] == b'e' || s[p] == b'E') {
            let mut q = p + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            if q < s.len() && s[q].is_ascii_digit() {
                digits(&mut q);
                p = q;
            }
        }
        let text = std::str::from_utf8(&s[start..p]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(v) => {
                self.pos = p;
                Ok(Expr::Num(v))
            }
            Err(_) => Err(ExprError {
                offset: start,
                message: format!("malformed number '{text}'"),
            }),
        }
    }
}

impl Expr {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => t,
            Expr::Pi => std::f64::consts::PI,
            Expr::Neg(a) => -a.eval(t),
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(t), b.eval(t));
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x / y,
                    BinOp::Pow => pow(x, y, b),
                }
            }
            Expr::Call(f, a) => f.apply(a.eval(t)),
        }
    }

    /// Whether the expression mentions `t`.
    pub fn depends_on_t(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Num(_) | Expr::Pi => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on_t(),
            Expr::Bin(_, a, b) => a.depends_on_t() || b.depends_on_t(),
        }
    }

    /// Symbolic derivative with respect to `t`.
    pub fn derivative(&self) -> Expr {
        use Expr::*;
        match self {
            Num(_) | Pi => Num(0.0),
            Var => Num(1.0),
            Neg(a) => neg(a.derivative()),
            Bin(BinOp::Add, a, b) => add(a.derivative(), b.derivative()),
            Bin(BinOp::Sub, a, b) => sub(a.derivative(), b.derivative()),
            Bin(BinOp::Mul, a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Bin(BinOp::Div, a, b) => div(
                sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                ),
                pow_e((**b).clone(), Num(2.0)),
            ),
            Bin(BinOp::Pow, a, b) => {
                if !b.depends_on_t() {
                    mul(
                        mul((**b).clone(), pow_e((**a).clone(), sub((**b).clone(), Num(1.0)))),
                        a.derivative(),
                    )
                } else {
                    mul(
                        self.clone(),
                        add(
                            mul(b.derivative(), call(Func::Log, (**a).clone())),
                            div(mul((**b).clone(), a.derivative()), (**a).clone()),
                        ),
                    )
                }
            }
            Call(f, a) => {
                let da = a.derivative();
                let x = (**a).clone();
                let outer = match f {
                    Func::Sin => call(Func::Cos, x),
                    Func::Cos => neg(call(Func::Sin, x)),
                    Func::Tan => add(Num(1.0), pow_e(call(Func::Tan, x), Num(2.0))),
                    Func::Exp => call(Func::Exp, x),
                    Func::Log => div(Num(1.0), x),
                    Func::Sqrt => div(Num(1.0), mul(Num(2.0), call(Func::Sqrt, x))),
                    Func::Abs => div(x.clone(), call(Func::Abs, x)),
                };
                mul(outer, da)
            }
        }
    }
}

fn pow(x: f64, y: f64, exponent: &Expr) -> f64 {
    if let Expr::Num(v) = exponent {
        if v.fract() == 0.0 && v.abs() <= 64.0 {
            return x.powi(*v as i32);
        }
    }
    x.powf(y)
}

fn is_num(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Num(x) if *x == v)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => Expr::Num(-v),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    if is_num(&a, 0.0) {
        b
    } else if is_num(&b, 0.0) {
        a
    } else {
        Expr::Bin(BinOp::Add, Box::new(a), Box::new(b))
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    if is_num(&b, 0.0) {
        a
    } else if is_num(&a, 0.0) {
        neg(b)
    } else {
        Expr::Bin(BinOp::Sub, Box::new(a), Box::new(b))
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_num(&a, 0.0) || is_num(&b, 0.0) {
        Expr::Num(0.0)
    } else if is_num(&a, 1.0) {
        b
    } else if is_num(&b, 1.0) {
        a
    } else {
        Expr::Bin(BinOp::Mul, Box::new(a), Box::new(b))
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_num(&a, 0.0) {
        Expr::Num(0.0)
    } else if is_num(&b, 1.0) {
        a
    } else {
        Expr::Bin(BinOp::Div, Box::new(a), Box::new(b))
    }
}

fn pow_e(a: Expr, b: Expr) -> Expr {
    if is_num(&b, 1.0) {
        a
    } else {
        Expr::Bin(BinOp::Pow, Box::new(a), Box::new(b))
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

/// Fully parenthesized rendering that parses back to an equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => {
                write!(f, "(-{})", -v)
            }
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var => f.write_str("t"),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {s} {b})")
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
