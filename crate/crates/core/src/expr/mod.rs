//! Arithmetic/boolean expressions over parameters and place markings.
//!
//! One expression type serves rates, enabling predicates, case probabilities
//! and marking effects. Booleans are reals: `0` is false, anything else true,
//! and comparisons yield `0`/`1`.

mod lexer;
mod parser;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use lexer::{Lexer, Spanned, Token};
pub use parser::{parse_expression, ExprParser, SyntaxError};

/// Binary operators, in no particular order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "and",
            BinOp::Or => "or",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Or => prec::OR,
            BinOp::And => prec::AND,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne => prec::CMP,
            BinOp::Add | BinOp::Sub => prec::ADD,
            BinOp::Mul | BinOp::Div => prec::MUL,
        }
    }

    fn apply(self, a: f64, b: f64) -> Result<f64, EvalError> {
        let v = match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => {
                if b == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a / b
            }
            BinOp::Lt => bool_val(a < b),
            BinOp::Le => bool_val(a <= b),
            BinOp::Gt => bool_val(a > b),
            BinOp::Ge => bool_val(a >= b),
            BinOp::Eq => bool_val(a == b),
            BinOp::Ne => bool_val(a != b),
            BinOp::And => bool_val(a != 0.0 && b != 0.0),
            BinOp::Or => bool_val(a != 0.0 || b != 0.0),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Min,
    Max,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            Func::Min => a.min(b),
            Func::Max => a.max(b),
        }
    }
}

/// Expression tree. Identifiers are kept by name; see [`Expr::compile`] for
/// the resolved form used on hot paths.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Bare identifier, resolved against the model parameters.
    Param(String),
    /// `#Place`, the token count of a place.
    Mark(String),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>, Box<Expr>),
}

pub(crate) mod prec {
    pub const IF: u8 = 0;
    pub const OR: u8 = 1;
    pub const AND: u8 = 2;
    pub const NOT: u8 = 3;
    pub const CMP: u8 = 4;
    pub const ADD: u8 = 5;
    pub const MUL: u8 = 6;
    pub const UNARY: u8 = 7;
    pub const ATOM: u8 = 8;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("unknown place `#{0}`")]
    UnknownPlace(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite result")]
    NonFinite,
}

/// Name lookups needed to evaluate an [`Expr`].
pub trait Env {
    fn param(&self, name: &str) -> Option<f64>;
    fn tokens(&self, place: &str) -> Option<f64>;
}

/// Lookups used by [`Expr::compile`]: parameters fold to constants, places
/// resolve to marking indices.
pub trait Scope {
    fn param(&self, name: &str) -> Option<f64>;
    fn place(&self, name: &str) -> Option<usize>;
}

fn bool_val(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

impl Expr {
    pub fn num(v: f64) -> Self {
        Expr::Num(v)
    }

    pub fn param(name: impl Into<String>) -> Self {
        Expr::Param(name.into())
    }

    pub fn mark(place: impl Into<String>) -> Self {
        Expr::Mark(place.into())
    }

    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn eval(&self, env: &impl Env) -> Result<f64, EvalError> {
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::Param(n) => env
                .param(n)
                .ok_or_else(|| EvalError::UnknownIdentifier(n.clone())),
            Expr::Mark(p) => env.tokens(p).ok_or_else(|| EvalError::UnknownPlace(p.clone())),
            Expr::Neg(e) => Ok(-e.eval(env)?),
            Expr::Not(e) => Ok(bool_val(e.eval(env)? == 0.0)),
            Expr::Binary(BinOp::And, a, b) => {
                if a.eval(env)? == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(bool_val(b.eval(env)? != 0.0))
                }
            }
            Expr::Binary(BinOp::Or, a, b) => {
                if a.eval(env)? != 0.0 {
                    Ok(1.0)
                } else {
                    Ok(bool_val(b.eval(env)? != 0.0))
                }
            }
            Expr::Binary(op, a, b) => op.apply(a.eval(env)?, b.eval(env)?),
            Expr::If(c, t, f) => {
                if c.eval(env)? != 0.0 {
                    t.eval(env)
                } else {
                    f.eval(env)
                }
            }
            Expr::Call(f, a, b) => Ok(f.apply(a.eval(env)?, b.eval(env)?)),
        }
    }

    /// Every parameter name referenced, sorted.
    pub fn params(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Param(n) = e {
                out.insert(n.as_str());
            }
        });
        out
    }

    /// Every place name referenced through `#Place`, sorted.
    pub fn places(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Mark(n) = e {
                out.insert(n.as_str());
            }
        });
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Num(_) | Expr::Param(_) | Expr::Mark(_) => {}
            Expr::Neg(e) | Expr::Not(e) => e.walk(f),
            Expr::Binary(_, a, b) | Expr::Call(_, a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Expr::If(c, t, e) => {
                c.walk(f);
                t.walk(f);
                e.walk(f);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Num(v) if *v < 0.0 => prec::UNARY,
            Expr::Num(_) | Expr::Param(_) | Expr::Mark(_) | Expr::Call(..) => prec::ATOM,
            Expr::Neg(_) => prec::UNARY,
            Expr::Not(_) => prec::NOT,
            Expr::Binary(op, ..) => op.precedence(),
            Expr::If(..) => prec::IF,
        }
    }

    /// Resolve names and fold constant subtrees.
    ///
    /// Constant subexpressions whose evaluation fails (`1/0`) are left
    /// unfolded so the error surfaces only if that branch is evaluated.
    pub fn compile(&self, scope: &impl Scope) -> Result<Compiled, EvalError> {
        Ok(match self {
            Expr::Num(v) => Compiled::Const(*v),
            Expr::Param(n) => Compiled::Const(
                scope
                    .param(n)
                    .ok_or_else(|| EvalError::UnknownIdentifier(n.clone()))?,
            ),
            Expr::Mark(p) => Compiled::Tokens(
                scope
                    .place(p)
                    .ok_or_else(|| EvalError::UnknownPlace(p.clone()))?,
            ),
            Expr::Neg(e) => match e.compile(scope)? {
                Compiled::Const(v) => Compiled::Const(-v),
                c => Compiled::Neg(Box::new(c)),
            },
            Expr::Not(e) => match e.compile(scope)? {
                Compiled::Const(v) => Compiled::Const(bool_val(v == 0.0)),
                c => Compiled::Not(Box::new(c)),
            },
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.compile(scope)?, b.compile(scope)?);
                match (&a, &b) {
                    (Compiled::Const(x), Compiled::Const(y)) => match op.apply(*x, *y) {
                        Ok(v) => Compiled::Const(v),
                        Err(_) => Compiled::Binary(*op, Box::new(a), Box::new(b)),
                    },
                    _ => Compiled::Binary(*op, Box::new(a), Box::new(b)),
                }
            }
            Expr::If(c, t, f) => match c.compile(scope)? {
                Compiled::Const(v) if v != 0.0 => t.compile(scope)?,
                Compiled::Const(_) => f.compile(scope)?,
                c => Compiled::If(
                    Box::new(c),
                    Box::new(t.compile(scope)?),
                    Box::new(f.compile(scope)?),
                ),
            },
            Expr::Call(func, a, b) => match (a.compile(scope)?, b.compile(scope)?) {
                (Compiled::Const(x), Compiled::Const(y)) => Compiled::Const(func.apply(x, y)),
                (a, b) => Compiled::Call(*func, Box::new(a), Box::new(b)),
            },
        })
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(v) => write!(f, "{v:?}")?,
            Expr::Param(n) => f.write_str(n)?,
            Expr::Mark(p) => write!(f, "#{p}")?,
            Expr::Neg(e) => {
                f.write_str("-")?;
                // `-2` would read back as a negative literal
                let min = if matches!(**e, Expr::Num(_)) {
                    prec::ATOM + 1
                } else {
                    prec::UNARY
                };
                e.fmt_prec(f, min)?;
            }
            Expr::Not(e) => {
                f.write_str("not ")?;
                e.fmt_prec(f, prec::NOT)?;
            }
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                let lhs = if p == prec::CMP { p + 1 } else { p };
                a.fmt_prec(f, lhs)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_prec(f, p + 1)?;
            }
            Expr::If(c, t, e) => {
                f.write_str("if ")?;
                c.fmt_prec(f, prec::IF)?;
                f.write_str(" then ")?;
                t.fmt_prec(f, prec::IF)?;
                f.write_str(" else ")?;
                e.fmt_prec(f, prec::IF)?;
            }
            Expr::Call(func, a, b) => {
                write!(f, "{}(", func.name())?;
                a.fmt_prec(f, prec::IF)?;
                f.write_str(", ")?;
                b.fmt_prec(f, prec::IF)?;
                f.write_str(")")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, prec::IF)
    }
}

impl FromStr for Expr {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expression(s)
    }
}

/// An [`Expr`] with parameters folded and places resolved to indices into a
/// token vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Compiled {
    Const(f64),
    Tokens(usize),
    Neg(Box<Compiled>),
    Not(Box<Compiled>),
    Binary(BinOp, Box<Compiled>, Box<Compiled>),
    If(Box<Compiled>, Box<Compiled>, Box<Compiled>),
    Call(Func, Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    pub fn as_const(&self) -> Option<f64> {
        match self {
            Compiled::Const(v) => Some(*v),
            _ => None,
        }
    }

    pub fn eval(&self, tokens: &[u32]) -> Result<f64, EvalError> {
        match self {
            Compiled::Const(v) => Ok(*v),
            Compiled::Tokens(i) => Ok(f64::from(tokens[*i])),
            Compiled::Neg(e) => Ok(-e.eval(tokens)?),
            Compiled::Not(e) => Ok(bool_val(e.eval(tokens)? == 0.0)),
            Compiled::Binary(BinOp::And, a, b) => {
                if a.eval(tokens)? == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(bool_val(b.eval(tokens)? != 0.0))
                }
            }
            Compiled::Binary(BinOp::Or, a, b) => {
                if a.eval(tokens)? != 0.0 {
                    Ok(1.0)
                } else {
                    Ok(bool_val(b.eval(tokens)? != 0.0))
                }
            }
            Compiled::Binary(op, a, b) => op.apply(a.eval(tokens)?, b.eval(tokens)?),
            Compiled::If(c, t, f) => {
                if c.eval(tokens)? != 0.0 {
                    t.eval(tokens)
                } else {
                    f.eval(tokens)
                }
            }
            Compiled::Call(func, a, b) => Ok(func.apply(a.eval(tokens)?, b.eval(tokens)?)),
        }
    }

    pub fn holds(&self, tokens: &[u32]) -> Result<bool, EvalError> {
        Ok(self.eval(tokens)? != 0.0)
    }
}

/// A plain map-backed [`Env`].
#[derive(Debug, Clone, Default)]
pub struct MapEnv {
    pub params: std::collections::HashMap<String, f64>,
    pub tokens: std::collections::HashMap<String, f64>,
}

impl MapEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_param(mut self, name: &str, v: f64) -> Self {
        self.params.insert(name.to_string(), v);
        self
    }

    pub fn with_tokens(mut self, place: &str, n: u32) -> Self {
        self.tokens.insert(place.to_string(), f64::from(n));
        self
    }
}

impl Env for MapEnv {
    fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }

    fn tokens(&self, place: &str) -> Option<f64> {
        self.tokens.get(place).copied()
    }
}
