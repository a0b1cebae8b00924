//! Scalar-field expressions over chart coordinates `x1..x2n, y1..y2n`.
//!
//! Expressions are immutable trees. They can be parsed from text, printed
//! back, evaluated in `f64`, and differentiated symbolically with respect
//! to any chart variable. Symbolic differentiation is what lets the rest of
//! the crate reach third derivatives of `F*` while the forward-mode engine
//! in [`crate::calculus`] stays second order.

mod diff;
mod fieldset;
mod parser;

use std::fmt;

use crate::error::{Error, Result};

pub use fieldset::{validate_fieldset, FieldSet, FieldSetSource, SkewField};
pub use parser::parse_expression;

/// A chart variable, zero-based: `X(0)` is `x1`, `Y(1)` is `y2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    Y(usize),
}

impl Var {
    /// Position in the gradient/Hessian layout: all `x` first, then all `y`.
    pub fn slot(self, m: usize) -> usize {
        match self {
            Var::X(i) => i,
            Var::Y(i) => m + i,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Var::X(i) | Var::Y(i) => i,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::Y(i) => write!(f, "y{}", i + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    /// Value, first and second derivative of the function at `u`.
    pub(crate) fn eval3(self, u: f64) -> std::result::Result<(f64, f64, f64), &'static str> {
        Ok(match self {
            Func::Sin => (u.sin(), u.cos(), -u.sin()),
            Func::Cos => (u.cos(), -u.sin(), -u.cos()),
            Func::Exp => {
                let e = u.exp();
                (e, e, e)
            }
            Func::Log => {
                if u <= 0.0 {
                    return Err("log of a non-positive argument");
                }
                (u.ln(), 1.0 / u, -1.0 / (u * u))
            }
            Func::Sqrt => {
                if u <= 0.0 {
                    return Err("sqrt of a non-positive argument");
                }
                let s = u.sqrt();
                (s, 0.5 / s, -0.25 / (s * u))
            }
        })
    }

    fn eval(self, u: f64) -> std::result::Result<f64, &'static str> {
        Ok(match self {
            Func::Sin => u.sin(),
            Func::Cos => u.cos(),
            Func::Exp => u.exp(),
            Func::Log if u <= 0.0 => return Err("log of a non-positive argument"),
            Func::Log => u.ln(),
            Func::Sqrt if u < 0.0 => return Err("sqrt of a negative argument"),
            Func::Sqrt => u.sqrt(),
        })
    }
}

/// Expression tree. Exponents are integer literals so every power is smooth
/// and has an exact derivative rule.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Num(0.0)
    }

    pub fn x(i: usize) -> Expr {
        Expr::Var(Var::X(i))
    }

    pub fn y(i: usize) -> Expr {
        Expr::Var(Var::Y(i))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(v) if *v == 0.0)
    }

    fn as_num(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            _ => None,
        }
    }

    /// Largest variable index used (zero-based), if any.
    pub fn max_index(&self) -> Option<usize> {
        let mut best = None;
        self.visit_vars(&mut |v| best = best.max(Some(v.index())));
        best
    }

    pub fn visit_vars(&self, f: &mut impl FnMut(Var)) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => f(*v),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.visit_vars(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => 1 + a.size(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Plain `f64` evaluation at chart coordinates `(x, y)`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let domain = |node: &Expr, reason| Error::Domain {
            node: node.to_string(),
            reason,
        };
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::X(i)) => x[*i],
            Expr::Var(Var::Y(i)) => y[*i],
            Expr::Neg(a) => -a.eval(x, y)?,
            Expr::Add(a, b) => a.eval(x, y)? + b.eval(x, y)?,
            Expr::Sub(a, b) => a.eval(x, y)? - b.eval(x, y)?,
            Expr::Mul(a, b) => a.eval(x, y)? * b.eval(x, y)?,
            Expr::Div(a, b) => {
                let d = b.eval(x, y)?;
                if d == 0.0 {
                    return Err(domain(self, "division by zero"));
                }
                a.eval(x, y)? / d
            }
            Expr::Pow(a, k) => a.eval(x, y)?.powi(*k as i32),
            Expr::Call(func, a) => func.eval(a.eval(x, y)?).map_err(|r| domain(self, r))?,
        })
    }
}

// Simplifying constructors. They fold constants and drop additive zeros and
// multiplicative ones so repeated symbolic differentiation stays compact.

pub(crate) fn num(v: f64) -> Expr {
    Expr::Num(v)
}

pub(crate) fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (Some(x), Some(y)) => num(x + y),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (Some(x), Some(y)) => num(x - y),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (Some(x), Some(y)) => num(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => num(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        (Some(-1.0), _) => neg(b),
        (_, Some(-1.0)) => neg(a),
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (Some(0.0), _) => num(0.0),
        (_, Some(1.0)) => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => num(-v),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

pub(crate) fn pow(a: Expr, k: u32) -> Expr {
    match (k, a.as_num()) {
        (0, _) => num(1.0),
        (1, _) => a,
        (_, Some(v)) => num(v.powi(k as i32)),
        _ => Expr::Pow(Box::new(a), k),
    }
}

pub(crate) fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Num(v) if *v < 0.0 || v.is_sign_negative() => PREC_ADD,
            Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => PREC_ATOM,
            Expr::Pow(..) => 4,
            Expr::Neg(_) => PREC_NEG,
            Expr::Mul(..) | Expr::Div(..) => PREC_MUL,
            Expr::Add(..) | Expr::Sub(..) => PREC_ADD,
        }
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(v) if v.is_sign_negative() => write!(f, "-{:?}", -v)?,
            Expr::Num(v) => write!(f, "{v:?}")?,
            Expr::Var(v) => write!(f, "{v}")?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_with(f, PREC_NEG)?;
            }
            Expr::Add(a, b) => {
                a.fmt_with(f, PREC_ADD)?;
                f.write_str(" + ")?;
                b.fmt_with(f, PREC_ADD + 1)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_with(f, PREC_ADD)?;
                f.write_str(" - ")?;
                b.fmt_with(f, PREC_ADD + 1)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_with(f, PREC_MUL)?;
                f.write_str("*")?;
                b.fmt_with(f, PREC_MUL + 1)?;
            }
            Expr::Div(a, b) => {
                a.fmt_with(f, PREC_MUL)?;
                f.write_str("/")?;
                b.fmt_with(f, PREC_MUL + 1)?;
            }
            Expr::Pow(a, k) => {
                a.fmt_with(f, PREC_ATOM)?;
                write!(f, "^{k}")?;
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_with(f, 0)?;
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Prints in the input grammar. Parser-produced trees re-parse to an
/// identical tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, 0)
    }
}
