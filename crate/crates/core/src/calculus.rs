//! Exact second-order forward-mode differentiation in the chart variables.
//!
//! Every [`Jet2`] carries a value, its gradient and its Hessian with respect
//! to the `4n` chart variables, ordered `x1..x2n, y1..y2n`. The Hessian is
//! stored as a packed upper triangle, so it is symmetric by construction.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::expr::{Expr, Var};

/// Points with `|y|` below this are rejected as too close to the zero section.
pub const MIN_FIBER_NORM: f64 = 1e-6;

/// A point `(x, y)` of the slit tangent chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ChartPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::PointDimension {
                expected: x.len(),
                found: y.len(),
            });
        }
        if x.is_empty() || !x.len().is_multiple_of(2) {
            return Err(Error::PointDimension {
                expected: x.len().max(1).next_multiple_of(2),
                found: x.len(),
            });
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm.is_nan() || norm < MIN_FIBER_NORM {
            return Err(Error::ZeroSection { norm });
        }
        Ok(ChartPoint { x, y })
    }

    /// Splits `4n` coordinates `(x1..x2n, y1..y2n)`.
    pub fn from_coords(n: usize, coords: &[f64]) -> Result<Self> {
        if coords.len() != 4 * n {
            return Err(Error::PointDimension {
                expected: 4 * n,
                found: coords.len(),
            });
        }
        let (x, y) = coords.split_at(2 * n);
        ChartPoint::new(x.to_vec(), y.to_vec())
    }

    /// Base dimension `2n`.
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// The same base point with `y` scaled by `k`.
    pub fn scaled(&self, k: f64) -> ChartPoint {
        ChartPoint {
            x: self.x.clone(),
            y: self.y.iter().map(|v| v * k).collect(),
        }
    }
}

impl std::fmt::Display for ChartPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(x={:?}, y={:?})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    grad: Vec<f64>,
    hess: Vec<f64>,
}

#[inline]
fn packed(i: usize, j: usize, d: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * d - i * (i + 1) / 2 + j
}

impl Jet2 {
    pub fn constant(value: f64, nvars: usize) -> Self {
        Jet2 {
            value,
            grad: vec![0.0; nvars],
            hess: vec![0.0; nvars * (nvars + 1) / 2],
        }
    }

    /// The independent variable in gradient slot `slot`.
    pub fn variable(value: f64, slot: usize, nvars: usize) -> Self {
        let mut j = Jet2::constant(value, nvars);
        j.grad[slot] = 1.0;
        j
    }

    /// Assembles a jet from explicit derivatives; `hess(i, j)` is only
    /// queried for `i <= j`.
    pub fn from_parts(
        value: f64,
        grad: Vec<f64>,
        mut hess: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let d = grad.len();
        let mut packed_hess = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for j in i..d {
                packed_hess.push(hess(i, j));
            }
        }
        Jet2 {
            value,
            grad,
            hess: packed_hess,
        }
    }

    pub fn nvars(&self) -> usize {
        self.grad.len()
    }

    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    pub fn d(&self, slot: usize) -> f64 {
        self.grad[slot]
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[packed(i, j, self.grad.len())]
    }

    /// Dense symmetric Hessian.
    pub fn hessian(&self) -> DMatrix<f64> {
        let d = self.nvars();
        DMatrix::from_fn(d, d, |i, j| self.hess(i, j))
    }

    pub fn scale(&self, k: f64) -> Jet2 {
        Jet2 {
            value: self.value * k,
            grad: self.grad.iter().map(|v| v * k).collect(),
            hess: self.hess.iter().map(|v| v * k).collect(),
        }
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, k: f64, other: &Jet2) {
        self.value += k * other.value;
        for (a, b) in self.grad.iter_mut().zip(&other.grad) {
            *a += k * b;
        }
        for (a, b) in self.hess.iter_mut().zip(&other.hess) {
            *a += k * b;
        }
    }

    /// Composition `f(self)` given `f`, `f'` and `f''` at `self.value`.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        let d = self.nvars();
        let grad: Vec<f64> = self.grad.iter().map(|g| f1 * g).collect();
        let mut hess = Vec::with_capacity(self.hess.len());
        for i in 0..d {
            for j in i..d {
                hess.push(f1 * self.hess[packed(i, j, d)] + f2 * self.grad[i] * self.grad[j]);
            }
        }
        Jet2 {
            value: f0,
            grad,
            hess,
        }
    }

    pub fn powi(&self, k: u32) -> Jet2 {
        let u = self.value;
        match k {
            0 => Jet2::constant(1.0, self.nvars()),
            1 => self.clone(),
            _ => {
                let kf = k as f64;
                self.chain(
                    u.powi(k as i32),
                    kf * u.powi(k as i32 - 1),
                    kf * (kf - 1.0) * u.powi(k as i32 - 2),
                )
            }
        }
    }

    pub fn recip(&self) -> Option<Jet2> {
        let u = self.value;
        if u == 0.0 {
            return None;
        }
        let r = 1.0 / u;
        Some(self.chain(r, -r * r, 2.0 * r * r * r))
    }
}

impl Add for &Jet2 {
    type Output = Jet2;

    fn add(self, rhs: &Jet2) -> Jet2 {
        let mut out = self.clone();
        out.add_scaled(1.0, rhs);
        out
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;

    fn sub(self, rhs: &Jet2) -> Jet2 {
        let mut out = self.clone();
        out.add_scaled(-1.0, rhs);
        out
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;

    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;

    fn mul(self, rhs: &Jet2) -> Jet2 {
        let d = self.nvars();
        let (a, b) = (self, rhs);
        let grad = (0..d)
            .map(|i| a.grad[i] * b.value + a.value * b.grad[i])
            .collect();
        let mut hess = Vec::with_capacity(a.hess.len());
        for i in 0..d {
            for j in i..d {
                let p = packed(i, j, d);
                hess.push(
                    a.hess[p] * b.value
                        + a.value * b.hess[p]
                        + (a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i]),
                );
            }
        }
        Jet2 {
            value: a.value * b.value,
            grad,
            hess,
        }
    }
}

/// Value, gradient and Hessian of `f` at `p`.
pub fn eval_jet2(f: &Expr, p: &ChartPoint) -> Result<Jet2> {
    let m = p.dim();
    eval_rec(f, p, m)
}

fn eval_rec(f: &Expr, p: &ChartPoint, m: usize) -> Result<Jet2> {
    let nvars = 2 * m;
    let domain = |reason| Error::Domain {
        node: f.to_string(),
        reason,
    };
    Ok(match f {
        Expr::Num(v) => Jet2::constant(*v, nvars),
        Expr::Var(v @ Var::X(i)) => Jet2::variable(p.x[*i], v.slot(m), nvars),
        Expr::Var(v @ Var::Y(i)) => Jet2::variable(p.y[*i], v.slot(m), nvars),
        Expr::Neg(a) => -&eval_rec(a, p, m)?,
        Expr::Add(a, b) => &eval_rec(a, p, m)? + &eval_rec(b, p, m)?,
        Expr::Sub(a, b) => &eval_rec(a, p, m)? - &eval_rec(b, p, m)?,
        Expr::Mul(a, b) => &eval_rec(a, p, m)? * &eval_rec(b, p, m)?,
        Expr::Div(a, b) => {
            let den = eval_rec(b, p, m)?
                .recip()
                .ok_or_else(|| domain("division by zero"))?;
            &eval_rec(a, p, m)? * &den
        }
        Expr::Pow(a, k) => eval_rec(a, p, m)?.powi(*k),
        Expr::Call(func, a) => {
            let u = eval_rec(a, p, m)?;
            let (f0, f1, f2) = func.eval3(u.value).map_err(domain)?;
            u.chain(f0, f1, f2)
        }
    })
}

/// `δ_i f = ∂f/∂x^i − N^j_i ∂f/∂y^j` from a jet of `f`. `nmat[(j, i)]` is
/// `N^j_i`; `i` is zero-based.
pub fn delta_of_jet(jet: &Jet2, nmat: &DMatrix<f64>, i: usize) -> f64 {
    let m = nmat.nrows();
    let mut v = jet.d(i);
    for j in 0..m {
        v -= nmat[(j, i)] * jet.d(m + j);
    }
    v
}

/// The adapted-frame derivative `δ_i f` at `p`, with `i` zero-based.
pub fn delta_derivative(f: &Expr, nmat: &DMatrix<f64>, i: usize, p: &ChartPoint) -> Result<f64> {
    let m = p.dim();
    if i >= m {
        return Err(Error::IndexOutOfRange {
            index: i + 1,
            max: m,
        });
    }
    Ok(delta_of_jet(&eval_jet2(f, p)?, nmat, i))
}
