#![allow(dead_code)]

use std::collections::BTreeMap;

use hyperfinsler::calculus::ChartPoint;
use hyperfinsler::expr::{parse_expression, validate_fieldset, Expr, FieldSetSource};
use hyperfinsler::metric::Geometry;
use rand::Rng;

/// Positive-definite, non-Riemannian on a 2-dimensional base.
pub const FINSLER_N1: &str =
    "exp(0.5*x1)*(y1^2 + y2^2) + 0.2*(1 + x2^2)*(y1^4 + y2^4)/(y1^2 + y2^2)";
/// Same weights with the second direction flipped: signature (1,1).
pub const INDEFINITE_N1: &str =
    "exp(0.5*x1)*y1^2 - (1 + 0.3*x2^2)*y2^2 + 0.1*(1 + x2^2)*(y1^4 + y2^4)/(y1^2 + y2^2)";
/// Signature (1,3) on a 4-dimensional base.
pub const INDEFINITE_N2: &str = "exp(0.3*x1)*(y1^2 + y2^2) + y3^2 - (1 + 0.2*x4^2)*y4^2 \
     + 0.1*(y1^4 + y2^4)/(y1^2 + y2^2)";
/// Positive-definite block metric on a 4-dimensional base.
pub const FINSLER_N2: &str = "(2 + sin(x3))*y1^2 + 0.3*x1*y1*y2 + (1 + x2^2)*y2^2 \
     + exp(0.2*x4)*y3^2 + 1.5*y4^2 + 0.2*(y3^4 + y4^4)/(y3^2 + y4^2)";

pub fn geometry(source: &FieldSetSource) -> Geometry {
    Geometry::new(validate_fieldset(source).expect("valid test field set"))
}

pub fn plain(n: usize, fstar: &str) -> FieldSetSource {
    FieldSetSource::new(n, fstar)
}

fn coeff(rng: &mut impl Rng, lo: f64, hi: f64) -> String {
    let v: f64 = rng.random_range(lo..hi);
    format!("{v:.4}")
}

/// A random smooth field built from a handful of templates.
pub fn random_function(n: usize, rng: &mut impl Rng) -> Expr {
    let m = 2 * n;
    let var = |c: char, rng: &mut dyn rand::RngCore| format!("{c}{}", 1 + rng.random_range(0..m));
    let (x1, x2, y1, y2) = (var('x', rng), var('x', rng), var('y', rng), var('y', rng));
    let (a, b, c) = (
        coeff(rng, -1.5, 1.5),
        coeff(rng, -1.5, 1.5),
        coeff(rng, 0.2, 1.0),
    );
    let source = match rng.random_range(0..5) {
        0 => format!("{a}*sin({b}*{x1} + {y1}) + {c}*{y2}^3"),
        1 => format!("exp({a}*{x2})*({y1}^2 + {b}*{y1}*{y2}) / (2 + cos({c}*{x1}))"),
        2 => format!("sqrt(1 + {c}*{y1}^2 + {y2}^2)*log(3 + {a}*{x1})"),
        3 => format!("{a}*{x1}*{x2}*{y1} + {b}*{y2}^2*{x1}^2 + {c}*{y1}*{y2}"),
        _ => format!("cos({a}*{y1}*{x2}) * ({c} + {x1}^2) - {b}*exp({c}*{y2})"),
    };
    parse_expression(&source, n).unwrap_or_else(|e| panic!("{source}: {e}"))
}

/// Random polynomial nonlinear connection coefficients `N^i_j`.
pub fn random_connection(n: usize, rng: &mut impl Rng) -> BTreeMap<(usize, usize), String> {
    let m = 2 * n;
    let mut out = BTreeMap::new();
    for i in 1..=m {
        for j in 1..=m {
            let k = 1 + rng.random_range(0..m);
            let l = 1 + rng.random_range(0..m);
            out.insert(
                (i, j),
                format!(
                    "{}*y{k} + {}*x{l}*y{i} + {}*x{j}^2*y{l}",
                    coeff(rng, -1.0, 1.0),
                    coeff(rng, -0.5, 0.5),
                    coeff(rng, -0.3, 0.3)
                ),
            );
        }
    }
    out
}

/// Non-constant skew entries with coefficients in `[-1, 1]`.
pub fn random_skew(n: usize, rng: &mut impl Rng) -> BTreeMap<(usize, usize, usize), String> {
    let m = 2 * n;
    let mut out = BTreeMap::new();
    for k in 1..=m {
        for i in 1..=m {
            for j in (i + 1)..=m {
                let l = 1 + rng.random_range(0..m);
                out.insert(
                    (k, i, j),
                    format!("{} + {}*x{l}", coeff(rng, -1.0, 1.0), coeff(rng, -0.5, 0.5)),
                );
            }
        }
    }
    out
}

pub fn point(x: &[f64], y: &[f64]) -> ChartPoint {
    ChartPoint::new(x.to_vec(), y.to_vec()).unwrap()
}

/// Relative deviation `|a - b| / max(1, |a|, |b|)`.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}
