//! Nonlinear connections, the adapted frame `{δ_i, ∂_i}` and its brackets.
//!
//! Adapted-frame vectors have `4n` components: the `δ` block in slots
//! `0..2n`, the `∂` block in slots `2n..4n`.
//!
//! Bracket convention: `[δ_i, δ_j] = −R^k_{ij} ∂_k` with
//! `R^k_{ij} = δ_i N^k_j − δ_j N^k_i`, and `[δ_i, ∂_j] = (∂N^k_i/∂y^j) ∂_k`.

use nalgebra::DMatrix;

use crate::calculus::{eval_jet2, ChartPoint, Jet2};
use crate::error::Result;
use crate::expr::{add, mul, sub, Expr, Var};
use crate::metric::Geometry;
use crate::tensor::Tensor3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionSource {
    CanonicalSpray,
    UserSupplied,
}

#[derive(Debug, Clone)]
enum Coefficients {
    /// Spray of `F*`: `G^i = ¼ g^{ik} W_k` with
    /// `W_k = y^j ∂²F*/∂y^k∂x^j − ∂F*/∂x^k`, `N^i_j = ∂G^i/∂y^j`.
    Spray {
        metric: Vec<Expr>,
        numerators: Vec<Expr>,
    },
    /// `fields[i][j] = N^i_j`.
    Fields(Vec<Vec<Expr>>),
}

/// A horizontal distribution complementary to the vertical bundle, given by
/// its coefficients `N^i_j` (`i` fibre direction, `j` base direction).
#[derive(Debug, Clone)]
pub struct NonlinearConnection {
    dim: usize,
    coeffs: Coefficients,
}

/// A nonlinear connection evaluated at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionAt {
    /// `n[(i, j)] = N^i_j`.
    pub n: DMatrix<f64>,
    /// `[(i, j, k)] = ∂N^i_j/∂x^k`.
    pub dn_dx: Tensor3,
    /// `[(i, j, k)] = ∂N^i_j/∂y^k`.
    pub dn_dy: Tensor3,
}

impl ConnectionAt {
    pub fn dim(&self) -> usize {
        self.n.nrows()
    }

    /// `δ_k N^i_j`.
    pub fn delta_n(&self, i: usize, j: usize, k: usize) -> f64 {
        let mut v = self.dn_dx[(i, j, k)];
        for l in 0..self.dim() {
            v -= self.n[(l, k)] * self.dn_dy[(i, j, l)];
        }
        v
    }
}

impl NonlinearConnection {
    /// The connection induced by the geodesic spray of `F*`.
    pub fn canonical(geometry: &Geometry) -> Self {
        let m = geometry.dim();
        let fstar = &geometry.fieldset().fstar;
        let numerators = (0..m)
            .map(|k| {
                let dk = fstar.diff(Var::Y(k));
                let mut w = Expr::zero();
                for j in 0..m {
                    w = add(w, mul(Expr::y(j), dk.diff(Var::X(j))));
                }
                sub(w, fstar.diff(Var::X(k)))
            })
            .collect();
        let metric = (0..m * m)
            .map(|ij| geometry.metric_field(ij / m, ij % m).clone())
            .collect();
        NonlinearConnection {
            dim: m,
            coeffs: Coefficients::Spray { metric, numerators },
        }
    }

    /// `fields[i][j] = N^i_j`.
    pub fn user_supplied(fields: Vec<Vec<Expr>>) -> Self {
        let dim = fields.len();
        assert!(fields.iter().all(|row| row.len() == dim));
        NonlinearConnection {
            dim,
            coeffs: Coefficients::Fields(fields),
        }
    }

    /// The identically vanishing connection (`δ_i = ∂/∂x^i`).
    pub fn zero(dim: usize) -> Self {
        Self::user_supplied(vec![vec![Expr::zero(); dim]; dim])
    }

    /// The user-supplied connection of `geometry`'s field set, or the
    /// canonical one when none is given.
    pub fn for_geometry(geometry: &Geometry) -> Self {
        match &geometry.fieldset().n_coeffs {
            Some(fields) => Self::user_supplied(fields.clone()),
            None => Self::canonical(geometry),
        }
    }

    pub fn source(&self) -> ConnectionSource {
        match self.coeffs {
            Coefficients::Spray { .. } => ConnectionSource::CanonicalSpray,
            Coefficients::Fields(_) => ConnectionSource::UserSupplied,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn evaluate(&self, p: &ChartPoint) -> Result<ConnectionAt> {
        self.evaluate_with(p, None)
    }

    /// Like [`evaluate`](Self::evaluate), reusing already computed jets of
    /// `g_ij` (row-major) for the spray.
    pub fn evaluate_with(
        &self,
        p: &ChartPoint,
        metric_jets: Option<&[Jet2]>,
    ) -> Result<ConnectionAt> {
        let m = self.dim;
        match &self.coeffs {
            Coefficients::Fields(fields) => {
                let mut n = DMatrix::zeros(m, m);
                let mut dn_dx = Tensor3::zeros(m);
                let mut dn_dy = Tensor3::zeros(m);
                for i in 0..m {
                    for j in 0..m {
                        let jet = eval_jet2(&fields[i][j], p)?;
                        n[(i, j)] = jet.value;
                        for k in 0..m {
                            dn_dx[(i, j, k)] = jet.d(k);
                            dn_dy[(i, j, k)] = jet.d(m + k);
                        }
                    }
                }
                Ok(ConnectionAt { n, dn_dx, dn_dy })
            }
            Coefficients::Spray { metric, numerators } => {
                let owned;
                let gjets = match metric_jets {
                    Some(j) => j,
                    None => {
                        owned = metric
                            .iter()
                            .map(|e| eval_jet2(e, p))
                            .collect::<Result<Vec<_>>>()?;
                        &owned
                    }
                };
                let ginv = inverse_jets(gjets, m);
                let wjets = numerators
                    .iter()
                    .map(|e| eval_jet2(e, p))
                    .collect::<Result<Vec<_>>>()?;
                let spray: Vec<Jet2> = (0..m)
                    .map(|i| {
                        let mut gi = Jet2::constant(0.0, 2 * m);
                        for k in 0..m {
                            gi.add_scaled(0.25, &(&ginv[i * m + k] * &wjets[k]));
                        }
                        gi
                    })
                    .collect();
                Ok(ConnectionAt {
                    n: DMatrix::from_fn(m, m, |i, j| spray[i].d(m + j)),
                    dn_dx: Tensor3::from_fn(m, |i, j, k| spray[i].hess(m + j, k)),
                    dn_dy: Tensor3::from_fn(m, |i, j, k| spray[i].hess(m + j, m + k)),
                })
            }
        }
    }
}

/// Jets of the entries of `A⁻¹` from jets of the entries of `A`, using
/// `∂A⁻¹ = −A⁻¹ ∂A A⁻¹` and its derivative.
fn inverse_jets(a: &[Jet2], m: usize) -> Vec<Jet2> {
    let nvars = a[0].nvars();
    let value = DMatrix::from_fn(m, m, |i, j| a[i * m + j].value);
    // Callers have already rejected degenerate metrics.
    let inv = value.try_inverse().expect("nondegenerate metric");
    let first: Vec<DMatrix<f64>> = (0..nvars)
        .map(|s| DMatrix::from_fn(m, m, |i, j| a[i * m + j].d(s)))
        .collect();
    let inv_first: Vec<DMatrix<f64>> = first.iter().map(|da| -(&inv * da * &inv)).collect();
    let mut second = vec![DMatrix::zeros(m, m); nvars * nvars];
    for s in 0..nvars {
        for t in s..nvars {
            let dst = DMatrix::from_fn(m, m, |i, j| a[i * m + j].hess(s, t));
            let inner = &first[s] * &inv * &first[t] + &first[t] * &inv * &first[s] - dst;
            second[s * nvars + t] = &inv * inner * &inv;
        }
    }
    (0..m * m)
        .map(|ij| {
            let (i, j) = (ij / m, ij % m);
            Jet2::from_parts(
                inv[(i, j)],
                inv_first.iter().map(|d| d[(i, j)]).collect(),
                |s, t| second[s * nvars + t][(i, j)],
            )
        })
        .collect()
}

/// Brackets of adapted frame fields at a point. Vertical fields commute.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBrackets {
    /// `[(k, i, j)] = R^k_{ij}`, so `[δ_i, δ_j] = −R^k_{ij} ∂_k`.
    pub r: Tensor3,
    /// `[(k, i, j)] = ∂N^k_i/∂y^j`, so `[δ_i, ∂_j] = dN^k_{ij} ∂_k`.
    pub dn: Tensor3,
}

impl FrameBrackets {
    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    /// `[E_a, E_b]` as an adapted-frame vector, for frame slots `a`, `b`.
    pub fn bracket(&self, a: usize, b: usize) -> Vec<f64> {
        let m = self.dim();
        let mut out = vec![0.0; 2 * m];
        match (a < m, b < m) {
            (true, true) => {
                for k in 0..m {
                    out[m + k] = -self.r[(k, a, b)];
                }
            }
            (true, false) => {
                for k in 0..m {
                    out[m + k] = self.dn[(k, a, b - m)];
                }
            }
            (false, true) => {
                for k in 0..m {
                    out[m + k] = -self.dn[(k, b, a - m)];
                }
            }
            (false, false) => {}
        }
        out
    }
}

pub fn frame_brackets(nc: &ConnectionAt) -> FrameBrackets {
    let m = nc.dim();
    FrameBrackets {
        r: Tensor3::from_fn(m, |k, i, j| nc.delta_n(k, j, i) - nc.delta_n(k, i, j)),
        dn: Tensor3::from_fn(m, |k, i, j| nc.dn_dy[(k, i, j)]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Horizontal,
    Vertical,
}

/// `h` or `v` projection of an adapted-frame vector.
pub fn project(v: &[f64], which: Part) -> Vec<f64> {
    let m = v.len() / 2;
    v.iter()
        .enumerate()
        .map(|(slot, &c)| match (which, slot < m) {
            (Part::Horizontal, true) | (Part::Vertical, false) => c,
            _ => 0.0,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expression, validate_fieldset, FieldSetSource};

    fn geometry(n: usize, fstar: &str) -> Geometry {
        Geometry::new(validate_fieldset(&FieldSetSource::new(n, fstar)).unwrap())
    }

    fn pt(x: &[f64], y: &[f64]) -> ChartPoint {
        ChartPoint::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn flat_spray_vanishes() {
        let g = geometry(1, "y1^2+y2^2");
        let nc = NonlinearConnection::canonical(&g);
        assert_eq!(nc.source(), ConnectionSource::CanonicalSpray);
        let at = nc.evaluate(&pt(&[0.3, -0.2], &[1.0, 2.0])).unwrap();
        assert_eq!(at.n.amax(), 0.0);
        assert_eq!(at.dn_dx.max_abs(), 0.0);
        let br = frame_brackets(&at);
        assert_eq!(br.r.max_abs(), 0.0);
        assert_eq!(br.dn.max_abs(), 0.0);
    }

    #[test]
    fn exponential_weight_spray_is_christoffel_linear() {
        // g = e^{x1} I: Γ^1_11 = ½, Γ^1_22 = −½, Γ^2_12 = Γ^2_21 = ½, others 0.
        let g = geometry(1, "exp(x1)*(y1^2+y2^2)");
        let (y1, y2) = (0.8, -1.3);
        let at = NonlinearConnection::canonical(&g)
            .evaluate(&pt(&[0.4, 0.9], &[y1, y2]))
            .unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.5 * y1, -0.5 * y2, 0.5 * y2, 0.5 * y1]);
        assert!((&at.n - expected).amax() < 1e-12, "{}", at.n);
    }

    #[test]
    fn single_entry_connection_brackets() {
        let nc = NonlinearConnection::user_supplied(vec![
            vec![parse_expression("y1", 1).unwrap(), Expr::zero()],
            vec![Expr::zero(), Expr::zero()],
        ]);
        let br = frame_brackets(&nc.evaluate(&pt(&[0.0, 0.0], &[2.0, 1.0])).unwrap());
        assert_eq!(br.dn[(0, 0, 0)], 1.0);
        assert_eq!(br.dn.max_abs(), 1.0);
        assert_eq!(br.r.max_abs(), 0.0);
    }

    #[test]
    fn curvature_is_skew() {
        let fields = [["x2*y1 + y2^2", "sin(x1)*y2"], ["x1*x2*y2", "y1*y2 - x1"]];
        let nc = NonlinearConnection::user_supplied(
            fields
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| parse_expression(s, 1).unwrap())
                        .collect()
                })
                .collect(),
        );
        let br = frame_brackets(&nc.evaluate(&pt(&[0.3, 0.7], &[1.1, -0.4])).unwrap());
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(br.r[(k, i, j)], -br.r[(k, j, i)]);
                }
            }
        }
        assert!(br.r.max_abs() > 0.1);
    }

    #[test]
    fn projections_split_the_frame() {
        let w = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(project(&w, Part::Horizontal), vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(project(&w, Part::Vertical), vec![0.0, 0.0, 3.0, 4.0]);
        let hh = project(&project(&w, Part::Horizontal), Part::Horizontal);
        assert_eq!(hh, project(&w, Part::Horizontal));
        let hv = project(&project(&w, Part::Horizontal), Part::Vertical);
        assert!(hv.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn bracket_vectors_follow_convention() {
        let br = FrameBrackets {
            r: Tensor3::from_fn(2, |k, i, j| (k as f64 + 1.0) * (i as f64 - j as f64)),
            dn: Tensor3::from_fn(2, |k, i, j| (k * 4 + i * 2 + j) as f64),
        };
        assert_eq!(br.bracket(0, 1), vec![0.0, 0.0, 1.0, 2.0]);
        assert_eq!(br.bracket(1, 2), vec![0.0, 0.0, 2.0, 6.0]);
        assert_eq!(br.bracket(2, 1), vec![0.0, 0.0, -2.0, -6.0]);
        assert_eq!(br.bracket(2, 3), vec![0.0; 4]);
    }
}
