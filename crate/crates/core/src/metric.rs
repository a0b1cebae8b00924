//! The fundamental tensor `g_ij = ½ ∂²F*/∂y^i∂y^j` and the pseudo-Finsler
//! axioms it has to satisfy.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::calculus::{delta_of_jet, eval_jet2, ChartPoint, Jet2};
use crate::error::{Error, Result};
use crate::expr::{mul, num, Expr, FieldSet, Var};
use crate::tensor::Tensor3;

/// `|det g| < DEGENERACY_RATIO · (max |g_ij|)^{2n}` counts as degenerate.
pub const DEGENERACY_RATIO: f64 = 1e-12;

/// Eigenvalue sign counts of `g_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub negative: usize,
    pub positive: usize,
}

impl Signature {
    /// Short label for the signature regime of a run.
    pub fn regime(&self) -> &'static str {
        match (self.negative, self.positive) {
            (0, _) => "definite",
            (_, 0) => "negative-definite",
            _ => "indefinite",
        }
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.negative, self.positive)
    }
}

/// The fundamental tensor at a point, with its inverse and first derivatives.
#[derive(Debug, Clone)]
pub struct VerticalMetric {
    pub g: DMatrix<f64>,
    pub ginv: DMatrix<f64>,
    pub signature: Signature,
    /// `[(k, i, j)] = ∂g_ij/∂x^k`.
    pub dg_dx: Tensor3,
    /// `[(k, i, j)] = ∂g_ij/∂y^k`.
    pub dg_dy: Tensor3,
    /// `[(k, i, j)] = δ_k g_ij`, available after [`VerticalMetric::fill_delta`].
    pub deltag: Option<Tensor3>,
}

impl VerticalMetric {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// Builds the metric from jets of its components (row-major `m × m`).
    pub fn from_jets(jets: &[Jet2], p: &ChartPoint) -> Result<Self> {
        let m = p.dim();
        let g = DMatrix::from_fn(m, m, |i, j| jets[i * m + j].value);
        let scale = g.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let det = g.determinant();
        let degenerate = || Error::DegenerateMetric {
            point: p.to_string(),
            det,
        };
        if det.is_nan() || det.abs() < DEGENERACY_RATIO * scale.powi(m as i32) || scale == 0.0 {
            return Err(degenerate());
        }
        let eig = SymmetricEigen::new(g.clone());
        let lmax = eig.eigenvalues.amax();
        let mut signature = Signature {
            negative: 0,
            positive: 0,
        };
        for &l in eig.eigenvalues.iter() {
            if l.abs() <= DEGENERACY_RATIO * lmax {
                return Err(degenerate());
            }
            if l < 0.0 {
                signature.negative += 1;
            } else {
                signature.positive += 1;
            }
        }
        let ginv = g.clone().try_inverse().ok_or_else(degenerate)?;
        let dg_dx = Tensor3::from_fn(m, |k, i, j| jets[i * m + j].d(k));
        let dg_dy = Tensor3::from_fn(m, |k, i, j| jets[i * m + j].d(m + k));
        Ok(VerticalMetric {
            g,
            ginv,
            signature,
            dg_dx,
            dg_dy,
            deltag: None,
        })
    }

    /// Fills `δ_k g_ij = ∂g_ij/∂x^k − N^l_k ∂g_ij/∂y^l`; `nmat[(l, k)] = N^l_k`.
    pub fn fill_delta(&mut self, nmat: &DMatrix<f64>) {
        let m = self.dim();
        let deltag = Tensor3::from_fn(m, |k, i, j| {
            let mut v = self.dg_dx[(k, i, j)];
            for l in 0..m {
                v -= nmat[(l, k)] * self.dg_dy[(l, i, j)];
            }
            v
        });
        self.deltag = Some(deltag);
    }

    pub fn max_abs(&self) -> f64 {
        self.g.amax()
    }
}

/// `true` iff `g` has exactly `expected_q` negative eigenvalues, or, with no
/// expectation, iff `g` is nondegenerate.
pub fn check_signature(vm: &VerticalMetric, expected_q: Option<usize>) -> bool {
    let nondegenerate = vm.g.determinant() != 0.0;
    match expected_q {
        Some(q) => nondegenerate && vm.signature.negative == q,
        None => nondegenerate,
    }
}

/// Residuals of the degree-two homogeneity of `F*` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityReport {
    /// `|y^i ∂F*/∂y^i − 2F*|`.
    pub euler_residual: f64,
    /// `|F*(x, ky) − k² F*(x, y)|`, one per sampled `k`.
    pub scaling_residuals: Vec<f64>,
    /// Normalisers for the relative residuals: `max(1, |2F*|)` for the Euler
    /// residual and `max(1, k²|F*|)` for each scaling residual.
    pub euler_scale: f64,
    pub scaling_scales: Vec<f64>,
}

impl HomogeneityReport {
    pub fn max_relative(&self) -> f64 {
        self.scaling_residuals
            .iter()
            .zip(&self.scaling_scales)
            .map(|(r, s)| r / s)
            .fold(self.euler_residual / self.euler_scale, f64::max)
    }
}

/// A field set prepared for evaluation: `F*` together with the symbolic
/// components of its fundamental tensor.
#[derive(Debug, Clone)]
pub struct Geometry {
    fs: FieldSet,
    g_fields: Vec<Expr>,
}

impl Geometry {
    pub fn new(fs: FieldSet) -> Self {
        let m = fs.dim();
        let mut g_fields = vec![Expr::zero(); m * m];
        for i in 0..m {
            let di = fs.fstar.diff(Var::Y(i));
            for j in i..m {
                let gij = mul(num(0.5), di.diff(Var::Y(j)));
                g_fields[j * m + i] = gij.clone();
                g_fields[i * m + j] = gij;
            }
        }
        Geometry { fs, g_fields }
    }

    pub fn fieldset(&self) -> &FieldSet {
        &self.fs
    }

    pub fn dim(&self) -> usize {
        self.fs.dim()
    }

    /// Symbolic `g_ij`.
    pub fn metric_field(&self, i: usize, j: usize) -> &Expr {
        &self.g_fields[i * self.dim() + j]
    }

    /// Jets of `g_ij` at `p`, row-major. Each symmetric pair is evaluated once.
    pub fn metric_jets(&self, p: &ChartPoint) -> Result<Vec<Jet2>> {
        let m = self.dim();
        let mut jets: Vec<Option<Jet2>> = vec![None; m * m];
        for i in 0..m {
            for j in i..m {
                let jet = eval_jet2(self.metric_field(i, j), p)?;
                jets[j * m + i] = Some(jet.clone());
                jets[i * m + j] = Some(jet);
            }
        }
        Ok(jets.into_iter().map(Option::unwrap).collect())
    }

    pub fn fundamental_tensor(&self, p: &ChartPoint) -> Result<VerticalMetric> {
        self.check_point(p)?;
        VerticalMetric::from_jets(&self.metric_jets(p)?, p)
    }

    pub fn check_homogeneity(&self, p: &ChartPoint, ks: &[f64]) -> Result<HomogeneityReport> {
        self.check_point(p)?;
        assert!(
            ks.iter().all(|&k| k > 0.0),
            "scaling factors must be positive"
        );
        let m = self.dim();
        let jet = eval_jet2(&self.fs.fstar, p)?;
        let euler: f64 = (0..m).map(|i| p.y[i] * jet.d(m + i)).sum();
        let mut scaling_residuals = Vec::with_capacity(ks.len());
        let mut scaling_scales = Vec::with_capacity(ks.len());
        for &k in ks {
            let q = p.scaled(k);
            let scaled = self.fs.fstar.eval(&q.x, &q.y)?;
            let expected = k * k * jet.value;
            scaling_residuals.push((scaled - expected).abs());
            scaling_scales.push(expected.abs().max(1.0));
        }
        Ok(HomogeneityReport {
            euler_residual: (euler - 2.0 * jet.value).abs(),
            scaling_residuals,
            euler_scale: (2.0 * jet.value).abs().max(1.0),
            scaling_scales,
        })
    }

    pub(crate) fn check_point(&self, p: &ChartPoint) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::PointDimension {
                expected: self.dim(),
                found: p.dim(),
            });
        }
        Ok(())
    }

    /// `δ_k g_ij` at `p` straight from metric jets; used where an
    /// independent route to the adapted derivatives is wanted.
    pub fn delta_metric_from_jets(jets: &[Jet2], nmat: &DMatrix<f64>) -> Tensor3 {
        let m = nmat.nrows();
        Tensor3::from_fn(m, |k, i, j| delta_of_jet(&jets[i * m + j], nmat, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{validate_fieldset, FieldSetSource};

    fn geometry(n: usize, fstar: &str) -> Geometry {
        Geometry::new(validate_fieldset(&FieldSetSource::new(n, fstar)).unwrap())
    }

    fn pt(x: &[f64], y: &[f64]) -> ChartPoint {
        ChartPoint::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn euclidean_metric_is_identity() {
        let vm = geometry(1, "y1^2+y2^2")
            .fundamental_tensor(&pt(&[0.1, 0.2], &[1.0, -0.5]))
            .unwrap();
        assert_eq!(vm.g, DMatrix::identity(2, 2));
        assert_eq!(
            vm.signature,
            Signature {
                negative: 0,
                positive: 2
            }
        );
        assert!(check_signature(&vm, None));
        assert!(check_signature(&vm, Some(0)));
        assert!(!check_signature(&vm, Some(1)));
    }

    #[test]
    fn lorentzian_metric_has_one_negative_direction() {
        let vm = geometry(1, "y1^2-y2^2")
            .fundamental_tensor(&pt(&[0.0, 0.0], &[1.0, 2.0]))
            .unwrap();
        assert_eq!(vm.g, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        assert_eq!(
            vm.signature,
            Signature {
                negative: 1,
                positive: 1
            }
        );
        assert!(check_signature(&vm, Some(1)));
        assert_eq!(vm.signature.regime(), "indefinite");
    }

    #[test]
    fn exponential_weight_metric_and_derivative() {
        let vm = geometry(1, "exp(x1)*(y1^2+y2^2)")
            .fundamental_tensor(&pt(&[1.0, 0.0], &[0.3, 0.9]))
            .unwrap();
        let e = std::f64::consts::E;
        assert!((vm.g[(0, 0)] - e).abs() < 1e-15);
        assert!((vm.g[(1, 1)] - e).abs() < 1e-15);
        assert_eq!(vm.g[(0, 1)], 0.0);
        assert!((vm.dg_dx[(0, 0, 0)] - e).abs() < 1e-15);
        assert_eq!(vm.dg_dx[(1, 0, 0)], 0.0);
        assert_eq!(vm.dg_dy.max_abs(), 0.0);
        assert!((&vm.g * &vm.ginv - DMatrix::identity(2, 2)).amax() < 1e-15);
    }

    #[test]
    fn degenerate_metric_is_an_error() {
        let err = geometry(1, "y1^2")
            .fundamental_tensor(&pt(&[0.0, 0.0], &[1.0, 1.0]))
            .unwrap_err();
        assert!(matches!(err, Error::DegenerateMetric { .. }));
    }

    #[test]
    fn homogeneous_quadratic_has_zero_residuals() {
        let r = geometry(1, "y1^2+y2^2")
            .check_homogeneity(&pt(&[0.4, 0.1], &[1.5, -0.25]), &[3.0])
            .unwrap();
        assert_eq!(r.euler_residual, 0.0);
        assert!(r.scaling_residuals[0] < 1e-14);
    }

    #[test]
    fn linear_term_breaks_homogeneity() {
        let r = geometry(1, "y1^2+y2^2+y1")
            .check_homogeneity(&pt(&[0.0, 0.0], &[1.0, 1.0]), &[2.0])
            .unwrap();
        assert_eq!(r.scaling_residuals, vec![2.0]);
        assert_eq!(r.euler_residual, 1.0);
    }

    #[test]
    fn quartic_rational_is_homogeneous() {
        let g = geometry(1, "(y1^4+y2^4)/(y1^2+y2^2)");
        for (x, y) in [([0.0, 0.0], [1.0, 0.3]), ([1.0, -1.0], [-0.7, 1.9])] {
            let r = g.check_homogeneity(&pt(&x, &y), &[0.5, 2.0, 7.0]).unwrap();
            assert!(r.max_relative() < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn wrong_dimension_point_is_rejected() {
        let g = geometry(2, "y1^2+y2^2+y3^2+y4^2");
        assert!(g.fundamental_tensor(&pt(&[0.0, 0.0], &[1.0, 0.0])).is_err());
    }
}
