//! The connections `∇¹`, `∇³` on the vertical bundle, the twisted linear
//! connections `D¹`, `D³` and the connection `D` that makes all three
//! complex structures parallel.
//!
//! Coefficient conventions, all zero-based:
//!
//! * vertical: `∇_{δ_j} ∂_i = F^k_{ij} ∂_k`, `∇_{∂_j} ∂_i = C^k_{ij} ∂_k`,
//!   stored as `f[(k, i, j)]` and `c[(k, i, j)]`;
//! * skew tensors: `S(∂_j, ∂_i) = S^k_{ij} ∂_k`, likewise for `T`;
//! * full frame: `D_{E_J} E_I = Γ^K_{IJ} E_K` over the adapted frame
//!   `(δ_1..δ_2n, ∂_1..∂_2n)`.

mod assembly;
mod closed_form;
mod koszul;
mod torsion;
mod verify;

use nalgebra::DMatrix;

use crate::calculus::{ChartPoint, Jet2};
use crate::error::Result;
use crate::metric::{Geometry, VerticalMetric};
use crate::nlconn::{frame_brackets, ConnectionAt, FrameBrackets, NonlinearConnection};
use crate::tensor::Tensor3;

pub use assembly::{build_d, build_da, parallelism_residual};
pub use closed_form::{cartan_coefficients, coeffs_closed_form};
pub use koszul::koszul_solve;
pub use torsion::{
    display_discrepancy, horizontal_torsion_residual, mixed_torsion_magnitude, torsion_da,
    torsion_from_nabla, vertical_torsion_residual,
};
pub use verify::{verify_all, VerifyOptions, HOMOGENEITY_SCALES};

/// Which complex structure twists the horizontal part: `J₁` or `J₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Indicant {
    One,
    Three,
}

impl Indicant {
    pub const BOTH: [Indicant; 2] = [Indicant::One, Indicant::Three];

    pub fn index(self) -> usize {
        match self {
            Indicant::One => 1,
            Indicant::Three => 3,
        }
    }

    /// An `F` entry `(k, i, j)` that the horizontal torsion condition of
    /// this indicant constrains, used to build negative controls. Entries
    /// with `i = j` cancel for `a = 1`; entries with `i = σ(j)` cancel for
    /// `a = 3`.
    pub fn sensitive_entry(self) -> (usize, usize, usize) {
        match self {
            Indicant::One => (0, 0, 1),
            Indicant::Three => (0, 0, 0),
        }
    }

    pub fn from_index(a: usize) -> Option<Self> {
        match a {
            1 => Some(Indicant::One),
            3 => Some(Indicant::Three),
            _ => None,
        }
    }
}

/// Coefficients of a linear connection on the vertical bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalConnectionCoeffs {
    pub a: Option<Indicant>,
    /// `[(k, i, j)] = F^k_{ij}` (or `F̃` for `a = 3`).
    pub f: Tensor3,
    /// `[(k, i, j)] = C^k_{ij}`.
    pub c: Tensor3,
}

impl VerticalConnectionCoeffs {
    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// `∇_{E_dir} w` for a vertical vector `w` given by its `2n` fibre
    /// components; returns fibre components.
    pub fn apply(&self, dir: usize, w: &[f64]) -> Vec<f64> {
        let m = self.dim();
        let (coeffs, j) = if dir < m {
            (&self.f, dir)
        } else {
            (&self.c, dir - m)
        };
        (0..m)
            .map(|k| (0..m).map(|i| w[i] * coeffs[(k, i, j)]).sum())
            .collect()
    }

    /// Adds `delta` to `F^k_{ij}`.
    pub fn perturbed(&self, k: usize, i: usize, j: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.f[(k, i, j)] += delta;
        out
    }

    pub fn relative_diff(&self, other: &Self) -> f64 {
        self.f
            .relative_diff(&other.f)
            .max(self.c.relative_diff(&other.c))
    }
}

/// `Γ^K_{IJ}` of a linear connection on the whole chart, `[(K, I, J)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullConnectionCoeffs {
    pub coeffs: Tensor3,
}

impl FullConnectionCoeffs {
    /// Frame size `4n`.
    pub fn size(&self) -> usize {
        self.coeffs.dim()
    }

    /// `D_{E_dir} Y` for an adapted-frame vector `Y` with constant components.
    pub fn apply(&self, dir: usize, y: &[f64]) -> Vec<f64> {
        let s = self.size();
        (0..s)
            .map(|k| (0..s).map(|i| y[i] * self.coeffs[(k, i, dir)]).sum())
            .collect()
    }
}

/// Torsion components, `[(K, I, J)]` = component `K` of `T(E_I, E_J)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionTensor {
    pub t: Tensor3,
}

impl TorsionTensor {
    /// `max |T^K_{IJ} + T^K_{JI}|`.
    pub fn skew_defect(&self) -> f64 {
        let s = self.t.dim();
        let mut worst = 0.0f64;
        for k in 0..s {
            for i in 0..s {
                for j in 0..s {
                    worst = worst.max((self.t[(k, i, j)] + self.t[(k, j, i)]).abs());
                }
            }
        }
        worst
    }

    pub fn value(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.t.dim()).map(|k| self.t[(k, i, j)]).collect()
    }
}

/// Everything the connection constructions need at one chart point.
#[derive(Debug, Clone)]
pub struct PointData {
    pub point: ChartPoint,
    /// Jets of `g_ij`, row-major.
    pub metric_jets: Vec<Jet2>,
    /// Fundamental tensor with `deltag` filled.
    pub metric: VerticalMetric,
    pub connection: ConnectionAt,
    pub brackets: FrameBrackets,
    /// `[(k, i, j)] = S^k_{ij}`.
    pub s: Tensor3,
    /// `[(k, i, j)] = T^k_{ij}`.
    pub t: Tensor3,
}

impl PointData {
    pub fn evaluate(geometry: &Geometry, nc: &NonlinearConnection, p: &ChartPoint) -> Result<Self> {
        geometry.check_point(p)?;
        let metric_jets = geometry.metric_jets(p)?;
        let mut metric = VerticalMetric::from_jets(&metric_jets, p)?;
        let connection = nc.evaluate_with(p, Some(&metric_jets))?;
        metric.fill_delta(&connection.n);
        let brackets = frame_brackets(&connection);
        let fs = geometry.fieldset();
        let m = fs.dim();
        Ok(PointData {
            point: p.clone(),
            s: fs.s_coeffs.eval(m, &p.x, &p.y)?,
            t: fs.t_coeffs.eval(m, &p.x, &p.y)?,
            metric_jets,
            metric,
            connection,
            brackets,
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn n_matrix(&self) -> &DMatrix<f64> {
        &self.connection.n
    }
}

/// Largest `|X(g_ij) − Γ^l_{iX} g_lj − Γ^l_{jX} g_il|` over every frame
/// direction `X ∈ {δ_k, ∂_k}` and every vertical pair `(∂_i, ∂_j)`.
pub fn metricity_residual(cc: &VerticalConnectionCoeffs, vm: &VerticalMetric) -> f64 {
    let m = vm.dim();
    let deltag = vm
        .deltag
        .as_ref()
        .expect("metric must carry δ-derivatives (call fill_delta)");
    let mut worst = 0.0f64;
    for dir in 0..2 * m {
        let (coeffs, dg, k) = if dir < m {
            (&cc.f, deltag, dir)
        } else {
            (&cc.c, &vm.dg_dy, dir - m)
        };
        for i in 0..m {
            for j in 0..m {
                let mut r = dg[(k, i, j)];
                for l in 0..m {
                    r -= coeffs[(l, i, k)] * vm.g[(l, j)] + coeffs[(l, j, k)] * vm.g[(i, l)];
                }
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}
