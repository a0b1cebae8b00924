//! `∇^a` recovered by solving its defining Koszul-type identities as
//! linear systems, frame vector by frame vector.
//!
//! Nothing here uses the explicit block formulas: directional derivatives
//! come straight from the metric jets, brackets from [`FrameBrackets`] and
//! the complex structure from its matrix.

use nalgebra::{DMatrix, DVector};

use super::{Indicant, PointData, VerticalConnectionCoeffs};
use crate::calculus::delta_of_jet;
use crate::error::{Error, Result};
use crate::hypercomplex::build_triple;
use crate::nlconn::{project, Part};
use crate::tensor::Tensor3;

/// Relative residual above which a solve is reported as inconsistent.
const SOLVE_TOLERANCE: f64 = 1e-9;

struct Frame<'a> {
    pd: &'a PointData,
    m: usize,
    /// `dir_g[dir][(i, j)] = E_dir(g_ij)` for every frame slot.
    dir_g: Vec<DMatrix<f64>>,
}

impl<'a> Frame<'a> {
    fn new(pd: &'a PointData) -> Self {
        let m = pd.dim();
        let nmat = pd.n_matrix();
        let dir_g = (0..2 * m)
            .map(|dir| {
                DMatrix::from_fn(m, m, |i, j| {
                    let jet = &pd.metric_jets[i * m + j];
                    if dir < m {
                        delta_of_jet(jet, nmat, dir)
                    } else {
                        jet.d(dir)
                    }
                })
            })
            .collect();
        Frame { pd, m, dir_g }
    }

    /// `g(u, w)` on the vertical parts of two adapted-frame vectors.
    fn gv(&self, u: &[f64], w: &[f64]) -> f64 {
        let m = self.m;
        let g = &self.pd.metric.g;
        let mut acc = 0.0;
        for i in 0..m {
            if u[m + i] == 0.0 {
                continue;
            }
            for j in 0..m {
                acc += u[m + i] * w[m + j] * g[(i, j)];
            }
        }
        acc
    }

    /// `E_dir(g(u, w))` for constant-component vertical `u`, `w`.
    fn dgv(&self, dir: usize, u: &[f64], w: &[f64]) -> f64 {
        let m = self.m;
        let dg = &self.dir_g[dir];
        let mut acc = 0.0;
        for i in 0..m {
            for j in 0..m {
                acc += u[m + i] * w[m + j] * dg[(i, j)];
            }
        }
        acc
    }

    /// `K(u, w)` for a vertical-valued tensor with `K(∂_j, ∂_i) = K^k_{ij} ∂_k`.
    fn apply_tensor(&self, k: &Tensor3, u: &[f64], w: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut out = vec![0.0; 2 * m];
        for kk in 0..m {
            let mut acc = 0.0;
            for j in 0..m {
                for i in 0..m {
                    acc += u[m + j] * w[m + i] * k[(kk, i, j)];
                }
            }
            out[m + kk] = acc;
        }
        out
    }

    fn bracket(&self, a: usize, b: usize) -> Vec<f64> {
        self.pd.brackets.bracket(a, b)
    }
}

fn unit(len: usize, slot: usize) -> Vec<f64> {
    let mut v = vec![0.0; len];
    v[slot] = 1.0;
    v
}

fn mat_vec(a: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (a * DVector::from_column_slice(v)).as_slice().to_vec()
}

fn check_solution(
    a: &DMatrix<f64>,
    x: &DMatrix<f64>,
    b: &DMatrix<f64>,
    context: &'static str,
) -> Result<()> {
    let scale = 1.0f64.max(b.amax()).max(a.amax() * x.amax());
    let residual = (a * x - b).amax() / scale;
    if residual.is_finite() && residual <= SOLVE_TOLERANCE {
        Ok(())
    } else {
        Err(Error::InconsistentSystem { context, residual })
    }
}

/// Solves the vertical and twisted-horizontal Koszul identities for `∇^a`.
pub fn koszul_solve(pd: &PointData, a: Indicant) -> Result<VerticalConnectionCoeffs> {
    let fr = Frame::new(pd);
    let m = fr.m;
    let size = 2 * m;
    let g = &pd.metric.g;
    let lu_g = g.clone().lu();

    // Vertical part: 2 g(∇_{∂_j}∂_i, ∂_l) = rhs(j, i, l).
    let mut c = Tensor3::zeros(m);
    let mut rhs = DMatrix::zeros(m, m * m);
    for j in 0..m {
        for i in 0..m {
            let (x, y) = (unit(size, m + j), unit(size, m + i));
            for l in 0..m {
                let z = unit(size, m + l);
                let (sx, sy, sz) = (m + j, m + i, m + l);
                let r = fr.dgv(sx, &y, &z) + fr.dgv(sy, &z, &x) - fr.dgv(sz, &x, &y)
                    + fr.gv(&y, &fr.bracket(sz, sx))
                    + fr.gv(&z, &fr.bracket(sx, sy))
                    - fr.gv(&x, &fr.bracket(sy, sz))
                    + fr.gv(&y, &fr.apply_tensor(&pd.s, &z, &x))
                    + fr.gv(&z, &fr.apply_tensor(&pd.s, &x, &y))
                    - fr.gv(&x, &fr.apply_tensor(&pd.s, &y, &z));
                rhs[(l, j * m + i)] = 0.5 * r;
            }
        }
    }
    let sol = lu_g.solve(&rhs).ok_or(Error::InconsistentSystem {
        context: "vertical Koszul system",
        residual: f64::INFINITY,
    })?;
    check_solution(g, &sol, &rhs, "vertical Koszul system")?;
    for j in 0..m {
        for i in 0..m {
            for k in 0..m {
                c[(k, i, j)] = sol[(k, j * m + i)];
            }
        }
    }

    // Horizontal part: 2 g(∇_{hX} J hY, J hZ) = rhs(X, Y, Z) over horizontal
    // frame vectors. The unknown `V_{xy} = ∇_{δ_x}(J δ_y)` is solved from
    // `Pᵀ g V = rhs / 2`, where column `z` of `P` holds `J δ_z`.
    let triple = build_triple(m / 2);
    let jm = triple.get_f64(a.index());
    let jh: Vec<Vec<f64>> = (0..m)
        .map(|s| mat_vec(&jm, &project(&unit(size, s), Part::Horizontal)))
        .collect();
    let p = DMatrix::from_fn(m, m, |k, z| jh[z][m + k]);
    let jbr = |u: usize, w: usize| -> Vec<f64> {
        mat_vec(&jm, &project(&fr.bracket(u, w), Part::Horizontal))
    };
    let mut rhs = DMatrix::zeros(m, m * m);
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                let (jx, jy, jz) = (&jh[x], &jh[y], &jh[z]);
                let r = fr.dgv(x, jy, jz) + fr.dgv(y, jz, jx) - fr.dgv(z, jx, jy)
                    + fr.gv(jy, &jbr(z, x))
                    + fr.gv(jz, &jbr(x, y))
                    - fr.gv(jx, &jbr(y, z))
                    + fr.gv(jy, &fr.apply_tensor(&pd.t, jz, jx))
                    + fr.gv(jz, &fr.apply_tensor(&pd.t, jx, jy))
                    - fr.gv(jx, &fr.apply_tensor(&pd.t, jy, jz));
                rhs[(z, x * m + y)] = 0.5 * r;
            }
        }
    }
    let gram = p.transpose() * g;
    let w = gram
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(Error::InconsistentSystem {
            context: "horizontal Koszul system",
            residual: f64::INFINITY,
        })?;
    check_solution(&gram, &w, &rhs, "horizontal Koszul system")?;

    // V_{xy} = Σ_i P[(i, y)] F^k_{ix}, i.e. W_x = F_x P with F_x[(k, i)] = F^k_{ix}.
    let pt_lu = p.transpose().lu();
    let mut f = Tensor3::zeros(m);
    for x in 0..m {
        let wx = DMatrix::from_fn(m, m, |k, y| w[(k, x * m + y)]);
        let wxt = wx.transpose();
        let fxt = pt_lu.solve(&wxt).ok_or(Error::InconsistentSystem {
            context: "frame change",
            residual: f64::INFINITY,
        })?;
        check_solution(&p.transpose(), &fxt, &wxt, "frame change")?;
        for k in 0..m {
            for i in 0..m {
                f[(k, i, x)] = fxt[(i, k)];
            }
        }
    }
    Ok(VerticalConnectionCoeffs { a: Some(a), f, c })
}
