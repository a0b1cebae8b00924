//! Linear connections on the whole chart assembled from a vertical
//! connection and the complex structures.

use nalgebra::{DMatrix, DVector};

use super::{FullConnectionCoeffs, Indicant, VerticalConnectionCoeffs};
use crate::hypercomplex::HypercomplexTriple;
use crate::nlconn::{project, Part};
use crate::tensor::Tensor3;

fn mat_vec(a: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (a * DVector::from_column_slice(v)).as_slice().to_vec()
}

/// `∇_{E_dir} w` for a vertical adapted-frame vector `w`, as a frame vector.
fn nabla(cc: &VerticalConnectionCoeffs, dir: usize, w: &[f64]) -> Vec<f64> {
    let m = cc.dim();
    debug_assert!(
        w[..m].iter().all(|c| *c == 0.0),
        "argument must be vertical"
    );
    let mut out = vec![0.0; 2 * m];
    out[m..].copy_from_slice(&cc.apply(dir, &w[m..]));
    out
}

fn assemble(size: usize, d: impl Fn(usize, &[f64]) -> Vec<f64>) -> FullConnectionCoeffs {
    let mut coeffs = Tensor3::zeros(size);
    for dir in 0..size {
        for i in 0..size {
            let mut e = vec![0.0; size];
            e[i] = 1.0;
            let col = d(dir, &e);
            for (k, v) in col.into_iter().enumerate() {
                coeffs[(k, i, dir)] = v;
            }
        }
    }
    FullConnectionCoeffs { coeffs }
}

/// `D^a_X Y = ∇_X vY − J_a ∇_X J_a hY`.
pub fn build_da(
    cc: &VerticalConnectionCoeffs,
    triple: &HypercomplexTriple,
    a: Indicant,
) -> FullConnectionCoeffs {
    let j = triple.get_f64(a.index());
    assemble(triple.size(), |dir, y| {
        let vy = project(y, Part::Vertical);
        let jhy = mat_vec(&j, &project(y, Part::Horizontal));
        let first = nabla(cc, dir, &vy);
        let second = mat_vec(&j, &nabla(cc, dir, &jhy));
        first.iter().zip(&second).map(|(p, q)| p - q).collect()
    })
}

/// `D_X Y = ½{∇_X vY − J₁∇_X J₁hY − J₂∇_X J₂vY − J₃∇_X J₃hY}`.
pub fn build_d(cc: &VerticalConnectionCoeffs, triple: &HypercomplexTriple) -> FullConnectionCoeffs {
    let (j1, j2, j3) = (triple.get_f64(1), triple.get_f64(2), triple.get_f64(3));
    assemble(triple.size(), |dir, y| {
        let vy = project(y, Part::Vertical);
        let hy = project(y, Part::Horizontal);
        let t0 = nabla(cc, dir, &vy);
        let t1 = mat_vec(&j1, &nabla(cc, dir, &mat_vec(&j1, &hy)));
        let t2 = mat_vec(&j2, &nabla(cc, dir, &mat_vec(&j2, &vy)));
        let t3 = mat_vec(&j3, &nabla(cc, dir, &mat_vec(&j3, &hy)));
        (0..y.len())
            .map(|k| 0.5 * (t0[k] - t1[k] - t2[k] - t3[k]))
            .collect()
    })
}

/// `max |(D_{E_dir} J)(E_I)|` over all frame directions and vectors, i.e.
/// the largest entry of `Γ_dir J − J Γ_dir`.
pub fn parallelism_residual(d: &FullConnectionCoeffs, j: &DMatrix<f64>) -> f64 {
    let s = d.size();
    let mut worst = 0.0f64;
    for dir in 0..s {
        let gamma = DMatrix::from_fn(s, s, |k, i| d.coeffs[(k, i, dir)]);
        worst = worst.max((&gamma * j - j * &gamma).amax());
    }
    worst
}
