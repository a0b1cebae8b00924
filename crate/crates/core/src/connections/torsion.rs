//! Torsion of `D^a` and the residuals of the two torsion conditions.

use nalgebra::{DMatrix, DVector};

use super::{FullConnectionCoeffs, Indicant, TorsionTensor, VerticalConnectionCoeffs};
use crate::hypercomplex::HypercomplexTriple;
use crate::nlconn::{project, FrameBrackets, Part};
use crate::tensor::Tensor3;

fn mat_vec(a: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (a * DVector::from_column_slice(v)).as_slice().to_vec()
}

fn unit(len: usize, slot: usize) -> Vec<f64> {
    let mut v = vec![0.0; len];
    v[slot] = 1.0;
    v
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(p, q)| p - q).collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

/// `∇_{E_dir} w` for a vertical frame vector.
fn nabla(cc: &VerticalConnectionCoeffs, dir: usize, w: &[f64]) -> Vec<f64> {
    let m = cc.dim();
    let mut out = vec![0.0; 2 * m];
    out[m..].copy_from_slice(&cc.apply(dir, &w[m..]));
    out
}

/// `T(E_I, E_J) = D_{E_I}E_J − D_{E_J}E_I − [E_I, E_J]` from frame coefficients.
pub fn torsion_da(da: &FullConnectionCoeffs, brackets: &FrameBrackets) -> TorsionTensor {
    let s = da.size();
    let mut t = Tensor3::zeros(s);
    for i in 0..s {
        for j in 0..s {
            let br = brackets.bracket(i, j);
            for k in 0..s {
                t[(k, i, j)] = da.coeffs[(k, j, i)] - da.coeffs[(k, i, j)] - br[k];
            }
        }
    }
    TorsionTensor { t }
}

/// `T(X,Y) = (∇_X vY − ∇_Y vX − v[X,Y]) − J_a(∇_X J_a hY − ∇_Y J_a hX − J_a h[X,Y])`
/// evaluated term by term on frame pairs.
pub fn torsion_from_nabla(
    cc: &VerticalConnectionCoeffs,
    triple: &HypercomplexTriple,
    a: Indicant,
    brackets: &FrameBrackets,
) -> TorsionTensor {
    let s = triple.size();
    let j = triple.get_f64(a.index());
    let mut t = Tensor3::zeros(s);
    for xi in 0..s {
        for yi in 0..s {
            let (x, y) = (unit(s, xi), unit(s, yi));
            let br = brackets.bracket(xi, yi);
            let vert = sub(
                &sub(
                    &nabla(cc, xi, &project(&y, Part::Vertical)),
                    &nabla(cc, yi, &project(&x, Part::Vertical)),
                ),
                &project(&br, Part::Vertical),
            );
            let jhy = mat_vec(&j, &project(&y, Part::Horizontal));
            let jhx = mat_vec(&j, &project(&x, Part::Horizontal));
            let inner = sub(
                &sub(&nabla(cc, xi, &jhy), &nabla(cc, yi, &jhx)),
                &mat_vec(&j, &project(&br, Part::Horizontal)),
            );
            let total = sub(&vert, &mat_vec(&j, &inner));
            for k in 0..s {
                t[(k, xi, yi)] = total[k];
            }
        }
    }
    TorsionTensor { t }
}

/// Largest deviation between the torsion and the two specialised forms
/// `T(vX,vY) = ∇_{vX}vY − ∇_{vY}vX − [vX,vY]` and
/// `hT(hX,hY) = J_a(∇_{hY}J_ahX − ∇_{hX}J_ahY + J_ah[hX,hY])` on frame pairs.
pub fn display_discrepancy(
    torsion: &TorsionTensor,
    cc: &VerticalConnectionCoeffs,
    triple: &HypercomplexTriple,
    a: Indicant,
    brackets: &FrameBrackets,
) -> f64 {
    let s = triple.size();
    let m = s / 2;
    let j = triple.get_f64(a.index());
    let mut worst = 0.0f64;
    for xi in 0..s {
        for yi in 0..s {
            let (x, y) = (unit(s, xi), unit(s, yi));
            let br = brackets.bracket(xi, yi);
            let actual = torsion.value(xi, yi);
            if xi >= m && yi >= m {
                let display = sub(&sub(&nabla(cc, xi, &y), &nabla(cc, yi, &x)), &br);
                worst = worst.max(max_abs_diff(&actual, &display));
            } else if xi < m && yi < m {
                let (jx, jy) = (mat_vec(&j, &x), mat_vec(&j, &y));
                let jhbr = mat_vec(&j, &project(&br, Part::Horizontal));
                let inner: Vec<f64> = sub(&nabla(cc, yi, &jx), &nabla(cc, xi, &jy))
                    .iter()
                    .zip(&jhbr)
                    .map(|(p, q)| p + q)
                    .collect();
                let display = mat_vec(&j, &inner);
                worst = worst.max(max_abs_diff(
                    &project(&actual, Part::Horizontal),
                    &project(&display, Part::Horizontal),
                ));
            }
        }
    }
    worst
}

/// `K(u, w)` for a vertical-valued skew tensor with `K(∂_j, ∂_i) = K^k_{ij} ∂_k`.
fn apply_vertical_tensor(k: &Tensor3, u: &[f64], w: &[f64]) -> Vec<f64> {
    let m = k.dim();
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

/// `max |T(∂_j, ∂_i) − S(∂_j, ∂_i)|` over vertical frame pairs.
pub fn vertical_torsion_residual(torsion: &TorsionTensor, s: &Tensor3) -> f64 {
    let m = s.dim();
    let size = 2 * m;
    let mut worst = 0.0f64;
    for a in m..size {
        for b in m..size {
            let expected = apply_vertical_tensor(s, &unit(size, a), &unit(size, b));
            worst = worst.max(max_abs_diff(&torsion.value(a, b), &expected));
        }
    }
    worst
}

/// `max |hT(δ_x, δ_y) − J_a T(J_a δ_y, J_a δ_x)|` over horizontal frame pairs.
pub fn horizontal_torsion_residual(
    torsion: &TorsionTensor,
    t: &Tensor3,
    triple: &HypercomplexTriple,
    a: Indicant,
) -> f64 {
    let m = t.dim();
    let size = 2 * m;
    let j = triple.get_f64(a.index());
    let mut worst = 0.0f64;
    for x in 0..m {
        for y in 0..m {
            let jx = mat_vec(&j, &unit(size, x));
            let jy = mat_vec(&j, &unit(size, y));
            let expected = mat_vec(&j, &apply_vertical_tensor(t, &jy, &jx));
            let actual = project(&torsion.value(x, y), Part::Horizontal);
            worst = worst.max(max_abs_diff(&actual, &project(&expected, Part::Horizontal)));
        }
    }
    worst
}

/// `max |T(δ_i, ∂_j)|` over mixed frame pairs; reported, not constrained.
pub fn mixed_torsion_magnitude(torsion: &TorsionTensor) -> f64 {
    let s = torsion.t.dim();
    let m = s / 2;
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in m..s {
            worst = worst.max(
                torsion
                    .value(i, j)
                    .iter()
                    .fold(0.0, |acc, v| acc.max(v.abs())),
            );
        }
    }
    worst
}
