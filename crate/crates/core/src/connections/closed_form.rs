//! Explicit coefficient formulas for `∇¹` and `∇³`, block by block.
//!
//! Greek indices `α, β, γ` run over `0..n`; `n+α` addresses the second half
//! of each `2n` block. `δ_l g_ij` is read from the metric's `deltag`.

use super::{Indicant, PointData, VerticalConnectionCoeffs};
use crate::tensor::Tensor3;

/// `C^k_{ij} = ½ g^{lk}{∂_j g_il + ∂_i g_lj − ∂_l g_ji + S^h_jl g_ih
/// + S^h_ij g_lh − S^h_li g_jh}`, shared by both indicants.
fn vertical_block(pd: &PointData) -> Tensor3 {
    let m = pd.dim();
    let g = &pd.metric.g;
    let gi = &pd.metric.ginv;
    let dy = &pd.metric.dg_dy; // dy[(l, i, j)] = ∂_l g_ij
    let s = &pd.s;
    Tensor3::from_fn(m, |k, i, j| {
        let mut acc = 0.0;
        for l in 0..m {
            let mut brace = dy[(j, i, l)] + dy[(i, l, j)] - dy[(l, j, i)];
            for h in 0..m {
                brace +=
                    s[(h, j, l)] * g[(i, h)] + s[(h, i, j)] * g[(l, h)] - s[(h, l, i)] * g[(j, h)];
            }
            acc += gi[(l, k)] * brace;
        }
        0.5 * acc
    })
}

/// Coefficients of `∇^a` at a point from the explicit formulas.
pub fn coeffs_closed_form(pd: &PointData, a: Indicant) -> VerticalConnectionCoeffs {
    let m = pd.dim();
    let n = m / 2;
    let g = |i: usize, j: usize| pd.metric.g[(i, j)];
    let gi = |i: usize, j: usize| pd.metric.ginv[(i, j)];
    let deltag = pd.metric.deltag.as_ref().expect("deltag filled");
    // dg(l, i, j) = δ_l g_ij
    let dg = |l: usize, i: usize, j: usize| deltag[(l, i, j)];
    let t = |h: usize, i: usize, j: usize| pd.t[(h, i, j)];

    // ½ g^{kl} {brace(l)}
    let half_contract = |k: usize, brace: &dyn Fn(usize) -> f64| -> f64 {
        0.5 * (0..m).map(|l| gi(k, l) * brace(l)).sum::<f64>()
    };
    let th = |f: &dyn Fn(usize) -> f64| -> f64 { (0..m).map(f).sum() };
    // ½ (g^{kγ} δ_γ − g^{k n+γ} δ_{n+γ}) g_ij
    let corr_one = |k: usize, i: usize, j: usize| -> f64 {
        0.5 * (0..n)
            .map(|c| gi(k, c) * dg(c, i, j) - gi(k, n + c) * dg(n + c, i, j))
            .sum::<f64>()
    };
    // ½ (g^{kγ} δ_{n+γ} + g^{k n+γ} δ_γ) g_ij
    let corr_three = |k: usize, i: usize, j: usize| -> f64 {
        0.5 * (0..n)
            .map(|c| gi(k, c) * dg(n + c, i, j) + gi(k, n + c) * dg(c, i, j))
            .sum::<f64>()
    };

    let mut f = Tensor3::zeros(m);
    for k in 0..m {
        for al in 0..n {
            let nal = n + al;
            for be in 0..n {
                let nbe = n + be;
                match a {
                    Indicant::One => {
                        // F^k_{αβ}
                        f[(k, al, be)] = half_contract(k, &|l| {
                            dg(be, al, l)
                                + dg(al, l, be)
                                + th(&|h| {
                                    t(h, be, l) * g(al, h) + t(h, al, be) * g(l, h)
                                        - t(h, l, al) * g(be, h)
                                })
                        }) - corr_one(k, be, al);
                        // F^k_{α n+β}
                        f[(k, al, nbe)] = half_contract(k, &|l| {
                            dg(nbe, al, l) - dg(al, l, nbe)
                                + th(&|h| {
                                    -t(h, nbe, l) * g(al, h) - t(h, al, nbe) * g(l, h)
                                        + t(h, l, al) * g(nbe, h)
                                })
                        }) + corr_one(k, nbe, al);
                        // F^k_{n+α β}
                        f[(k, nal, be)] = half_contract(k, &|l| {
                            dg(be, nal, l) - dg(nal, l, be)
                                + th(&|h| {
                                    t(h, be, l) * g(nal, h) + t(h, nal, be) * g(l, h)
                                        - t(h, l, nal) * g(be, h)
                                })
                        }) - corr_one(k, be, nal);
                        // F^k_{n+α n+β}
                        f[(k, nal, nbe)] = half_contract(k, &|l| {
                            dg(nbe, nal, l)
                                + dg(nal, l, nbe)
                                + th(&|h| {
                                    -t(h, nbe, l) * g(nal, h) - t(h, nal, nbe) * g(l, h)
                                        + t(h, l, nal) * g(nbe, h)
                                })
                        }) + corr_one(k, nbe, nal);
                    }
                    Indicant::Three => {
                        // F̃^k_{n+α β}
                        f[(k, nal, be)] = half_contract(k, &|l| {
                            dg(be, nal, l)
                                + dg(al, l, nbe)
                                + th(&|h| {
                                    -t(h, nbe, l) * g(nal, h) - t(h, nal, nbe) * g(l, h)
                                        + t(h, l, nal) * g(nbe, h)
                                })
                        }) - corr_three(k, nbe, nal);
                        // F̃^k_{n+α n+β}
                        f[(k, nal, nbe)] = half_contract(k, &|l| {
                            dg(nbe, nal, l)
                                + dg(al, l, be)
                                + th(&|h| {
                                    -t(h, be, l) * g(nal, h) - t(h, nal, be) * g(l, h)
                                        + t(h, l, nal) * g(be, h)
                                })
                        }) - corr_three(k, be, nal);
                        // F̃^k_{αβ}
                        f[(k, al, be)] = half_contract(k, &|l| {
                            dg(be, al, l)
                                + dg(nal, l, nbe)
                                + th(&|h| {
                                    -t(h, nbe, l) * g(al, h) - t(h, al, nbe) * g(l, h)
                                        + t(h, l, al) * g(nbe, h)
                                })
                        }) - corr_three(k, nbe, al);
                        // F̃^k_{α n+β}
                        f[(k, al, nbe)] = half_contract(k, &|l| {
                            dg(nbe, al, l)
                                + dg(nal, l, be)
                                + th(&|h| {
                                    -t(h, be, l) * g(al, h) - t(h, al, be) * g(l, h)
                                        + t(h, l, al) * g(be, h)
                                })
                        }) - corr_three(k, be, al);
                    }
                }
            }
        }
    }
    VerticalConnectionCoeffs {
        a: Some(a),
        f,
        c: vertical_block(pd),
    }
}

/// `½ g^{kl} ∂_l g_ij`: the contraction `C` reduces to when `S = 0`.
pub fn cartan_coefficients(pd: &PointData) -> Tensor3 {
    let m = pd.dim();
    Tensor3::from_fn(m, |k, i, j| {
        0.5 * (0..m)
            .map(|l| pd.metric.ginv[(k, l)] * pd.metric.dg_dy[(l, i, j)])
            .sum::<f64>()
    })
}
