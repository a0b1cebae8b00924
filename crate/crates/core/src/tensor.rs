use std::ops::{Index, IndexMut};

/// Dense cube of components `A[(a, b, c)]` with every index in `0..dim`.
///
/// Used for connection coefficients (`[(k, i, j)]` is `Γ^k_{ij}`), torsion
/// components and metric derivatives. The meaning of each slot is fixed by
/// the owning type.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Tensor3 {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Tensor3::zeros(dim);
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    t[(a, b, c)] = f(a, b, c);
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `max|a - b| / max(1, max|a|, max|b|)`.
    pub fn relative_diff(&self, other: &Tensor3) -> f64 {
        let scale = 1f64.max(self.max_abs()).max(other.max_abs());
        self.max_abs_diff(other) / scale
    }

    #[inline]
    fn offset(&self, (a, b, c): (usize, usize, usize)) -> usize {
        debug_assert!(a < self.dim && b < self.dim && c < self.dim);
        (a * self.dim + b) * self.dim + c
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;

    #[inline]
    fn index(&self, idx: (usize, usize, usize)) -> &f64 {
        &self.data[self.offset(idx)]
    }
}

impl IndexMut<(usize, usize, usize)> for Tensor3 {
    #[inline]
    fn index_mut(&mut self, idx: (usize, usize, usize)) -> &mut f64 {
        let o = self.offset(idx);
        &mut self.data[o]
    }
}
