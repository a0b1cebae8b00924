//! The local almost hypercomplex structure `(J₁, J₂, J₃)` built from the
//! adapted frame.
//!
//! Matrices act on adapted-frame components ordered
//! `(δ_1..δ_2n, ∂_1..∂_2n)`; column `c` holds the image of frame vector `c`.
//! Everything here is exact integer arithmetic.

use nalgebra::DMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypercomplexTriple {
    n: usize,
    j: [DMatrix<i32>; 3],
}

impl HypercomplexTriple {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Size of the matrices, `4n`.
    pub fn size(&self) -> usize {
        4 * self.n
    }

    /// `J_a` for `a ∈ {1, 2, 3}`.
    pub fn get(&self, a: usize) -> &DMatrix<i32> {
        assert!((1..=3).contains(&a), "J index must be 1, 2 or 3");
        &self.j[a - 1]
    }

    pub fn get_f64(&self, a: usize) -> DMatrix<f64> {
        self.get(a).map(f64::from)
    }

    /// Projector onto the horizontal (`h`) or vertical (`v`) block.
    pub fn projector(&self, horizontal: bool) -> DMatrix<i32> {
        let m = 2 * self.n;
        DMatrix::from_fn(4 * self.n, 4 * self.n, |r, c| {
            i32::from(r == c && (r < m) == horizontal)
        })
    }

    /// `J_a` restricted to horizontal inputs and vertical outputs: the
    /// `2n × 2n` matrix `P` with `J_a δ_i = P[(k, i)] ∂_k`.
    pub fn horizontal_to_vertical(&self, a: usize) -> DMatrix<i32> {
        let m = 2 * self.n;
        self.get(a).view((m, 0), (m, m)).into_owned()
    }

    /// `J_a` restricted to vertical inputs and horizontal outputs.
    pub fn vertical_to_horizontal(&self, a: usize) -> DMatrix<i32> {
        let m = 2 * self.n;
        self.get(a).view((0, m), (m, m)).into_owned()
    }
}

/// Builds the triple for a `2n`-dimensional base:
///
/// ```text
/// J₁δ_α = ∂_α       J₂δ_α = δ_{n+α}      J₃δ_α = −∂_{n+α}
/// J₁δ_{n+α} = −∂_{n+α}  J₂δ_{n+α} = −δ_α  J₃δ_{n+α} = −∂_α
/// J₁∂_α = −δ_α      J₂∂_α = ∂_{n+α}      J₃∂_α = δ_{n+α}
/// J₁∂_{n+α} = δ_{n+α}  J₂∂_{n+α} = −∂_α   J₃∂_{n+α} = δ_α
/// ```
pub fn build_triple(n: usize) -> HypercomplexTriple {
    assert!(n >= 1, "n must be positive");
    let m = 2 * n;
    let size = 4 * n;
    let dl = |a: usize| a; // δ_α
    let dh = |a: usize| n + a; // δ_{n+α}
    let vl = |a: usize| m + a; // ∂_α
    let vh = |a: usize| m + n + a; // ∂_{n+α}
    let mut j1 = DMatrix::zeros(size, size);
    let mut j2 = DMatrix::zeros(size, size);
    let mut j3 = DMatrix::zeros(size, size);
    for a in 0..n {
        // j[(image, source)] = sign
        j1[(vl(a), dl(a))] = 1;
        j1[(vh(a), dh(a))] = -1;
        j1[(dl(a), vl(a))] = -1;
        j1[(dh(a), vh(a))] = 1;

        j2[(dh(a), dl(a))] = 1;
        j2[(dl(a), dh(a))] = -1;
        j2[(vh(a), vl(a))] = 1;
        j2[(vl(a), vh(a))] = -1;

        j3[(vh(a), dl(a))] = -1;
        j3[(vl(a), dh(a))] = -1;
        j3[(dh(a), vl(a))] = 1;
        j3[(dl(a), vh(a))] = 1;
    }
    HypercomplexTriple { n, j: [j1, j2, j3] }
}

/// `J_a ∘ v = h ∘ J_a` and `v ∘ J_a = J_a ∘ h`, exactly.
pub fn check_projection_identities(t: &HypercomplexTriple, a: usize) -> bool {
    let ja = t.get(a);
    let h = t.projector(true);
    let v = t.projector(false);
    ja * &v == &h * ja && &v * ja == ja * &h
}

/// `J_a` commutes with both projectors, i.e. maps each block to itself.
pub fn preserves_splitting(t: &HypercomplexTriple, a: usize) -> bool {
    let ja = t.get(a);
    let h = t.projector(true);
    let v = t.projector(false);
    ja * &v == &v * ja && ja * &h == &h * ja
}

/// Maximum entry of `|J_a² + I|`, `|J₁J₂ − J₃|` and `|J₂J₁ + J₃|`; zero iff
/// the quaternion identities hold.
pub fn quaternion_defect(t: &HypercomplexTriple) -> i32 {
    let id = DMatrix::<i32>::identity(t.size(), t.size());
    let (j1, j2, j3) = (t.get(1), t.get(2), t.get(3));
    let mut defect = 0;
    for ja in [j1, j2, j3] {
        defect = defect.max((ja * ja + &id).abs().max());
    }
    defect = defect.max((j1 * j2 - j3).abs().max());
    defect.max((j2 * j1 + j3).abs().max())
}
