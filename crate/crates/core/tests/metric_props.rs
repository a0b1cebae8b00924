//! Invariants of the fundamental tensor at random points.

mod common;

use common::*;
use hyperfinsler::cli::random_point;
use hyperfinsler::metric::check_signature;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const METRICS: [(usize, &str); 4] = [
    (1, FINSLER_N1),
    (1, INDEFINITE_N1),
    (2, FINSLER_N2),
    (2, INDEFINITE_N2),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fundamental_tensor_invariants(seed in any::<u64>(), which in 0usize..4, k in 0.2f64..5.0) {
        let (n, fstar) = METRICS[which];
        let g = geometry(&plain(n, fstar));
        let m = 2 * n;
        let p = random_point(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let vm = g.fundamental_tensor(&p).unwrap();

        // 0-homogeneity of g.
        let scaled = g.fundamental_tensor(&p.scaled(k)).unwrap();
        prop_assert!((&scaled.g - &vm.g).amax() / vm.g.amax().max(1.0) < 1e-9);

        // g_ij y^i y^j = F*.
        let y = nalgebra::DVector::from_column_slice(&p.y);
        let quad = (y.transpose() * &vm.g * &y)[(0, 0)];
        let fval = g.fieldset().fstar.eval(&p.x, &p.y).unwrap();
        prop_assert!(rel(quad, fval) < 1e-9, "{quad} vs {fval}");

        // Total symmetry of ∂g_ij/∂y^k.
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let v = vm.dg_dy[(a, b, c)];
                    prop_assert!((v - vm.dg_dy[(b, a, c)]).abs() < 1e-9);
                    prop_assert!((v - vm.dg_dy[(c, b, a)]).abs() < 1e-9);
                }
            }
        }

        // Inverse.
        let id = DMatrix::<f64>::identity(m, m);
        prop_assert!((&vm.g * &vm.ginv - id).amax() < 1e-10);

        // Signature is fixed by the metric family.
        let q = if which % 2 == 1 { 1 } else { 0 };
        prop_assert!(check_signature(&vm, Some(q)), "signature {}", vm.signature);
    }
}
