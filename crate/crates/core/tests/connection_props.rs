//! Connection invariants over random S, T, N and points.

mod common;

use common::*;
use hyperfinsler::cli::random_point;
use hyperfinsler::connections::{
    build_d, build_da, coeffs_closed_form, horizontal_torsion_residual, koszul_solve,
    metricity_residual, parallelism_residual, torsion_da, vertical_torsion_residual, Indicant,
    PointData,
};
use hyperfinsler::hypercomplex::build_triple;
use hyperfinsler::nlconn::NonlinearConnection;
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
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn theorem_conditions_hold(seed in any::<u64>(), which in 0usize..4, random_n in any::<bool>()) {
        let (n, fstar) = METRICS[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut src = plain(n, fstar);
        src.s_coeffs = random_skew(n, &mut rng);
        src.t_coeffs = random_skew(n, &mut rng);
        if random_n {
            src.n_coeffs = Some(random_connection(n, &mut rng));
        }
        let g = geometry(&src);
        let nc = NonlinearConnection::for_geometry(&g);
        let p = random_point(n, &mut rng);
        let pd = PointData::evaluate(&g, &nc, &p).unwrap();
        let triple = build_triple(n);
        let scale = pd.metric.max_abs().max(1.0);
        let mut c_prev = None;
        for a in Indicant::BOTH {
            let cf = coeffs_closed_form(&pd, a);
            let ks = koszul_solve(&pd, a).unwrap();
            prop_assert!(cf.relative_diff(&ks) < 1e-8);
            prop_assert!(metricity_residual(&cf, &pd.metric) < 1e-8 * scale);
            let da = build_da(&cf, &triple, a);
            let t = torsion_da(&da, &pd.brackets);
            prop_assert!(vertical_torsion_residual(&t, &pd.s) < 1e-8);
            prop_assert!(horizontal_torsion_residual(&t, &pd.t, &triple, a) < 1e-8);
            prop_assert_eq!(t.skew_defect(), 0.0);
            prop_assert!(parallelism_residual(&da, &triple.get_f64(a.index())) < 1e-10);
            let d = build_d(&cf, &triple);
            for b in 1..=3 {
                prop_assert!(parallelism_residual(&d, &triple.get_f64(b)) < 1e-10);
            }
            if let Some(prev) = c_prev.replace(cf.c.clone()) {
                prop_assert_eq!(prev, cf.c);
            }
        }
    }
}
