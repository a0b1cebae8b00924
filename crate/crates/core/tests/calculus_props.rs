//! Jets against finite differences, and linearity of the jet and δ maps.

mod common;

use common::*;
use hyperfinsler::calculus::{delta_derivative, eval_jet2, ChartPoint};
use hyperfinsler::expr::{parse_expression, Expr};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn nudge(p: &ChartPoint, slot: usize, h: f64) -> ChartPoint {
    let m = p.dim();
    let mut q = p.clone();
    if slot < m {
        q.x[slot] += h;
    } else {
        q.y[slot - m] += h;
    }
    q
}

fn small_point() -> impl Strategy<Value = ChartPoint> {
    (
        prop::collection::vec(-0.8f64..0.8, 2),
        prop::collection::vec(0.3f64..1.5, 2),
        any::<bool>(),
    )
        .prop_map(|(x, mut y, flip)| {
            if flip {
                y[1] = -y[1];
            }
            ChartPoint::new(x, y).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradient_and_hessian_match_central_differences(seed in any::<u64>(), p in small_point()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_function(1, &mut rng);
        let jet = eval_jet2(&f, &p).unwrap();
        let h = 1e-5;
        for s in 0..4 {
            let up = eval_jet2(&f, &nudge(&p, s, h)).unwrap();
            let down = eval_jet2(&f, &nudge(&p, s, -h)).unwrap();
            let fd = (up.value - down.value) / (2.0 * h);
            prop_assert!(rel(jet.d(s), fd) < 1e-6, "{f}: d{s} {} vs {fd}", jet.d(s));
            for t in 0..4 {
                let fd2 = (up.d(t) - down.d(t)) / (2.0 * h);
                prop_assert!(rel(jet.hess(s, t), fd2) < 1e-5, "{f}: h{s}{t}");
            }
        }
    }

    #[test]
    fn jets_are_linear(seed in any::<u64>(), p in small_point(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (random_function(1, &mut rng), random_function(1, &mut rng));
        let combo = parse_expression(&format!("({a})*({f}) + ({b})*({g})"), 1).unwrap();
        let jc = eval_jet2(&combo, &p).unwrap();
        let (jf, jg) = (eval_jet2(&f, &p).unwrap(), eval_jet2(&g, &p).unwrap());
        prop_assert!(rel(jc.value, a * jf.value + b * jg.value) < 1e-12);
        for s in 0..4 {
            prop_assert!(rel(jc.d(s), a * jf.d(s) + b * jg.d(s)) < 1e-12);
            for t in 0..4 {
                prop_assert!(rel(jc.hess(s, t), a * jf.hess(s, t) + b * jg.hess(s, t)) < 1e-12);
            }
        }
    }

    #[test]
    fn delta_derivative_is_linear_and_matches_definition(
        seed in any::<u64>(),
        p in small_point(),
        entries in prop::collection::vec(-1.0f64..1.0, 4),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (random_function(1, &mut rng), random_function(1, &mut rng));
        let nmat = DMatrix::from_row_slice(2, 2, &entries);
        let sum = Expr::Add(Box::new(f.clone()), Box::new(g.clone()));
        let h = 1e-5;
        for i in 0..2 {
            let df = delta_derivative(&f, &nmat, i, &p).unwrap();
            let dg = delta_derivative(&g, &nmat, i, &p).unwrap();
            let ds = delta_derivative(&sum, &nmat, i, &p).unwrap();
            prop_assert!(rel(ds, df + dg) < 1e-12);
            // δ_i f = ∂f/∂x^i − N^j_i ∂f/∂y^j with every partial by differences.
            let partial = |slot: usize| {
                (f.eval(&nudge(&p, slot, h).x, &nudge(&p, slot, h).y).unwrap()
                    - f.eval(&nudge(&p, slot, -h).x, &nudge(&p, slot, -h).y).unwrap())
                    / (2.0 * h)
            };
            let fd = partial(i) - nmat[(0, i)] * partial(2) - nmat[(1, i)] * partial(3);
            prop_assert!(rel(df, fd) < 1e-6, "{f}: {df} vs {fd}");
        }
    }

    #[test]
    fn hessian_is_exactly_symmetric(seed in any::<u64>(), p in small_point()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hess = eval_jet2(&random_function(1, &mut rng), &p).unwrap().hessian();
        prop_assert_eq!(hess.transpose(), hess);
    }
}
