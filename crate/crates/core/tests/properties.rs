mod common;

use common::{point_in_ball, rng};
use proptest::prelude::*;
use sprank::derivative::{beta1_for_query, derivative_seed, exact_derivative, nn_derivative};
use sprank::graph::{Ball, TransitionModel};
use sprank::stationary::{exact_stationary, nn_stationary, power_stationary, stationary_residual, MatvecCounter};
use sprank::{gen_synthetic, loss_exact, Dataset, SyntheticSpec};

const ALPHA: f64 = 0.15;

fn instance(seed: u64, nodes: usize, outdeg: usize) -> (Dataset, Vec<f64>) {
    let d = gen_synthetic(&SyntheticSpec {
        num_queries: 2,
        nodes,
        max_outdegree: outdeg,
        judgments: 10.min(nodes * (nodes - 1) / 2),
        seed,
        ..Default::default()
    })
    .unwrap();
    let phi = point_in_ball(&mut rng(seed ^ 0x5eed), &d.default_ball());
    (d, phi)
}

fn in_simplex(v: &[f64]) -> bool {
    v.iter().all(|&x| x >= 0.0) && (v.iter().sum::<f64>() - 1.0).abs() < 1e-12
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn approximations_stay_in_simplex(seed in 0u64..10_000, nodes in 2usize..25, outdeg in 0usize..5, n in 0usize..80) {
        let (d, phi) = instance(seed, nodes, outdeg);
        for g in d.queries() {
            let tm = TransitionModel::new(g, &phi).unwrap();
            let mut c = MatvecCounter::new();
            prop_assert!(in_simplex(&nn_stationary(&tm, ALPHA, n, &mut c)));
            prop_assert!(in_simplex(&power_stationary(&tm, ALPHA, n, &mut c)));
            prop_assert!(in_simplex(tm.restart()));
            let exact = exact_stationary(&tm, ALPHA).unwrap();
            prop_assert!(stationary_residual(&tm, ALPHA, &exact) < 1e-12);
        }
    }

    #[test]
    fn transition_rows_are_distributions(seed in 0u64..10_000, nodes in 2usize..25, outdeg in 0usize..5) {
        let (d, phi) = instance(seed, nodes, outdeg);
        for g in d.queries() {
            let tm = TransitionModel::new(g, &phi).unwrap();
            for i in 0..g.num_nodes() {
                prop_assert!(in_simplex(&tm.dense_row(i)));
            }
        }
    }

    #[test]
    fn loss_ignores_block_scaling(seed in 0u64..10_000, s1 in 0.2f64..5.0, s2 in 0.2f64..5.0) {
        let (d, phi) = instance(seed, 12, 3);
        let m1 = d.m1();
        let scaled: Vec<f64> = phi.iter().enumerate().map(|(j, v)| v * if j < m1 { s1 } else { s2 }).collect();
        let a = loss_exact(&d, &phi).unwrap().value;
        let b = loss_exact(&d, &scaled).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-12), "{a} vs {b}");
    }

    #[test]
    fn projection_lands_in_ball(x in prop::collection::vec(-5.0f64..5.0, 4), r in 0.1f64..2.0) {
        let ball = Ball::around_ones(4, r).unwrap();
        let y = ball.project(&x);
        prop_assert!(ball.contains(&y, 1e-12));
        let again = ball.project(&y);
        prop_assert!(again.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-12));
        if ball.contains(&x, 0.0) {
            prop_assert_eq!(y, x);
        }
    }

    #[test]
    fn derivative_norms_respect_beta1(seed in 0u64..10_000, nodes in 2usize..18, n1 in 0usize..60, n2 in 0usize..60) {
        let (d, phi) = instance(seed, nodes, 3);
        let ball = d.default_ball();
        for g in d.queries() {
            let beta1 = beta1_for_query(g, &ball, ALPHA);
            let tm = TransitionModel::new(g, &phi).unwrap();
            let exact_pi = exact_stationary(&tm, ALPHA).unwrap();
            let seed_exact = derivative_seed(g, &phi, ALPHA, &exact_pi).unwrap();
            prop_assert!(seed_exact.norm1() <= beta1 * (1.0 + 1e-12));

            let mut c = MatvecCounter::new();
            let run = nn_derivative(&tm, g, &phi, ALPHA, n1, n2, &mut c).unwrap();
            prop_assert!(run.max_iterate_norm <= beta1 * (1.0 + 1e-12));
            prop_assert!(run.jacobian.norm1() <= beta1 / ALPHA * (1.0 + 1e-12));
            prop_assert!(run.jacobian.column_sums().iter().all(|s| s.abs() < 1e-9));

            // seed error is Lipschitz in the stationary error
            let seed_approx = derivative_seed(g, &phi, ALPHA, &run.stationary).unwrap();
            let pi_err = run.stationary.l1_distance(&exact_pi);
            prop_assert!(seed_approx.distance1(&seed_exact) <= beta1 * pi_err + 1e-13);

            let jac = exact_derivative(&tm, g, &phi, ALPHA).unwrap();
            prop_assert!(jac.column_sums().iter().all(|s| s.abs() < 1e-9));
            let bound = beta1 / ALPHA * pi_err + 2.0 * beta1 / ALPHA * (1.0 - ALPHA).powi(n2 as i32 + 1);
            prop_assert!(run.jacobian.distance1(&jac) <= bound + 1e-12);
        }
    }
}

#[test]
fn beta1_dominates_sampled_seed_norms() {
    let d = gen_synthetic(&SyntheticSpec {
        num_queries: 4,
        nodes: 15,
        seed: 77,
        ..Default::default()
    })
    .unwrap();
    let ball = d.default_ball();
    let mut r = rng(78);
    for g in d.queries() {
        let beta1 = beta1_for_query(g, &ball, ALPHA);
        let mut largest: f64 = 0.0;
        for _ in 0..200 {
            let phi = point_in_ball(&mut r, &ball);
            let tm = TransitionModel::new(g, &phi).unwrap();
            let pi = exact_stationary(&tm, ALPHA).unwrap();
            largest = largest.max(derivative_seed(g, &phi, ALPHA, &pi).unwrap().norm1());
        }
        assert!(largest <= beta1, "{largest} > {beta1}");
    }
}
