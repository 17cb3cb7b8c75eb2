use sprank::optimize::gfn::{gradient_free, GfnSettings};
use sprank::optimize::{train_agm, train_gbp, AgmConfig, GbpConfig, ZeroOrderOracle};
use sprank::{gen_synthetic, loss_exact, Dataset, RankingObjective, SyntheticSpec};

fn small() -> Dataset {
    gen_synthetic(&SyntheticSpec {
        num_queries: 6,
        nodes: 15,
        seed: 11,
        ..Default::default()
    })
    .unwrap()
}

#[test]
fn agm_steps_decrease_the_exact_loss() {
    let d = small();
    let ball = d.default_ball();
    let obj = RankingObjective::new(&d, ball.clone()).unwrap();
    let eps = 1e-6;
    let out = train_agm(
        &obj,
        &AgmConfig {
            l0: 1e-4,
            epsilon: eps,
            ball: ball.clone(),
            phi0: ball.center().to_vec(),
            max_outer_iters: 60,
        },
    )
    .unwrap();
    let mut points = out.iterates.clone();
    points.push(out.output.clone());
    assert!(points.iter().all(|p| ball.contains(p, 1e-12)));
    for (k, rec) in out.trace.records.iter().enumerate() {
        let next = if k + 1 < out.iterates.len() { &out.iterates[k + 1] } else { continue };
        let m_k = rec.step;
        let g = rec.gx_norm.unwrap();
        let before = loss_exact(&d, &out.iterates[k]).unwrap().value;
        let after = loss_exact(&d, next).unwrap().value;
        let allowed = before - g * g / (2.0 * m_k) + eps / (4.0 * m_k) + 2.0 * rec.delta1;
        assert!(after <= allowed + 1e-15, "step {k}: {after} > {allowed}");
    }
}

#[test]
fn gbp_descends_until_its_rule_fires() {
    let d = small();
    let ball = d.default_ball();
    let obj = RankingObjective::new(&d, ball.clone()).unwrap();
    let out = train_gbp(
        &obj,
        &GbpConfig {
            step_size: 100.0,
            n1: 100,
            n2: 100,
            stop_tol: 1e-5,
            max_iters: 500,
            ball: ball.clone(),
            phi0: ball.center().to_vec(),
        },
    )
    .unwrap();
    assert!(out.stopped_by_rule);
    let losses = out.trace.losses();
    // every step but the one that triggered the rule drops by more than the tolerance
    let n = losses.len();
    assert!(losses[..n - 1].windows(2).all(|w| w[1] - w[0] <= -1e-5), "{losses:?}");
    assert!(losses[n - 1] - losses[n - 2] > -1e-5);
    assert!(ball.contains(&out.output, 1e-12));
    assert!(out.output_loss <= losses[0]);
}

#[test]
fn gfn_iterates_stay_in_the_ball() {
    let d = small();
    let ball = d.default_ball();
    let obj = RankingObjective::new(&d, ball.clone()).unwrap();
    let settings = GfnSettings::for_ball(obj.dim(), 1e-4, ball.radius(), 1e-6);
    let capped = GfnSettings { steps: 300, ..settings };
    let out = gradient_free(&obj, &ball, ball.center(), capped, 4, true).unwrap();
    let iterates = out.iterates.unwrap();
    assert_eq!(iterates.len(), 301);
    assert!(iterates.iter().all(|p| ball.contains(p, 1e-12)));
    // the perturbed points stay where the probabilities are defined
    assert!(out.settings.mu <= obj.evaluation_slack() / 2.0);
    assert!(out.best_value <= out.trace.losses()[0]);
}

#[test]
fn objective_oracles_report_their_accuracy() {
    let d = small();
    let obj = RankingObjective::new(&d, d.default_ball()).unwrap();
    let phi = d.default_ball().center().to_vec();
    let v = obj.value(&phi, 1e-5).unwrap();
    let g = obj.gradient(&phi, 1e-3).unwrap();
    assert_eq!(v.accuracy, 1e-5);
    assert_eq!(g.accuracy, 1e-3);
    assert!(v.matvecs > 0 && g.matvecs > 0);
    let exact = obj.value(&phi, 0.0).unwrap();
    assert_eq!(exact.matvecs, 0);
    assert!((exact.value - v.value).abs() <= 1e-5);
}
