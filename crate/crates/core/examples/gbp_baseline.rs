//! Fixed-step projected gradient descent with fixed power depths, stopped
//! when the loss no longer drops by the tolerance. Tries several step sizes.

use sprank::optimize::{train_gbp, GbpConfig};
use sprank::{gen_synthetic, RankingObjective, SyntheticSpec};

fn main() -> sprank::Result<()> {
    let dataset = gen_synthetic(&SyntheticSpec {
        num_queries: 10,
        nodes: 30,
        seed: 1,
        ..Default::default()
    })?;
    let ball = dataset.default_ball();
    let objective = RankingObjective::new(&dataset, ball.clone())?;
    for step_size in [50.0, 100.0, 200.0, 500.0] {
        let out = train_gbp(
            &objective,
            &GbpConfig {
                step_size,
                n1: 100,
                n2: 100,
                stop_tol: 1e-5,
                max_iters: 1000,
                ball: ball.clone(),
                phi0: ball.center().to_vec(),
            },
        )?;
        let losses = out.trace.losses();
        println!(
            "step {step_size:>5}: {} iterations, loss {:.6e} -> {:.6e}, stopped by rule: {}",
            out.iterations, losses[0], out.output_loss, out.stopped_by_rule
        );
    }
    Ok(())
}
