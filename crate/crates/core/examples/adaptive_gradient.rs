//! The adaptive gradient method: accepted Lipschitz estimates, oracle
//! accuracies and the reduced gradient norm per step.

use sprank::optimize::{train_agm, AgmConfig};
use sprank::{gen_synthetic, loss_exact, RankingObjective, SyntheticSpec};

fn main() -> sprank::Result<()> {
    let dataset = gen_synthetic(&SyntheticSpec {
        num_queries: 10,
        nodes: 30,
        seed: 1,
        ..Default::default()
    })?;
    let ball = dataset.default_ball();
    let objective = RankingObjective::new(&dataset, ball.clone())?;
    let cfg = AgmConfig {
        l0: 1e-4,
        epsilon: 1e-6,
        ball: ball.clone(),
        phi0: ball.center().to_vec(),
        max_outer_iters: 300,
    };
    let out = train_agm(&objective, &cfg)?;
    for r in &out.trace.records {
        println!(
            "step {:>3}  M_k {:.3e}  checks {}  delta1 {:.2e}  ||g_X|| {:.3e}",
            r.iteration,
            r.step,
            r.checks,
            r.delta1,
            r.gx_norm.unwrap()
        );
    }
    println!("converged: {}, z = {:.3e}, total checks {}", out.converged, out.z, out.total_checks);
    println!(
        "loss {:.6e} -> {:.6e}",
        loss_exact(&dataset, &cfg.phi0)?.value,
        loss_exact(&dataset, &out.output)?.value
    );
    Ok(())
}
