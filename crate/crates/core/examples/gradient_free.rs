//! Gradient-free training on a synthetic dataset, capped at a few thousand
//! steps, with the loss estimate printed along the way.

use sprank::experiment::{run_experiment, MethodConfig, RunConfig};
use sprank::{gen_synthetic, SyntheticSpec};

fn main() -> sprank::Result<()> {
    let dataset = gen_synthetic(&SyntheticSpec {
        num_queries: 10,
        nodes: 30,
        test_fraction: 0.5,
        seed: 1,
        ..Default::default()
    })?;
    let cfg = RunConfig {
        method: MethodConfig::Gfn {
            lipschitz: 1e-4,
            epsilon: 1e-6,
            max_iters: Some(3000),
        },
        ball: dataset.default_ball(),
        phi0: None,
        seed: 17,
    };
    let out = run_experiment(&dataset, &cfg)?;
    for r in out.trace.records.iter().step_by(500) {
        println!("step {:>5}  loss estimate {:.6e}", r.iteration, r.loss);
    }
    let s = &out.summary;
    let settings = s.gfn_settings.expect("gradient-free run");
    println!("mu = {:.3e} (capped: {:?}), delta = {:.3e}", settings.mu, s.gfn_mu_capped, settings.delta);
    println!("train loss {:.6e} -> {:.6e}", s.initial_train_loss, s.final_train_loss);
    println!("test loss  {:.6e} -> {:.6e}", s.initial_test_loss.unwrap(), s.final_test_loss.unwrap());
    println!("phi = {:?}", s.phi);
    Ok(())
}
