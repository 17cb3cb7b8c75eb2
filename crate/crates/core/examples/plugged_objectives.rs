//! Both learners on small analytic objectives with a known Lipschitz
//! constant, with deterministic oracle noise of the requested size.

use sprank::graph::Ball;
use sprank::objectives::{CosineRidge, Noisy, Quadratic};
use sprank::optimize::gfn::{gfn_rate_bound, gradient_free, GfnSettings};
use sprank::optimize::{train_agm, AgmConfig};

fn main() -> sprank::Result<()> {
    let ball = Ball::around_ones(5, 1.0)?;
    let quad = Quadratic::new(vec![1.3, 0.8, 1.1, 0.9, 1.2], 1.0);
    let settings = GfnSettings::for_ball(5, 1.0, 1.0, 0.1);
    let x0 = vec![0.6, 1.0, 1.0, 1.4, 0.8];
    let out = gradient_free(&Noisy::new(quad.clone(), 1), &ball, &x0, settings, 1, false)?;
    println!(
        "gradient-free: M = {}, gap {:.3e}, bound {:.3e}",
        settings.steps,
        quad.eval(&out.best),
        gfn_rate_bound(5, 1.0, 2.0, settings.mu, settings.delta, settings.steps)
    );

    let ridge = CosineRidge::new(vec![1.0, 0.5, 2.0, 1.5, 1.0], 3.0, vec![1.2, 0.9, 1.1, 0.8, 1.0]);
    let cfg = AgmConfig {
        l0: 0.01,
        epsilon: 1e-4,
        ball,
        phi0: x0,
        max_outer_iters: 500,
    };
    let out = train_agm(&Noisy::new(ridge.clone(), 2), &cfg)?;
    let max_m = out.accepted.iter().fold(0.0f64, |a, &b| a.max(b));
    println!(
        "adaptive: L = {}, largest accepted M_k {max_m}, {} steps, {} checks, value {:.3e} -> {:.3e}",
        ridge.lipschitz(),
        out.iterations,
        out.total_checks,
        ridge.eval(&cfg.phi0),
        ridge.eval(&out.output)
    );
    Ok(())
}
