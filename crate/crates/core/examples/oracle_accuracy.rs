//! Compares the inexact loss and gradient with their dense counterparts
//! for a range of requested accuracies.

use sprank::{gen_synthetic, grad_exact, loss_exact, RankingObjective, SyntheticSpec};

fn main() -> sprank::Result<()> {
    let dataset = gen_synthetic(&SyntheticSpec {
        num_queries: 8,
        nodes: 30,
        seed: 7,
        ..Default::default()
    })?;
    let objective = RankingObjective::new(&dataset, dataset.default_ball())?;
    let phi = vec![1.2, 0.8, 1.0, 0.9, 1.1, 1.0];
    println!("beta1 = {:.3}", objective.beta1().value);

    let exact = loss_exact(&dataset, &phi)?.value;
    println!("{:>8} {:>12} {:>8}", "delta1", "loss error", "matvecs");
    for delta1 in [1e-2, 1e-4, 1e-6, 1e-8] {
        let v = objective.loss(&phi, delta1)?;
        println!("{delta1:>8.0e} {:>12.3e} {:>8}", (v.value - exact).abs(), v.matvecs);
    }

    let g = grad_exact(&dataset, &phi)?.vector;
    println!("{:>8} {:>12} {:>8}", "delta2", "grad error", "matvecs");
    for delta2 in [1e-1, 1e-2, 1e-3, 1e-4] {
        let est = objective.gradient(&phi, delta2)?;
        let err = est.vector.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("{delta2:>8.0e} {err:>12.3e} {:>8}", est.matvecs);
    }
    Ok(())
}
