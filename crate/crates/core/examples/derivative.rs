//! The Jacobian of the stationary distribution: the truncated recursion
//! against the dense solve, and the mass it conserves.

use sprank::derivative::beta1_for_query;
use sprank::{exact_derivative, gen_synthetic, nn_derivative, MatvecCounter, SyntheticSpec, TransitionModel};

fn main() -> sprank::Result<()> {
    let dataset = gen_synthetic(&SyntheticSpec {
        num_queries: 1,
        nodes: 20,
        seed: 3,
        ..Default::default()
    })?;
    let g = &dataset.queries()[0];
    let phi = vec![1.0; dataset.dim()];
    let alpha = dataset.alpha();
    let tm = TransitionModel::new(g, &phi)?;
    let exact = exact_derivative(&tm, g, &phi, alpha)?;
    let beta1 = beta1_for_query(g, &dataset.default_ball(), alpha);
    println!("p = {}, m = {}, beta1 = {beta1:.3}", g.num_nodes(), dataset.dim());

    for depth in [0, 10, 20, 40, 80] {
        let mut counter = MatvecCounter::new();
        let run = nn_derivative(&tm, g, &phi, alpha, 200, depth, &mut counter)?;
        let worst_sum = run.jacobian.column_sums().iter().fold(0.0f64, |m, s| m.max(s.abs()));
        println!(
            "depth {depth:>3}: 1-norm error {:.3e}, largest column sum {worst_sum:.1e}, mat-vecs {}",
            run.jacobian.distance1(&exact),
            counter.get()
        );
    }
    Ok(())
}
