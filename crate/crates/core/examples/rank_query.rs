//! Ranks a hand-built four-page graph with the three stationary solvers.

use sprank::stationary::steps_for_stationary_accuracy;
use sprank::{exact_stationary, nn_stationary, power_stationary, Edge, MatvecCounter, QueryGraph, Split, TransitionModel};

fn main() -> sprank::Result<()> {
    let edge = |from, to, w: f64| Edge {
        from,
        to,
        features: vec![w, 1.0],
    };
    // one node feature, two edge features; page 3 has no outgoing links
    let g = QueryGraph::new(
        "demo",
        1,
        2,
        vec![vec![1.0], vec![0.5], vec![2.0], vec![0.2]],
        vec![0, 1],
        vec![edge(0, 1, 1.0), edge(0, 2, 3.0), edge(1, 2, 1.0), edge(2, 0, 0.5), edge(2, 3, 2.0)],
        Vec::new(),
        Split::Train,
    )?;
    let phi = [1.0, 1.0, 0.5];
    let alpha = 0.15;
    let tm = TransitionModel::new(&g, &phi)?;

    let exact = exact_stationary(&tm, alpha)?;
    let n = steps_for_stationary_accuracy(alpha, 1e-8);
    let mut counter = MatvecCounter::new();
    let nn = nn_stationary(&tm, alpha, n, &mut counter);
    let power = power_stationary(&tm, alpha, n, &mut counter);

    println!("exact  {:?}", exact.as_slice());
    println!("series {:?}  (N = {n}, error {:.2e})", nn.as_slice(), nn.l1_distance(&exact));
    println!("power  {:?}  (error {:.2e})", power.as_slice(), power.l1_distance(&exact));
    println!("ranking, best first: {:?}", exact.ranking());
    println!("mat-vecs: {}", counter.get());
    Ok(())
}
