//! Generates a synthetic dataset, writes it, reads it back and checks the
//! default parameter ball against it.

use sprank::{gen_synthetic, load_dataset, save_dataset, validate_feasibility, SyntheticSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SyntheticSpec {
        num_queries: 6,
        nodes: 25,
        test_fraction: 0.5,
        seed: 42,
        ..Default::default()
    };
    let dataset = gen_synthetic(&spec)?;
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("synthetic.json");
    save_dataset(&dataset, &path)?;
    let reloaded = load_dataset(&path)?;
    assert_eq!(reloaded, dataset);

    println!("{} queries, m = {} + {}", dataset.queries().len(), dataset.m1(), dataset.m2());
    for g in dataset.queries() {
        println!(
            "  {}  {:?}  {} nodes  {} edges  {} seeds  {} judgments",
            g.id(),
            g.split(),
            g.num_nodes(),
            g.edges().len(),
            g.seed().len(),
            g.judgments().len()
        );
    }
    let report = validate_feasibility(dataset.queries(), &dataset.default_ball());
    println!("default ball feasible: {}, radius slack {:.4}", report.passed(), report.radius_slack);
    Ok(())
}
