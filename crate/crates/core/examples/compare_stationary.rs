//! Prints the series and power-iteration errors per step count as CSV.

use sprank::experiment::{compare_stationary, compare_to_csv};
use sprank::{gen_synthetic, SyntheticSpec};

fn main() -> sprank::Result<()> {
    let dataset = gen_synthetic(&SyntheticSpec {
        num_queries: 5,
        nodes: 40,
        seed: 2,
        ..Default::default()
    })?;
    let phi = vec![1.0; dataset.dim()];
    let rows = compare_stationary(&dataset, &phi, 40)?;
    print!("{}", compare_to_csv(&rows)?);
    Ok(())
}
