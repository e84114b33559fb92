//! How quickly each algorithm collapses its population, measured as mean
//! distance from the centroid.
//!
//! ```bash
//! cargo run --release -p brewswarm --example diversity_trace
//! ```

use brewswarm::chemistry::{BatchParams, BrewModel};
use brewswarm::harness::{default_inventory, default_targets};
use brewswarm::optimizer::{run, Algorithm, OptimizerConfig, SearchSpace};

fn main() -> brewswarm::Result<()> {
    let inventory = default_inventory();
    let target = default_targets().remove(0);
    let model = BrewModel::new(inventory.clone(), BatchParams::default());
    let space = SearchSpace::from_inventory(&inventory);

    for algorithm in Algorithm::ALL {
        let config = OptimizerConfig {
            max_fes: 30_000,
            target_error: 0.0,
            ..OptimizerConfig::new(algorithm, 3)
        };
        let rec = run(&space, &config, &|q: &[f64]| model.error(q, &target))?;
        let t = &rec.diversity_trace;
        let at = |i: usize| t[i.min(t.len() - 1)];
        println!(
            "{algorithm:<4} start {:.3}  it10 {:.3}  it50 {:.3}  end {:.4}",
            at(0),
            at(10),
            at(50),
            rec.final_diversity()
        );
    }
    Ok(())
}
