//! One seeded optimisation of a recipe toward a target profile.
//!
//! ```bash
//! cargo run --release -p brewswarm --example single_run -- dfo
//! ```

use brewswarm::chemistry::{BatchParams, BrewModel};
use brewswarm::harness::{default_inventory, default_targets};
use brewswarm::optimizer::{run, Algorithm, OptimizerConfig, SearchSpace};

fn main() -> brewswarm::Result<()> {
    let algorithm: Algorithm = std::env::args().nth(1).as_deref().unwrap_or("de").parse()?;
    let inventory = default_inventory();
    let target = default_targets().remove(1);
    let model = BrewModel::new(inventory.clone(), BatchParams::default());
    let space = SearchSpace::from_inventory(&inventory);

    let config = OptimizerConfig {
        target_error: target.target_error,
        ..OptimizerConfig::new(algorithm, 42)
    };
    let rec = run(&space, &config, &|q: &[f64]| model.error(q, &target))?;

    println!(
        "{algorithm} -> {}: error {:.5} in {} FEs ({} iterations, success {})",
        target.name, rec.best_error, rec.fes_used, rec.iterations, rec.success
    );
    for (item, q) in inventory.items.iter().zip(&rec.best_recipe) {
        if *q > 1e-3 {
            println!("  {:<22} {q:>8.3} {}", item.name(), item.kind().unit());
        }
    }
    let m = model.metrics(&rec.best_recipe)?;
    println!("ABV {:.3}  IBU {:.3}  SRM {:.3}", m.abv, m.ibu, m.srm);
    Ok(())
}
