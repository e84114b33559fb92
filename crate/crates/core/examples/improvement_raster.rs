//! Which of the first iterations improved the elite, one row per trial.
//!
//! ```bash
//! cargo run --release -p brewswarm --example improvement_raster
//! ```

use brewswarm::analytics::{ImprovementRaster, RasterCell};
use brewswarm::harness::{run_campaign, CampaignOptions, ExperimentPlan};
use brewswarm::optimizer::Algorithm;

fn main() -> brewswarm::Result<()> {
    let plan = ExperimentPlan {
        trials: 12,
        max_fes: 20_000,
        algorithms: vec![Algorithm::Pso],
        targets: brewswarm::harness::default_targets()[..1].to_vec(),
        ..ExperimentPlan::default()
    };
    let results = run_campaign(&plan, None, &CampaignOptions { workers: 0 })?;
    let raster = ImprovementRaster::from_trials(&results.cells[0].records(), 80);
    for row in &raster.rows {
        let line: String = row
            .iter()
            .map(|c| match c {
                RasterCell::Improved => '#',
                RasterCell::Flat => '.',
                RasterCell::Blank => ' ',
            })
            .collect();
        println!("|{line}|");
    }
    println!("improvement rate {:.2}", raster.improvement_rate());
    Ok(())
}
