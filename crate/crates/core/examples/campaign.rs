//! A reduced three-algorithm, three-product campaign written to disk.
//!
//! ```bash
//! cargo run --release -p brewswarm --example campaign -- /tmp/brew-campaign
//! ```
//!
//! Run it twice: the second run finds every trial on disk and does no work.

use std::path::PathBuf;

use brewswarm::harness::{run_campaign, CampaignOptions, ExperimentPlan};

fn main() -> brewswarm::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("brewswarm-campaign"));
    let plan = ExperimentPlan {
        master_seed: 7,
        trials: 10,
        max_fes: 30_000,
        ..ExperimentPlan::default()
    };
    let results = run_campaign(&plan, Some(&out), &CampaignOptions { workers: 0 })?;
    for cell in &results.cells {
        let s = &cell.summary;
        println!(
            "{:<4} {:<22} {:>2}/{} solved, mean error {:.4}",
            cell.algorithm.to_string(),
            cell.target.name,
            s.successes,
            s.trials,
            s.error.mean
        );
    }
    println!("written to {}", out.display());
    Ok(())
}
