//! Runs a small campaign in memory and reports distances, clusters and the
//! pairwise rank-sum comparisons.
//!
//! ```bash
//! cargo run --release -p brewswarm --example analyze_campaign
//! ```

use brewswarm::harness::{analyze_results, run_campaign, CampaignOptions, ExperimentPlan};
use brewswarm::optimizer::Algorithm;

fn main() -> brewswarm::Result<()> {
    let plan = ExperimentPlan {
        trials: 20,
        max_fes: 40_000,
        algorithms: vec![Algorithm::Dfo, Algorithm::De],
        ..ExperimentPlan::default()
    };
    let results = run_campaign(&plan, None, &CampaignOptions { workers: 0 })?;
    let (analysis, _) = analyze_results(&results)?;

    for cell in &analysis.cells {
        print!(
            "{:<4} {:<22} {:>2} solutions",
            cell.algorithm.to_string(),
            cell.target,
            cell.solution_trials.len()
        );
        if let Some(d) = &cell.distances {
            print!(", mean distance {:.3} (max {:.3})", d.mean, d.max);
        }
        if let Some(c) = &cell.clusters {
            print!(", k={} sizes {:?} votes {:?}", c.k, c.sizes, c.vote_counts);
        }
        println!();
    }
    for row in &analysis.comparisons {
        println!(
            "{:<22} {:?}: {} vs {} {}",
            row.target, row.measure, row.left, row.right, row.marker
        );
    }
    Ok(())
}
