//! Experiment orchestration: catalogs, plans, seeded campaigns, the result
//! directory layout and reports.

mod campaign;
mod catalog;
mod layout;
mod plan;
mod report;

pub use campaign::{
    load_campaign, model_for, run_campaign, run_trial, trial_seed, write_campaign_tables,
    write_cell, CampaignOptions, CampaignResults, CellResult,
};
pub use catalog::{
    default_inventory, default_targets, inventory_to_csv, load_inventory, load_recipe,
    load_targets, parse_inventory, parse_recipe, parse_targets, recipe_to_csv, targets_to_csv,
    INVENTORY_HEADER, RECIPE_HEADER, TARGETS_HEADER,
};
pub use layout::{
    cell_dir, read_manifest, read_trials, target_slug, write_atomic, write_manifest, write_trials,
    Manifest, TrialAppender, TrialResult, FORMAT_VERSION, MANIFEST_FILE, TRIALS_FILE,
};
pub use plan::{load_plan, parse_plan, ExperimentPlan};
pub use report::{
    analyze, analyze_cell, analyze_results, cluster_seed, compare_all, compare_cells,
    comparisons_csv, summary_rows, target_table_csv, write_analysis, Analysis, CellAnalysis,
    CellArtifacts, ComparisonRow, Measure, ALPHA, CLUSTER_RANGE, DENSITY_BINS,
};
