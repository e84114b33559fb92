use std::path::Path;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::layout::{
    cell_dir, read_manifest, read_trials, target_slug, write_atomic, write_manifest, write_trials,
    TrialAppender, TrialResult, TRIALS_FILE,
};
use super::plan::ExperimentPlan;
use super::report::{cell_summary_csv, compare_all, comparisons_csv, target_table_csv};
use crate::analytics::{summarize, MeasureSummary};
use crate::chemistry::{BrewModel, TargetProfile};
use crate::error::{Error, Result};
use crate::optimizer::{run, Algorithm, SearchSpace, TrialRecord};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable across platforms and releases: FNV-1a over the cell coordinates,
/// finished with a splitmix64 mix.
pub fn trial_seed(master_seed: u64, algorithm: Algorithm, target: &str, trial: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |bytes: &[u8]| {
        for &b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    feed(&master_seed.to_le_bytes());
    feed(algorithm.slug().as_bytes());
    feed(&[0]);
    feed(target.as_bytes());
    feed(&[0]);
    feed(&(trial as u64).to_le_bytes());
    splitmix64(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignOptions {
    /// Trials run concurrently; 0 uses every available core.
    pub workers: usize,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        CampaignOptions { workers: 1 }
    }
}

/// All trials of one algorithm on one target, sorted by trial index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub algorithm: Algorithm,
    pub target: TargetProfile,
    pub trials: Vec<TrialResult>,
    pub summary: MeasureSummary,
}

impl CellResult {
    pub fn records(&self) -> Vec<TrialRecord> {
        self.trials.iter().map(|t| t.record.clone()).collect()
    }

    /// Best recipes of the successful trials with their trial indices.
    pub fn solutions(&self) -> (Vec<Vec<f64>>, Vec<usize>) {
        self.trials
            .iter()
            .filter(|t| t.record.success)
            .map(|t| (t.record.best_recipe.clone(), t.trial))
            .unzip()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResults {
    pub plan: ExperimentPlan,
    pub cells: Vec<CellResult>,
}

impl CampaignResults {
    pub fn cell(&self, algorithm: Algorithm, target: &str) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.algorithm == algorithm && c.target.name == target)
    }
}

pub fn model_for(plan: &ExperimentPlan) -> BrewModel {
    BrewModel::new(plan.inventory.clone(), plan.batch).with_srm_method(plan.srm_method)
}

/// Runs one seeded trial of the plan.
pub fn run_trial(
    plan: &ExperimentPlan,
    algorithm: Algorithm,
    target: &TargetProfile,
    trial: usize,
) -> Result<TrialResult> {
    let model = model_for(plan);
    let space = SearchSpace::from_inventory(&plan.inventory);
    run_trial_with(plan, &model, &space, algorithm, target, trial)
}

fn run_trial_with(
    plan: &ExperimentPlan,
    model: &BrewModel,
    space: &SearchSpace,
    algorithm: Algorithm,
    target: &TargetProfile,
    trial: usize,
) -> Result<TrialResult> {
    let seed = trial_seed(plan.master_seed, algorithm, &target.name, trial);
    let config = plan.optimizer_config(algorithm, target.target_error, seed);
    let record = run(space, &config, &|x: &[f64]| model.error(x, target))?;
    Ok(TrialResult {
        algorithm,
        target: target.name.clone(),
        trial,
        seed,
        record,
    })
}

/// Writes a finished cell: sorted trials plus its summary table.
pub fn write_cell(root: &Path, cell: &CellResult) -> Result<()> {
    let dir = cell_dir(root, cell.algorithm, &cell.target.name);
    write_trials(&dir.join(TRIALS_FILE), &cell.trials)?;
    let json = serde_json::to_vec_pretty(&cell.summary)?;
    write_atomic(&dir.join("summary.json"), &json)?;
    write_atomic(
        &dir.join("summary.csv"),
        cell_summary_csv(cell.algorithm, &cell.summary).as_bytes(),
    )
}

/// Tables comparing the algorithms on every target.
pub fn write_campaign_tables(root: &Path, results: &CampaignResults) -> Result<()> {
    let dir = root.join("summary");
    for target in &results.plan.targets {
        let cells: Vec<(Algorithm, &MeasureSummary)> = results
            .cells
            .iter()
            .filter(|c| c.target.name == target.name)
            .map(|c| (c.algorithm, &c.summary))
            .collect();
        let path = dir.join(format!("{}.csv", target_slug(&target.name)));
        write_atomic(&path, target_table_csv(&cells).as_bytes())?;
    }
    let rows = compare_all(results)?;
    write_atomic(
        &dir.join("comparisons.csv"),
        comparisons_csv(&rows).as_bytes(),
    )
}

/// Runs every (algorithm, target) cell of the plan.
///
/// With `out_dir`, completed trials are appended to each cell's trials file
/// as they finish and skipped when the same plan is run again, so an
/// interrupted campaign picks up where it stopped and ends with the same
/// files as an uninterrupted one.
pub fn run_campaign(
    plan: &ExperimentPlan,
    out_dir: Option<&Path>,
    options: &CampaignOptions,
) -> Result<CampaignResults> {
    plan.validate()?;
    if let Some(root) = out_dir {
        if let Some(existing) = read_manifest(root)? {
            if existing.plan != *plan {
                return Err(Error::Config(format!(
                    "{} holds results of a different plan; use another output directory",
                    root.display()
                )));
            }
        }
        write_manifest(root, plan)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let model = model_for(plan);
    let space = SearchSpace::from_inventory(&plan.inventory);

    let mut cells = Vec::new();
    for &algorithm in &plan.algorithms {
        for target in &plan.targets {
            let trials_path =
                out_dir.map(|r| cell_dir(r, algorithm, &target.name).join(TRIALS_FILE));
            let mut done: Vec<TrialResult> = match &trials_path {
                Some(p) => read_trials(p)?,
                None => Vec::new(),
            };
            done.retain(|r| {
                r.trial < plan.trials
                    && r.seed == trial_seed(plan.master_seed, algorithm, &target.name, r.trial)
            });
            let appender = match &trials_path {
                Some(p) => Some(Mutex::new(TrialAppender::open(p)?)),
                None => None,
            };
            let todo: Vec<usize> = (0..plan.trials)
                .filter(|i| !done.iter().any(|r| r.trial == *i))
                .collect();

            let fresh: Vec<TrialResult> = pool.install(|| {
                todo.par_iter()
                    .map(|&i| {
                        let result = run_trial_with(plan, &model, &space, algorithm, target, i)?;
                        if let Some(a) = &appender {
                            a.lock().expect("appender lock").append(&result)?;
                        }
                        Ok(result)
                    })
                    .collect::<Result<_>>()
            })?;
            drop(appender);

            done.extend(fresh);
            done.sort_by_key(|r| r.trial);
            done.dedup_by_key(|r| r.trial);
            let records: Vec<TrialRecord> = done.iter().map(|r| r.record.clone()).collect();
            let cell = CellResult {
                algorithm,
                target: target.clone(),
                summary: summarize(&records)?,
                trials: done,
            };
            if let Some(root) = out_dir {
                write_cell(root, &cell)?;
            }
            cells.push(cell);
        }
    }
    let results = CampaignResults {
        plan: plan.clone(),
        cells,
    };
    if let Some(root) = out_dir {
        write_campaign_tables(root, &results)?;
    }
    Ok(results)
}

/// Reads a result directory back into memory.
pub fn load_campaign(root: &Path) -> Result<CampaignResults> {
    let manifest = read_manifest(root)?.ok_or_else(|| {
        Error::Config(format!(
            "{} has no {}",
            root.display(),
            super::layout::MANIFEST_FILE
        ))
    })?;
    let plan = manifest.plan;
    let mut cells = Vec::new();
    for &algorithm in &plan.algorithms {
        for target in &plan.targets {
            let trials = read_trials(&cell_dir(root, algorithm, &target.name).join(TRIALS_FILE))?;
            if trials.is_empty() {
                continue;
            }
            let records: Vec<TrialRecord> = trials.iter().map(|r| r.record.clone()).collect();
            cells.push(CellResult {
                algorithm,
                target: target.clone(),
                summary: summarize(&records)?,
                trials,
            });
        }
    }
    Ok(CampaignResults { plan, cells })
}
