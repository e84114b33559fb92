use std::ops::ControlFlow;
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;

use brewswarm::analytics::{summarize, ClusterReport, DistanceSummary, MeasureSummary};
use brewswarm::chemistry::BrewMetrics;
use brewswarm::harness::{
    analyze_cell, model_for, trial_seed, write_campaign_tables, write_cell, write_manifest,
    CampaignResults, CellResult, ExperimentPlan, TrialResult,
};
use brewswarm::optimizer::{run_observed, Algorithm, SearchSpace, TrialRecord};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JobStatus {
    Queued,
    Running,
    Done,
    Failed,
}

/// Live view of the best recipe found so far across the job's trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobProgress {
    /// Evaluations spent by all trials so far.
    pub fes_used: u64,
    pub best_error: f64,
    pub best_recipe: Vec<f64>,
    pub trials_done: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub trial: usize,
    pub seed: u64,
    pub recipe: Vec<f64>,
    pub error: f64,
    pub fes_used: u64,
    pub metrics: Option<BrewMetrics>,
    pub colour_name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobResults {
    /// Best recipe of every successful trial.
    pub solutions: Vec<Solution>,
    pub summary: MeasureSummary,
    pub distance_summary: Option<DistanceSummary>,
    pub cluster_report: Option<ClusterReport>,
    /// Result directory holding this job's trials, readable by `analyze`.
    pub result_dir: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeJob {
    pub id: String,
    pub status: JobStatus,
    pub algorithm: Algorithm,
    /// Single-target plan; rerunning it offline reproduces the solutions.
    pub plan: ExperimentPlan,
    pub progress: Option<JobProgress>,
    pub results: Option<JobResults>,
    pub error: Option<String>,
}

pub(crate) struct JobEntry {
    pub view: Mutex<OptimizeJob>,
    pub cancel: AtomicBool,
}

impl JobEntry {
    pub fn new(job: OptimizeJob) -> Self {
        JobEntry {
            view: Mutex::new(job),
            cancel: AtomicBool::new(false),
        }
    }

    pub fn snapshot(&self) -> OptimizeJob {
        self.view.lock().expect("job lock").clone()
    }

    fn update(&self, f: impl FnOnce(&mut OptimizeJob)) {
        f(&mut self.view.lock().expect("job lock"));
    }

    /// Status only moves forward.
    pub fn advance(&self, status: JobStatus) {
        self.update(|j| {
            if status > j.status {
                j.status = status;
            }
        });
    }

    pub fn is_cancelled(&self) -> bool {
        self.cancel.load(Ordering::Relaxed)
    }
}

/// Runs the job's trials one after another on the calling thread, then
/// writes them to `result_dir` in the campaign layout.
pub(crate) fn execute(entry: &JobEntry, result_dir: &Path) {
    entry.advance(JobStatus::Running);
    match run_job(entry, result_dir) {
        Ok(Some(results)) => entry.update(|j| {
            j.results = Some(results);
            j.status = JobStatus::Done;
        }),
        Ok(None) => {}
        Err(e) => entry.update(|j| {
            j.error = Some(e.to_string());
            j.status = JobStatus::Failed;
        }),
    }
}

fn run_job(entry: &JobEntry, result_dir: &Path) -> brewswarm::Result<Option<JobResults>> {
    let (plan, algorithm) = {
        let j = entry.snapshot();
        (j.plan, j.algorithm)
    };
    let target = plan.targets[0].clone();
    let model = model_for(&plan);
    let space = SearchSpace::from_inventory(&plan.inventory);

    let mut trials = Vec::with_capacity(plan.trials);
    let mut spent = 0u64;
    for trial in 0..plan.trials {
        let seed = trial_seed(plan.master_seed, algorithm, &target.name, trial);
        let config = plan.optimizer_config(algorithm, target.target_error, seed);
        let record: TrialRecord =
            run_observed(&space, &config, &|x: &[f64]| model.error(x, &target), |p| {
                entry.update(|j| {
                    let better = j
                        .progress
                        .as_ref()
                        .map_or(true, |g| p.best_error < g.best_error);
                    let g = j.progress.get_or_insert_with(|| JobProgress {
                        fes_used: 0,
                        best_error: p.best_error,
                        best_recipe: p.best_position.to_vec(),
                        trials_done: trial,
                    });
                    g.fes_used = spent + p.fes_used;
                    if better {
                        g.best_error = p.best_error;
                        g.best_recipe = p.best_position.to_vec();
                    }
                });
                if entry.is_cancelled() {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
        if entry.is_cancelled() {
            return Ok(None);
        }
        spent += record.fes_used;
        entry.update(|j| {
            if let Some(g) = j.progress.as_mut() {
                g.trials_done = trial + 1;
            }
        });
        trials.push(TrialResult {
            algorithm,
            target: target.name.clone(),
            trial,
            seed,
            record,
        });
    }

    let records: Vec<TrialRecord> = trials.iter().map(|t| t.record.clone()).collect();
    let cell = CellResult {
        algorithm,
        target: target.clone(),
        summary: summarize(&records)?,
        trials,
    };
    write_manifest(result_dir, &plan)?;
    write_cell(result_dir, &cell)?;
    let campaign = CampaignResults {
        plan: plan.clone(),
        cells: vec![cell],
    };
    write_campaign_tables(result_dir, &campaign)?;
    let cell = &campaign.cells[0];
    let (analysis, _) = analyze_cell(cell, plan.master_seed)?;

    let solutions = cell
        .trials
        .iter()
        .filter(|t| t.record.success)
        .map(|t| {
            let metrics = model.metrics(&t.record.best_recipe).ok();
            Solution {
                trial: t.trial,
                seed: t.seed,
                recipe: t.record.best_recipe.clone(),
                error: t.record.best_error,
                fes_used: t.record.fes_used,
                colour_name: metrics.as_ref().map(|m| m.colour_name().to_string()),
                metrics,
            }
        })
        .collect();
    Ok(Some(JobResults {
        solutions,
        summary: cell.summary.clone(),
        distance_summary: analysis.distances,
        cluster_report: analysis.clusters,
        result_dir: result_dir.display().to_string(),
    }))
}
