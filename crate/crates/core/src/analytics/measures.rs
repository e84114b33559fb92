use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::TrialRecord;

/// Mean distance of members from the componentwise centroid.
pub fn population_diversity(members: &[Vec<f64>]) -> f64 {
    let n = members.len();
    if n == 0 {
        return 0.0;
    }
    let dims = members[0].len();
    let mut centre = vec![0.0; dims];
    for m in members {
        for (c, x) in centre.iter_mut().zip(m) {
            *c += x;
        }
    }
    for c in &mut centre {
        *c /= n as f64;
    }
    members
        .iter()
        .map(|m| {
            m.iter()
                .zip(&centre)
                .map(|(x, c)| (x - c) * (x - c))
                .sum::<f64>()
                .sqrt()
        })
        .sum::<f64>()
        / n as f64
}

/// Order statistics and moments of a sample. `stdev` is the n-1 estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub best: f64,
    pub worst: f64,
    pub median: f64,
    pub mean: f64,
    pub stdev: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        let mean = sorted.iter().sum::<f64>() / n as f64;
        let stdev = if n > 1 {
            (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Stats {
            best: sorted[0],
            worst: sorted[n - 1],
            median,
            mean,
            stdev,
        })
    }
}

/// Statistics of FEs used by successful trials; `None` when nothing succeeded.
pub fn efficiency(trials: &[TrialRecord]) -> Option<Stats> {
    let fes: Vec<f64> = trials
        .iter()
        .filter(|t| t.success)
        .map(|t| t.fes_used as f64)
        .collect();
    Stats::of(&fes)
}

/// Percentage of trials that reached their target error.
pub fn reliability(trials: &[TrialRecord]) -> f64 {
    if trials.is_empty() {
        return 0.0;
    }
    let ok = trials.iter().filter(|t| t.success).count();
    100.0 * ok as f64 / trials.len() as f64
}

/// Error, efficiency, reliability and final-population diversity of one
/// algorithm on one target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub trials: usize,
    pub successes: usize,
    pub error: Stats,
    pub efficiency: Option<Stats>,
    pub reliability: f64,
    pub diversity_successful: Option<f64>,
    pub diversity_failed: Option<f64>,
}

pub fn summarize(trials: &[TrialRecord]) -> Result<MeasureSummary> {
    let errors: Vec<f64> = trials.iter().map(|t| t.best_error).collect();
    let error =
        Stats::of(&errors).ok_or_else(|| Error::Analysis("no trials to summarise".into()))?;
    let mean_div = |success: bool| {
        let d: Vec<f64> = trials
            .iter()
            .filter(|t| t.success == success)
            .map(TrialRecord::final_diversity)
            .collect();
        (!d.is_empty()).then(|| d.iter().sum::<f64>() / d.len() as f64)
    };
    Ok(MeasureSummary {
        trials: trials.len(),
        successes: trials.iter().filter(|t| t.success).count(),
        error,
        efficiency: efficiency(trials),
        reliability: reliability(trials),
        diversity_successful: mean_div(true),
        diversity_failed: mean_div(false),
    })
}
