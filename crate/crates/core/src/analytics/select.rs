use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::indices::{
    cluster_indices, ladder_indices, ClusterIndex, IndexScores, HARTIGAN_THRESHOLD,
};
use super::kmeans::{kmeans, KMeansResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexVote {
    pub index: ClusterIndex,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub k: usize,
    pub assignments: Vec<usize>,
    pub sizes: Vec<usize>,
    /// The k each computable index voted for.
    pub index_votes: Vec<IndexVote>,
    /// Votes received by each candidate k.
    pub vote_counts: BTreeMap<usize, usize>,
    /// Votes for the winning k.
    pub majority: usize,
    pub scores: BTreeMap<usize, IndexScores>,
}

/// Modal value of `votes`; ties go to the smaller k.
pub fn majority_vote(votes: &[usize]) -> Option<(usize, usize)> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in votes {
        *counts.entry(v).or_default() += 1;
    }
    counts
        .into_iter()
        .fold(None, |best: Option<(usize, usize)>, (k, c)| match best {
            Some((_, bc)) if bc >= c => best,
            _ => Some((k, c)),
        })
}

fn arg_best(
    candidates: &[usize],
    scores: &BTreeMap<usize, IndexScores>,
    get: impl Fn(&IndexScores) -> Option<f64>,
    maximise: bool,
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &k in candidates {
        if let Some(v) = get(&scores[&k]) {
            let better = match best {
                None => true,
                Some((_, b)) if maximise => v > b,
                Some((_, b)) => v < b,
            };
            if better {
                best = Some((k, v));
            }
        }
    }
    best.map(|(k, _)| k)
}

/// Smallest k passing a stopping rule; the largest defined k when none do.
fn first_passing(
    candidates: &[usize],
    scores: &BTreeMap<usize, IndexScores>,
    passes: impl Fn(&IndexScores) -> Option<bool>,
) -> Option<usize> {
    let defined: Vec<(usize, bool)> = candidates
        .iter()
        .filter_map(|&k| passes(&scores[&k]).map(|p| (k, p)))
        .collect();
    defined
        .iter()
        .find(|(_, p)| *p)
        .or(defined.last())
        .map(|(k, _)| *k)
}

/// Clusters `solutions` for every k in `k_range`, lets each index vote for
/// its preferred k and returns the majority partition.
pub fn select_k_majority<R: Rng + ?Sized>(
    solutions: &[Vec<f64>],
    k_range: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<ClusterReport> {
    let n = solutions.len();
    let (k_lo, k_hi) = (*k_range.start(), *k_range.end());
    if k_lo < 2 || k_lo > k_hi {
        return Err(Error::Analysis(format!(
            "invalid cluster range {k_lo}..={k_hi}"
        )));
    }
    if n <= k_lo {
        return Err(Error::Analysis(format!(
            "{n} solutions are too few to choose among {k_lo}..={k_hi} clusters"
        )));
    }
    let candidates: Vec<usize> = (k_lo..=k_hi.min(n)).collect();
    let dims = solutions[0].len();

    let ladder_top = (k_hi + 1).min(n);
    let mut fits: BTreeMap<usize, KMeansResult> = BTreeMap::new();
    for k in 1..=ladder_top {
        fits.insert(k, kmeans(solutions, k, rng)?);
    }
    let w: Vec<f64> = (1..=ladder_top).map(|k| fits[&k].wcss).collect();

    let mut scores = BTreeMap::new();
    for &k in &candidates {
        let mut s = cluster_indices(solutions, &fits[&k].assignments, k);
        (s.krzanowski_lai, s.hartigan) = ladder_indices(&w, k, n, dims);
        scores.insert(k, s);
    }

    let mut index_votes = Vec::new();
    for index in ClusterIndex::ALL {
        let vote = match index {
            ClusterIndex::CalinskiHarabasz => {
                arg_best(&candidates, &scores, |s| s.calinski_harabasz, true)
            }
            ClusterIndex::KrzanowskiLai => {
                arg_best(&candidates, &scores, |s| s.krzanowski_lai, true)
            }
            ClusterIndex::CIndex => arg_best(&candidates, &scores, |s| s.c_index, false),
            ClusterIndex::DaviesBouldin => {
                arg_best(&candidates, &scores, |s| s.davies_bouldin, false)
            }
            ClusterIndex::Silhouette => arg_best(&candidates, &scores, |s| s.silhouette, true),
            ClusterIndex::Hartigan => first_passing(&candidates, &scores, |s| {
                s.hartigan.map(|h| h <= HARTIGAN_THRESHOLD)
            }),
            ClusterIndex::DudaHart => first_passing(&candidates, &scores, |s| {
                Some(s.duda_hart? >= s.duda_hart_critical?)
            }),
        };
        if let Some(k) = vote {
            index_votes.push(IndexVote { index, k });
        }
    }

    let ks: Vec<usize> = index_votes.iter().map(|v| v.k).collect();
    let (k, majority) = majority_vote(&ks).unwrap_or((candidates[0], 0));
    let mut vote_counts: BTreeMap<usize, usize> = candidates.iter().map(|&k| (k, 0)).collect();
    for &v in &ks {
        *vote_counts.entry(v).or_default() += 1;
    }
    let chosen = &fits[&k];
    Ok(ClusterReport {
        k,
        assignments: chosen.assignments.clone(),
        sizes: chosen.sizes(),
        index_votes,
        vote_counts,
        majority,
        scores,
    })
}
