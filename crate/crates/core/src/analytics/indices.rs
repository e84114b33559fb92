//! Internal validity indices for choosing the number of clusters.
//!
//! Each score is `None` where the index is undefined for the partition
//! (zero scatter, coincident centroids, too few points).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::distance::euclidean;
use super::kmeans::{centroids_of, split_in_two};

/// Standard-normal quantile used by the Duda–Hart critical value.
pub const DUDA_HART_Z: f64 = 3.20;
/// Hartigan's rule of thumb: stop adding clusters once H(k) falls to this.
pub const HARTIGAN_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterIndex {
    CalinskiHarabasz,
    KrzanowskiLai,
    CIndex,
    Hartigan,
    DaviesBouldin,
    Silhouette,
    DudaHart,
}

impl ClusterIndex {
    pub const ALL: [ClusterIndex; 7] = [
        ClusterIndex::CalinskiHarabasz,
        ClusterIndex::KrzanowskiLai,
        ClusterIndex::CIndex,
        ClusterIndex::Hartigan,
        ClusterIndex::DaviesBouldin,
        ClusterIndex::Silhouette,
        ClusterIndex::DudaHart,
    ];
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IndexScores {
    pub calinski_harabasz: Option<f64>,
    /// Needs the partitions at k-1 and k+1; filled by [`ladder_indices`].
    pub krzanowski_lai: Option<f64>,
    pub c_index: Option<f64>,
    /// Needs the partition at k+1; filled by [`ladder_indices`].
    pub hartigan: Option<f64>,
    pub davies_bouldin: Option<f64>,
    pub silhouette: Option<f64>,
    /// Je(2)/Je(1) of the cluster that most benefits from splitting.
    pub duda_hart: Option<f64>,
    /// Critical value the Duda–Hart ratio must reach for k to suffice.
    pub duda_hart_critical: Option<f64>,
}

fn scatter(points: &[&Vec<f64>], centre: &[f64]) -> f64 {
    points
        .iter()
        .map(|p| {
            p.iter()
                .zip(centre)
                .map(|(x, c)| (x - c) * (x - c))
                .sum::<f64>()
        })
        .sum()
}

/// Total within-cluster sum of squares.
pub fn within_scatter(data: &[Vec<f64>], assignments: &[usize], k: usize) -> f64 {
    let centroids = centroids_of(data, assignments, k);
    data.iter()
        .zip(assignments)
        .map(|(x, &a)| {
            x.iter()
                .zip(&centroids[a])
                .map(|(v, c)| (v - c) * (v - c))
                .sum::<f64>()
        })
        .sum()
}

/// Scores that depend only on the partition at `k`.
pub fn cluster_indices(data: &[Vec<f64>], assignments: &[usize], k: usize) -> IndexScores {
    let n = data.len();
    let mut scores = IndexScores::default();
    if n == 0 || k < 2 || assignments.len() != n {
        return scores;
    }
    let dims = data[0].len();
    let centroids = centroids_of(data, assignments, k);
    let members: Vec<Vec<&Vec<f64>>> = (0..k)
        .map(|c| {
            data.iter()
                .zip(assignments)
                .filter(|(_, &a)| a == c)
                .map(|(x, _)| x)
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = members.iter().map(Vec::len).collect();
    if sizes.iter().any(|&s| s == 0) {
        return scores;
    }

    let grand: Vec<f64> = (0..dims)
        .map(|d| data.iter().map(|x| x[d]).sum::<f64>() / n as f64)
        .collect();
    let within: f64 = (0..k).map(|c| scatter(&members[c], &centroids[c])).sum();
    let between: f64 = (0..k)
        .map(|c| {
            sizes[c] as f64
                * centroids[c]
                    .iter()
                    .zip(&grand)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
        })
        .sum();
    if n > k && within > 0.0 {
        scores.calinski_harabasz = Some((between / (k - 1) as f64) / (within / (n - k) as f64));
    }

    // Davies–Bouldin with mean point-to-centroid distance as spread.
    let spread: Vec<f64> = (0..k)
        .map(|c| {
            members[c]
                .iter()
                .map(|p| euclidean(p, &centroids[c]))
                .sum::<f64>()
                / sizes[c] as f64
        })
        .collect();
    let mut db = 0.0;
    let mut defined = true;
    for i in 0..k {
        let mut worst = f64::NEG_INFINITY;
        for j in (0..k).filter(|&j| j != i) {
            let sep = euclidean(&centroids[i], &centroids[j]);
            if sep == 0.0 {
                defined = false;
                break;
            }
            worst = worst.max((spread[i] + spread[j]) / sep);
        }
        db += worst;
    }
    if defined {
        scores.davies_bouldin = Some(db / k as f64);
    }

    let dist: Vec<Vec<f64>> = data
        .iter()
        .map(|a| data.iter().map(|b| euclidean(a, b)).collect())
        .collect();

    // Silhouette; singletons score 0.
    let mut sil = 0.0;
    for i in 0..n {
        let own = assignments[i];
        if sizes[own] == 1 {
            continue;
        }
        let mut sums = vec![0.0; k];
        for j in (0..n).filter(|&j| j != i) {
            sums[assignments[j]] += dist[i][j];
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let m = a.max(b);
        if m > 0.0 {
            sil += (b - a) / m;
        }
    }
    scores.silhouette = Some(sil / n as f64);

    // C-index over all pairwise distances.
    let mut all = Vec::with_capacity(n * (n - 1) / 2);
    let mut s_within = 0.0;
    let mut n_within = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            all.push(dist[i][j]);
            if assignments[i] == assignments[j] {
                s_within += dist[i][j];
                n_within += 1;
            }
        }
    }
    if n_within > 0 {
        all.sort_by(f64::total_cmp);
        let s_min: f64 = all[..n_within].iter().sum();
        let s_max: f64 = all[all.len() - n_within..].iter().sum();
        if s_max > s_min {
            scores.c_index = Some((s_within - s_min) / (s_max - s_min));
        }
    }

    // Duda–Hart: test the cluster whose best two-way split reduces scatter most
    // relative to its critical value.
    let mut tightest: Option<(f64, f64)> = None;
    for c in 0..k {
        if sizes[c] < 2 {
            continue;
        }
        let je1 = scatter(&members[c], &centroids[c]);
        if je1 <= 0.0 {
            continue;
        }
        let pts: Vec<Vec<f64>> = members[c].iter().map(|p| (*p).clone()).collect();
        let halves = split_in_two(&pts);
        let je2 = within_scatter(&pts, &halves, 2);
        let p = dims as f64;
        let critical = 1.0
            - 2.0 / (PI * p)
            - DUDA_HART_Z * (2.0 * (1.0 - 8.0 / (PI * PI * p)) / (sizes[c] as f64 * p)).sqrt();
        let ratio = je2 / je1;
        if tightest.map_or(true, |(r, crit)| ratio - critical < r - crit) {
            tightest = Some((ratio, critical));
        }
    }
    match tightest {
        Some((r, c)) => {
            scores.duda_hart = Some(r);
            scores.duda_hart_critical = Some(c);
        }
        // no cluster can be split further: the partition trivially passes
        None if dims > 0 => {
            scores.duda_hart = Some(1.0);
            scores.duda_hart_critical = Some(0.0);
        }
        None => {}
    }
    scores
}

/// Krzanowski–Lai and Hartigan at `k` from the within-scatter ladder,
/// where `w[j]` is the within scatter of the best partition into `j + 1`
/// clusters.
pub fn ladder_indices(w: &[f64], k: usize, n: usize, dims: usize) -> (Option<f64>, Option<f64>) {
    let at = |j: usize| j.checked_sub(1).and_then(|i| w.get(i)).copied();
    let p = dims as f64;
    let diff = |j: usize| -> Option<f64> {
        let prev = at(j - 1)?;
        let cur = at(j)?;
        Some(((j - 1) as f64).powf(2.0 / p) * prev - (j as f64).powf(2.0 / p) * cur)
    };
    let kl = if k >= 2 && dims > 0 {
        match (diff(k), diff(k + 1)) {
            (Some(a), Some(b)) if b != 0.0 => Some((a / b).abs()),
            _ => None,
        }
    } else {
        None
    };
    let hartigan = match (at(k), at(k + 1)) {
        (Some(wk), Some(wk1)) if wk1 > 0.0 && n > k + 1 => {
            Some((wk / wk1 - 1.0) * (n - k - 1) as f64)
        }
        _ => None,
    };
    (kl, hartigan)
}
