//! Two-sided Wilcoxon rank-sum (Mann–Whitney) comparison of two samples
//! where lower values are better.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Largest sample size for which the exact null distribution is enumerated.
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Significance {
    /// The first sample is significantly lower.
    Left,
    /// The second sample is significantly lower.
    Right,
    NotSignificant,
}

impl Significance {
    pub fn flipped(self) -> Self {
        match self {
            Significance::Left => Significance::Right,
            Significance::Right => Significance::Left,
            Significance::NotSignificant => Significance::NotSignificant,
        }
    }

    /// `X -- o` table notation.
    pub fn marker(self) -> &'static str {
        match self {
            Significance::Left => "X -- o",
            Significance::Right => "o -- X",
            Significance::NotSignificant => "--",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankSumTest {
    /// Sum of the first sample's ranks in the pooled data.
    pub rank_sum: f64,
    /// Mann–Whitney U of the first sample.
    pub u: f64,
    pub p_value: f64,
    pub method: PMethod,
    pub significance: Significance,
}

/// Midranks (1-based) of the pooled sample plus the tie-group sizes.
fn midranks(pooled: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && pooled[order[j]] == pooled[order[i]] {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        ties.push(j - i);
        i = j;
    }
    (ranks, ties)
}

/// Exact two-sided p of observing a first-sample rank sum at least as
/// extreme as `observed`, conditional on the pooled midranks.
fn exact_p(ranks: &[f64], n1: usize, observed: f64) -> f64 {
    // Doubled midranks are integers, so subset sums can be tabulated.
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    let mut counts = vec![vec![0.0f64; max_sum + 1]; n1 + 1];
    counts[0][0] = 1.0;
    for &r in &doubled {
        for j in (1..=n1).rev() {
            let (lower, upper) = counts.split_at_mut(j);
            for s in (r..=max_sum).rev() {
                upper[0][s] += lower[j - 1][s - r];
            }
        }
    }
    let dist = &counts[n1];
    let total: f64 = dist.iter().sum();
    let obs = (observed * 2.0).round() as usize;
    let below: f64 = dist[..=obs].iter().sum();
    let above: f64 = dist[obs..].iter().sum();
    (2.0 * below.min(above) / total).min(1.0)
}

fn normal_p(u: f64, n1: f64, n2: f64, ties: &[usize]) -> f64 {
    let n = n1 + n2;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (n * (n - 1.0));
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term);
    if var <= 0.0 {
        return 1.0;
    }
    let mean = n1 * n2 / 2.0;
    let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let std = Normal::standard();
    (2.0 * (1.0 - std.cdf(z))).min(1.0)
}

/// Compares two samples at level `alpha`. The direction names the sample
/// with the lower (better) values.
pub fn wilcoxon_1x1(a: &[f64], b: &[f64], alpha: f64) -> Result<RankSumTest> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Analysis(
            "rank-sum test needs two non-empty samples".into(),
        ));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::Analysis("rank-sum test sample contains NaN".into()));
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = midranks(&pooled);
    let (n1, n2) = (a.len(), b.len());
    let rank_sum: f64 = ranks[..n1].iter().sum();
    let u = rank_sum - (n1 * (n1 + 1)) as f64 / 2.0;

    let (p_value, method) = if n1 <= EXACT_LIMIT && n2 <= EXACT_LIMIT {
        (exact_p(&ranks, n1, rank_sum), PMethod::Exact)
    } else {
        (normal_p(u, n1 as f64, n2 as f64, &ties), PMethod::Normal)
    };

    let mean_rank_a = rank_sum / n1 as f64;
    let mean_rank_b = ranks[n1..].iter().sum::<f64>() / n2 as f64;
    let significance = if p_value >= alpha || mean_rank_a == mean_rank_b {
        Significance::NotSignificant
    } else if mean_rank_a < mean_rank_b {
        Significance::Left
    } else {
        Significance::Right
    };
    Ok(RankSumTest {
        rank_sum,
        u,
        p_value,
        method,
        significance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midranks_average_ties() {
        let (r, t) = midranks(&[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(r, vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(t, vec![1, 2, 1]);
    }

    #[test]
    fn separated_fives_are_left_significant() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [101.0, 102.0, 103.0, 104.0, 105.0];
        let t = wilcoxon_1x1(&a, &b, 0.05).unwrap();
        assert_eq!(t.rank_sum, 15.0);
        // one of C(10,5) = 252 arrangements per tail
        assert!((t.p_value - 2.0 / 252.0).abs() < 1e-12);
        assert_eq!(t.significance, Significance::Left);
        let swapped = wilcoxon_1x1(&b, &a, 0.05).unwrap();
        assert_eq!(swapped.significance, Significance::Right);
    }

    #[test]
    fn identical_and_fully_tied_samples() {
        let a = [3.0, 1.0, 2.0];
        assert_eq!(
            wilcoxon_1x1(&a, &a, 0.05).unwrap().significance,
            Significance::NotSignificant
        );
        let flat = [7.0; 30];
        let t = wilcoxon_1x1(&flat, &flat, 0.05).unwrap();
        assert_eq!(t.method, PMethod::Normal);
        assert_eq!(t.p_value, 1.0);
        assert_eq!(t.significance, Significance::NotSignificant);
    }

    #[test]
    fn empty_sample_rejected() {
        assert!(wilcoxon_1x1(&[], &[1.0], 0.05).is_err());
    }
}
