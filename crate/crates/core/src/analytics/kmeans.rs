use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub max_iter: usize,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        KMeansOptions {
            restarts: 10,
            max_iter: 300,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansResult {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squared distances.
    pub wcss: f64,
    /// WCSS after each Lloyd iteration of the winning restart.
    pub wcss_trace: Vec<f64>,
}

impl KMeansResult {
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.centroids.len()];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centre) in centroids.iter().enumerate() {
        let d = sq_dist(point, centre);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

pub(crate) fn centroids_of(data: &[Vec<f64>], assignments: &[usize], k: usize) -> Vec<Vec<f64>> {
    let dims = data.first().map_or(0, Vec::len);
    let mut sums = vec![vec![0.0; dims]; k];
    let mut counts = vec![0usize; k];
    for (x, &a) in data.iter().zip(assignments) {
        counts[a] += 1;
        for (s, v) in sums[a].iter_mut().zip(x) {
            *s += v;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        if c > 0 {
            for v in s.iter_mut() {
                *v /= c as f64;
            }
        }
    }
    sums
}

pub fn wcss(data: &[Vec<f64>], assignments: &[usize], centroids: &[Vec<f64>]) -> f64 {
    data.iter()
        .zip(assignments)
        .map(|(x, &a)| sq_dist(x, &centroids[a]))
        .sum()
}

fn plus_plus_seed<R: Rng + ?Sized>(data: &[Vec<f64>], k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut centroids = vec![data[rng.gen_range(0..data.len())].clone()];
    let mut d2: Vec<f64> = data.iter().map(|x| sq_dist(x, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut chosen = data.len() - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            chosen
        } else {
            rng.gen_range(0..data.len())
        };
        centroids.push(data[pick].clone());
        for (d, x) in d2.iter_mut().zip(data) {
            *d = d.min(sq_dist(x, &centroids[centroids.len() - 1]));
        }
    }
    centroids
}

/// Moves the point farthest from its centroid (taken from a cluster that
/// can spare it) into each empty cluster.
fn fill_empty(data: &[Vec<f64>], assignments: &mut [usize], centroids: &[Vec<f64>], k: usize) {
    loop {
        let mut sizes = vec![0usize; k];
        for &a in assignments.iter() {
            sizes[a] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let donor = (0..data.len())
            .filter(|&i| sizes[assignments[i]] > 1)
            .max_by(|&i, &j| {
                let di = sq_dist(&data[i], &centroids[assignments[i]]);
                let dj = sq_dist(&data[j], &centroids[assignments[j]]);
                di.total_cmp(&dj).then(j.cmp(&i))
            })
            .expect("k <= n guarantees a cluster with a spare point");
        assignments[donor] = empty;
    }
}

fn lloyd(
    data: &[Vec<f64>],
    mut centroids: Vec<Vec<f64>>,
    k: usize,
    max_iter: usize,
) -> KMeansResult {
    let mut assignments: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    for _ in 0..max_iter.max(1) {
        let mut next: Vec<usize> = data.iter().map(|x| nearest(x, &centroids)).collect();
        fill_empty(data, &mut next, &centroids, k);
        if next == assignments {
            break;
        }
        assignments = next;
        centroids = centroids_of(data, &assignments, k);
        trace.push(wcss(data, &assignments, &centroids));
    }
    KMeansResult {
        wcss: *trace.last().unwrap_or(&0.0),
        assignments,
        centroids,
        wcss_trace: trace,
    }
}

/// k-means++ seeding followed by Lloyd iterations, keeping the restart
/// with the lowest WCSS.
pub fn kmeans<R: Rng + ?Sized>(data: &[Vec<f64>], k: usize, rng: &mut R) -> Result<KMeansResult> {
    kmeans_with(data, k, KMeansOptions::default(), rng)
}

pub fn kmeans_with<R: Rng + ?Sized>(
    data: &[Vec<f64>],
    k: usize,
    options: KMeansOptions,
    rng: &mut R,
) -> Result<KMeansResult> {
    if k == 0 || k > data.len() {
        return Err(Error::Analysis(format!(
            "cannot form {k} clusters from {} points",
            data.len()
        )));
    }
    let mut best: Option<KMeansResult> = None;
    for _ in 0..options.restarts.max(1) {
        let seeds = plus_plus_seed(data, k, rng);
        let result = lloyd(data, seeds, k, options.max_iter);
        if best.as_ref().map_or(true, |b| result.wcss < b.wcss) {
            best = Some(result);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Deterministic two-way split seeded with the two most distant points.
pub(crate) fn split_in_two(data: &[Vec<f64>]) -> Vec<usize> {
    let n = data.len();
    let (mut a, mut b, mut far) = (0, 0, -1.0);
    for i in 0..n {
        for j in i + 1..n {
            let d = sq_dist(&data[i], &data[j]);
            if d > far {
                (a, b, far) = (i, j, d);
            }
        }
    }
    lloyd(data, vec![data[a].clone(), data[b].clone()], 2, 100).assignments
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn two_blobs(seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::new();
        for centre in [[0.0, 0.0, 0.0], [20.0, 20.0, 20.0]] {
            for _ in 0..15 {
                pts.push(
                    centre
                        .iter()
                        .map(|c| c + rng.gen_range(-1.0..1.0))
                        .collect(),
                );
            }
        }
        pts
    }

    #[test]
    fn separates_two_blobs() {
        let data = two_blobs(1);
        let r = kmeans(&data, 2, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let first = r.assignments[0];
        assert!(r.assignments[..15].iter().all(|&a| a == first));
        assert!(r.assignments[15..].iter().all(|&a| a != first));
    }

    #[test]
    fn k_equals_n_has_zero_wcss() {
        let data = vec![vec![0.0], vec![1.0], vec![5.0], vec![9.0]];
        let r = kmeans(&data, 4, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(r.wcss, 0.0);
        assert_eq!(r.sizes(), vec![1; 4]);
    }

    #[test]
    fn too_many_clusters_rejected() {
        assert!(kmeans(&[vec![1.0]], 2, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }

    #[test]
    fn duplicate_points_still_fill_every_cluster() {
        let data = vec![vec![1.0, 1.0]; 6];
        let r = kmeans(&data, 3, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(r.sizes().iter().all(|&s| s > 0));
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let data = two_blobs(3);
        let a = kmeans(&data, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = kmeans(&data, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wcss_never_increases() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let data: Vec<Vec<f64>> = (0..80)
            .map(|_| (0..4).map(|_| rng.gen_range(0.0..10.0)).collect())
            .collect();
        for k in 2..=6 {
            let r = kmeans_with(
                &data,
                k,
                KMeansOptions {
                    restarts: 1,
                    max_iter: 300,
                },
                &mut rng,
            )
            .unwrap();
            for w in r.wcss_trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "{:?}", r.wcss_trace);
            }
        }
    }
}
