use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::SearchSpace;

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Pairwise Euclidean distances between solution vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub entries: Vec<Vec<f64>>,
    /// Trial index of each row.
    pub labels: Vec<usize>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Entries above the diagonal, row-major.
    pub fn upper_triangle(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j, self.entries[i][j])))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label");
        for l in &self.labels {
            out.push_str(&format!(",{l}"));
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.entries) {
            out.push_str(&l.to_string());
            for v in row {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Distances in raw quantity units, or in bound-normalised units when
/// `normalise` is given (each coordinate divided by its bound width).
pub fn distance_matrix(
    solutions: &[Vec<f64>],
    labels: &[usize],
    normalise: Option<&SearchSpace>,
) -> Result<DistanceMatrix> {
    if solutions.len() != labels.len() {
        return Err(Error::Analysis(format!(
            "{} solutions but {} labels",
            solutions.len(),
            labels.len()
        )));
    }
    let scaled: Vec<Vec<f64>> = match normalise {
        None => solutions.to_vec(),
        Some(space) => solutions
            .iter()
            .map(|s| {
                s.iter()
                    .enumerate()
                    .map(|(d, &x)| {
                        let w = space.upper()[d] - space.lower()[d];
                        if w > 0.0 {
                            (x - space.lower()[d]) / w
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect(),
    };
    let n = scaled.len();
    let mut entries = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = euclidean(&scaled[i], &scaled[j]);
            entries[i][j] = d;
            entries[j][i] = d;
        }
    }
    Ok(DistanceMatrix {
        entries,
        labels: labels.to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSummary {
    pub mean: f64,
    /// n-1 estimator over the upper-triangle entries.
    pub stdev: f64,
    pub min: f64,
    pub max: f64,
    /// Labels of the most distant pair.
    pub farthest_pair: (usize, usize),
}

pub fn distance_summary(matrix: &DistanceMatrix) -> Result<DistanceSummary> {
    let entries: Vec<(usize, usize, f64)> = matrix.upper_triangle().collect();
    if entries.is_empty() {
        return Err(Error::Analysis(
            "distance summary needs at least two solutions".into(),
        ));
    }
    let m = entries.len() as f64;
    let mean = entries.iter().map(|e| e.2).sum::<f64>() / m;
    let stdev = if entries.len() > 1 {
        (entries.iter().map(|e| (e.2 - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
    } else {
        0.0
    };
    let min = entries.iter().map(|e| e.2).fold(f64::INFINITY, f64::min);
    let &(fi, fj, max) = entries
        .iter()
        .fold(&entries[0], |best, e| if e.2 > best.2 { e } else { best });
    Ok(DistanceSummary {
        mean,
        stdev,
        min,
        max,
        farthest_pair: (matrix.labels[fi], matrix.labels[fj]),
    })
}

/// Histogram of upper-triangle distances; `fractions` sums to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub fractions: Vec<f64>,
}

impl Histogram {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lower,upper,count,fraction\n");
        for (i, (c, f)) in self.counts.iter().zip(&self.fractions).enumerate() {
            out.push_str(&format!(
                "{},{},{c},{f}\n",
                self.edges[i],
                self.edges[i + 1]
            ));
        }
        out
    }
}

pub fn distance_density(matrix: &DistanceMatrix, bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::Analysis("histogram needs at least one bin".into()));
    }
    let values: Vec<f64> = matrix.upper_triangle().map(|e| e.2).collect();
    if values.is_empty() {
        return Err(Error::Analysis(
            "density needs at least two solutions".into(),
        ));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0usize; bins];
    for v in &values {
        let bin = if width > 0.0 {
            (((v - lo) / width) as usize).min(bins - 1)
        } else {
            0
        };
        counts[bin] += 1;
    }
    let total = values.len() as f64;
    Ok(Histogram {
        fractions: counts.iter().map(|&c| c as f64 / total).collect(),
        edges,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_solution_is_zero_matrix() {
        let m = distance_matrix(&[vec![1.0, 2.0]], &[0], None).unwrap();
        assert_eq!(m.entries, vec![vec![0.0]]);
        assert!(distance_summary(&m).is_err());
        assert!(distance_density(&m, 10).is_err());
    }

    #[test]
    fn hand_computed_triple() {
        let s = [vec![0.0, 0.0], vec![3.0, 4.0], vec![6.0, 0.0]];
        let m = distance_matrix(&s, &[4, 7, 9], None).unwrap();
        assert_eq!(m.entries[0][1], 5.0);
        assert_eq!(m.entries[1][2], 5.0);
        assert_eq!(m.entries[0][2], 6.0);
        let sum = distance_summary(&m).unwrap();
        assert!((sum.mean - 16.0 / 3.0).abs() < 1e-12);
        assert_eq!((sum.min, sum.max), (5.0, 6.0));
        assert_eq!(sum.farthest_pair, (4, 9));
    }

    #[test]
    fn duplicates_and_equilateral() {
        let m = distance_matrix(&[vec![1.0], vec![1.0]], &[0, 1], None).unwrap();
        assert_eq!(m.entries[0][1], 0.0);
        let h = 3f64.sqrt() / 2.0;
        let tri = [vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]];
        let s = distance_summary(&distance_matrix(&tri, &[0, 1, 2], None).unwrap()).unwrap();
        assert!(s.stdev < 1e-12);
    }

    #[test]
    fn normalised_mode_scales_by_bounds() {
        let space = SearchSpace::new(vec![0.0, 0.0], vec![100.0, 2.0]).unwrap();
        let m =
            distance_matrix(&[vec![0.0, 0.0], vec![100.0, 0.0]], &[0, 1], Some(&space)).unwrap();
        assert_eq!(m.entries[0][1], 1.0);
    }

    #[test]
    fn equal_distances_fill_one_bin() {
        let tri = [vec![0.0], vec![1.0]];
        let h = distance_density(&distance_matrix(&tri, &[0, 1], None).unwrap(), 5).unwrap();
        assert_eq!(h.counts, vec![1, 0, 0, 0, 0]);
        assert_eq!(h.fractions[0], 1.0);
    }

    #[test]
    fn uniform_points_on_a_line_spread_across_bins() {
        // Pairwise gaps of n evenly spaced points fall off linearly, so
        // bin fractions follow a triangle; with uniform random points the
        // same holds in expectation. Check against that shape.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let pts: Vec<Vec<f64>> = (0..400).map(|_| vec![rng.gen::<f64>()]).collect();
        let labels: Vec<usize> = (0..400).collect();
        let h = distance_density(&distance_matrix(&pts, &labels, None).unwrap(), 4).unwrap();
        // expected mass of |U - V| in quarters: 7/16, 5/16, 3/16, 1/16
        for (f, e) in h.fractions.iter().zip([7.0, 5.0, 3.0, 1.0]) {
            assert!((f - e / 16.0).abs() < 0.03, "{:?}", h.fractions);
        }
        assert!((h.fractions.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
