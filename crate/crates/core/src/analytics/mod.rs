//! Performance measures, rank-sum comparison, solution distances and
//! cluster-count selection over completed trials.

mod distance;
mod indices;
mod kmeans;
mod measures;
mod raster;
mod select;
mod wilcoxon;

pub use distance::{
    distance_density, distance_matrix, distance_summary, euclidean, DistanceMatrix,
    DistanceSummary, Histogram,
};
pub use indices::{
    cluster_indices, ladder_indices, within_scatter, ClusterIndex, IndexScores, DUDA_HART_Z,
    HARTIGAN_THRESHOLD,
};
pub use kmeans::{kmeans, kmeans_with, wcss, KMeansOptions, KMeansResult};
pub use measures::{
    efficiency, population_diversity, reliability, summarize, MeasureSummary, Stats,
};
pub use raster::{ImprovementRaster, RasterCell, RASTER_ITERATIONS};
pub use select::{majority_vote, select_k_majority, ClusterReport, IndexVote};
pub use wilcoxon::{wilcoxon_1x1, PMethod, RankSumTest, Significance, EXACT_LIMIT};
