use std::path::Path;

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::campaign::{trial_seed, CampaignResults, CellResult};
use super::layout::{cell_dir, target_slug, write_atomic};
use crate::analytics::{
    distance_density, distance_matrix, distance_summary, select_k_majority, wilcoxon_1x1,
    ClusterReport, DistanceSummary, Histogram, ImprovementRaster, MeasureSummary, RankSumTest,
    Significance, Stats, RASTER_ITERATIONS,
};
use crate::error::Result;
use crate::optimizer::{Algorithm, TrialRng};

pub const ALPHA: f64 = 0.05;
/// Candidate cluster counts offered to the index vote.
pub const CLUSTER_RANGE: std::ops::RangeInclusive<usize> = 2..=6;
pub const DENSITY_BINS: usize = 20;

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "--".to_string(), |v| v.to_string())
}

/// `(measure, statistic, value)` rows in a fixed order.
pub fn summary_rows(s: &MeasureSummary) -> Vec<(&'static str, &'static str, String)> {
    let mut rows = Vec::new();
    let stats = |rows: &mut Vec<_>, measure, st: Option<&Stats>| {
        for (name, v) in [
            ("Best", st.map(|s| s.best)),
            ("Worst", st.map(|s| s.worst)),
            ("Median", st.map(|s| s.median)),
            ("Mean", st.map(|s| s.mean)),
            ("StDev", st.map(|s| s.stdev)),
        ] {
            rows.push((measure, name, fmt_opt(v)));
        }
    };
    stats(&mut rows, "Error", Some(&s.error));
    stats(&mut rows, "Efficiency", s.efficiency.as_ref());
    rows.push(("Diversity", "Successful", fmt_opt(s.diversity_successful)));
    rows.push(("Diversity", "Failed", fmt_opt(s.diversity_failed)));
    rows.push((
        "Reliability",
        "Reliability",
        format!("{} ({}%)", s.successes, s.reliability),
    ));
    rows
}

fn csv_text(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn cell_summary_csv(algorithm: Algorithm, s: &MeasureSummary) -> String {
    let header = [
        "measure".to_string(),
        "statistic".into(),
        algorithm.to_string(),
    ];
    csv_text(
        &header,
        summary_rows(s)
            .into_iter()
            .map(|(m, st, v)| vec![m.to_string(), st.to_string(), v]),
    )
}

/// Algorithms side by side for one target.
pub fn target_table_csv(cells: &[(Algorithm, &MeasureSummary)]) -> String {
    let mut header = vec!["measure".to_string(), "statistic".into()];
    header.extend(cells.iter().map(|(a, _)| a.to_string()));
    let columns: Vec<Vec<(&str, &str, String)>> =
        cells.iter().map(|(_, s)| summary_rows(s)).collect();
    let n = columns.first().map_or(0, Vec::len);
    csv_text(
        &header,
        (0..n).map(|r| {
            let mut row = vec![columns[0][r].0.to_string(), columns[0][r].1.to_string()];
            row.extend(columns.iter().map(|c| c[r].2.clone()));
            row
        }),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Error,
    Efficiency,
    Reliability,
}

/// One pairwise comparison; `left` wins when the marker reads `X -- o`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub target: String,
    pub measure: Measure,
    pub left: Algorithm,
    pub right: Algorithm,
    pub marker: String,
    /// Rank-sum result; absent for reliability and when a side is empty.
    pub test: Option<RankSumTest>,
}

impl ComparisonRow {
    pub fn significance(&self) -> Option<Significance> {
        self.test.map(|t| t.significance)
    }
}

/// Error over all trials, efficiency over successful trials, and
/// reliability as `1 -- 0` (left succeeded more often), `0 -- 1` or `--`.
pub fn compare_cells(a: &CellResult, b: &CellResult) -> Result<Vec<ComparisonRow>> {
    let row = |measure, marker: String, test| ComparisonRow {
        target: a.target.name.clone(),
        measure,
        left: a.algorithm,
        right: b.algorithm,
        marker,
        test,
    };
    let errors =
        |c: &CellResult| -> Vec<f64> { c.trials.iter().map(|t| t.record.best_error).collect() };
    let fes = |c: &CellResult| -> Vec<f64> {
        c.trials
            .iter()
            .filter(|t| t.record.success)
            .map(|t| t.record.fes_used as f64)
            .collect()
    };
    let mut rows = Vec::new();
    let e = wilcoxon_1x1(&errors(a), &errors(b), ALPHA)?;
    rows.push(row(Measure::Error, e.significance.marker().into(), Some(e)));
    let (fa, fb) = (fes(a), fes(b));
    if fa.is_empty() || fb.is_empty() {
        rows.push(row(Measure::Efficiency, "n/a".into(), None));
    } else {
        let t = wilcoxon_1x1(&fa, &fb, ALPHA)?;
        rows.push(row(
            Measure::Efficiency,
            t.significance.marker().into(),
            Some(t),
        ));
    }
    let marker = match a.summary.successes.cmp(&b.summary.successes) {
        std::cmp::Ordering::Greater => "1 -- 0",
        std::cmp::Ordering::Less => "0 -- 1",
        std::cmp::Ordering::Equal => "--",
    };
    rows.push(row(Measure::Reliability, marker.into(), None));
    Ok(rows)
}

/// Every algorithm pair on every target, pairs in plan order.
pub fn compare_all(results: &CampaignResults) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::new();
    for target in &results.plan.targets {
        let algs = &results.plan.algorithms;
        for i in 0..algs.len() {
            for j in i + 1..algs.len() {
                if let (Some(a), Some(b)) = (
                    results.cell(algs[i], &target.name),
                    results.cell(algs[j], &target.name),
                ) {
                    rows.extend(compare_cells(a, b)?);
                }
            }
        }
    }
    Ok(rows)
}

pub fn comparisons_csv(rows: &[ComparisonRow]) -> String {
    let header: Vec<String> = ["target", "measure", "pair", "marker", "p_value"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    csv_text(
        &header,
        rows.iter().map(|r| {
            vec![
                r.target.clone(),
                format!("{:?}", r.measure).to_lowercase(),
                format!("{} -- {}", r.left, r.right),
                r.marker.clone(),
                r.test.map_or_else(String::new, |t| t.p_value.to_string()),
            ]
        }),
    )
}

/// Solution-space view of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellAnalysis {
    pub algorithm: Algorithm,
    pub target: String,
    pub summary: MeasureSummary,
    /// Trial indices of the successful solutions, in matrix order.
    pub solution_trials: Vec<usize>,
    /// Needs at least two successful solutions.
    pub distances: Option<DistanceSummary>,
    pub density: Option<Histogram>,
    /// Needs more successful solutions than the smallest candidate k.
    pub clusters: Option<ClusterReport>,
    pub improvement_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub cells: Vec<CellAnalysis>,
    pub comparisons: Vec<ComparisonRow>,
}

/// Seed for the clustering of one cell, distinct from every trial seed.
pub fn cluster_seed(master_seed: u64, algorithm: Algorithm, target: &str) -> u64 {
    trial_seed(
        master_seed,
        algorithm,
        &format!("{target}\u{0}clusters"),
        usize::MAX,
    )
}

pub fn analyze_cell(cell: &CellResult, master_seed: u64) -> Result<(CellAnalysis, CellArtifacts)> {
    let (solutions, labels) = cell.solutions();
    let matrix = distance_matrix(&solutions, &labels, None)?;
    let (distances, density) = if solutions.len() >= 2 {
        (
            Some(distance_summary(&matrix)?),
            Some(distance_density(&matrix, DENSITY_BINS)?),
        )
    } else {
        (None, None)
    };
    let clusters = if solutions.len() > *CLUSTER_RANGE.start() {
        let mut rng =
            TrialRng::seed_from_u64(cluster_seed(master_seed, cell.algorithm, &cell.target.name));
        Some(select_k_majority(&solutions, CLUSTER_RANGE, &mut rng)?)
    } else {
        None
    };
    let raster = ImprovementRaster::from_trials(&cell.records(), RASTER_ITERATIONS);
    let analysis = CellAnalysis {
        algorithm: cell.algorithm,
        target: cell.target.name.clone(),
        summary: cell.summary.clone(),
        solution_trials: labels,
        distances,
        density,
        clusters,
        improvement_rate: raster.improvement_rate(),
    };
    Ok((
        analysis,
        CellArtifacts {
            matrix_csv: matrix.to_csv(),
            raster,
        },
    ))
}

/// Bulky per-cell outputs that only go to disk.
pub struct CellArtifacts {
    pub matrix_csv: String,
    pub raster: ImprovementRaster,
}

pub fn analyze_results(results: &CampaignResults) -> Result<(Analysis, Vec<CellArtifacts>)> {
    let mut cells = Vec::new();
    let mut artifacts = Vec::new();
    for cell in &results.cells {
        let (a, art) = analyze_cell(cell, results.plan.master_seed)?;
        cells.push(a);
        artifacts.push(art);
    }
    let analysis = Analysis {
        cells,
        comparisons: compare_all(results)?,
    };
    Ok((analysis, artifacts))
}

/// Writes the analysis under `out`:
/// `analysis.json`, `comparisons.csv`, `<target-slug>.csv` and per cell
/// `<alg>/<target-slug>/{distances.csv,density.csv,clusters.json,raster.csv}`.
pub fn write_analysis(
    out: &Path,
    results: &CampaignResults,
    analysis: &Analysis,
    artifacts: &[CellArtifacts],
) -> Result<()> {
    write_atomic(
        &out.join("analysis.json"),
        &serde_json::to_vec_pretty(analysis)?,
    )?;
    write_atomic(
        &out.join("comparisons.csv"),
        comparisons_csv(&analysis.comparisons).as_bytes(),
    )?;
    for target in &results.plan.targets {
        let cells: Vec<(Algorithm, &MeasureSummary)> = analysis
            .cells
            .iter()
            .filter(|c| c.target == target.name)
            .map(|c| (c.algorithm, &c.summary))
            .collect();
        if !cells.is_empty() {
            let path = out.join(format!("{}.csv", target_slug(&target.name)));
            write_atomic(&path, target_table_csv(&cells).as_bytes())?;
        }
    }
    for (cell, art) in analysis.cells.iter().zip(artifacts) {
        let dir = cell_dir(out, cell.algorithm, &cell.target);
        write_atomic(&dir.join("distances.csv"), art.matrix_csv.as_bytes())?;
        write_atomic(&dir.join("raster.csv"), art.raster.to_csv().as_bytes())?;
        if let Some(h) = &cell.density {
            write_atomic(&dir.join("density.csv"), h.to_csv().as_bytes())?;
        }
        if let Some(c) = &cell.clusters {
            write_atomic(&dir.join("clusters.json"), &serde_json::to_vec_pretty(c)?)?;
        }
    }
    Ok(())
}

/// Loads a result directory and writes its analysis to `out`
/// (default `<root>/analysis`).
pub fn analyze(root: &Path, out: Option<&Path>) -> Result<Analysis> {
    let results = super::campaign::load_campaign(root)?;
    let (analysis, artifacts) = analyze_results(&results)?;
    let default_out = root.join("analysis");
    write_analysis(out.unwrap_or(&default_out), &results, &analysis, &artifacts)?;
    Ok(analysis)
}
