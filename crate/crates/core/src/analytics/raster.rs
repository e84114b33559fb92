use serde::{Deserialize, Serialize};

use crate::optimizer::TrialRecord;

/// Iterations shown per trial.
pub const RASTER_ITERATIONS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RasterCell {
    Improved,
    Flat,
    /// The trial had already terminated.
    Blank,
}

/// One row per trial, one column per iteration starting at 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementRaster {
    pub rows: Vec<Vec<RasterCell>>,
}

impl ImprovementRaster {
    pub fn from_trials(trials: &[TrialRecord], columns: usize) -> Self {
        let rows = trials
            .iter()
            .map(|t| {
                let mut marks = t.improvement_iters.iter().peekable();
                (1..=columns as u64)
                    .map(|it| {
                        while marks.next_if(|&&m| m < it).is_some() {}
                        if it > t.iterations {
                            RasterCell::Blank
                        } else if marks.next_if_eq(&&it).is_some() {
                            RasterCell::Improved
                        } else {
                            RasterCell::Flat
                        }
                    })
                    .collect()
            })
            .collect();
        ImprovementRaster { rows }
    }

    /// Share of non-blank cells that improved.
    pub fn improvement_rate(&self) -> f64 {
        let live: Vec<_> = self
            .rows
            .iter()
            .flatten()
            .filter(|c| **c != RasterCell::Blank)
            .collect();
        if live.is_empty() {
            return 0.0;
        }
        live.iter().filter(|c| ***c == RasterCell::Improved).count() as f64 / live.len() as f64
    }

    /// `1` improved, `0` flat, empty once the trial stopped.
    pub fn to_csv(&self) -> String {
        let cols = self.rows.first().map_or(0, Vec::len);
        let mut out = String::from("trial");
        for c in 1..=cols {
            out.push_str(&format!(",{c}"));
        }
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(&i.to_string());
            for cell in row {
                out.push(',');
                match cell {
                    RasterCell::Improved => out.push('1'),
                    RasterCell::Flat => out.push('0'),
                    RasterCell::Blank => {}
                }
            }
            out.push('\n');
        }
        out
    }
}
