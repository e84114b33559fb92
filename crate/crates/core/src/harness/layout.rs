//! Result directory layout, format version 1:
//!
//! ```text
//! <root>/manifest.toml                       format version + full plan
//! <root>/<alg>/<target-slug>/trials.jsonl    one TrialResult per line, by trial index
//! <root>/<alg>/<target-slug>/summary.json    MeasureSummary of the cell
//! <root>/<alg>/<target-slug>/summary.csv
//! <root>/summary/<target-slug>.csv           algorithms side by side
//! <root>/summary/comparisons.csv             pairwise rank-sum tests
//! ```

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::plan::ExperimentPlan;
use crate::error::{Error, Result};
use crate::optimizer::{Algorithm, TrialRecord};

pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.toml";
pub const TRIALS_FILE: &str = "trials.jsonl";

/// One line of `trials.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub algorithm: Algorithm,
    pub target: String,
    pub trial: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub record: TrialRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub plan: ExperimentPlan,
}

/// Lowercase ASCII alphanumerics joined by single dashes.
pub fn target_slug(name: &str) -> String {
    let mut out = String::new();
    for ch in name.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch.to_ascii_lowercase());
        } else if !out.is_empty() && !out.ends_with('-') {
            out.push('-');
        }
    }
    while out.ends_with('-') {
        out.pop();
    }
    if out.is_empty() {
        out.push_str("target");
    }
    out
}

pub fn cell_dir(root: &Path, algorithm: Algorithm, target: &str) -> PathBuf {
    root.join(algorithm.slug()).join(target_slug(target))
}

pub(crate) fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Writes via a sibling temp file so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        create_dir(dir)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn write_manifest(root: &Path, plan: &ExperimentPlan) -> Result<()> {
    let m = Manifest {
        format_version: FORMAT_VERSION,
        plan: plan.clone(),
    };
    let text = toml::to_string(&m).expect("manifests always serialise");
    write_atomic(&root.join(MANIFEST_FILE), text.as_bytes())
}

pub fn read_manifest(root: &Path) -> Result<Option<Manifest>> {
    let path = root.join(MANIFEST_FILE);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(&path, e)),
    };
    let m: Manifest =
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if m.format_version != FORMAT_VERSION {
        return Err(Error::Config(format!(
            "{}: format version {} is not supported (expected {FORMAT_VERSION})",
            path.display(),
            m.format_version
        )));
    }
    Ok(Some(m))
}

/// Reads a trials file. A truncated final line, left by an interrupted
/// write, is ignored; any other malformed line is an error.
pub fn read_trials(path: &Path) -> Result<Vec<TrialResult>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::io(path, e)),
    };
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::io(path, e))?;
    let mut out = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<TrialResult>(line) {
            Ok(r) => out.push(r),
            Err(_) if i + 1 == lines.len() => break,
            Err(e) => {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: i as u64 + 1,
                    field: "record".into(),
                    message: e.to_string(),
                })
            }
        }
    }
    Ok(out)
}

fn encode(results: &[TrialResult]) -> Vec<u8> {
    let mut buf = Vec::new();
    for r in results {
        serde_json::to_writer(&mut buf, r).expect("trial results always serialise");
        buf.push(b'\n');
    }
    buf
}

/// Rewrites a trials file sorted by trial index, dropping duplicates.
pub fn write_trials(path: &Path, results: &[TrialResult]) -> Result<Vec<TrialResult>> {
    let mut sorted = results.to_vec();
    sorted.sort_by_key(|r| r.trial);
    sorted.dedup_by_key(|r| r.trial);
    write_atomic(path, &encode(&sorted))?;
    Ok(sorted)
}

/// Appends completed trials one line at a time; the resume point after an
/// interruption.
pub struct TrialAppender {
    path: PathBuf,
    file: File,
}

impl TrialAppender {
    pub fn open(path: &Path) -> Result<Self> {
        if let Some(dir) = path.parent() {
            create_dir(dir)?;
        }
        // drop any torn line so the next append starts on a fresh one
        let existing = read_trials(path)?;
        write_atomic(path, &encode(&existing))?;
        let file = OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(|e| Error::io(path, e))?;
        Ok(TrialAppender {
            path: path.to_path_buf(),
            file,
        })
    }

    pub fn append(&mut self, result: &TrialResult) -> Result<()> {
        let line = encode(std::slice::from_ref(result));
        self.file
            .write_all(&line)
            .and_then(|_| self.file.flush())
            .map_err(|e| Error::io(&self.path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(target_slug("Guinness Extra Stout"), "guinness-extra-stout");
        assert_eq!(target_slug("  Kozel  Black! "), "kozel-black");
        assert_eq!(target_slug("???"), "target");
    }

    fn result(trial: usize) -> TrialResult {
        TrialResult {
            algorithm: Algorithm::Dfo,
            target: "t".into(),
            trial,
            seed: 7,
            record: TrialRecord {
                best_recipe: vec![0.1, 0.2],
                best_error: 0.25,
                fes_used: 300,
                iterations: 2,
                success: true,
                improvement_iters: vec![1],
                diversity_trace: vec![1.0, 0.5, 0.25],
                final_population: vec![vec![0.1, 0.2]],
            },
        }
    }

    #[test]
    fn torn_tail_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c").join(TRIALS_FILE);
        {
            let mut a = TrialAppender::open(&path).unwrap();
            a.append(&result(1)).unwrap();
            a.append(&result(0)).unwrap();
        }
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("{\"algorithm\":\"dfo\",\"tar");
        fs::write(&path, text).unwrap();
        assert_eq!(read_trials(&path).unwrap().len(), 2);
        let mut a = TrialAppender::open(&path).unwrap();
        a.append(&result(2)).unwrap();
        let sorted = write_trials(&path, &read_trials(&path).unwrap()).unwrap();
        assert_eq!(
            sorted.iter().map(|r| r.trial).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        assert_eq!(read_trials(&path).unwrap(), sorted);
    }
}
