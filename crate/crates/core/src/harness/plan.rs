use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::catalog::{default_inventory, default_targets, load_inventory, load_targets};
use crate::chemistry::{BatchParams, Inventory, SrmMethod, TargetProfile};
use crate::error::{Error, Result};
use crate::optimizer::{Algorithm, Constants, OptimizerConfig};

/// Everything that determines a campaign's outputs.
///
/// The default is the full three-product protocol: bundled inventory and
/// targets, all three algorithms, 50 trials of population 100 under a
/// 150 000 evaluation budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentPlan {
    pub master_seed: u64,
    pub trials: usize,
    pub population: usize,
    pub max_fes: u64,
    pub algorithms: Vec<Algorithm>,
    pub srm_method: SrmMethod,
    pub batch: BatchParams,
    pub constants: Constants,
    pub targets: Vec<TargetProfile>,
    pub inventory: Inventory,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        ExperimentPlan {
            master_seed: 0,
            trials: 50,
            population: 100,
            max_fes: 150_000,
            algorithms: Algorithm::ALL.to_vec(),
            srm_method: SrmMethod::default(),
            batch: BatchParams::default(),
            constants: Constants::default(),
            targets: default_targets(),
            inventory: default_inventory(),
        }
    }
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms selected".into()));
        }
        if self.targets.is_empty() {
            return Err(Error::Config("no targets selected".into()));
        }
        let mut algs = self.algorithms.clone();
        algs.sort();
        algs.dedup();
        if algs.len() != self.algorithms.len() {
            return Err(Error::Config("algorithms listed more than once".into()));
        }
        for (i, t) in self.targets.iter().enumerate() {
            t.validate()?;
            if self.targets[..i].iter().any(|o| o.name == t.name) {
                return Err(Error::Config(format!("target '{}' listed twice", t.name)));
            }
        }
        self.inventory.validate()?;
        if self.inventory.is_empty() {
            return Err(Error::Config("inventory is empty".into()));
        }
        self.batch.validate()?;
        for &alg in &self.algorithms {
            self.optimizer_config(alg, f64::INFINITY, 0).validate()?;
        }
        Ok(())
    }

    pub fn optimizer_config(
        &self,
        algorithm: Algorithm,
        target_error: f64,
        seed: u64,
    ) -> OptimizerConfig {
        OptimizerConfig {
            algorithm,
            population: self.population,
            max_fes: self.max_fes,
            target_error,
            seed,
            constants: self.constants,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plans always serialise")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// On-disk plan: like [`ExperimentPlan`] but the inventory and targets may
/// come from catalog files, resolved relative to the plan file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    master_seed: Option<u64>,
    trials: Option<usize>,
    population: Option<usize>,
    max_fes: Option<u64>,
    algorithms: Option<Vec<Algorithm>>,
    srm_method: Option<SrmMethod>,
    batch: Option<BatchParams>,
    constants: Option<Constants>,
    inventory_file: Option<PathBuf>,
    targets_file: Option<PathBuf>,
    #[serde(default)]
    targets: Vec<TargetProfile>,
}

/// Reads a TOML plan. Unset keys fall back to the default protocol;
/// inline `[[targets]]` are appended after any `targets_file`.
pub fn load_plan(path: impl AsRef<Path>) -> Result<ExperimentPlan> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: PlanFile =
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_plan_file(file, base)
}

/// Like [`load_plan`] for plan text already in memory.
pub fn parse_plan(text: &str, base: &Path) -> Result<ExperimentPlan> {
    let file: PlanFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    parse_plan_file(file, base)
}

fn parse_plan_file(file: PlanFile, base: &Path) -> Result<ExperimentPlan> {
    let d = ExperimentPlan::default();
    let inventory = match file.inventory_file {
        Some(p) => load_inventory(base.join(p))?,
        None => d.inventory,
    };
    let mut targets = match file.targets_file {
        Some(p) => load_targets(base.join(p))?,
        None if file.targets.is_empty() => d.targets,
        None => Vec::new(),
    };
    targets.extend(file.targets);
    let plan = ExperimentPlan {
        master_seed: file.master_seed.unwrap_or(d.master_seed),
        trials: file.trials.unwrap_or(d.trials),
        population: file.population.unwrap_or(d.population),
        max_fes: file.max_fes.unwrap_or(d.max_fes),
        algorithms: file.algorithms.unwrap_or(d.algorithms),
        srm_method: file.srm_method.unwrap_or(d.srm_method),
        batch: file.batch.unwrap_or(d.batch),
        constants: file.constants.unwrap_or(d.constants),
        targets,
        inventory,
    };
    plan.validate()?;
    Ok(plan)
}
