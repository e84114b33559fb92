use serde::{Deserialize, Serialize};

use super::formulas::{self, SrmMethod};
use super::ingredient::{BatchParams, Inventory, Recipe};
use crate::error::{ChemistryError, Error, Result};

/// Physico-chemical profile of a brewed recipe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrewMetrics {
    pub og: f64,
    pub fg: f64,
    pub abv: f64,
    pub ibu: f64,
    /// `None` when there is no gravity to balance against (OG = 1).
    pub ibu_gu: Option<f64>,
    pub mcu: f64,
    pub srm: f64,
    pub ebc: f64,
}

impl BrewMetrics {
    pub fn colour_name(&self) -> &'static str {
        formulas::srm_color_name(self.srm)
    }
}

/// Desired ABV/IBU/SRM and the error at which a search counts as solved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetProfile {
    pub name: String,
    pub abv: f64,
    pub ibu: f64,
    pub srm: f64,
    pub target_error: f64,
}

impl TargetProfile {
    /// Field-level problems, keyed by field name.
    pub fn problems(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        for (field, v) in [("abv", self.abv), ("ibu", self.ibu), ("srm", self.srm)] {
            if !(v.is_finite() && v >= 0.0) {
                out.push((field, format!("{v} must be a finite value >= 0")));
            }
        }
        if self.target_error.is_nan() || self.target_error <= 0.0 {
            out.push(("target_error", format!("{} must be > 0", self.target_error)));
        }
        if self.name.trim().is_empty() {
            out.push(("name", "must not be empty".into()));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.problems().first() {
            None => Ok(()),
            Some((field, msg)) => Err(Error::Validation(format!(
                "target '{}': {field}: {msg}",
                self.name
            ))),
        }
    }
}

/// Sum of absolute deviations over ABV, IBU and SRM.
pub fn fitness_error(metrics: &BrewMetrics, target: &TargetProfile) -> f64 {
    [
        (metrics.abv, target.abv),
        (metrics.ibu, target.ibu),
        (metrics.srm, target.srm),
    ]
    .iter()
    .map(|(got, want)| ((got - want) * (got - want)).sqrt())
    .sum()
}

/// Forward model bound to an inventory and batch; the optimizers' fitness oracle.
#[derive(Debug, Clone)]
pub struct BrewModel {
    pub inventory: Inventory,
    pub batch: BatchParams,
    pub srm_method: SrmMethod,
}

impl BrewModel {
    pub fn new(inventory: Inventory, batch: BatchParams) -> Self {
        BrewModel {
            inventory,
            batch,
            srm_method: SrmMethod::default(),
        }
    }

    pub fn with_srm_method(mut self, method: SrmMethod) -> Self {
        self.srm_method = method;
        self
    }

    /// Metrics for raw per-slot quantities. Quantities are not bound-checked.
    pub fn metrics(&self, quantities: &[f64]) -> Result<BrewMetrics, ChemistryError> {
        if quantities.len() != self.inventory.len() {
            return Err(ChemistryError::RecipeLength {
                expected: self.inventory.len(),
                got: quantities.len(),
            });
        }
        let inv = &self.inventory;
        let batch = &self.batch;
        let og = formulas::compute_og(quantities, inv, batch);
        let fg = match inv.primary_yeast() {
            Some(yeast) => formulas::compute_fg(og, yeast),
            None => og,
        };
        let abv = formulas::compute_abv(og, fg)?;
        let ibu = formulas::total_ibu(quantities, inv, og, batch);
        let ibu_gu = formulas::ibu_gu(ibu, og).ok();
        let mcu = formulas::compute_mcu(quantities, inv, batch);
        let srm = formulas::compute_srm(quantities, inv, batch, self.srm_method);
        Ok(BrewMetrics {
            og,
            fg,
            abv,
            ibu,
            ibu_gu,
            mcu,
            srm,
            ebc: formulas::srm_to_ebc(srm),
        })
    }

    /// Error against `target`; recipes the model cannot evaluate score `+inf`.
    pub fn error(&self, quantities: &[f64], target: &TargetProfile) -> f64 {
        match self.metrics(quantities) {
            Ok(m) => fitness_error(&m, target),
            Err(_) => f64::INFINITY,
        }
    }
}

/// Evaluates a bound-checked recipe with the default SRM method.
pub fn evaluate(
    recipe: &Recipe,
    inventory: &Inventory,
    batch: &BatchParams,
) -> Result<BrewMetrics, ChemistryError> {
    recipe.check(inventory)?;
    BrewModel::new(inventory.clone(), *batch).metrics(&recipe.quantities)
}
