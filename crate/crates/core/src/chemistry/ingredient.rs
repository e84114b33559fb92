use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{ChemistryError, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hop {
    pub name: String,
    /// Alpha acid, percent.
    pub alpha: f64,
    /// Beta acid, percent. Carried as metadata only.
    pub beta: f64,
    /// Grams in stock.
    pub stock: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fermentable {
    pub name: String,
    /// Degrees Lovibond.
    pub color: f64,
    /// Extract yield, percent.
    #[serde(rename = "yield")]
    pub yield_pct: f64,
    pub ibu_gal_per_lb: f64,
    pub moisture: f64,
    /// Degrees Lintner.
    pub diastatic_power: f64,
    /// Kilograms in stock.
    pub stock: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Yeast {
    pub name: String,
    /// Apparent attenuation, percent.
    pub attenuation: f64,
    pub min_temp: f64,
    pub max_temp: f64,
    /// Millilitres in stock.
    pub stock: f64,
}

/// One inventory slot; each slot is one dimension of the search space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Ingredient {
    Hop(Hop),
    Fermentable(Fermentable),
    Yeast(Yeast),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IngredientKind {
    Hop,
    Fermentable,
    Yeast,
}

impl IngredientKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IngredientKind::Hop => "hop",
            IngredientKind::Fermentable => "fermentable",
            IngredientKind::Yeast => "yeast",
        }
    }

    /// Unit of the stock and recipe quantity for this kind.
    pub fn unit(self) -> &'static str {
        match self {
            IngredientKind::Hop => "g",
            IngredientKind::Fermentable => "kg",
            IngredientKind::Yeast => "mL",
        }
    }
}

impl Ingredient {
    pub fn name(&self) -> &str {
        match self {
            Ingredient::Hop(h) => &h.name,
            Ingredient::Fermentable(f) => &f.name,
            Ingredient::Yeast(y) => &y.name,
        }
    }

    pub fn stock(&self) -> f64 {
        match self {
            Ingredient::Hop(h) => h.stock,
            Ingredient::Fermentable(f) => f.stock,
            Ingredient::Yeast(y) => y.stock,
        }
    }

    pub fn kind(&self) -> IngredientKind {
        match self {
            Ingredient::Hop(_) => IngredientKind::Hop,
            Ingredient::Fermentable(_) => IngredientKind::Fermentable,
            Ingredient::Yeast(_) => IngredientKind::Yeast,
        }
    }

    /// Field-level problems with this record, as `(field, message)` pairs.
    pub fn problems(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut check = |field: &'static str, value: f64, ok: bool, rule: &str| {
            if !value.is_finite() || !ok {
                out.push((field, format!("{value} violates {rule}")));
            }
        };
        match self {
            Ingredient::Hop(h) => {
                check("alpha", h.alpha, h.alpha >= 0.0, "alpha >= 0");
                check("beta", h.beta, h.beta >= 0.0, "beta >= 0");
                check("stock", h.stock, h.stock >= 0.0, "stock >= 0");
            }
            Ingredient::Fermentable(f) => {
                check("color", f.color, f.color >= 0.0, "color >= 0");
                check(
                    "yield",
                    f.yield_pct,
                    (0.0..=100.0).contains(&f.yield_pct),
                    "0 <= yield <= 100",
                );
                check(
                    "ibu_gal_per_lb",
                    f.ibu_gal_per_lb,
                    f.ibu_gal_per_lb >= 0.0,
                    "ibu_gal_per_lb >= 0",
                );
                check("moisture", f.moisture, f.moisture >= 0.0, "moisture >= 0");
                check(
                    "diastatic_power",
                    f.diastatic_power,
                    f.diastatic_power >= 0.0,
                    "diastatic_power >= 0",
                );
                check("stock", f.stock, f.stock >= 0.0, "stock >= 0");
            }
            Ingredient::Yeast(y) => {
                check(
                    "attenuation",
                    y.attenuation,
                    y.attenuation > 0.0 && y.attenuation <= 100.0,
                    "0 < attenuation <= 100",
                );
                check("min_temp", y.min_temp, true, "finite");
                check("max_temp", y.max_temp, true, "finite");
                check("stock", y.stock, y.stock >= 0.0, "stock >= 0");
            }
        }
        if self.name().trim().is_empty() {
            out.push(("name", "name must not be empty".to_string()));
        }
        out
    }
}

/// The ordered set of in-stock ingredients.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Inventory {
    pub items: Vec<Ingredient>,
}

impl Inventory {
    /// Builds an inventory, rejecting invalid records and duplicate names.
    pub fn new(items: Vec<Ingredient>) -> Result<Self> {
        let inv = Inventory { items };
        inv.validate()?;
        Ok(inv)
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            let joined: Vec<String> = problems
                .into_iter()
                .map(|(field, msg)| format!("{field}: {msg}"))
                .collect();
            Err(Error::Validation(joined.join("; ")))
        }
    }

    /// All problems keyed by a `items[i].field` path.
    pub fn problems(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (i, item) in self.items.iter().enumerate() {
            for (field, msg) in item.problems() {
                out.push((format!("items[{i}].{field}"), msg));
            }
            if !seen.insert(item.name()) {
                out.push((
                    format!("items[{i}].name"),
                    format!("duplicate ingredient name '{}'", item.name()),
                ));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn stocks(&self) -> Vec<f64> {
        self.items.iter().map(Ingredient::stock).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.items.iter().position(|i| i.name() == name)
    }

    /// The yeast that sets attenuation: the first yeast record.
    pub fn primary_yeast(&self) -> Option<&Yeast> {
        self.items.iter().find_map(|i| match i {
            Ingredient::Yeast(y) => Some(y),
            _ => None,
        })
    }
}

/// Brew-day constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BatchParams {
    /// Litres into the fermenter.
    pub batch_size: f64,
    /// Litres in the kettle; reported only.
    pub boil_size: f64,
    /// Minutes; also the boil time of every hop addition.
    pub boil_time: f64,
    pub brewer_efficiency: f64,
}

impl Default for BatchParams {
    fn default() -> Self {
        BatchParams {
            batch_size: 20.0,
            boil_size: 24.0,
            boil_time: 60.0,
            brewer_efficiency: 0.70,
        }
    }
}

impl BatchParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.batch_size > 0.0
            && self.boil_size >= self.batch_size
            && self.boil_time >= 0.0
            && self.brewer_efficiency > 0.0
            && self.brewer_efficiency <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "batch parameters violate batch_size > 0, boil_size >= batch_size, \
                 boil_time >= 0, 0 < brewer_efficiency <= 1: {self:?}"
            )))
        }
    }
}

/// Quantity per inventory slot, in the slot's stock unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Recipe {
    pub quantities: Vec<f64>,
}

impl Recipe {
    pub fn new(quantities: Vec<f64>) -> Self {
        Recipe { quantities }
    }

    pub fn empty(inventory: &Inventory) -> Self {
        Recipe {
            quantities: vec![0.0; inventory.len()],
        }
    }

    pub fn check(&self, inventory: &Inventory) -> Result<(), ChemistryError> {
        if self.quantities.len() != inventory.len() {
            return Err(ChemistryError::RecipeLength {
                expected: inventory.len(),
                got: self.quantities.len(),
            });
        }
        for (q, item) in self.quantities.iter().zip(&inventory.items) {
            if !(0.0..=item.stock()).contains(q) {
                return Err(ChemistryError::QuantityOutOfStock {
                    name: item.name().to_string(),
                    value: *q,
                    stock: item.stock(),
                });
            }
        }
        Ok(())
    }
}

impl AsRef<[f64]> for Recipe {
    fn as_ref(&self) -> &[f64] {
        &self.quantities
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hop(name: &str, stock: f64) -> Ingredient {
        Ingredient::Hop(Hop {
            name: name.into(),
            alpha: 5.0,
            beta: 4.0,
            stock,
        })
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = Inventory::new(vec![hop("Cascade", 10.0), hop("Cascade", 5.0)]).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn negative_stock_rejected() {
        let inv = Inventory {
            items: vec![hop("Cascade", -1.0)],
        };
        let problems = inv.problems();
        assert_eq!(problems.len(), 1);
        assert_eq!(problems[0].0, "items[0].stock");
    }

    #[test]
    fn zero_attenuation_rejected() {
        let y = Ingredient::Yeast(Yeast {
            name: "Dead".into(),
            attenuation: 0.0,
            min_temp: 15.0,
            max_temp: 20.0,
            stock: 1.0,
        });
        assert_eq!(y.problems()[0].0, "attenuation");
    }

    #[test]
    fn recipe_bounds_checked() {
        let inv = Inventory::new(vec![hop("Cascade", 10.0)]).unwrap();
        assert!(Recipe::new(vec![10.0]).check(&inv).is_ok());
        assert!(Recipe::new(vec![10.5]).check(&inv).is_err());
        assert!(Recipe::new(vec![]).check(&inv).is_err());
    }

    #[test]
    fn json_uses_domain_field_names() {
        let f = Ingredient::Fermentable(Fermentable {
            name: "Pale".into(),
            color: 3.0,
            yield_pct: 78.0,
            ibu_gal_per_lb: 0.0,
            moisture: 4.0,
            diastatic_power: 45.0,
            stock: 7.0,
        });
        let json = serde_json::to_value(&f).unwrap();
        assert_eq!(json["kind"], "fermentable");
        assert_eq!(json["yield"], 78.0);
    }
}
