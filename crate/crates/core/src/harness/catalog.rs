//! CSV readers and writers for inventories, targets and recipes.
//!
//! Inventory columns:
//! `kind,name,alpha,beta,color,yield,ibu_gal_per_lb,moisture,diastatic_power,attenuation,min_temp,max_temp,stock,unit`.
//! Columns that do not apply to a kind must be left empty.

use std::path::Path;

use csv::StringRecord;

use crate::chemistry::{
    Fermentable, Hop, Ingredient, IngredientKind, Inventory, Recipe, TargetProfile, Yeast,
};
use crate::error::{Error, Result};

pub const INVENTORY_HEADER: [&str; 14] = [
    "kind",
    "name",
    "alpha",
    "beta",
    "color",
    "yield",
    "ibu_gal_per_lb",
    "moisture",
    "diastatic_power",
    "attenuation",
    "min_temp",
    "max_temp",
    "stock",
    "unit",
];
pub const TARGETS_HEADER: [&str; 5] = ["name", "abv", "ibu", "srm", "target_error"];
pub const RECIPE_HEADER: [&str; 2] = ["name", "quantity"];

const SHIPPED_INVENTORY: &str = include_str!("../../data/inventory.csv");
const SHIPPED_TARGETS: &str = include_str!("../../data/targets.csv");

/// The 16-slot in-stock inventory bundled with the crate.
pub fn default_inventory() -> Inventory {
    parse_inventory(SHIPPED_INVENTORY, "<bundled inventory>").expect("bundled inventory is valid")
}

/// The three bundled style targets.
pub fn default_targets() -> Vec<TargetProfile> {
    parse_targets(SHIPPED_TARGETS, "<bundled targets>").expect("bundled targets are valid")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn load_inventory(path: impl AsRef<Path>) -> Result<Inventory> {
    let path = path.as_ref();
    parse_inventory(&read(path)?, &path.display().to_string())
}

pub fn load_targets(path: impl AsRef<Path>) -> Result<Vec<TargetProfile>> {
    let path = path.as_ref();
    parse_targets(&read(path)?, &path.display().to_string())
}

pub fn load_recipe(path: impl AsRef<Path>, inventory: &Inventory) -> Result<Recipe> {
    let path = path.as_ref();
    parse_recipe(&read(path)?, &path.display().to_string(), inventory)
}

struct Rows<'a> {
    source: &'a str,
    header: StringRecord,
    records: Vec<(u64, StringRecord)>,
}

impl<'a> Rows<'a> {
    fn parse(text: &str, source: &'a str, expected: &[&str]) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(false)
            .from_reader(text.as_bytes());
        let parse_err = |line: u64, field: &str, message: String| Error::Parse {
            path: source.to_string(),
            line,
            field: field.to_string(),
            message,
        };
        let header = match reader.headers() {
            Ok(h) => h.clone(),
            Err(e) => return Err(parse_err(1, "header", e.to_string())),
        };
        if header.is_empty() && text.trim().is_empty() {
            return Ok(Rows {
                source,
                header,
                records: Vec::new(),
            });
        }
        for col in expected {
            if !header.iter().any(|h| h == *col) {
                return Err(parse_err(1, col, "missing column".into()));
            }
        }
        let mut records = Vec::new();
        for rec in reader.records() {
            match rec {
                Ok(r) => {
                    let line = r.position().map_or(0, |p| p.line());
                    records.push((line, r));
                }
                Err(e) => {
                    let line = e.position().map_or(0, |p| p.line());
                    return Err(parse_err(line, "record", e.to_string()));
                }
            }
        }
        Ok(Rows {
            source,
            header,
            records,
        })
    }

    fn error(&self, line: u64, field: &str, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.source.to_string(),
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }

    fn cell<'r>(&self, rec: &'r StringRecord, field: &str) -> &'r str {
        let idx = self
            .header
            .iter()
            .position(|h| h == field)
            .expect("column checked");
        rec.get(idx).unwrap_or("")
    }

    fn text(&self, line: u64, rec: &StringRecord, field: &str) -> Result<String> {
        let v = self.cell(rec, field);
        if v.is_empty() {
            return Err(self.error(line, field, "required value is empty"));
        }
        Ok(v.to_string())
    }

    fn number(&self, line: u64, rec: &StringRecord, field: &str) -> Result<f64> {
        let v = self.cell(rec, field);
        if v.is_empty() {
            return Err(self.error(line, field, "required value is empty"));
        }
        let x: f64 = match v.to_ascii_lowercase().as_str() {
            "inf" | "infinity" => f64::INFINITY,
            _ => v
                .parse()
                .map_err(|_| self.error(line, field, format!("'{v}' is not a number")))?,
        };
        if x.is_nan() {
            return Err(self.error(line, field, "NaN is not allowed"));
        }
        Ok(x)
    }

    fn blank(&self, line: u64, rec: &StringRecord, fields: &[&str], kind: &str) -> Result<()> {
        for f in fields {
            if !self.cell(rec, f).is_empty() {
                return Err(self.error(
                    line,
                    f,
                    format!("does not apply to a {kind}; leave empty"),
                ));
            }
        }
        Ok(())
    }
}

const HOP_ONLY: [&str; 2] = ["alpha", "beta"];
const FERMENTABLE_ONLY: [&str; 5] = [
    "color",
    "yield",
    "ibu_gal_per_lb",
    "moisture",
    "diastatic_power",
];
const YEAST_ONLY: [&str; 3] = ["attenuation", "min_temp", "max_temp"];

pub fn parse_inventory(text: &str, source: &str) -> Result<Inventory> {
    let rows = Rows::parse(text, source, &INVENTORY_HEADER)?;
    let mut items = Vec::with_capacity(rows.records.len());
    for (line, rec) in &rows.records {
        let line = *line;
        let kind = match rows.cell(rec, "kind").to_ascii_lowercase().as_str() {
            "hop" => IngredientKind::Hop,
            "fermentable" => IngredientKind::Fermentable,
            "yeast" => IngredientKind::Yeast,
            other => {
                return Err(rows.error(
                    line,
                    "kind",
                    format!("'{other}' is not one of hop, fermentable, yeast"),
                ))
            }
        };
        let unit = rows.cell(rec, "unit");
        if unit != kind.unit() {
            return Err(rows.error(
                line,
                "unit",
                format!(
                    "a {} is stocked in {}, not '{unit}'",
                    kind.as_str(),
                    kind.unit()
                ),
            ));
        }
        let name = rows.text(line, rec, "name")?;
        let stock = rows.number(line, rec, "stock")?;
        let k = kind.as_str();
        let item = match kind {
            IngredientKind::Hop => {
                rows.blank(line, rec, &FERMENTABLE_ONLY, k)?;
                rows.blank(line, rec, &YEAST_ONLY, k)?;
                Ingredient::Hop(Hop {
                    name,
                    alpha: rows.number(line, rec, "alpha")?,
                    beta: rows.number(line, rec, "beta")?,
                    stock,
                })
            }
            IngredientKind::Fermentable => {
                rows.blank(line, rec, &HOP_ONLY, k)?;
                rows.blank(line, rec, &YEAST_ONLY, k)?;
                Ingredient::Fermentable(Fermentable {
                    name,
                    color: rows.number(line, rec, "color")?,
                    yield_pct: rows.number(line, rec, "yield")?,
                    ibu_gal_per_lb: rows.number(line, rec, "ibu_gal_per_lb")?,
                    moisture: rows.number(line, rec, "moisture")?,
                    diastatic_power: rows.number(line, rec, "diastatic_power")?,
                    stock,
                })
            }
            IngredientKind::Yeast => {
                rows.blank(line, rec, &HOP_ONLY, k)?;
                rows.blank(line, rec, &FERMENTABLE_ONLY, k)?;
                Ingredient::Yeast(Yeast {
                    name,
                    attenuation: rows.number(line, rec, "attenuation")?,
                    min_temp: rows.number(line, rec, "min_temp")?,
                    max_temp: rows.number(line, rec, "max_temp")?,
                    stock,
                })
            }
        };
        if let Some((field, msg)) = item.problems().into_iter().next() {
            return Err(rows.error(line, field, msg));
        }
        items.push(item);
    }
    let inv = Inventory { items };
    if let Some((field, msg)) = inv.problems().into_iter().next() {
        let idx: usize = field
            .trim_start_matches("items[")
            .split(']')
            .next()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0);
        let line = rows.records.get(idx).map_or(0, |(l, _)| *l);
        let column = field.rsplit('.').next().unwrap_or("name");
        return Err(rows.error(line, column, msg));
    }
    Ok(inv)
}

pub fn parse_targets(text: &str, source: &str) -> Result<Vec<TargetProfile>> {
    let rows = Rows::parse(text, source, &TARGETS_HEADER)?;
    let mut out = Vec::with_capacity(rows.records.len());
    for (line, rec) in &rows.records {
        let line = *line;
        let t = TargetProfile {
            name: rows.text(line, rec, "name")?,
            abv: rows.number(line, rec, "abv")?,
            ibu: rows.number(line, rec, "ibu")?,
            srm: rows.number(line, rec, "srm")?,
            target_error: rows.number(line, rec, "target_error")?,
        };
        if let Some((field, msg)) = t.problems().into_iter().next() {
            return Err(rows.error(line, field, msg));
        }
        if out.iter().any(|o: &TargetProfile| o.name == t.name) {
            return Err(rows.error(line, "name", format!("duplicate target '{}'", t.name)));
        }
        out.push(t);
    }
    Ok(out)
}

/// Quantities by ingredient name; ingredients not listed are zero.
pub fn parse_recipe(text: &str, source: &str, inventory: &Inventory) -> Result<Recipe> {
    let rows = Rows::parse(text, source, &RECIPE_HEADER)?;
    let mut recipe = Recipe::empty(inventory);
    let mut seen = vec![false; inventory.len()];
    for (line, rec) in &rows.records {
        let line = *line;
        let name = rows.text(line, rec, "name")?;
        let idx = inventory
            .position(&name)
            .ok_or_else(|| rows.error(line, "name", format!("'{name}' is not in the inventory")))?;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(rows.error(line, "name", format!("'{name}' listed twice")));
        }
        recipe.quantities[idx] = rows.number(line, rec, "quantity")?;
    }
    recipe
        .check(inventory)
        .map_err(|e| Error::Validation(e.to_string()))?;
    Ok(recipe)
}

fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn num(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        x.to_string()
    }
}

pub fn inventory_to_csv(inventory: &Inventory) -> String {
    write_csv(
        &INVENTORY_HEADER,
        inventory.items.iter().map(|item| {
            let mut row = vec![String::new(); INVENTORY_HEADER.len()];
            row[0] = item.kind().as_str().into();
            row[1] = item.name().into();
            match item {
                Ingredient::Hop(h) => {
                    row[2] = num(h.alpha);
                    row[3] = num(h.beta);
                }
                Ingredient::Fermentable(f) => {
                    row[4] = num(f.color);
                    row[5] = num(f.yield_pct);
                    row[6] = num(f.ibu_gal_per_lb);
                    row[7] = num(f.moisture);
                    row[8] = num(f.diastatic_power);
                }
                Ingredient::Yeast(y) => {
                    row[9] = num(y.attenuation);
                    row[10] = num(y.min_temp);
                    row[11] = num(y.max_temp);
                }
            }
            row[12] = num(item.stock());
            row[13] = item.kind().unit().into();
            row
        }),
    )
}

pub fn targets_to_csv(targets: &[TargetProfile]) -> String {
    write_csv(
        &TARGETS_HEADER,
        targets.iter().map(|t| {
            vec![
                t.name.clone(),
                num(t.abv),
                num(t.ibu),
                num(t.srm),
                num(t.target_error),
            ]
        }),
    )
}

pub fn recipe_to_csv(recipe: &Recipe, inventory: &Inventory) -> String {
    write_csv(
        &RECIPE_HEADER,
        inventory
            .items
            .iter()
            .zip(&recipe.quantities)
            .map(|(item, q)| vec![item.name().to_string(), num(*q)]),
    )
}
