//! Closed-form brewing equations.
//!
//! Unit conventions: hop bitterness works in grams, litres and percent alpha,
//! which yields mg/L of alpha acid. Fermentable bitterness, malt colour units
//! and SRM work in pounds and US gallons, the units their coefficients are
//! tabulated in. Gravity uses points-per-pound-per-gallon.

use serde::{Deserialize, Serialize};

use super::ingredient::{BatchParams, Fermentable, Hop, Ingredient, Inventory, Yeast};
use crate::error::ChemistryError;

pub const KG_PER_LB: f64 = 0.45359237;
pub const LITRES_PER_GALLON: f64 = 3.785411784;
/// Gravity points per pound per gallon of pure sucrose-equivalent extract.
pub const PPG_FULL_EXTRACT: f64 = 46.0;
/// Simple ABV above which the high-gravity formula is used.
pub const ABV_SWITCH: f64 = 6.0;
pub const EBC_PER_SRM: f64 = 1.97;
/// OG at which the high-gravity ABV denominator vanishes.
pub const ABV_SINGULAR_OG: f64 = 1.775;

const MOREY_SCALE: f64 = 1.4922;
const MOREY_EXPONENT: f64 = 0.6859;

pub fn kg_to_lb(kg: f64) -> f64 {
    kg / KG_PER_LB
}

pub fn litres_to_gallons(l: f64) -> f64 {
    l / LITRES_PER_GALLON
}

/// Fermentables paired with their recipe quantity in kilograms.
pub fn recipe_fermentables<'a>(
    recipe: &'a (impl AsRef<[f64]> + ?Sized),
    inventory: &'a Inventory,
) -> impl Iterator<Item = (&'a Fermentable, f64)> + 'a {
    inventory
        .items
        .iter()
        .zip(recipe.as_ref())
        .filter_map(|(item, &q)| match item {
            Ingredient::Fermentable(f) => Some((f, q)),
            _ => None,
        })
}

/// Hops paired with their recipe quantity in grams.
pub fn recipe_hops<'a>(
    recipe: &'a (impl AsRef<[f64]> + ?Sized),
    inventory: &'a Inventory,
) -> impl Iterator<Item = (&'a Hop, f64)> + 'a {
    inventory
        .items
        .iter()
        .zip(recipe.as_ref())
        .filter_map(|(item, &q)| match item {
            Ingredient::Hop(h) => Some((h, q)),
            _ => None,
        })
}

pub fn gravity_from_fermentables<'a>(
    fermentables: impl IntoIterator<Item = (&'a Fermentable, f64)>,
    batch: &BatchParams,
) -> f64 {
    let gallons = litres_to_gallons(batch.batch_size);
    let points: f64 = fermentables
        .into_iter()
        .map(|(f, kg)| {
            kg_to_lb(kg) * PPG_FULL_EXTRACT * f.yield_pct / 100.0 * batch.brewer_efficiency
        })
        .sum();
    1.0 + points / (gallons * 1000.0)
}

pub fn compute_og(
    recipe: &(impl AsRef<[f64]> + ?Sized),
    inventory: &Inventory,
    batch: &BatchParams,
) -> f64 {
    gravity_from_fermentables(recipe_fermentables(recipe, inventory), batch)
}

pub fn compute_fg(og: f64, yeast: &Yeast) -> f64 {
    og - (og - 1.0) * yeast.attenuation / 100.0
}

/// Alcohol by volume in percent; switches to the high-gravity form when the
/// simple estimate exceeds [`ABV_SWITCH`].
pub fn compute_abv(og: f64, fg: f64) -> Result<f64, ChemistryError> {
    if og >= ABV_SINGULAR_OG {
        return Err(ChemistryError::GravitySingularity { og });
    }
    if fg > og {
        return Err(ChemistryError::GravityOrder { og, fg });
    }
    let simple = 131.25 * (og - fg);
    if simple > ABV_SWITCH {
        Ok(76.08 * (og - fg) * fg / (0.794 * (ABV_SINGULAR_OG - og)))
    } else {
        Ok(simple)
    }
}

/// Hop utilisation for a boil of `minutes` at gravity `og`.
pub fn hop_utilisation(og: f64, minutes: f64) -> f64 {
    let bigness = 1.65 * 0.000125_f64.powf(og - 1.0);
    let time = (1.0 - (-0.04 * minutes).exp()) / 4.15;
    bigness * time
}

/// Hop bitterness; every addition boils for `batch.boil_time`.
pub fn hop_ibu<'a>(
    additions: impl IntoIterator<Item = (&'a Hop, f64)>,
    og: f64,
    batch: &BatchParams,
) -> f64 {
    let alpha_mass: f64 = additions.into_iter().map(|(h, g)| g * h.alpha).sum();
    10.0 * alpha_mass / batch.batch_size * hop_utilisation(og, batch.boil_time)
}

pub fn fermentable_ibu(
    recipe: &(impl AsRef<[f64]> + ?Sized),
    inventory: &Inventory,
    batch: &BatchParams,
) -> f64 {
    let gallons = litres_to_gallons(batch.batch_size);
    recipe_fermentables(recipe, inventory)
        .map(|(f, kg)| f.ibu_gal_per_lb * kg_to_lb(kg) / gallons)
        .sum()
}

pub fn total_ibu(
    recipe: &(impl AsRef<[f64]> + ?Sized),
    inventory: &Inventory,
    og: f64,
    batch: &BatchParams,
) -> f64 {
    hop_ibu(recipe_hops(recipe, inventory), og, batch) + fermentable_ibu(recipe, inventory, batch)
}

pub fn ibu_gu(ibu: f64, og: f64) -> Result<f64, ChemistryError> {
    if og <= 1.0 {
        return Err(ChemistryError::UndefinedRatio { og });
    }
    Ok(ibu / (1000.0 * (og - 1.0)))
}

pub fn compute_mcu(
    recipe: &(impl AsRef<[f64]> + ?Sized),
    inventory: &Inventory,
    batch: &BatchParams,
) -> f64 {
    let gallons = litres_to_gallons(batch.batch_size);
    recipe_fermentables(recipe, inventory)
        .map(|(f, kg)| f.color * kg_to_lb(kg) / gallons)
        .sum()
}

/// How the Morey exponent is applied when converting grain colour to SRM.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SrmMethod {
    /// `1.4922 * MCU^0.6859` on the total malt colour units.
    #[default]
    AggregateMorey,
    /// `1.4922 * sum(c * w^0.6859) / v`, exponent on each grain weight.
    PerGrain,
}

pub fn srm_from_mcu(mcu: f64) -> f64 {
    if mcu <= 0.0 {
        0.0
    } else {
        MOREY_SCALE * mcu.powf(MOREY_EXPONENT)
    }
}

pub fn compute_srm(
    recipe: &(impl AsRef<[f64]> + ?Sized),
    inventory: &Inventory,
    batch: &BatchParams,
    method: SrmMethod,
) -> f64 {
    match method {
        SrmMethod::AggregateMorey => srm_from_mcu(compute_mcu(recipe, inventory, batch)),
        SrmMethod::PerGrain => {
            let gallons = litres_to_gallons(batch.batch_size);
            let sum: f64 = recipe_fermentables(recipe, inventory)
                .map(|(f, kg)| f.color * kg_to_lb(kg).powf(MOREY_EXPONENT))
                .sum();
            MOREY_SCALE * sum / gallons
        }
    }
}

pub fn srm_to_ebc(srm: f64) -> f64 {
    srm * EBC_PER_SRM
}

/// A row of the reference beer colour chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ColourBand {
    pub srm: f64,
    pub ebc: u32,
    pub name: &'static str,
    pub hex: &'static str,
}

pub const COLOUR_BANDS: [ColourBand; 12] = [
    ColourBand {
        srm: 2.0,
        ebc: 4,
        name: "Pale Straw",
        hex: "#FFFF45",
    },
    ColourBand {
        srm: 3.0,
        ebc: 6,
        name: "Straw",
        hex: "#FFE93E",
    },
    ColourBand {
        srm: 4.0,
        ebc: 8,
        name: "Pale Gold",
        hex: "#FED849",
    },
    ColourBand {
        srm: 6.0,
        ebc: 12,
        name: "Deep Gold",
        hex: "#FFA846",
    },
    ColourBand {
        srm: 9.0,
        ebc: 18,
        name: "Pale Amber",
        hex: "#F49F44",
    },
    ColourBand {
        srm: 12.0,
        ebc: 24,
        name: "Medium Amber",
        hex: "#D77F59",
    },
    ColourBand {
        srm: 15.0,
        ebc: 30,
        name: "Deep Amber",
        hex: "#94523A",
    },
    ColourBand {
        srm: 18.0,
        ebc: 35,
        name: "Amber-Brown",
        hex: "#804541",
    },
    ColourBand {
        srm: 20.0,
        ebc: 39,
        name: "Brown",
        hex: "#5B342F",
    },
    ColourBand {
        srm: 24.0,
        ebc: 47,
        name: "Ruby Brown",
        hex: "#4C3B2B",
    },
    ColourBand {
        srm: 30.0,
        ebc: 59,
        name: "Deep Brown",
        hex: "#38302E",
    },
    ColourBand {
        srm: 40.0,
        ebc: 79,
        name: "Black",
        hex: "#31302C",
    },
];

/// Nearest band at or below `srm`; anything under 2 is "Pale Straw".
pub fn colour_band(srm: f64) -> &'static ColourBand {
    COLOUR_BANDS
        .iter()
        .rev()
        .find(|b| srm >= b.srm)
        .unwrap_or(&COLOUR_BANDS[0])
}

pub fn srm_color_name(srm: f64) -> &'static str {
    colour_band(srm).name
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn yeast(attenuation: f64) -> Yeast {
        Yeast {
            name: "y".into(),
            attenuation,
            min_temp: 15.0,
            max_temp: 24.0,
            stock: 11.0,
        }
    }

    #[test]
    fn fg_examples() {
        assert_eq!(compute_fg(1.0, &yeast(75.0)), 1.0);
        assert_abs_diff_eq!(compute_fg(1.050, &yeast(100.0)), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(compute_fg(1.050, &yeast(75.0)), 1.0125, epsilon = 1e-12);
    }

    #[test]
    fn abv_simple_and_high_gravity() {
        assert_abs_diff_eq!(compute_abv(1.050, 1.010).unwrap(), 5.25, epsilon = 1e-9);
        assert_eq!(compute_abv(1.04, 1.04).unwrap(), 0.0);
        let high = compute_abv(1.090, 1.020).unwrap();
        assert_abs_diff_eq!(
            high,
            76.08 * 0.070 * 1.020 / (0.794 * 0.685),
            epsilon = 1e-9
        );
        assert!((high - 9.99).abs() < 0.01);
    }

    #[test]
    fn abv_rejects_singular_gravity() {
        assert!(matches!(
            compute_abv(1.775, 1.2),
            Err(ChemistryError::GravitySingularity { .. })
        ));
        assert!(compute_abv(1.01, 1.02).is_err());
    }

    #[test]
    fn zero_boil_gives_no_bitterness() {
        let hop = Hop {
            name: "h".into(),
            alpha: 10.0,
            beta: 0.0,
            stock: 100.0,
        };
        let batch = BatchParams {
            boil_time: 0.0,
            ..BatchParams::default()
        };
        assert_eq!(hop_ibu([(&hop, 100.0)], 1.05, &batch), 0.0);
    }

    #[test]
    fn ibu_gu_examples() {
        assert_eq!(ibu_gu(0.0, 1.05).unwrap(), 0.0);
        assert_abs_diff_eq!(ibu_gu(40.0, 1.050).unwrap(), 0.8, epsilon = 1e-9);
        assert_abs_diff_eq!(ibu_gu(50.0, 1.050).unwrap(), 1.0, epsilon = 1e-9);
        assert!(ibu_gu(10.0, 1.0).is_err());
    }

    #[test]
    fn colour_table_rows() {
        for band in &COLOUR_BANDS {
            assert_eq!(srm_color_name(band.srm), band.name);
            assert_eq!(
                srm_to_ebc(band.srm).round() as u32,
                band.ebc,
                "{}",
                band.name
            );
        }
        assert_eq!(srm_color_name(0.5), "Pale Straw");
        assert_eq!(srm_color_name(21.0), "Brown");
        assert_eq!(srm_color_name(75.0), "Black");
    }

    #[test]
    fn morey_aggregate() {
        assert_eq!(srm_from_mcu(0.0), 0.0);
        assert_abs_diff_eq!(
            srm_from_mcu(8.0),
            1.4922 * 8f64.powf(0.6859),
            epsilon = 1e-12
        );
        assert!((srm_from_mcu(8.0) - 6.21).abs() < 0.005);
    }
}
