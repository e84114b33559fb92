//! Forward brewing model: recipe and batch parameters in, physico-chemical
//! metrics out. Every function here is pure.

pub mod formulas;
mod ingredient;
mod model;

pub use formulas::{
    colour_band, compute_abv, compute_fg, compute_mcu, compute_og, compute_srm, fermentable_ibu,
    hop_ibu, ibu_gu, srm_color_name, srm_to_ebc, total_ibu, ColourBand, SrmMethod, COLOUR_BANDS,
};
pub use ingredient::{
    BatchParams, Fermentable, Hop, Ingredient, IngredientKind, Inventory, Recipe, Yeast,
};
pub use model::{evaluate, fitness_error, BrewMetrics, BrewModel, TargetProfile};
