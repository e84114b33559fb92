//! Inverse recipe design for brewing.
//!
//! A recipe is a vector of ingredient quantities. [`chemistry`] turns it into
//! gravity, strength, bitterness and colour; [`optimizer`] searches the
//! quantity box for a recipe matching a target style; [`analytics`] compares
//! optimizers over many seeded trials and [`harness`] drives whole campaigns.

pub mod analytics;
pub mod chemistry;
mod error;
pub mod harness;
pub mod optimizer;

pub use error::{ChemistryError, Error, Result};
