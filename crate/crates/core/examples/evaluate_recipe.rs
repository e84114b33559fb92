//! Forward model: recipe quantities in, gravity/strength/bitterness/colour out.
//!
//! ```bash
//! cargo run -p brewswarm --example evaluate_recipe
//! ```

use brewswarm::chemistry::{evaluate, BatchParams, Recipe};
use brewswarm::harness::{default_inventory, default_targets, parse_recipe};

fn main() -> brewswarm::Result<()> {
    let inventory = default_inventory();
    // a dry stout, more or less
    let recipe = parse_recipe(
        "name,quantity\n\
         Northern Brewer,40\n\
         Pale Malt (UK),3.2\n\
         Roasted Barley,0.45\n\
         Barley Flaked,0.5\n\
         Chocolate Malt (UK),0.15\n\
         Safale S-04,11\n",
        "inline",
        &inventory,
    )?;
    let m = evaluate(&recipe, &inventory, &BatchParams::default())?;
    println!("OG {:.4}  FG {:.4}  ABV {:.2}%", m.og, m.fg, m.abv);
    println!("IBU {:.1}  IBU/GU {:.2}", m.ibu, m.ibu_gu.unwrap_or(0.0));
    println!("SRM {:.1} ({})  EBC {:.1}", m.srm, m.colour_name(), m.ebc);

    let guinness = &default_targets()[0];
    let err = brewswarm::chemistry::fitness_error(&m, guinness);
    println!("distance from {}: {err:.3}", guinness.name);

    let water = evaluate(
        &Recipe::empty(&inventory),
        &inventory,
        &BatchParams::default(),
    )?;
    println!("empty recipe: ABV {} SRM {}", water.abv, water.srm);
    Ok(())
}
