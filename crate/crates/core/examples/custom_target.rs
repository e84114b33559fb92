//! Optimising against a target and inventory that are not the bundled ones.
//!
//! ```bash
//! cargo run --release -p brewswarm --example custom_target
//! ```

use brewswarm::chemistry::{BatchParams, BrewModel, TargetProfile};
use brewswarm::harness::parse_inventory;
use brewswarm::optimizer::{run, Algorithm, OptimizerConfig, SearchSpace};

const SHED: &str = "\
kind,name,alpha,beta,color,yield,ibu_gal_per_lb,moisture,diastatic_power,attenuation,min_temp,max_temp,stock,unit
hop,Saaz,3.5,4.0,,,,,,,,,80,g
hop,Hallertau,4.5,4.5,,,,,,,,,60,g
fermentable,Pilsner,,,2,81,0,4,110,,,,6,kg
fermentable,Vienna,,,4,78,0,4,100,,,,2,kg
fermentable,Carafa,,,340,70,0,4,0,,,,0.3,kg
yeast,W-34/70,,,,,,,,80,9,15,11,mL
";

fn main() -> brewswarm::Result<()> {
    let inventory = parse_inventory(SHED, "shed.csv")?;
    let target = TargetProfile {
        name: "Dark lager".into(),
        abv: 4.8,
        ibu: 24.0,
        srm: 18.0,
        target_error: 0.05,
    };
    target.validate()?;
    let model = BrewModel::new(
        inventory.clone(),
        BatchParams {
            batch_size: 23.0,
            boil_size: 27.0,
            ..BatchParams::default()
        },
    );
    let space = SearchSpace::from_inventory(&inventory);
    let config = OptimizerConfig {
        population: 40,
        max_fes: 40_000,
        target_error: target.target_error,
        ..OptimizerConfig::new(Algorithm::Pso, 1)
    };
    let rec = run(&space, &config, &|q: &[f64]| model.error(q, &target))?;
    let m = model.metrics(&rec.best_recipe)?;
    println!("error {:.4} after {} FEs", rec.best_error, rec.fes_used);
    println!(
        "ABV {:.2} IBU {:.1} SRM {:.1} ({})",
        m.abv,
        m.ibu,
        m.srm,
        m.colour_name()
    );
    Ok(())
}
