//! The two colour conversions side by side across a range of roast additions.
//!
//! ```bash
//! cargo run -p brewswarm --example srm_methods
//! ```

use brewswarm::chemistry::{BatchParams, BrewModel, SrmMethod};
use brewswarm::harness::default_inventory;

fn main() {
    let inv = default_inventory();
    let pale = inv.position("Pale Malt (UK)").unwrap();
    let roast = inv.position("Roasted Barley").unwrap();
    let aggregate = BrewModel::new(inv.clone(), BatchParams::default());
    let per_grain = aggregate.clone().with_srm_method(SrmMethod::PerGrain);

    println!("{:>10} {:>10} {:>10}", "roast kg", "morey", "per-grain");
    for step in 0..=5 {
        let mut q = vec![0.0; inv.len()];
        q[pale] = 4.0;
        q[roast] = step as f64 * 0.1;
        let a = aggregate.metrics(&q).unwrap().srm;
        let b = per_grain.metrics(&q).unwrap().srm;
        println!("{:>10.1} {a:>10.2} {b:>10.2}", q[roast]);
    }
}
