//! Picking a cluster count by majority over seven validity indices.
//!
//! ```bash
//! cargo run -p brewswarm --example cluster_solutions
//! ```

use brewswarm::analytics::{
    distance_density, distance_matrix, distance_summary, select_k_majority,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> brewswarm::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // three recipe families
    let mut solutions = Vec::new();
    for centre in [[1.0, 5.0, 0.2], [4.0, 1.0, 0.4], [6.0, 6.0, 0.1]] {
        for _ in 0..10 {
            solutions.push(
                centre
                    .iter()
                    .map(|c| c + rng.gen_range(-0.4..0.4))
                    .collect::<Vec<f64>>(),
            );
        }
    }
    let report = select_k_majority(&solutions, 2..=6, &mut rng)?;
    println!(
        "k = {} with {} of {} votes",
        report.k,
        report.majority,
        report.index_votes.len()
    );
    for v in &report.index_votes {
        println!("  {:?} -> {}", v.index, v.k);
    }
    println!("sizes {:?}", report.sizes);

    let labels: Vec<usize> = (0..solutions.len()).collect();
    let m = distance_matrix(&solutions, &labels, None)?;
    let s = distance_summary(&m)?;
    println!(
        "distances: mean {:.3} sd {:.3} min {:.3} max {:.3}",
        s.mean, s.stdev, s.min, s.max
    );
    print!("{}", distance_density(&m, 8)?.to_csv());
    Ok(())
}
