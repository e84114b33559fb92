//! Two-sided rank-sum comparison of two samples.
//!
//! ```bash
//! cargo run -p brewswarm --example rank_sum
//! ```

use brewswarm::analytics::wilcoxon_1x1;

fn main() -> brewswarm::Result<()> {
    let fast = [3100.0, 4200.0, 2900.0, 3900.0, 3300.0, 4100.0];
    let slow = [8800.0, 7600.0, 9100.0, 12000.0, 6900.0, 8100.0];
    let t = wilcoxon_1x1(&fast, &slow, 0.05)?;
    println!(
        "W={} U={} p={:.5} ({:?}) -> {}",
        t.rank_sum,
        t.u,
        t.p_value,
        t.method,
        t.significance.marker()
    );

    // beyond twenty observations per side the normal approximation takes over
    let a: Vec<f64> = (0..40).map(|i| (i * 37 % 100) as f64).collect();
    let b: Vec<f64> = a.iter().map(|x| x + 9.0).collect();
    let t = wilcoxon_1x1(&a, &b, 0.05)?;
    println!(
        "n=40 shift 9: p={:.4} ({:?}) -> {}",
        t.p_value,
        t.method,
        t.significance.marker()
    );
    Ok(())
}
