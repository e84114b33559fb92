use rand::Rng;

use super::{DfoParams, Fitness, Population, SearchSpace};

/// Best of the two ring neighbours `(i - 1) mod n` and `(i + 1) mod n`;
/// equal errors resolve to the lower index.
pub fn ring_neighbour(errors: &[f64], i: usize) -> usize {
    let n = errors.len();
    let left = (i + n - 1) % n;
    let right = (i + 1) % n;
    let (lo, hi) = if left <= right {
        (left, right)
    } else {
        (right, left)
    };
    if errors[hi] < errors[lo] {
        hi
    } else {
        lo
    }
}

/// One DFO iteration. Every fly except the swarm best is rebuilt from its best
/// ring neighbour plus a random pull toward the swarm best; each component
/// restarts uniformly with probability `delta`.
pub fn dfo_step<F, R>(
    pop: &mut Population,
    space: &SearchSpace,
    params: &DfoParams,
    fitness: &F,
    rng: &mut R,
) where
    F: Fitness + ?Sized,
    R: Rng + ?Sized,
{
    let n = pop.len();
    let s = pop.best_index();
    let old = pop.positions.clone();

    for i in (0..n).filter(|&i| i != s) {
        let nb = ring_neighbour(&pop.errors, i);
        let x = &mut pop.positions[i];
        for d in 0..space.dims() {
            if rng.gen::<f64>() < params.delta {
                x[d] = space.sample_component(d, rng);
            } else {
                let u: f64 = rng.gen();
                x[d] = space.clamp(d, old[nb][d] + u * (old[s][d] - old[i][d]));
            }
        }
    }

    pop.evaluate_all(fitness);
    pop.refresh_elite();
}
