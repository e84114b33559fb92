use rand::Rng;

use super::{DeParams, Fitness, Population, SearchSpace};

/// Two distinct indices in `0..n`, both different from `i`. Needs `n >= 3`.
fn pick_donors<R: Rng + ?Sized>(n: usize, i: usize, rng: &mut R) -> (usize, usize) {
    let r1 = loop {
        let r = rng.gen_range(0..n);
        if r != i {
            break r;
        }
    };
    let r2 = loop {
        let r = rng.gen_range(0..n);
        if r != i && r != r1 {
            break r;
        }
    };
    (r1, r2)
}

/// Binomial crossover of `x` with the mutant `best + F * (a - b)`; dimension
/// `forced` always takes the mutant component.
fn crossover<R: Rng + ?Sized>(
    out: &mut [f64],
    (best, a, b): (&[f64], &[f64], &[f64]),
    x: &[f64],
    params: &DeParams,
    forced: usize,
    space: &SearchSpace,
    rng: &mut R,
) {
    for d in 0..out.len() {
        out[d] = if rng.gen::<f64>() <= params.cr || d == forced {
            space.clamp(d, best[d] + params.f * (a[d] - b[d]))
        } else {
            x[d]
        };
    }
}

/// One DE/best/1/bin generation with greedy (ties accepted) selection.
///
/// Target vectors are re-evaluated at the start of each generation, so a
/// generation costs `2n` fitness evaluations.
pub fn de_step<F, R>(
    pop: &mut Population,
    space: &SearchSpace,
    params: &DeParams,
    fitness: &F,
    rng: &mut R,
) where
    F: Fitness + ?Sized,
    R: Rng + ?Sized,
{
    pop.evaluate_all(fitness);
    let n = pop.len();
    let dims = space.dims();
    let best = pop.positions[pop.best_index()].clone();

    let mut next = pop.positions.clone();
    let mut next_errors = pop.errors.clone();
    let mut trial = vec![0.0; dims];
    for i in 0..n {
        let (r1, r2) = pick_donors(n, i, rng);
        let forced = if dims > 0 { rng.gen_range(0..dims) } else { 0 };
        let (a, b, x) = (&pop.positions[r1], &pop.positions[r2], &pop.positions[i]);
        crossover(&mut trial, (&best, a, b), x, params, forced, space, rng);
        let e = fitness.evaluate(&trial);
        if e <= pop.errors[i] {
            next[i].copy_from_slice(&trial);
            next_errors[i] = e;
        }
    }
    pop.fes += n as u64;
    pop.positions = next;
    pop.errors = next_errors;
    pop.refresh_elite();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::{init_population, Algorithm, OptimizerConfig, TrialRng};
    use rand::SeedableRng;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn donors_are_distinct() {
        let mut rng = TrialRng::seed_from_u64(0);
        for _ in 0..1000 {
            let (a, b) = pick_donors(4, 2, &mut rng);
            assert!(a != b && a != 2 && b != 2);
        }
    }

    #[test]
    fn equal_donors_give_the_best_as_mutant() {
        let space = SearchSpace::new(vec![-5.0; 3], vec![5.0; 3]).unwrap();
        let best = [0.5, -0.5, 1.0];
        let donor = [2.0, 2.0, 2.0];
        let x = [4.0, 4.0, 4.0];
        let mut out = [0.0; 3];
        let params = DeParams { f: 0.5, cr: 1.0 };
        let mut rng = TrialRng::seed_from_u64(1);
        crossover(
            &mut out,
            (&best, &donor, &donor),
            &x,
            &params,
            0,
            &space,
            &mut rng,
        );
        assert_eq!(out, best);
    }

    #[test]
    fn full_crossover_takes_the_mutant_everywhere() {
        let space = SearchSpace::new(vec![-50.0; 4], vec![50.0; 4]).unwrap();
        let best = [1.0, 2.0, 3.0, 4.0];
        let (a, b) = ([3.0, 3.0, 3.0, 3.0], [1.0, 1.0, 1.0, 1.0]);
        let mut out = [0.0; 4];
        let params = DeParams { f: 0.5, cr: 1.0 };
        let mut rng = TrialRng::seed_from_u64(3);
        crossover(
            &mut out,
            (&best, &a, &b),
            &[9.0; 4],
            &params,
            2,
            &space,
            &mut rng,
        );
        assert_eq!(out, [2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn zero_crossover_keeps_only_the_forced_dimension() {
        let space = SearchSpace::new(vec![-50.0; 4], vec![50.0; 4]).unwrap();
        let mut out = [0.0; 4];
        let params = DeParams { f: 0.5, cr: 0.0 };
        // a constant 0.5 draw never satisfies u <= 0
        let mut rng = rand::rngs::mock::StepRng::new(1 << 63, 0);
        crossover(
            &mut out,
            (&[1.0; 4], &[1.0; 4], &[1.0; 4]),
            &[9.0; 4],
            &params,
            1,
            &space,
            &mut rng,
        );
        assert_eq!(out, [9.0, 1.0, 9.0, 9.0]);
    }

    #[test]
    fn generation_costs_two_evaluations_per_member() {
        let space = SearchSpace::new(vec![-5.0; 2], vec![5.0; 2]).unwrap();
        let cfg = OptimizerConfig {
            population: 6,
            ..OptimizerConfig::new(Algorithm::De, 2)
        };
        let mut rng = TrialRng::seed_from_u64(2);
        let mut pop = init_population(&space, &cfg, &sphere, &mut rng);
        de_step(&mut pop, &space, &cfg.constants.de, &sphere, &mut rng);
        assert_eq!(pop.fes, 18);
    }

    #[test]
    fn members_never_get_worse_and_converge() {
        let space = SearchSpace::new(vec![-10.0], vec![10.0]).unwrap();
        let cfg = OptimizerConfig {
            population: 10,
            ..OptimizerConfig::new(Algorithm::De, 21)
        };
        let mut rng = TrialRng::seed_from_u64(21);
        let mut pop = init_population(&space, &cfg, &sphere, &mut rng);
        for _ in 0..200 {
            let before = pop.errors.clone();
            de_step(&mut pop, &space, &cfg.constants.de, &sphere, &mut rng);
            for (b, a) in before.iter().zip(&pop.errors) {
                assert!(a <= b);
            }
        }
        assert!(pop.elite.error < 1e-12, "{}", pop.elite.error);
    }
}
