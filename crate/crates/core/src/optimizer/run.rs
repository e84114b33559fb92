use std::ops::ControlFlow;

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::{
    de_step, dfo_step, init_population, pso_step, Algorithm, Fitness, OptimizerConfig, SearchSpace,
    TrialRng,
};
use crate::analytics::population_diversity;
use crate::error::{Error, Result};

/// Outcome of one seeded optimisation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub best_recipe: Vec<f64>,
    pub best_error: f64,
    pub fes_used: u64,
    /// Completed update iterations, not counting initialisation.
    pub iterations: u64,
    pub success: bool,
    /// Iterations (1-based) whose elite error strictly beat the previous one.
    pub improvement_iters: Vec<u64>,
    /// Population diversity after initialisation and after every iteration.
    pub diversity_trace: Vec<f64>,
    pub final_population: Vec<Vec<f64>>,
}

impl TrialRecord {
    pub fn final_diversity(&self) -> f64 {
        population_diversity(&self.final_population)
    }
}

/// Snapshot handed to a run observer after initialisation and each iteration.
#[derive(Debug, Clone, Copy)]
pub struct Progress<'a> {
    pub iteration: u64,
    pub fes_used: u64,
    pub best_error: f64,
    pub best_position: &'a [f64],
}

/// Runs until the elite error reaches `config.target_error` or the
/// evaluation budget is spent.
pub fn run<F: Fitness + ?Sized>(
    space: &SearchSpace,
    config: &OptimizerConfig,
    fitness: &F,
) -> Result<TrialRecord> {
    run_observed(space, config, fitness, |_| ControlFlow::Continue(()))
}

/// Like [`run`], calling `observer` after every population evaluation
/// batch. Returning `Break` stops the run early.
pub fn run_observed<F, O>(
    space: &SearchSpace,
    config: &OptimizerConfig,
    fitness: &F,
    mut observer: O,
) -> Result<TrialRecord>
where
    F: Fitness + ?Sized,
    O: FnMut(Progress<'_>) -> ControlFlow<()>,
{
    config.validate()?;
    if space.dims() == 0 {
        return Err(Error::Config("search space has no dimensions".into()));
    }

    let mut rng = TrialRng::seed_from_u64(config.seed);
    let mut pop = init_population(space, config, fitness, &mut rng);
    let mut diversity_trace = vec![population_diversity(&pop.positions)];
    let mut improvement_iters = Vec::new();
    let mut iteration = 0u64;

    let mut flow = observer(Progress {
        iteration,
        fes_used: pop.fes,
        best_error: pop.elite.error,
        best_position: &pop.elite.position,
    });

    while flow.is_continue() && pop.elite.error > config.target_error && pop.fes < config.max_fes {
        let before = pop.elite.error;
        let c = &config.constants;
        match config.algorithm {
            Algorithm::Pso => pso_step(&mut pop, space, &c.pso, fitness, &mut rng),
            Algorithm::Dfo => dfo_step(&mut pop, space, &c.dfo, fitness, &mut rng),
            Algorithm::De => de_step(&mut pop, space, &c.de, fitness, &mut rng),
        }
        iteration += 1;
        if pop.elite.error < before {
            improvement_iters.push(iteration);
        }
        diversity_trace.push(population_diversity(&pop.positions));
        flow = observer(Progress {
            iteration,
            fes_used: pop.fes,
            best_error: pop.elite.error,
            best_position: &pop.elite.position,
        });
    }

    Ok(TrialRecord {
        success: pop.elite.error <= config.target_error,
        best_recipe: pop.elite.position,
        best_error: pop.elite.error,
        fes_used: pop.fes,
        iterations: iteration,
        improvement_iters,
        diversity_trace,
        final_population: pop.positions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn space() -> SearchSpace {
        SearchSpace::new(vec![-5.0; 3], vec![5.0; 3]).unwrap()
    }

    fn config(algorithm: Algorithm) -> OptimizerConfig {
        OptimizerConfig {
            population: 10,
            max_fes: 2_000,
            target_error: 1e-6,
            ..OptimizerConfig::new(algorithm, 77)
        }
    }

    #[test]
    fn infinite_target_succeeds_after_initialisation() {
        for alg in Algorithm::ALL {
            let cfg = OptimizerConfig {
                target_error: f64::INFINITY,
                ..config(alg)
            };
            let rec = run(&space(), &cfg, &sphere).unwrap();
            assert!(rec.success);
            assert_eq!(rec.iterations, 0);
            assert_eq!(rec.fes_used, 10);
        }
    }

    #[test]
    fn budget_of_one_batch_runs_no_steps() {
        for alg in Algorithm::ALL {
            let cfg = OptimizerConfig {
                max_fes: 10,
                ..config(alg)
            };
            let rec = run(&space(), &cfg, &sphere).unwrap();
            assert_eq!((rec.iterations, rec.fes_used), (0, 10));
            assert_eq!(rec.diversity_trace.len(), 1);
        }
    }

    #[test]
    fn small_de_population_rejected_before_evaluating() {
        let cfg = OptimizerConfig {
            population: 3,
            ..config(Algorithm::De)
        };
        let calls = std::sync::atomic::AtomicUsize::new(0);
        let f = |x: &[f64]| {
            calls.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            sphere(x)
        };
        assert!(run(&space(), &cfg, &f).is_err());
        assert_eq!(calls.load(std::sync::atomic::Ordering::Relaxed), 0);
    }

    #[test]
    fn observer_can_stop_the_run() {
        let cfg = OptimizerConfig {
            target_error: 0.0,
            ..config(Algorithm::Dfo)
        };
        let rec = run_observed(&space(), &cfg, &sphere, |p| {
            if p.iteration >= 3 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .unwrap();
        assert_eq!(rec.iterations, 3);
    }

    #[test]
    fn improvements_are_strictly_increasing() {
        for alg in Algorithm::ALL {
            let rec = run(&space(), &config(alg), &sphere).unwrap();
            assert!(rec.improvement_iters.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(rec.diversity_trace.len() as u64, rec.iterations + 1);
            assert_eq!(rec.success, rec.best_error <= 1e-6);
        }
    }
}
