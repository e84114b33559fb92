//! Population-based search over a box-bounded continuous space.
//!
//! Three update rules share one population type, one fitness-evaluation
//! budget and one termination loop: Clerc–Kennedy constricted PSO with a
//! global-best neighbourhood, dispersive flies optimisation on a ring, and
//! DE/best/1 with binomial crossover. Out-of-bounds components are clamped.

mod de;
mod dfo;
mod pso;
mod run;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chemistry::Inventory;
use crate::error::{Error, Result};

pub use de::de_step;
pub use dfo::{dfo_step, ring_neighbour};
pub use pso::pso_step;
pub use run::{run, run_observed, Progress, TrialRecord};

/// RNG driving every stochastic decision of a trial.
pub type TrialRng = rand_chacha::ChaCha8Rng;

/// Objective to minimise. Must be deterministic for a given input.
pub trait Fitness: Sync {
    fn evaluate(&self, position: &[f64]) -> f64;
}

impl<F> Fitness for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn evaluate(&self, position: &[f64]) -> f64 {
        self(position)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Pso,
    Dfo,
    De,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Pso, Algorithm::Dfo, Algorithm::De];

    pub fn slug(self) -> &'static str {
        match self {
            Algorithm::Pso => "pso",
            Algorithm::Dfo => "dfo",
            Algorithm::De => "de",
        }
    }

    /// Fitness evaluations consumed by one iteration for a population of `n`.
    pub fn fes_per_iteration(self, n: usize) -> u64 {
        match self {
            Algorithm::De => 2 * n as u64,
            _ => n as u64,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Pso => "PSO",
            Algorithm::Dfo => "DFO",
            Algorithm::De => "DE",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pso" => Ok(Algorithm::Pso),
            "dfo" => Ok(Algorithm::Dfo),
            "de" => Ok(Algorithm::De),
            other => Err(Error::Config(format!(
                "unknown algorithm '{other}' (expected pso, dfo or de)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PsoParams {
    /// Constriction factor.
    pub chi: f64,
    /// Personal-best acceleration.
    pub c1: f64,
    /// Swarm-best acceleration.
    pub c2: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        PsoParams {
            chi: 0.72984,
            c1: 2.05,
            c2: 2.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DfoParams {
    /// Per-component restart probability.
    pub delta: f64,
}

impl Default for DfoParams {
    fn default() -> Self {
        DfoParams { delta: 0.001 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeParams {
    /// Differential weight.
    pub f: f64,
    /// Crossover rate.
    pub cr: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        DeParams { f: 0.5, cr: 0.9 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Constants {
    pub pso: PsoParams,
    pub dfo: DfoParams,
    pub de: DeParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub algorithm: Algorithm,
    pub population: usize,
    pub max_fes: u64,
    pub target_error: f64,
    pub seed: u64,
    #[serde(default)]
    pub constants: Constants,
}

impl OptimizerConfig {
    pub fn new(algorithm: Algorithm, seed: u64) -> Self {
        OptimizerConfig {
            algorithm,
            population: 100,
            max_fes: 150_000,
            target_error: 0.0,
            seed,
            constants: Constants::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::Config("population must be > 0".into()));
        }
        if self.max_fes == 0 {
            return Err(Error::Config("max_fes must be > 0".into()));
        }
        if self.target_error.is_nan() {
            return Err(Error::Config("target_error must not be NaN".into()));
        }
        if self.algorithm == Algorithm::De && self.population < 4 {
            return Err(Error::Config(format!(
                "DE needs a population of at least 4, got {}",
                self.population
            )));
        }
        Ok(())
    }
}

/// Per-dimension box bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Config(format!(
                "{} lower bounds but {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        for (d, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Config(format!(
                    "dimension {d}: bounds [{lo}, {hi}] are not a finite interval"
                )));
            }
        }
        Ok(SearchSpace { lower, upper })
    }

    /// `[0, stock]` for every inventory slot.
    pub fn from_inventory(inventory: &Inventory) -> Self {
        let upper = inventory.stocks();
        SearchSpace {
            lower: vec![0.0; upper.len()],
            upper,
        }
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn clamp(&self, d: usize, value: f64) -> f64 {
        value.clamp(self.lower[d], self.upper[d])
    }

    pub fn contains(&self, position: &[f64]) -> bool {
        position.len() == self.dims()
            && position
                .iter()
                .enumerate()
                .all(|(d, &x)| x >= self.lower[d] && x <= self.upper[d])
    }

    /// Uniform draw on dimension `d`.
    pub fn sample_component<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> f64 {
        let (lo, hi) = (self.lower[d], self.upper[d]);
        let u: f64 = rng.gen();
        // Stays inside [lo, hi] and degenerates to lo when lo == hi.
        (lo + u * (hi - lo)).min(hi)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.dims())
            .map(|d| self.sample_component(d, rng))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub position: Vec<f64>,
    pub error: f64,
}

/// Velocity and personal-best state carried by PSO.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmMemory {
    pub velocities: Vec<Vec<f64>>,
    pub personal_best: Vec<Member>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub positions: Vec<Vec<f64>>,
    /// Error of each current position.
    pub errors: Vec<f64>,
    /// Present only for PSO.
    pub memory: Option<SwarmMemory>,
    /// Best position ever evaluated.
    pub elite: Member,
    /// Fitness evaluations consumed so far.
    pub fes: u64,
}

impl Population {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Index of the lowest current error; ties go to the lower index.
    pub fn best_index(&self) -> usize {
        argmin(&self.errors)
    }

    /// Promotes the best current member to elite if it strictly improves on it.
    pub(crate) fn refresh_elite(&mut self) {
        let b = self.best_index();
        if self.errors[b] < self.elite.error {
            self.elite = Member {
                position: self.positions[b].clone(),
                error: self.errors[b],
            };
        }
    }

    pub(crate) fn evaluate_all<F: Fitness + ?Sized>(&mut self, fitness: &F) {
        for (x, e) in self.positions.iter().zip(self.errors.iter_mut()) {
            *e = fitness.evaluate(x);
        }
        self.fes += self.positions.len() as u64;
    }
}

/// Index of the smallest value, lowest index on ties; NaN sorts last.
pub(crate) fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] || (values[best].is_nan() && !v.is_nan()) {
            best = i;
        }
    }
    best
}

/// Draws the initial population uniformly within bounds and evaluates it.
pub fn init_population<F, R>(
    space: &SearchSpace,
    config: &OptimizerConfig,
    fitness: &F,
    rng: &mut R,
) -> Population
where
    F: Fitness + ?Sized,
    R: Rng + ?Sized,
{
    let n = config.population;
    let positions: Vec<Vec<f64>> = (0..n).map(|_| space.sample(rng)).collect();
    let mut pop = Population {
        errors: vec![f64::INFINITY; n],
        positions,
        memory: None,
        elite: Member {
            position: Vec::new(),
            error: f64::INFINITY,
        },
        fes: 0,
    };
    pop.evaluate_all(fitness);
    let b = pop.best_index();
    pop.elite = Member {
        position: pop.positions[b].clone(),
        error: pop.errors[b],
    };
    if config.algorithm == Algorithm::Pso {
        pop.memory = Some(SwarmMemory {
            velocities: vec![vec![0.0; space.dims()]; n],
            personal_best: pop
                .positions
                .iter()
                .zip(&pop.errors)
                .map(|(p, &e)| Member {
                    position: p.clone(),
                    error: e,
                })
                .collect(),
        });
    }
    pop
}
