use rand::Rng;

use super::{Fitness, Member, Population, PsoParams, SearchSpace};

/// One synchronous constricted-PSO iteration against the swarm best.
///
/// Panics if the population was not initialised for PSO.
pub fn pso_step<F, R>(
    pop: &mut Population,
    space: &SearchSpace,
    params: &PsoParams,
    fitness: &F,
    rng: &mut R,
) where
    F: Fitness + ?Sized,
    R: Rng + ?Sized,
{
    let swarm_best = pop.elite.position.clone();
    let mut memory = pop
        .memory
        .take()
        .expect("PSO step on a population without swarm memory");

    for (i, x) in pop.positions.iter_mut().enumerate() {
        let v = &mut memory.velocities[i];
        let p = &memory.personal_best[i].position;
        for d in 0..x.len() {
            let r1: f64 = rng.gen();
            let r2: f64 = rng.gen();
            v[d] = params.chi
                * (v[d] + params.c1 * r1 * (p[d] - x[d]) + params.c2 * r2 * (swarm_best[d] - x[d]));
            x[d] = space.clamp(d, x[d] + v[d]);
        }
    }

    pop.evaluate_all(fitness);

    for (i, (x, &e)) in pop.positions.iter().zip(&pop.errors).enumerate() {
        let pb = &mut memory.personal_best[i];
        if e < pb.error {
            *pb = Member {
                position: x.clone(),
                error: e,
            };
        }
    }
    pop.memory = Some(memory);
    pop.refresh_elite();
}
