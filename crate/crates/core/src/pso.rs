//! Particle swarm optimization with a floor-decode discrete encoding.
//!
//! Each particle carries a continuous nurse × day grid over `[0, K)`,
//! where `K` is the shift count plus one. Decoding floors each cell to
//! an option index with the last index meaning `Off`; a cell that lands
//! on a shift the nurse cannot staff is repaired to `Off`, so decoded
//! schedules never violate the hard skill rule. Velocities follow the
//! classic update `v' = W·v + c1·r1·(pbest − x) + c2·r2·(gbest − x)`
//! with per-cell random factors; the inertia weight, constriction
//! coefficient and velocity clamping are independent variant flags, and
//! the global best can be refreshed synchronously (once per iteration)
//! or asynchronously (after each particle).
//!
//! Each particle draws from its own counter-based substream of the run
//! seed (common random numbers): particle `i` consumes the same
//! randomness regardless of the swarm size, so runs that differ only in
//! population size stay coupled and paired population comparisons
//! cancel most of the seed noise. All draws happen on the master loop;
//! the executor's worker count never touches the streams.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::constraints::evaluate;
use crate::executor::{evaluate_batch, ExecutorConfig};
use crate::model::{Assignment, RosterInstance, Schedule, SkillCover};
use crate::run::{RunResult, SolverError};

/// Keeps clamped positions strictly below `K` so the floor decode
/// always yields a valid option index.
const POSITION_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoParams {
    /// Cognitive acceleration coefficient.
    pub c1: f64,
    /// Social acceleration coefficient.
    pub c2: f64,
    /// Inertia weight, applied when `inertia` is set.
    pub w: f64,
    /// Constriction coefficient, applied when `constriction` is set.
    pub chi: f64,
    /// Velocity clamp magnitude; `None` means `K / 2` for the instance.
    pub v_max: Option<f64>,
    pub particles: usize,
    pub iterations: usize,
    pub clamping: bool,
    pub inertia: bool,
    pub constriction: bool,
    /// Refresh the global best after each particle instead of once per
    /// iteration.
    pub asynchronous: bool,
    pub seed: u64,
}

impl Default for PsoParams {
    fn default() -> Self {
        PsoParams {
            c1: 1.5,
            c2: 1.5,
            w: 0.9,
            chi: 0.729,
            v_max: None,
            particles: 16,
            iterations: 100,
            clamping: true,
            inertia: true,
            constriction: false,
            asynchronous: false,
            seed: 0,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<(), SolverError> {
        let invalid = |msg: &str| Err(SolverError::InvalidParameter(msg.into()));
        if self.c1 < 0.0 || self.c2 < 0.0 {
            return invalid("c1 and c2 must be >= 0");
        }
        if self.particles == 0 {
            return invalid("at least one particle is required");
        }
        if self.iterations == 0 {
            return invalid("at least one iteration is required");
        }
        if self.inertia && self.constriction {
            return invalid("inertia and constriction are mutually exclusive");
        }
        if self.constriction && !(self.chi > 0.0 && self.chi <= 1.0) {
            return invalid("chi must be in (0, 1] with constriction enabled");
        }
        if let Some(v_max) = self.v_max {
            if v_max <= 0.0 {
                return invalid("v_max must be positive");
            }
        }
        Ok(())
    }

    /// Clamp magnitude for an instance with `k` options per cell.
    pub fn resolved_v_max(&self, k: f64) -> f64 {
        self.v_max.unwrap_or(k / 2.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub pbest_position: Vec<f64>,
    pub pbest_fitness: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Swarm {
    pub particles: Vec<Particle>,
    pub gbest_position: Vec<f64>,
    pub gbest_fitness: u64,
    /// Options per cell (shift count plus `Off`).
    pub k: f64,
    /// Resolved velocity clamp magnitude.
    pub v_max: f64,
    /// One random substream per particle, indexed like `particles`.
    streams: Vec<ChaCha8Rng>,
}

fn particle_stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Floor-decode of a continuous grid into a schedule. Cells whose shift
/// the nurse cannot staff are repaired to `Off`, so the result never
/// carries hard skill violations.
pub fn decode_position(position: &[f64], instance: &RosterInstance) -> Schedule {
    let nurses = instance.nurse_count();
    let days = instance.horizon_days;
    assert_eq!(position.len(), nurses * days, "position grid shape");
    let k = instance.option_count() as f64;
    let off = instance.shift_count();
    let mut schedule = Schedule::empty(instance);
    for nurse in 0..nurses {
        for day in 0..days {
            let value = position[nurse * days + day];
            let index = value.clamp(0.0, k - POSITION_EPS).floor() as usize;
            let cell = if index >= off
                || instance.skill_cover(nurse, index) == SkillCover::Missing
            {
                Assignment::Off
            } else {
                Assignment::Shift(index)
            };
            schedule.set(nurse, day, cell).expect("cell in range");
        }
    }
    schedule
}

/// One velocity component: `W·v + c1·r1·(pbest − x) + c2·r2·(gbest − x)`
/// with `W = w` under the inertia variant and 1 otherwise, multiplied by
/// `chi` under the constriction variant, clamped to `[-v_max, v_max]`
/// when clamping is enabled.
pub fn velocity_component(
    v: f64,
    x: f64,
    pbest: f64,
    gbest: f64,
    r1: f64,
    r2: f64,
    params: &PsoParams,
    v_max: f64,
) -> f64 {
    let momentum = if params.inertia { params.w } else { 1.0 };
    let mut updated = momentum * v
        + params.c1 * r1 * (pbest - x)
        + params.c2 * r2 * (gbest - x);
    if params.constriction {
        updated *= params.chi;
    }
    if params.clamping {
        updated = updated.clamp(-v_max, v_max);
    }
    updated
}

/// One position component: `x + v`, clamped to `[0, K)`.
pub fn position_component(x: f64, v: f64, k: f64) -> f64 {
    (x + v).clamp(0.0, k - POSITION_EPS)
}

/// Fresh velocity grid for one particle; `r1`, `r2` are drawn per cell.
pub fn update_velocity(
    particle: &Particle,
    gbest_position: &[f64],
    params: &PsoParams,
    v_max: f64,
    rng: &mut impl Rng,
) -> Vec<f64> {
    assert_eq!(particle.position.len(), gbest_position.len(), "grid shape");
    (0..particle.position.len())
        .map(|i| {
            let r1 = rng.gen::<f64>();
            let r2 = rng.gen::<f64>();
            velocity_component(
                particle.velocity[i],
                particle.position[i],
                particle.pbest_position[i],
                gbest_position[i],
                r1,
                r2,
                params,
                v_max,
            )
        })
        .collect()
}

/// Fresh position grid for one particle, after its velocity update.
pub fn update_position(particle: &Particle, k: f64) -> Vec<f64> {
    particle
        .position
        .iter()
        .zip(&particle.velocity)
        .map(|(&x, &v)| position_component(x, v, k))
        .collect()
}

/// Random swarm: positions uniform over `[0, K)`, velocities uniform
/// over `[-v_max, v_max]`, personal bests at the initial positions and
/// the global best at the best initial particle. Particle `i` is drawn
/// from substream `i` of `params.seed`.
pub fn init_swarm(
    instance: &RosterInstance,
    params: &PsoParams,
) -> Result<Swarm, SolverError> {
    params.validate()?;
    let k = instance.option_count() as f64;
    let v_max = params.resolved_v_max(k);
    let cells = instance.nurse_count() * instance.horizon_days;

    let mut streams: Vec<ChaCha8Rng> = (0..params.particles)
        .map(|i| particle_stream(params.seed, i))
        .collect();
    let mut particles = Vec::with_capacity(params.particles);
    for rng in &mut streams {
        let position: Vec<f64> =
            (0..cells).map(|_| rng.gen_range(0.0..k)).collect();
        let velocity: Vec<f64> =
            (0..cells).map(|_| rng.gen_range(-v_max..=v_max)).collect();
        let fitness = evaluate(&decode_position(&position, instance), instance)
            .expect("decoded schedule matches instance")
            .fitness;
        particles.push(Particle {
            pbest_position: position.clone(),
            pbest_fitness: fitness,
            position,
            velocity,
        });
    }

    let best = particles
        .iter()
        .min_by_key(|p| p.pbest_fitness)
        .expect("at least one particle");
    Ok(Swarm {
        gbest_position: best.pbest_position.clone(),
        gbest_fitness: best.pbest_fitness,
        particles,
        k,
        v_max,
        streams,
    })
}

/// One iteration: decode and evaluate every particle, update personal
/// bests on strict improvement, refresh the global best (once per
/// iteration, or after each particle in asynchronous mode), then move
/// every particle.
pub fn step_swarm(
    swarm: &mut Swarm,
    instance: &RosterInstance,
    params: &PsoParams,
    executor: &ExecutorConfig,
) -> Result<(), SolverError> {
    let schedules: Vec<Schedule> = swarm
        .particles
        .iter()
        .map(|p| decode_position(&p.position, instance))
        .collect();
    let breakdowns = evaluate_batch(&schedules, instance, executor)?;

    if params.asynchronous {
        for ((particle, rng), breakdown) in swarm
            .particles
            .iter_mut()
            .zip(&mut swarm.streams)
            .zip(&breakdowns)
        {
            if breakdown.fitness < particle.pbest_fitness {
                particle.pbest_fitness = breakdown.fitness;
                particle.pbest_position = particle.position.clone();
            }
            if particle.pbest_fitness < swarm.gbest_fitness {
                swarm.gbest_fitness = particle.pbest_fitness;
                swarm.gbest_position = particle.pbest_position.clone();
            }
            particle.velocity = update_velocity(
                particle,
                &swarm.gbest_position,
                params,
                swarm.v_max,
                rng,
            );
            particle.position = update_position(particle, swarm.k);
        }
    } else {
        for (particle, breakdown) in
            swarm.particles.iter_mut().zip(&breakdowns)
        {
            if breakdown.fitness < particle.pbest_fitness {
                particle.pbest_fitness = breakdown.fitness;
                particle.pbest_position = particle.position.clone();
            }
        }
        if let Some(best) = swarm
            .particles
            .iter()
            .min_by_key(|p| p.pbest_fitness)
        {
            if best.pbest_fitness < swarm.gbest_fitness {
                swarm.gbest_fitness = best.pbest_fitness;
                swarm.gbest_position = best.pbest_position.clone();
            }
        }
        let gbest = swarm.gbest_position.clone();
        for (particle, rng) in
            swarm.particles.iter_mut().zip(&mut swarm.streams)
        {
            particle.velocity =
                update_velocity(particle, &gbest, params, swarm.v_max, rng);
            particle.position = update_position(particle, swarm.k);
        }
    }
    Ok(())
}

/// Full PSO run. Deterministic for a fixed seed and independent of the
/// executor's worker count: all randomness lives on the master loop.
pub fn run_pso(
    instance: &RosterInstance,
    params: &PsoParams,
    executor: &ExecutorConfig,
) -> Result<RunResult, SolverError> {
    params.validate()?;
    let start = Instant::now();
    let mut swarm = init_swarm(instance, params)?;
    let mut evaluations = params.particles as u64;
    let mut history = Vec::with_capacity(params.iterations);

    for _ in 0..params.iterations {
        step_swarm(&mut swarm, instance, params, executor)?;
        evaluations += params.particles as u64;
        history.push(swarm.gbest_fitness);
    }

    let best_schedule = decode_position(&swarm.gbest_position, instance);
    Ok(RunResult {
        best_schedule,
        best_fitness: swarm.gbest_fitness,
        history,
        wall_time_s: start.elapsed().as_secs_f64(),
        evaluations,
    })
}
