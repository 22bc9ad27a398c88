//! Ant colony optimization over the assignment grid.
//!
//! The construction graph has one component per (nurse, day, option)
//! triple, where an option is a shift from the catalog or `Off`. Each
//! ant fills the grid cell by cell in nurse-major order, sampling an
//! option with probability proportional to `tau^alpha * eta^beta` over
//! the feasible options for that cell. The feasibility mask drops
//! options the nurse cannot staff (hard skill rule) and night shifts
//! that would complete three nights in a row, so constructed schedules
//! never carry those hard violations; blank-coverage violations are
//! left to the penalty.
//!
//! Five pheromone-update variants are supported: the basic ant system
//! (all ants deposit), the ant colony system (best-so-far deposits,
//! plus a local update during construction), the max-min ant system
//! (iteration best deposits, pheromone clamped to `[tau_min,
//! tau_max]`), rank-based deposits and the elitist strategy (the worst
//! ant is replaced by the best-so-far solution, which also deposits
//! with extra weight).

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::executor::{evaluate_batch, ExecutorConfig};
use crate::model::{Assignment, RosterInstance, Schedule, SkillCover};
use crate::run::{RunResult, SolverError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AcoVariant {
    Basic,
    Acs,
    MaxMin,
    Rank,
    Elitist,
}

impl fmt::Display for AcoVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            AcoVariant::Basic => "basic",
            AcoVariant::Acs => "acs",
            AcoVariant::MaxMin => "maxmin",
            AcoVariant::Rank => "rank",
            AcoVariant::Elitist => "elitist",
        };
        f.write_str(name)
    }
}

impl FromStr for AcoVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(AcoVariant::Basic),
            "acs" => Ok(AcoVariant::Acs),
            "maxmin" => Ok(AcoVariant::MaxMin),
            "rank" => Ok(AcoVariant::Rank),
            "elitist" => Ok(AcoVariant::Elitist),
            other => Err(format!(
                "unknown variant `{other}` (expected basic|acs|maxmin|rank|elitist)"
            )),
        }
    }
}

/// ACO parameters. `alpha`, `beta`, `eta` and `zeta` default to the
/// reference settings (1, 2, 0.01, 0.5); the remaining knobs use common
/// literature values.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcoParams {
    /// Pheromone exponent.
    pub alpha: f64,
    /// Heuristic exponent.
    pub beta: f64,
    /// Constant heuristic value; a per-option heuristic can replace it
    /// without changing the selection rule.
    pub eta: f64,
    /// Evaporation rate, in (0, 1).
    pub zeta: f64,
    pub ants: usize,
    pub iterations: usize,
    pub variant: AcoVariant,
    /// Initial pheromone on every component.
    pub tau0: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    /// Depositing ants under the rank variant.
    pub rank_count: usize,
    /// Best-so-far deposit multiplier under the elitist variant.
    pub elite_weight: f64,
    /// Local-update rate under the ACS variant, in (0, 1).
    pub phi: f64,
    /// Deposit scale: each depositor adds `q_deposit / (1 + fitness)`.
    pub q_deposit: f64,
    pub seed: u64,
}

impl Default for AcoParams {
    fn default() -> Self {
        AcoParams {
            alpha: 1.0,
            beta: 2.0,
            eta: 0.01,
            zeta: 0.5,
            ants: 16,
            iterations: 100,
            variant: AcoVariant::Basic,
            tau0: 1.0,
            tau_min: 0.01,
            tau_max: 10.0,
            rank_count: 6,
            elite_weight: 16.0,
            phi: 0.1,
            q_deposit: 100.0,
            seed: 0,
        }
    }
}

impl AcoParams {
    pub fn validate(&self) -> Result<(), SolverError> {
        let invalid = |msg: &str| Err(SolverError::InvalidParameter(msg.into()));
        if !(self.zeta > 0.0 && self.zeta < 1.0) {
            return invalid("zeta must be in (0, 1)");
        }
        if !(self.phi > 0.0 && self.phi < 1.0) {
            return invalid("phi must be in (0, 1)");
        }
        if self.tau0 <= 0.0 {
            return invalid("tau0 must be positive");
        }
        if !(self.tau_min <= self.tau0 && self.tau0 <= self.tau_max) {
            return invalid("tau_min <= tau0 <= tau_max must hold");
        }
        if self.tau_min <= 0.0 {
            return invalid("tau_min must be positive");
        }
        if self.ants == 0 {
            return invalid("at least one ant is required");
        }
        if self.iterations == 0 {
            return invalid("at least one iteration is required");
        }
        if self.rank_count == 0 || self.rank_count > self.ants {
            return invalid("rank_count must be in 1..=ants");
        }
        if !(self.alpha >= 0.0 && self.beta >= 0.0) || self.eta <= 0.0 {
            return invalid("alpha, beta must be >= 0 and eta > 0");
        }
        if self.elite_weight < 0.0 {
            return invalid("elite_weight must be >= 0");
        }
        if self.q_deposit <= 0.0 {
            return invalid("q_deposit must be positive");
        }
        Ok(())
    }
}

/// Pheromone over (nurse, day, option) components. The option axis runs
/// over the shift catalog with `Off` as the final index.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneMatrix {
    nurses: usize,
    days: usize,
    options: usize,
    tau: Vec<f64>,
}

impl PheromoneMatrix {
    pub fn nurses(&self) -> usize {
        self.nurses
    }

    pub fn days(&self) -> usize {
        self.days
    }

    pub fn options(&self) -> usize {
        self.options
    }

    fn row_start(&self, nurse: usize, day: usize) -> usize {
        (nurse * self.days + day) * self.options
    }

    pub fn row(&self, nurse: usize, day: usize) -> &[f64] {
        let start = self.row_start(nurse, day);
        &self.tau[start..start + self.options]
    }

    pub fn get(&self, nurse: usize, day: usize, option: usize) -> f64 {
        self.tau[self.row_start(nurse, day) + option]
    }

    /// Every stored value, for invariant checks.
    pub fn values(&self) -> &[f64] {
        &self.tau
    }

    fn component_mut(&mut self, nurse: usize, day: usize, option: usize) -> &mut f64 {
        let idx = self.row_start(nurse, day) + option;
        &mut self.tau[idx]
    }

    fn option_of(&self, cell: Assignment) -> usize {
        match cell {
            Assignment::Off => self.options - 1,
            Assignment::Shift(s) => s,
        }
    }

    fn deposit(&mut self, schedule: &Schedule, amount: f64) {
        for nurse in 0..self.nurses {
            for (day, &cell) in schedule.row(nurse).iter().enumerate() {
                *self.component_mut(nurse, day, self.option_of(cell)) += amount;
            }
        }
    }
}

/// All components set to `tau0`.
pub fn init_pheromone(
    instance: &RosterInstance,
    params: &AcoParams,
) -> Result<PheromoneMatrix, SolverError> {
    params.validate()?;
    Ok(PheromoneMatrix {
        nurses: instance.nurse_count(),
        days: instance.horizon_days,
        options: instance.option_count(),
        tau: vec![
            params.tau0;
            instance.nurse_count()
                * instance.horizon_days
                * instance.option_count()
        ],
    })
}

fn fill_selection_weights(
    tau_row: &[f64],
    feasible: &[bool],
    params: &AcoParams,
    out: &mut Vec<f64>,
) -> f64 {
    let heuristic = params.eta.powf(params.beta);
    out.clear();
    let mut total = 0.0;
    for (&tau, &ok) in tau_row.iter().zip(feasible) {
        let weight = if ok {
            let attraction = if params.alpha == 1.0 {
                tau
            } else {
                tau.powf(params.alpha)
            };
            attraction * heuristic
        } else {
            0.0
        };
        total += weight;
        out.push(weight);
    }
    total
}

/// Random-proportional selection distribution over one cell's options:
/// `p(option) ∝ tau^alpha * eta^beta` across the feasible mask,
/// 0 elsewhere.
pub fn selection_probabilities(
    tau_row: &[f64],
    feasible: &[bool],
    params: &AcoParams,
) -> Result<Vec<f64>, SolverError> {
    if tau_row.len() != feasible.len() {
        return Err(SolverError::InvalidParameter(
            "pheromone row and feasibility mask lengths differ".into(),
        ));
    }
    let mut weights = Vec::with_capacity(tau_row.len());
    let total = fill_selection_weights(tau_row, feasible, params, &mut weights);
    if total <= 0.0 {
        return Err(SolverError::InvalidParameter(
            "at least one feasible option is required".into(),
        ));
    }
    for w in &mut weights {
        *w /= total;
    }
    Ok(weights)
}

/// Builds one ant's schedule, cell by cell in nurse-major order. Under
/// the ACS variant every chosen component receives the local update
/// `tau <- (1 - phi) * tau + phi * tau0` as construction proceeds.
pub fn construct_solution(
    pheromone: &mut PheromoneMatrix,
    instance: &RosterInstance,
    params: &AcoParams,
    rng: &mut impl Rng,
) -> Schedule {
    let shift_count = instance.shift_count();
    let off_option = shift_count;
    let mut schedule = Schedule::empty(instance);
    let mut feasible = vec![false; instance.option_count()];
    let mut weights: Vec<f64> = Vec::with_capacity(instance.option_count());

    let staffable: Vec<bool> = (0..instance.nurse_count())
        .flat_map(|nurse| {
            (0..shift_count)
                .map(move |shift| (nurse, shift))
        })
        .map(|(nurse, shift)| {
            instance.skill_cover(nurse, shift) != SkillCover::Missing
        })
        .collect();

    for nurse in 0..instance.nurse_count() {
        // Consecutive night shifts immediately before the current day.
        let mut night_run = 0u32;
        for day in 0..instance.horizon_days {
            for shift in 0..shift_count {
                let would_complete_triple =
                    night_run >= 2 && instance.shifts[shift].is_night;
                feasible[shift] = staffable[nurse * shift_count + shift]
                    && !would_complete_triple;
            }
            feasible[off_option] = true;

            let total = fill_selection_weights(
                pheromone.row(nurse, day),
                &feasible,
                params,
                &mut weights,
            );
            let draw = rng.gen::<f64>() * total;
            let mut chosen = off_option;
            let mut acc = 0.0;
            for (option, &weight) in weights.iter().enumerate() {
                if weight <= 0.0 {
                    continue;
                }
                acc += weight;
                if draw < acc {
                    chosen = option;
                    break;
                }
            }

            if params.variant == AcoVariant::Acs {
                let tau = pheromone.component_mut(nurse, day, chosen);
                *tau = (1.0 - params.phi) * *tau + params.phi * params.tau0;
            }

            let cell = if chosen == off_option {
                Assignment::Off
            } else {
                Assignment::Shift(chosen)
            };
            schedule.set(nurse, day, cell).expect("cell in range");
            night_run = match cell {
                Assignment::Shift(s) if instance.shifts[s].is_night => {
                    night_run + 1
                }
                _ => 0,
            };
        }
    }
    schedule
}

/// Hook for the pseudocode's local-search step; identity for now.
fn local_search(_schedule: &mut Schedule) {}

/// Applies evaporation to every component, then the variant's deposits.
///
/// Under the elitist variant the worst ant in `ants` is replaced by the
/// best-so-far solution before any deposit. Under max-min every
/// component is clamped to `[tau_min, tau_max]` afterwards.
pub fn update_pheromone(
    pheromone: &mut PheromoneMatrix,
    ants: &mut [(Schedule, u64)],
    best_so_far: &(Schedule, u64),
    params: &AcoParams,
) {
    if params.variant == AcoVariant::Elitist && !ants.is_empty() {
        let worst = ants
            .iter()
            .enumerate()
            .max_by_key(|(i, (_, fitness))| (*fitness, std::cmp::Reverse(*i)))
            .map(|(i, _)| i)
            .unwrap();
        ants[worst] = best_so_far.clone();
    }

    for tau in &mut pheromone.tau {
        *tau *= 1.0 - params.zeta;
    }

    let delta = |fitness: u64| params.q_deposit / (1.0 + fitness as f64);
    match params.variant {
        AcoVariant::Basic => {
            for (schedule, fitness) in ants.iter() {
                pheromone.deposit(schedule, delta(*fitness));
            }
        }
        AcoVariant::Acs => {
            pheromone.deposit(&best_so_far.0, delta(best_so_far.1));
        }
        AcoVariant::MaxMin => {
            if let Some((schedule, fitness)) =
                ants.iter().min_by_key(|(_, fitness)| *fitness)
            {
                pheromone.deposit(schedule, delta(*fitness));
            }
            for tau in &mut pheromone.tau {
                *tau = tau.clamp(params.tau_min, params.tau_max);
            }
        }
        AcoVariant::Rank => {
            let mut order: Vec<usize> = (0..ants.len()).collect();
            order.sort_by_key(|&i| ants[i].1);
            for (rank, &i) in
                order.iter().take(params.rank_count).enumerate()
            {
                let multiplier = (params.rank_count - rank) as f64;
                let (schedule, fitness) = &ants[i];
                pheromone.deposit(schedule, multiplier * delta(*fitness));
            }
        }
        AcoVariant::Elitist => {
            for (schedule, fitness) in ants.iter() {
                pheromone.deposit(schedule, delta(*fitness));
            }
            pheromone.deposit(
                &best_so_far.0,
                params.elite_weight * delta(best_so_far.1),
            );
        }
    }
}

/// Full ACO run: construct all ants, evaluate through the executor,
/// update pheromone, for `params.iterations` rounds. Deterministic for
/// a fixed seed and independent of the executor's worker count.
pub fn run_aco(
    instance: &RosterInstance,
    params: &AcoParams,
    executor: &ExecutorConfig,
) -> Result<RunResult, SolverError> {
    params.validate()?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut pheromone = init_pheromone(instance, params)?;
    let mut best: Option<(Schedule, u64)> = None;
    let mut history = Vec::with_capacity(params.iterations);
    let mut evaluations = 0u64;

    for _ in 0..params.iterations {
        let mut schedules: Vec<Schedule> = (0..params.ants)
            .map(|_| construct_solution(&mut pheromone, instance, params, &mut rng))
            .collect();
        for schedule in &mut schedules {
            local_search(schedule);
        }
        let breakdowns = evaluate_batch(&schedules, instance, executor)?;
        evaluations += schedules.len() as u64;

        let mut ants: Vec<(Schedule, u64)> = schedules
            .into_iter()
            .zip(breakdowns.iter().map(|b| b.fitness))
            .collect();
        for (schedule, fitness) in &ants {
            if best.as_ref().is_none_or(|(_, bf)| fitness < bf) {
                best = Some((schedule.clone(), *fitness));
            }
        }
        let best_pair = best.clone().expect("at least one ant evaluated");
        update_pheromone(&mut pheromone, &mut ants, &best_pair, params);
        history.push(best_pair.1);
    }

    let (best_schedule, best_fitness) = best.expect("iterations >= 1");
    Ok(RunResult {
        best_schedule,
        best_fitness,
        history,
        wall_time_s: start.elapsed().as_secs_f64(),
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{check_hard, evaluate};
    use crate::testutil::{put, ward};

    fn params(variant: AcoVariant) -> AcoParams {
        AcoParams { variant, ..AcoParams::default() }
    }

    #[test]
    fn init_is_uniform_at_tau0() {
        let instance = ward(13, 28);
        let pheromone =
            init_pheromone(&instance, &params(AcoVariant::Basic)).unwrap();
        assert_eq!(pheromone.values().len(), 13 * 28 * 6);
        assert!(pheromone.values().iter().all(|&t| t == 1.0));
    }

    #[test]
    fn init_at_tau_max_is_allowed() {
        let instance = ward(2, 7);
        let p = AcoParams {
            variant: AcoVariant::MaxMin,
            tau0: 10.0,
            ..AcoParams::default()
        };
        let pheromone = init_pheromone(&instance, &p).unwrap();
        assert!(pheromone.values().iter().all(|&t| t == 10.0));
    }

    #[test]
    fn zero_tau0_is_a_parameter_error() {
        let instance = ward(2, 7);
        let p = AcoParams { tau0: 0.0, ..AcoParams::default() };
        assert!(matches!(
            init_pheromone(&instance, &p),
            Err(SolverError::InvalidParameter(_))
        ));
    }

    #[test]
    fn selection_equal_tau_is_uniform() {
        let p = AcoParams::default();
        let probs =
            selection_probabilities(&[1.0, 1.0], &[true, true], &p).unwrap();
        assert_eq!(probs, vec![0.5, 0.5]);
    }

    #[test]
    fn selection_is_proportional_for_alpha_one() {
        let p = AcoParams::default();
        let probs =
            selection_probabilities(&[2.0, 1.0], &[true, true], &p).unwrap();
        assert!((probs[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((probs[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn selection_alpha_zero_is_uniform() {
        let p = AcoParams { alpha: 0.0, ..AcoParams::default() };
        let probs =
            selection_probabilities(&[9.0, 0.5, 2.0], &[true, true, true], &p)
                .unwrap();
        for prob in probs {
            assert!((prob - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn selection_masks_infeasible_and_normalizes() {
        let p = AcoParams { alpha: 1.7, ..AcoParams::default() };
        let probs = selection_probabilities(
            &[3.0, 5.0, 2.0, 7.0],
            &[true, false, true, true],
            &p,
        )
        .unwrap();
        assert_eq!(probs[1], 0.0);
        let sum: f64 = probs.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn selection_invariant_under_row_scaling() {
        let p = AcoParams { alpha: 2.5, ..AcoParams::default() };
        let row = [0.4, 1.3, 2.2];
        let mask = [true, true, true];
        let base = selection_probabilities(&row, &mask, &p).unwrap();
        let scaled_row: Vec<f64> = row.iter().map(|t| t * 37.5).collect();
        let scaled = selection_probabilities(&scaled_row, &mask, &p).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn selection_requires_a_feasible_option() {
        let p = AcoParams::default();
        assert!(matches!(
            selection_probabilities(&[1.0, 1.0], &[false, false], &p),
            Err(SolverError::InvalidParameter(_))
        ));
    }

    #[test]
    fn construction_respects_hard_masks() {
        // Nurse 1 lacks the head-nurse skill, so DH must never appear in
        // its row, and no row may contain three straight nights.
        let instance = ward(2, 10);
        let p = params(AcoVariant::Basic);
        let mut pheromone = init_pheromone(&instance, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dh = instance.shift_index("DH").unwrap();
        for _ in 0..200 {
            let schedule =
                construct_solution(&mut pheromone, &instance, &p, &mut rng);
            assert!(!schedule
                .row(1)
                .iter()
                .any(|c| *c == Assignment::Shift(dh)));
            let report = check_hard(&schedule, &instance).unwrap();
            assert_eq!(report.hc1, 0);
            assert_eq!(report.hc4, 0);
        }
    }

    #[test]
    fn construction_is_deterministic_per_seed() {
        let instance = ward(3, 14);
        let p = params(AcoVariant::Basic);
        let pheromone = init_pheromone(&instance, &p).unwrap();
        let mut a_rng = ChaCha8Rng::seed_from_u64(9);
        let mut b_rng = ChaCha8Rng::seed_from_u64(9);
        let a = construct_solution(
            &mut pheromone.clone(),
            &instance,
            &p,
            &mut a_rng,
        );
        let b = construct_solution(
            &mut pheromone.clone(),
            &instance,
            &p,
            &mut b_rng,
        );
        assert_eq!(a, b);
    }

    #[test]
    fn evaporation_halves_untouched_components() {
        // One nurse, one day, one shift: the ant sits on Off, so the
        // shift component only evaporates.
        let instance = ward(1, 1);
        let p = params(AcoVariant::Basic);
        let mut pheromone = init_pheromone(&instance, &p).unwrap();
        let mut ants = vec![(Schedule::empty(&instance), 0u64)];
        let best = ants[0].clone();
        update_pheromone(&mut pheromone, &mut ants, &best, &p);
        assert_eq!(pheromone.get(0, 0, 0), 0.5);
        // The chosen Off component evaporates then gains q/(1+0).
        assert_eq!(pheromone.get(0, 0, 5), 0.5 + 100.0);
    }

    #[test]
    fn two_basic_ants_sharing_a_component_deposit_twice() {
        let instance = ward(1, 1);
        let p = AcoParams { q_deposit: 1.0, ..params(AcoVariant::Basic) };
        let mut pheromone = init_pheromone(&instance, &p).unwrap();
        let mut schedule = Schedule::empty(&instance);
        put(&mut schedule, &instance, 0, 0, "V");
        let mut ants = vec![(schedule.clone(), 0u64), (schedule.clone(), 0u64)];
        let best = (schedule, 0u64);
        update_pheromone(&mut pheromone, &mut ants, &best, &p);
        let v = instance.shift_index("V").unwrap();
        assert_eq!(pheromone.get(0, 0, v), 0.5 + 2.0);
    }

    #[test]
    fn maxmin_clamps_deposits_to_tau_max() {
        let instance = ward(1, 1);
        let p = AcoParams {
            tau_max: 1.2,
            q_deposit: 100.0,
            ..params(AcoVariant::MaxMin)
        };
        let mut pheromone = init_pheromone(&instance, &p).unwrap();
        let mut schedule = Schedule::empty(&instance);
        put(&mut schedule, &instance, 0, 0, "V");
        let mut ants = vec![(schedule.clone(), 0u64)];
        let best = (schedule, 0u64);
        update_pheromone(&mut pheromone, &mut ants, &best, &p);
        let v = instance.shift_index("V").unwrap();
        assert_eq!(pheromone.get(0, 0, v), 1.2);
        // Untouched components are clamped up to tau_min.
        for &tau in pheromone.values() {
            assert!(tau >= p.tau_min && tau <= p.tau_max);
        }
    }

    #[test]
    fn rank_deposits_scale_with_rank() {
        let instance = ward(1, 1);
        let p = AcoParams {
            rank_count: 2,
            q_deposit: 1.0,
            zeta: 0.5,
            ..params(AcoVariant::Rank)
        };
        let mut pheromone = init_pheromone(&instance, &p).unwrap();
        let mut best_ant = Schedule::empty(&instance);
        put(&mut best_ant, &instance, 0, 0, "V");
        let mut middle = Schedule::empty(&instance);
        put(&mut middle, &instance, 0, 0, "D");
        let worst = Schedule::empty(&instance);
        let best = (best_ant.clone(), 0u64);
        let mut ants =
            vec![(worst, 9u64), (best_ant, 0u64), (middle, 1u64)];
        update_pheromone(&mut pheromone, &mut ants, &best, &p);
        let v = instance.shift_index("V").unwrap();
        let d = instance.shift_index("D").unwrap();
        // Best rank multiplier 2, runner-up 1, third drops out.
        assert_eq!(pheromone.get(0, 0, v), 0.5 + 2.0 * (1.0 / 1.0));
        assert_eq!(pheromone.get(0, 0, d), 0.5 + 1.0 * (1.0 / 2.0));
        assert_eq!(pheromone.get(0, 0, 5), 0.5);
    }

    #[test]
    fn elitist_replaces_worst_with_best_so_far() {
        let instance = ward(1, 1);
        let p = params(AcoVariant::Elitist);
        let mut pheromone = init_pheromone(&instance, &p).unwrap();
        let mut good = Schedule::empty(&instance);
        put(&mut good, &instance, 0, 0, "V");
        let mut bad = Schedule::empty(&instance);
        put(&mut bad, &instance, 0, 0, "D");
        let best = (good.clone(), 3u64);
        let mut ants = vec![(bad, 50u64), (good.clone(), 7u64)];
        update_pheromone(&mut pheromone, &mut ants, &best, &p);
        assert_eq!(ants[0], best);
        assert_eq!(ants[1].1, 7);
    }

    #[test]
    fn never_deposited_component_decays_geometrically() {
        // DH is skill-masked for nurse 1, so its component is never
        // chosen and never deposited under the basic variant.
        let instance = ward(2, 7);
        let p = AcoParams {
            ants: 4,
            rank_count: 4,
            ..params(AcoVariant::Basic)
        };
        let mut pheromone = init_pheromone(&instance, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dh = instance.shift_index("DH").unwrap();
        let exec = ExecutorConfig::default();
        for round in 1..=12 {
            let mut schedules: Vec<Schedule> = (0..p.ants)
                .map(|_| {
                    construct_solution(&mut pheromone, &instance, &p, &mut rng)
                })
                .collect();
            let fits = evaluate_batch(&schedules, &instance, &exec).unwrap();
            let mut ants: Vec<(Schedule, u64)> = schedules
                .drain(..)
                .zip(fits.iter().map(|b| b.fitness))
                .collect();
            let best = ants.iter().min_by_key(|(_, f)| *f).unwrap().clone();
            update_pheromone(&mut pheromone, &mut ants, &best, &p);
            let expected = p.tau0 * (1.0 - p.zeta).powi(round);
            let got = pheromone.get(1, 3, dh);
            assert!(
                (got - expected).abs() <= 1e-9 * expected,
                "round {round}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn run_rejects_zero_iterations() {
        let instance = ward(2, 7);
        let p = AcoParams { iterations: 0, ..AcoParams::default() };
        assert!(matches!(
            run_aco(&instance, &p, &ExecutorConfig::default()),
            Err(SolverError::InvalidParameter(_))
        ));
    }

    #[test]
    fn run_history_is_non_increasing_and_best_reevaluates() {
        let instance = ward(4, 14);
        for variant in [
            AcoVariant::Basic,
            AcoVariant::Acs,
            AcoVariant::MaxMin,
            AcoVariant::Rank,
            AcoVariant::Elitist,
        ] {
            let p = AcoParams {
                ants: 6,
                iterations: 15,
                rank_count: 3,
                seed: 21,
                variant,
                ..AcoParams::default()
            };
            let result =
                run_aco(&instance, &p, &ExecutorConfig::default()).unwrap();
            assert_eq!(result.history.len(), 15);
            assert!(result.history.windows(2).all(|w| w[1] <= w[0]));
            assert_eq!(
                evaluate(&result.best_schedule, &instance).unwrap().fitness,
                result.best_fitness,
                "variant {variant}"
            );
            assert_eq!(result.evaluations, 6 * 15);
        }
    }

    #[test]
    fn run_is_deterministic_per_seed() {
        let instance = ward(3, 14);
        let p = AcoParams {
            ants: 5,
            iterations: 10,
            rank_count: 3,
            seed: 77,
            variant: AcoVariant::Elitist,
            ..AcoParams::default()
        };
        let exec = ExecutorConfig::default();
        let a = run_aco(&instance, &p, &exec).unwrap();
        let b = run_aco(&instance, &p, &exec).unwrap();
        assert!(a.same_outcome(&b));
    }
}
