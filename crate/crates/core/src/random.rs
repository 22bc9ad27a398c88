//! Random instance and schedule generation for tests and benchmarks.
//!
//! Generated instances exercise every configurable field (requests,
//! weights, limits, bank holidays, successions, alternative skills) and
//! always satisfy the instance invariants.

use std::collections::BTreeSet;

use rand::Rng;

use crate::model::{
    Assignment, ConstraintConfig, Nurse, RosterInstance, Schedule, ShiftType,
    SoftConstraint,
};

/// Upper bounds (inclusive) on the generated instance dimensions.
#[derive(Debug, Clone)]
pub struct InstanceShape {
    pub max_nurses: usize,
    pub max_days: usize,
    pub max_shifts: usize,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape { max_nurses: 8, max_days: 28, max_shifts: 5 }
    }
}

impl InstanceShape {
    /// Small grids where brute-force checking stays cheap.
    pub fn desk() -> Self {
        InstanceShape { max_nurses: 3, max_days: 5, max_shifts: 2 }
    }
}

const SKILLS: [&str; 2] = ["gen", "lead"];

pub fn random_instance(
    rng: &mut impl Rng,
    shape: &InstanceShape,
) -> RosterInstance {
    let nurse_count = rng.gen_range(1..=shape.max_nurses);
    let day_count = rng.gen_range(1..=shape.max_days);
    let shift_count = rng.gen_range(1..=shape.max_shifts);

    let shifts: Vec<ShiftType> = (0..shift_count)
        .map(|i| {
            let start = rng.gen_range(0..1440u32);
            let mut end = rng.gen_range(0..1440u32);
            if end == start {
                end = (end + 480) % 1440;
            }
            let required_skill = match rng.gen_range(0..3) {
                0 => None,
                _ => Some(SKILLS[rng.gen_range(0..SKILLS.len())].to_string()),
            };
            ShiftType {
                id: format!("S{i}"),
                start,
                end,
                required_skill,
                is_night: rng.gen_bool(0.3),
            }
        })
        .collect();

    let nurses: Vec<Nurse> = (0..nurse_count)
        .map(|id| {
            let mut nurse = Nurse::new(id, format!("n{id:02}"));
            if id == 0 {
                // Guarantees every required skill is covered somewhere.
                nurse.skills =
                    SKILLS.iter().map(|s| s.to_string()).collect();
            } else {
                for skill in SKILLS {
                    if rng.gen_bool(0.6) {
                        nurse.skills.insert(skill.to_string());
                    }
                }
            }
            nurse.max_work_minutes = rng.gen_range(60..=4000);
            for day in 0..day_count {
                if rng.gen_bool(0.1) {
                    nurse.requested_days_off.insert(day);
                }
                for shift in &shifts {
                    match rng.gen_range(0..20) {
                        0 => {
                            nurse
                                .requested_shifts_on
                                .insert((day, shift.id.clone()));
                        }
                        1 => {
                            nurse
                                .requested_shifts_off
                                .insert((day, shift.id.clone()));
                        }
                        _ => {}
                    }
                }
            }
            nurse
        })
        .collect();

    let mut config = ConstraintConfig {
        forbidden_successions: BTreeSet::new(),
        alternative_skills: BTreeSet::new(),
        ..ConstraintConfig::default()
    };
    for c in SoftConstraint::ALL {
        config.weights.set(c, rng.gen_range(0..=60));
    }
    config.limits.max_consecutive_free_days = rng.gen_range(1..=4);
    config.limits.max_shift_types = rng.gen_range(1..=3);
    config.limits.max_consecutive_same_shift = rng.gen_range(1..=4);
    config.limits.max_consecutive_working_days = rng.gen_range(1..=5);
    config.limits.max_shift_types_per_week = rng.gen_range(1..=3);
    config.limits.max_shifts_per_weekday = rng.gen_range(1..=4);
    config.limits.min_rest_minutes = rng.gen_range(30..=1000);
    config.limits.max_working_bank_holidays = rng.gen_range(1..=2);
    config.limits.max_shifts_total = rng.gen_range(1..=12);
    config.limits.min_consecutive_free_days = rng.gen_range(1..=3);
    config.limits.max_working_weekends_in_four_weeks = rng.gen_range(1..=3);
    config.limits.min_consecutive_working_days = rng.gen_range(1..=3);
    config.limits.max_blank_per_day = rng.gen_range(1..=5);
    for day in 0..day_count {
        if rng.gen_bool(0.1) {
            config.bank_holidays.insert(day);
        }
    }
    for earlier in &shifts {
        for later in &shifts {
            if rng.gen_bool(0.15) {
                config
                    .forbidden_successions
                    .insert((earlier.id.clone(), later.id.clone()));
            }
        }
    }
    if rng.gen_bool(0.4) {
        config
            .alternative_skills
            .insert(("gen".to_string(), "lead".to_string()));
    }
    if rng.gen_bool(0.2) {
        config
            .alternative_skills
            .insert(("lead".to_string(), "gen".to_string()));
    }

    let weekend_presets: [&[u8]; 4] = [&[5, 6], &[5, 6], &[6, 0], &[2]];
    let weekend_dow: BTreeSet<u8> = weekend_presets
        [rng.gen_range(0..weekend_presets.len())]
    .iter()
    .copied()
    .collect();

    RosterInstance::new(day_count, nurses, shifts, config, weekend_dow)
        .expect("generated instance must be valid")
}

/// Uniform random assignment per cell over all shifts plus `Off`.
pub fn random_schedule(
    rng: &mut impl Rng,
    instance: &RosterInstance,
) -> Schedule {
    let mut schedule = Schedule::empty(instance);
    for nurse in 0..instance.nurse_count() {
        for day in 0..instance.horizon_days {
            let option = rng.gen_range(0..instance.option_count());
            let value = if option == instance.shift_count() {
                Assignment::Off
            } else {
                Assignment::Shift(option)
            };
            schedule.set(nurse, day, value).unwrap();
        }
    }
    schedule
}
