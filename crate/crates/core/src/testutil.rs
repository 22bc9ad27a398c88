//! Fixture builders shared by the unit tests.

use crate::model::{
    default_weekend_dow, Assignment, ConstraintConfig, Nurse, RosterInstance,
    Schedule, ShiftType,
};

/// The five-shift catalog: early, day, head-nurse day, late, night.
pub fn catalog() -> Vec<ShiftType> {
    let shift = |id: &str, start: u32, end: u32, skill: &str, night: bool| {
        ShiftType {
            id: id.to_string(),
            start,
            end,
            required_skill: Some(skill.to_string()),
            is_night: night,
        }
    };
    vec![
        shift("V", 6 * 60, 14 * 60, "nurse", false),
        shift("D", 8 * 60, 17 * 60, "nurse", false),
        shift("DH", 8 * 60, 17 * 60, "head_nurse", false),
        shift("L", 14 * 60, 22 * 60, "nurse", false),
        shift("N", 22 * 60, 6 * 60, "nurse", true),
    ]
}

/// Ward with the five-shift catalog; nurse 0 doubles as head nurse.
pub fn ward(nurse_count: usize, horizon: usize) -> RosterInstance {
    ward_with(nurse_count, horizon, ConstraintConfig::default())
}

pub fn ward_with(
    nurse_count: usize,
    horizon: usize,
    config: ConstraintConfig,
) -> RosterInstance {
    let nurses = (0..nurse_count)
        .map(|id| {
            let mut nurse = Nurse::new(id, format!("n{id}")).with_skill("nurse");
            if id == 0 {
                nurse.skills.insert("head_nurse".to_string());
            }
            nurse
        })
        .collect();
    RosterInstance::new(
        horizon,
        nurses,
        catalog(),
        config,
        default_weekend_dow(),
    )
    .unwrap()
}

pub fn put(s: &mut Schedule, i: &RosterInstance, n: usize, d: usize, id: &str) {
    let shift = i.shift_index(id).unwrap();
    s.set(n, d, Assignment::Shift(shift)).unwrap();
}
