//! Hand-built instances shared by the integration suites.

use rostering::model::{
    default_weekend_dow, Assignment, ConstraintConfig, Nurse, RosterInstance,
    Schedule, ShiftType,
};

/// The five-shift catalog used throughout: early, day, head-nurse day,
/// late and a night shift wrapping past midnight.
pub fn five_shift_catalog() -> Vec<ShiftType> {
    let shift = |id: &str, start: u32, end: u32, skill: &str, night: bool| ShiftType {
        id: id.to_string(),
        start,
        end,
        required_skill: Some(skill.to_string()),
        is_night: night,
    };
    vec![
        shift("V", 6 * 60, 14 * 60, "nurse", false),
        shift("D", 8 * 60, 17 * 60, "nurse", false),
        shift("DH", 8 * 60, 17 * 60, "head_nurse", false),
        shift("L", 14 * 60, 22 * 60, "nurse", false),
        shift("N", 22 * 60, 6 * 60, "nurse", true),
    ]
}

/// A ward with the five-shift catalog and default constraints. The first
/// two nurses double as head nurses.
pub fn ward_instance(nurse_count: usize, horizon_days: usize) -> RosterInstance {
    ward_instance_with(nurse_count, horizon_days, ConstraintConfig::default())
}

pub fn ward_instance_with(
    nurse_count: usize,
    horizon_days: usize,
    constraints: ConstraintConfig,
) -> RosterInstance {
    let nurses = (0..nurse_count)
        .map(|id| {
            let mut nurse =
                Nurse::new(id, format!("n{id:02}")).with_skill("nurse");
            if id < 2 {
                nurse.skills.insert("head_nurse".to_string());
            }
            nurse
        })
        .collect();
    RosterInstance::new(
        horizon_days,
        nurses,
        five_shift_catalog(),
        constraints,
        default_weekend_dow(),
    )
    .unwrap()
}

/// Builds a schedule from (nurse, day, shift-id) triples; all other
/// cells stay `Off`.
pub fn schedule_of(
    instance: &RosterInstance,
    cells: &[(usize, usize, &str)],
) -> Schedule {
    let mut schedule = Schedule::empty(instance);
    for (nurse, day, id) in cells {
        let shift = instance
            .shift_index(id)
            .unwrap_or_else(|| panic!("unknown shift {id}"));
        schedule.set(*nurse, *day, Assignment::Shift(shift)).unwrap();
    }
    schedule
}
