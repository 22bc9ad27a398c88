//! Hard-constraint checking and the weighted soft-constraint penalty.
//!
//! [`evaluate`] produces the fitness both solvers minimize: the weighted
//! sum of all soft-constraint violation counts plus
//! [`HARD_UNIT_PENALTY`](crate::model::HARD_UNIT_PENALTY) per hard
//! violation. Everything here is pure and safe to call concurrently on
//! shared read-only data.

use thiserror::Error;

use crate::model::{
    Assignment, RosterInstance, Schedule, SkillCover, SoftConstraint,
    HARD_UNIT_PENALTY, MINUTES_PER_DAY, SOFT_CONSTRAINT_COUNT,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error(
        "schedule shape {got_nurses}x{got_days} does not match instance \
         {want_nurses}x{want_days}"
    )]
    DimensionMismatch {
        want_nurses: usize,
        want_days: usize,
        got_nurses: usize,
        got_days: usize,
    },
}

fn ensure_match(
    schedule: &Schedule,
    instance: &RosterInstance,
) -> Result<(), EvalError> {
    if schedule.matches(instance) {
        Ok(())
    } else {
        Err(EvalError::DimensionMismatch {
            want_nurses: instance.nurse_count(),
            want_days: instance.horizon_days,
            got_nurses: schedule.nurse_count(),
            got_days: schedule.horizon_days(),
        })
    }
}

/// Per-hard-constraint violation counts. HC2 (one shift per nurse per
/// day) is structurally unviolable and always zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HardViolationReport {
    /// Windows of three consecutive night shifts.
    pub hc1: u64,
    /// Always zero; kept so reports stay uniform.
    pub hc2: u64,
    /// Days with more blank (off) nurses than allowed.
    pub hc3: u64,
    /// Cells whose shift requires a skill the nurse cannot cover.
    pub hc4: u64,
}

impl HardViolationReport {
    pub fn total(&self) -> u64 {
        self.hc1 + self.hc2 + self.hc3 + self.hc4
    }

    pub fn feasible(&self) -> bool {
        self.total() == 0
    }
}

/// Violation counts, their weighted penalties and the resulting fitness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenaltyBreakdown {
    pub violations: [u64; SOFT_CONSTRAINT_COUNT],
    pub weighted: [u64; SOFT_CONSTRAINT_COUNT],
    /// Sum of all weighted soft penalties.
    pub total: u64,
    pub hard: HardViolationReport,
    pub hard_penalty: u64,
    /// `total + hard_penalty`; the value the solvers minimize.
    pub fitness: u64,
}

impl PenaltyBreakdown {
    pub fn violation_count(&self, c: SoftConstraint) -> u64 {
        self.violations[c.index()]
    }

    pub fn weighted_penalty(&self, c: SoftConstraint) -> u64 {
        self.weighted[c.index()]
    }

    pub fn feasible(&self) -> bool {
        self.hard.feasible()
    }
}

pub fn check_hard(
    schedule: &Schedule,
    instance: &RosterInstance,
) -> Result<HardViolationReport, EvalError> {
    ensure_match(schedule, instance)?;
    Ok(hard_counts(schedule, instance))
}

fn hard_counts(
    schedule: &Schedule,
    instance: &RosterInstance,
) -> HardViolationReport {
    let mut report = HardViolationReport::default();
    let days = instance.horizon_days;

    for nurse in 0..instance.nurse_count() {
        let row = schedule.row(nurse);
        let night = |cell: Assignment| {
            cell.shift().is_some_and(|s| instance.shifts[s].is_night)
        };
        for window in row.windows(3) {
            if window.iter().all(|&c| night(c)) {
                report.hc1 += 1;
            }
        }
        for cell in row {
            if let Assignment::Shift(s) = cell {
                if instance.skill_cover(nurse, *s) == SkillCover::Missing {
                    report.hc4 += 1;
                }
            }
        }
    }

    let blank_limit = instance.constraints.limits.max_blank_per_day;
    for day in 0..days {
        let blanks = (0..instance.nurse_count())
            .filter(|&n| schedule.get(n, day) == Assignment::Off)
            .count() as u32;
        if blanks > blank_limit {
            report.hc3 += 1;
        }
    }
    report
}

/// Visits every maximal run of cells sharing the same `key` value.
fn for_each_run<K: Copy + PartialEq>(
    row: &[Assignment],
    key: impl Fn(Assignment) -> Option<K>,
    mut visit: impl FnMut(K, u32),
) {
    let mut current: Option<(K, u32)> = None;
    for &cell in row {
        match key(cell) {
            Some(k) => match &mut current {
                Some((run_key, len)) if *run_key == k => *len += 1,
                _ => {
                    if let Some((run_key, len)) = current.take() {
                        visit(run_key, len);
                    }
                    current = Some((k, 1));
                }
            },
            None => {
                if let Some((run_key, len)) = current.take() {
                    visit(run_key, len);
                }
            }
        }
    }
    if let Some((run_key, len)) = current {
        visit(run_key, len);
    }
}

fn off_key(cell: Assignment) -> Option<()> {
    (!cell.is_working()).then_some(())
}

fn working_key(cell: Assignment) -> Option<()> {
    cell.is_working().then_some(())
}

fn over(value: u32, limit: u32) -> u64 {
    u64::from(value.saturating_sub(limit))
}

/// Shift end as minutes from that day's midnight; exceeds 1440 when the
/// shift wraps into the next day.
fn shift_end_abs(instance: &RosterInstance, shift: usize) -> u32 {
    let s = &instance.shifts[shift];
    s.start + s.duration_minutes()
}

/// Violation count for one soft constraint, independent of its weight.
pub fn soft_penalty(
    schedule: &Schedule,
    instance: &RosterInstance,
    constraint: SoftConstraint,
) -> Result<u64, EvalError> {
    ensure_match(schedule, instance)?;
    Ok(count_soft(schedule, instance, constraint))
}

fn count_soft(
    schedule: &Schedule,
    instance: &RosterInstance,
    constraint: SoftConstraint,
) -> u64 {
    use SoftConstraint::*;
    let limits = &instance.constraints.limits;
    let mut count = 0u64;
    match constraint {
        MaxConsecutiveFreeDays => {
            for nurse in 0..instance.nurse_count() {
                for_each_run(schedule.row(nurse), off_key, |_, len| {
                    count += over(len, limits.max_consecutive_free_days);
                });
            }
        }
        MaxHoursWorked => {
            for nurse in 0..instance.nurse_count() {
                let worked: u64 = schedule
                    .row(nurse)
                    .iter()
                    .filter_map(|c| c.shift())
                    .map(|s| u64::from(instance.shifts[s].duration_minutes()))
                    .sum();
                let cap = u64::from(instance.nurses[nurse].max_work_minutes);
                if worked > cap {
                    count += (worked - cap).div_ceil(60);
                }
            }
        }
        CompleteWeekends => {
            for (first, last) in instance.weekend_blocks() {
                for nurse in 0..instance.nurse_count() {
                    let worked = (first..=last)
                        .filter(|&d| schedule.get(nurse, d).is_working())
                        .count();
                    if worked > 0 && worked < last - first + 1 {
                        count += 1;
                    }
                }
            }
        }
        MaxShiftTypes => {
            let mut seen = vec![false; instance.shift_count()];
            for nurse in 0..instance.nurse_count() {
                seen.fill(false);
                for cell in schedule.row(nurse) {
                    if let Some(s) = cell.shift() {
                        seen[s] = true;
                    }
                }
                let distinct = seen.iter().filter(|b| **b).count() as u32;
                count += over(distinct, limits.max_shift_types);
            }
        }
        RequestedShiftsOn => {
            for nurse in &instance.nurses {
                for (day, shift_id) in &nurse.requested_shifts_on {
                    let wanted = instance.shift_index(shift_id).unwrap();
                    if schedule.get(nurse.id, *day) != Assignment::Shift(wanted)
                    {
                        count += 1;
                    }
                }
            }
        }
        ConsecutiveShiftTypes => {
            for nurse in 0..instance.nurse_count() {
                for_each_run(schedule.row(nurse), Assignment::shift, |_, len| {
                    count += over(len, limits.max_consecutive_same_shift);
                });
            }
        }
        RequestedShiftsOff => {
            for nurse in &instance.nurses {
                for (day, shift_id) in &nurse.requested_shifts_off {
                    let avoided = instance.shift_index(shift_id).unwrap();
                    if schedule.get(nurse.id, *day) == Assignment::Shift(avoided)
                    {
                        count += 1;
                    }
                }
            }
        }
        MaxConsecutiveWorkingDays => {
            for nurse in 0..instance.nurse_count() {
                for_each_run(schedule.row(nurse), working_key, |_, len| {
                    count += over(len, limits.max_consecutive_working_days);
                });
            }
        }
        MaxShiftTypesPerWeek => {
            let mut seen = vec![false; instance.shift_count()];
            for nurse in 0..instance.nurse_count() {
                for week in schedule.row(nurse).chunks(7) {
                    seen.fill(false);
                    for cell in week {
                        if let Some(s) = cell.shift() {
                            seen[s] = true;
                        }
                    }
                    let distinct = seen.iter().filter(|b| **b).count() as u32;
                    count += over(distinct, limits.max_shift_types_per_week);
                }
            }
        }
        RequestedDaysOff => {
            for nurse in &instance.nurses {
                for &day in &nurse.requested_days_off {
                    if schedule.get(nurse.id, day).is_working() {
                        count += 1;
                    }
                }
            }
        }
        ShiftTypeSuccessions => {
            let forbidden = &instance.constraints.forbidden_successions;
            for nurse in 0..instance.nurse_count() {
                for pair in schedule.row(nurse).windows(2) {
                    if let (Assignment::Shift(a), Assignment::Shift(b)) =
                        (pair[0], pair[1])
                    {
                        let key = (
                            instance.shifts[a].id.clone(),
                            instance.shifts[b].id.clone(),
                        );
                        if forbidden.contains(&key) {
                            count += 1;
                        }
                    }
                }
            }
        }
        MaxShiftsPerWeekday => {
            for nurse in 0..instance.nurse_count() {
                let mut per_weekday = [0u32; 7];
                for (day, cell) in schedule.row(nurse).iter().enumerate() {
                    if cell.is_working() {
                        per_weekday[day % 7] += 1;
                    }
                }
                for c in per_weekday {
                    count += over(c, limits.max_shifts_per_weekday);
                }
            }
        }
        SkilledShifts | AlternativeSkill => {
            for nurse in 0..instance.nurse_count() {
                for cell in schedule.row(nurse) {
                    if let Some(s) = cell.shift() {
                        if instance.skill_cover(nurse, s)
                            == SkillCover::Alternative
                        {
                            count += 1;
                        }
                    }
                }
            }
        }
        MinTimeBetweenShifts => {
            for nurse in 0..instance.nurse_count() {
                for pair in schedule.row(nurse).windows(2) {
                    if let (Assignment::Shift(a), Assignment::Shift(b)) =
                        (pair[0], pair[1])
                    {
                        let rest = i64::from(MINUTES_PER_DAY)
                            + i64::from(instance.shifts[b].start)
                            - i64::from(shift_end_abs(instance, a));
                        if rest < i64::from(limits.min_rest_minutes) {
                            count += 1;
                        }
                    }
                }
            }
        }
        NightShiftsBeforeFreeWeekend => {
            for (first, last) in instance.weekend_blocks() {
                if first == 0 {
                    continue;
                }
                for nurse in 0..instance.nurse_count() {
                    let free = (first..=last)
                        .all(|d| !schedule.get(nurse, d).is_working());
                    let night_before = schedule
                        .get(nurse, first - 1)
                        .shift()
                        .is_some_and(|s| instance.shifts[s].is_night);
                    if free && night_before {
                        count += 1;
                    }
                }
            }
        }
        MaxWorkingBankHolidays => {
            for nurse in 0..instance.nurse_count() {
                let worked = instance
                    .constraints
                    .bank_holidays
                    .iter()
                    .filter(|&&d| schedule.get(nurse, d).is_working())
                    .count() as u32;
                count += over(worked, limits.max_working_bank_holidays);
            }
        }
        MaxNumberOfShifts => {
            for nurse in 0..instance.nurse_count() {
                let assigned = schedule.working_days(nurse) as u32;
                count += over(assigned, limits.max_shifts_total);
            }
        }
        MinConsecutiveFreeDays => {
            for nurse in 0..instance.nurse_count() {
                for_each_run(schedule.row(nurse), off_key, |_, len| {
                    if len < limits.min_consecutive_free_days {
                        count += 1;
                    }
                });
            }
        }
        MaxWorkingWeekendsInFourWeeks => {
            let windows = instance.horizon_days.div_ceil(28).max(1);
            let blocks = instance.weekend_blocks();
            for nurse in 0..instance.nurse_count() {
                let mut worked_per_window = vec![0u32; windows];
                for &(first, last) in &blocks {
                    let worked = (first..=last)
                        .any(|d| schedule.get(nurse, d).is_working());
                    if worked {
                        worked_per_window[first / 28] += 1;
                    }
                }
                for c in worked_per_window {
                    count +=
                        over(c, limits.max_working_weekends_in_four_weeks);
                }
            }
        }
        MinConsecutiveWorkingDays => {
            for nurse in 0..instance.nurse_count() {
                for_each_run(schedule.row(nurse), working_key, |_, len| {
                    if len < limits.min_consecutive_working_days {
                        count += 1;
                    }
                });
            }
        }
    }
    count
}

/// Full evaluation: every soft count, its weighted penalty, the hard
/// report and the combined fitness. Pure and deterministic.
pub fn evaluate(
    schedule: &Schedule,
    instance: &RosterInstance,
) -> Result<PenaltyBreakdown, EvalError> {
    ensure_match(schedule, instance)?;
    let mut violations = [0u64; SOFT_CONSTRAINT_COUNT];
    let mut weighted = [0u64; SOFT_CONSTRAINT_COUNT];
    let mut total = 0u64;
    for constraint in SoftConstraint::ALL {
        let idx = constraint.index();
        violations[idx] = count_soft(schedule, instance, constraint);
        weighted[idx] =
            violations[idx] * instance.constraints.weights.get(constraint);
        total += weighted[idx];
    }
    let hard = hard_counts(schedule, instance);
    let hard_penalty = hard.total() * HARD_UNIT_PENALTY;
    Ok(PenaltyBreakdown {
        violations,
        weighted,
        total,
        hard,
        hard_penalty,
        fitness: total + hard_penalty,
    })
}
