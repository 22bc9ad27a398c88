//! Brute-force reference evaluator.
//!
//! Re-derives every hard and soft count directly from the rule
//! definitions with plain day/window enumeration. Deliberately written
//! without any of the library's counting code so it can serve as an
//! independent oracle for `rostering::evaluate`.

use rostering::model::{
    Assignment, RosterInstance, Schedule, HARD_UNIT_PENALTY,
    SOFT_CONSTRAINT_COUNT,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleBreakdown {
    pub hc: [u64; 4],
    pub sc: [u64; SOFT_CONSTRAINT_COUNT],
    pub total: u64,
    pub fitness: u64,
}

fn is_night_cell(instance: &RosterInstance, cell: Assignment) -> bool {
    match cell {
        Assignment::Off => false,
        Assignment::Shift(s) => instance.shifts[s].is_night,
    }
}

/// True when the nurse holds the shift's required skill outright.
fn has_direct_skill(instance: &RosterInstance, nurse: usize, shift: usize) -> bool {
    match &instance.shifts[shift].required_skill {
        None => true,
        Some(req) => instance.nurses[nurse].skills.contains(req),
    }
}

/// True when an alternative-skill mapping lets the nurse stand in.
fn has_alternative_skill(
    instance: &RosterInstance,
    nurse: usize,
    shift: usize,
) -> bool {
    match &instance.shifts[shift].required_skill {
        None => false,
        Some(req) => instance.nurses[nurse].skills.iter().any(|held| {
            instance
                .constraints
                .alternative_skills
                .contains(&(held.clone(), req.clone()))
        }),
    }
}

/// Maximal weekend blocks as inclusive (first, last) day pairs.
fn weekend_blocks(instance: &RosterInstance) -> Vec<(usize, usize)> {
    let mut blocks = Vec::new();
    let mut start: Option<usize> = None;
    for day in 0..instance.horizon_days {
        let weekend = instance.weekend_dow.contains(&((day % 7) as u8));
        match (weekend, start) {
            (true, None) => start = Some(day),
            (false, Some(s)) => {
                blocks.push((s, day - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        blocks.push((s, instance.horizon_days - 1));
    }
    blocks
}

pub fn oracle_evaluate(
    schedule: &Schedule,
    instance: &RosterInstance,
) -> OracleBreakdown {
    let days = instance.horizon_days;
    let nurses = instance.nurse_count();
    let limits = &instance.constraints.limits;
    let blocks = weekend_blocks(instance);

    let mut hc = [0u64; 4];
    let mut sc = [0u64; SOFT_CONSTRAINT_COUNT];

    // HC1: windows of three consecutive night shifts.
    for n in 0..nurses {
        for d in 0..days.saturating_sub(2) {
            if is_night_cell(instance, schedule.get(n, d))
                && is_night_cell(instance, schedule.get(n, d + 1))
                && is_night_cell(instance, schedule.get(n, d + 2))
            {
                hc[0] += 1;
            }
        }
    }
    // HC2: one assignment per cell holds by representation.
    // HC3: days with more blanks than allowed.
    for d in 0..days {
        let mut blanks = 0u32;
        for n in 0..nurses {
            if schedule.get(n, d) == Assignment::Off {
                blanks += 1;
            }
        }
        if blanks > limits.max_blank_per_day {
            hc[2] += 1;
        }
    }
    // HC4: assigned shift whose required skill the nurse cannot cover.
    for n in 0..nurses {
        for d in 0..days {
            if let Assignment::Shift(s) = schedule.get(n, d) {
                if !has_direct_skill(instance, n, s)
                    && !has_alternative_skill(instance, n, s)
                {
                    hc[3] += 1;
                }
            }
        }
    }

    for n in 0..nurses {
        // SC1: overlong free runs; SC19: too-short free runs.
        let mut d = 0;
        while d < days {
            if schedule.get(n, d) == Assignment::Off {
                let start = d;
                while d < days && schedule.get(n, d) == Assignment::Off {
                    d += 1;
                }
                let len = (d - start) as u32;
                if len > limits.max_consecutive_free_days {
                    sc[0] += u64::from(len - limits.max_consecutive_free_days);
                }
                if len < limits.min_consecutive_free_days {
                    sc[18] += 1;
                }
            } else {
                d += 1;
            }
        }

        // SC8: overlong working runs; SC21: too-short working runs.
        let mut d = 0;
        while d < days {
            if schedule.get(n, d).is_working() {
                let start = d;
                while d < days && schedule.get(n, d).is_working() {
                    d += 1;
                }
                let len = (d - start) as u32;
                if len > limits.max_consecutive_working_days {
                    sc[7] +=
                        u64::from(len - limits.max_consecutive_working_days);
                }
                if len < limits.min_consecutive_working_days {
                    sc[20] += 1;
                }
            } else {
                d += 1;
            }
        }

        // SC6: overlong runs of one identical shift type.
        let mut d = 0;
        while d < days {
            if let Assignment::Shift(s) = schedule.get(n, d) {
                let start = d;
                while d < days && schedule.get(n, d) == Assignment::Shift(s) {
                    d += 1;
                }
                let len = (d - start) as u32;
                if len > limits.max_consecutive_same_shift {
                    sc[5] += u64::from(len - limits.max_consecutive_same_shift);
                }
            } else {
                d += 1;
            }
        }

        // SC2: started hours above the working-time cap.
        let mut worked_minutes = 0u64;
        for d in 0..days {
            if let Assignment::Shift(s) = schedule.get(n, d) {
                let shift = &instance.shifts[s];
                worked_minutes +=
                    u64::from((shift.end + 1440 - shift.start) % 1440);
            }
        }
        let cap = u64::from(instance.nurses[n].max_work_minutes);
        if worked_minutes > cap {
            sc[1] += (worked_minutes - cap).div_ceil(60);
        }

        // SC4: distinct shift types over the horizon.
        let mut seen = vec![false; instance.shift_count()];
        for d in 0..days {
            if let Assignment::Shift(s) = schedule.get(n, d) {
                seen[s] = true;
            }
        }
        let distinct = seen.iter().filter(|b| **b).count() as u32;
        if distinct > limits.max_shift_types {
            sc[3] += u64::from(distinct - limits.max_shift_types);
        }

        // SC9: distinct shift types per 7-day block.
        let mut week_start = 0;
        while week_start < days {
            let week_end = (week_start + 7).min(days);
            let mut seen = vec![false; instance.shift_count()];
            for d in week_start..week_end {
                if let Assignment::Shift(s) = schedule.get(n, d) {
                    seen[s] = true;
                }
            }
            let distinct = seen.iter().filter(|b| **b).count() as u32;
            if distinct > limits.max_shift_types_per_week {
                sc[8] += u64::from(distinct - limits.max_shift_types_per_week);
            }
            week_start = week_end;
        }

        // SC5/SC7/SC10: requests.
        for (day, shift_id) in &instance.nurses[n].requested_shifts_on {
            let want = instance.shift_index(shift_id).unwrap();
            if schedule.get(n, *day) != Assignment::Shift(want) {
                sc[4] += 1;
            }
        }
        for (day, shift_id) in &instance.nurses[n].requested_shifts_off {
            let avoid = instance.shift_index(shift_id).unwrap();
            if schedule.get(n, *day) == Assignment::Shift(avoid) {
                sc[6] += 1;
            }
        }
        for day in &instance.nurses[n].requested_days_off {
            if schedule.get(n, *day).is_working() {
                sc[9] += 1;
            }
        }

        // SC11: forbidden ordered successions on consecutive days.
        for d in 0..days.saturating_sub(1) {
            if let (Assignment::Shift(a), Assignment::Shift(b)) =
                (schedule.get(n, d), schedule.get(n, d + 1))
            {
                let pair = (
                    instance.shifts[a].id.clone(),
                    instance.shifts[b].id.clone(),
                );
                if instance.constraints.forbidden_successions.contains(&pair) {
                    sc[10] += 1;
                }
            }
        }

        // SC12: per-weekday assignment counts.
        for weekday in 0..7usize {
            let mut count = 0u32;
            for d in 0..days {
                if d % 7 == weekday && schedule.get(n, d).is_working() {
                    count += 1;
                }
            }
            if count > limits.max_shifts_per_weekday {
                sc[11] += u64::from(count - limits.max_shifts_per_weekday);
            }
        }

        // SC13/SC14: skill substitutions via alternative mappings.
        for d in 0..days {
            if let Assignment::Shift(s) = schedule.get(n, d) {
                if !has_direct_skill(instance, n, s)
                    && has_alternative_skill(instance, n, s)
                {
                    sc[12] += 1;
                    sc[13] += 1;
                }
            }
        }

        // SC15: rest between shifts on consecutive days.
        for d in 0..days.saturating_sub(1) {
            if let (Assignment::Shift(a), Assignment::Shift(b)) =
                (schedule.get(n, d), schedule.get(n, d + 1))
            {
                let first = &instance.shifts[a];
                let second = &instance.shifts[b];
                let first_end = i64::from(first.start)
                    + i64::from((first.end + 1440 - first.start) % 1440);
                let rest = 1440 + i64::from(second.start) - first_end;
                if rest < i64::from(limits.min_rest_minutes) {
                    sc[14] += 1;
                }
            }
        }

        // SC3/SC16/SC20 over weekend blocks.
        let mut worked_weekends_per_window =
            vec![0u32; days.div_ceil(28).max(1)];
        for &(first, last) in &blocks {
            let mut worked = 0usize;
            for d in first..=last {
                if schedule.get(n, d).is_working() {
                    worked += 1;
                }
            }
            let block_len = last - first + 1;
            if worked > 0 && worked < block_len {
                sc[2] += 1;
            }
            if worked == 0 && first >= 1 {
                if let Assignment::Shift(s) = schedule.get(n, first - 1) {
                    if instance.shifts[s].is_night {
                        sc[15] += 1;
                    }
                }
            }
            if worked > 0 {
                worked_weekends_per_window[first / 28] += 1;
            }
        }
        for &count in &worked_weekends_per_window {
            if count > limits.max_working_weekends_in_four_weeks {
                sc[19] +=
                    u64::from(count - limits.max_working_weekends_in_four_weeks);
            }
        }

        // SC17: worked bank holidays.
        let mut worked_holidays = 0u32;
        for day in &instance.constraints.bank_holidays {
            if schedule.get(n, *day).is_working() {
                worked_holidays += 1;
            }
        }
        if worked_holidays > limits.max_working_bank_holidays {
            sc[16] +=
                u64::from(worked_holidays - limits.max_working_bank_holidays);
        }

        // SC18: total assignments.
        let mut assigned = 0u32;
        for d in 0..days {
            if schedule.get(n, d).is_working() {
                assigned += 1;
            }
        }
        if assigned > limits.max_shifts_total {
            sc[17] += u64::from(assigned - limits.max_shifts_total);
        }
    }

    let weights = instance.constraints.weights.as_array();
    let total: u64 = sc.iter().zip(weights).map(|(c, w)| c * w).sum();
    let hard_total: u64 = hc.iter().sum();
    OracleBreakdown {
        hc,
        sc,
        total,
        fitness: total + hard_total * HARD_UNIT_PENALTY,
    }
}
