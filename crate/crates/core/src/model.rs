//! Problem instances and candidate schedules.
//!
//! A [`RosterInstance`] describes the rostering problem: the planning
//! horizon, the nurses with their skills and requests, the shift catalog
//! and the constraint configuration (weights and limits). A [`Schedule`]
//! assigns every nurse on every day to exactly one shift type or `Off`;
//! one-shift-per-day holds by representation.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub const MINUTES_PER_DAY: u32 = 1440;

/// Surcharge added to the fitness for every hard-constraint violation,
/// large enough that no feasible roster loses to an infeasible one at
/// desk scale.
pub const HARD_UNIT_PENALTY: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("horizon must be at least one day")]
    EmptyHorizon,
    #[error("at least one nurse is required")]
    NoNurses,
    #[error("at least one shift is required")]
    NoShifts,
    #[error("shift `{0}`: {1}")]
    InvalidShift(String, String),
    #[error("duplicate shift id `{0}`")]
    DuplicateShiftId(String),
    #[error("nurse ids must be unique and cover 0..{0}")]
    BadNurseIds(usize),
    #[error("nurse {0}: {1}")]
    InvalidNurse(usize, String),
    #[error("shift `{0}` requires skill `{1}` that no nurse has")]
    UncoveredSkill(String, String),
    #[error("limit `{0}` must be strictly positive")]
    NonPositiveLimit(&'static str),
    #[error("`{0}` is not a valid token")]
    BadToken(String),
    #[error("weekend day-of-week {0} out of range 0..7")]
    BadWeekendDay(u8),
    #[error("bank holiday day {0} outside horizon 0..{1}")]
    BadBankHoliday(usize, usize),
    #[error("nurse index {index} out of range 0..{count}")]
    NurseOutOfRange { index: usize, count: usize },
    #[error("day index {index} out of range 0..{count}")]
    DayOutOfRange { index: usize, count: usize },
    #[error("shift index {index} out of range 0..{count}")]
    ShiftOutOfRange { index: usize, count: usize },
}

/// Identifiers, names and skills appear as bare tokens in the instance
/// file format, so they must not collide with its separators.
pub fn is_valid_token(s: &str) -> bool {
    !s.is_empty()
        && s != "-"
        && s.chars().all(|c| {
            !c.is_whitespace() && !matches!(c, '#' | '=' | ',' | ':' | '>' | '[' | ']')
        })
}

/// One shift type from the catalog. Times are minutes from midnight;
/// an end earlier than the start wraps into the next day.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftType {
    pub id: String,
    pub start: u32,
    pub end: u32,
    pub required_skill: Option<String>,
    pub is_night: bool,
}

impl ShiftType {
    /// Worked minutes, accounting for a wrap past midnight.
    pub fn duration_minutes(&self) -> u32 {
        (self.end + MINUTES_PER_DAY - self.start) % MINUTES_PER_DAY
    }

    fn validate(&self) -> Result<(), ModelError> {
        let fail = |msg: &str| {
            Err(ModelError::InvalidShift(self.id.clone(), msg.to_string()))
        };
        if !is_valid_token(&self.id) {
            return fail("id is not a valid token");
        }
        if let Some(skill) = &self.required_skill {
            if !is_valid_token(skill) {
                return fail("required skill is not a valid token");
            }
        }
        if self.start >= MINUTES_PER_DAY || self.end >= MINUTES_PER_DAY {
            return fail("times must be within 0..1440 minutes");
        }
        if self.start == self.end {
            return fail("start and end must differ");
        }
        Ok(())
    }
}

/// A nurse: skill set, scheduling requests and the working-time cap
/// (in minutes over the whole horizon) used by the max-hours constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nurse {
    pub id: usize,
    pub name: String,
    pub skills: BTreeSet<String>,
    pub requested_days_off: BTreeSet<usize>,
    pub requested_shifts_on: BTreeSet<(usize, String)>,
    pub requested_shifts_off: BTreeSet<(usize, String)>,
    pub max_work_minutes: u32,
}

/// Default working-time cap: 40 h/week over a 4-week horizon.
pub const DEFAULT_MAX_WORK_MINUTES: u32 = 40 * 60 * 4;

impl Nurse {
    pub fn new(id: usize, name: impl Into<String>) -> Self {
        Nurse {
            id,
            name: name.into(),
            skills: BTreeSet::new(),
            requested_days_off: BTreeSet::new(),
            requested_shifts_on: BTreeSet::new(),
            requested_shifts_off: BTreeSet::new(),
            max_work_minutes: DEFAULT_MAX_WORK_MINUTES,
        }
    }

    pub fn with_skill(mut self, skill: impl Into<String>) -> Self {
        self.skills.insert(skill.into());
        self
    }
}

/// The soft constraints, identified externally as `SC1`..`SC21`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SoftConstraint {
    MaxConsecutiveFreeDays,       // SC1
    MaxHoursWorked,               // SC2
    CompleteWeekends,             // SC3
    MaxShiftTypes,                // SC4
    RequestedShiftsOn,            // SC5
    ConsecutiveShiftTypes,        // SC6
    RequestedShiftsOff,           // SC7
    MaxConsecutiveWorkingDays,    // SC8
    MaxShiftTypesPerWeek,         // SC9
    RequestedDaysOff,             // SC10
    ShiftTypeSuccessions,         // SC11
    MaxShiftsPerWeekday,          // SC12
    SkilledShifts,                // SC13
    AlternativeSkill,             // SC14
    MinTimeBetweenShifts,         // SC15
    NightShiftsBeforeFreeWeekend, // SC16
    MaxWorkingBankHolidays,       // SC17
    MaxNumberOfShifts,            // SC18
    MinConsecutiveFreeDays,       // SC19
    MaxWorkingWeekendsInFourWeeks, // SC20
    MinConsecutiveWorkingDays,    // SC21
}

pub const SOFT_CONSTRAINT_COUNT: usize = 21;

impl SoftConstraint {
    pub const ALL: [SoftConstraint; SOFT_CONSTRAINT_COUNT] = [
        SoftConstraint::MaxConsecutiveFreeDays,
        SoftConstraint::MaxHoursWorked,
        SoftConstraint::CompleteWeekends,
        SoftConstraint::MaxShiftTypes,
        SoftConstraint::RequestedShiftsOn,
        SoftConstraint::ConsecutiveShiftTypes,
        SoftConstraint::RequestedShiftsOff,
        SoftConstraint::MaxConsecutiveWorkingDays,
        SoftConstraint::MaxShiftTypesPerWeek,
        SoftConstraint::RequestedDaysOff,
        SoftConstraint::ShiftTypeSuccessions,
        SoftConstraint::MaxShiftsPerWeekday,
        SoftConstraint::SkilledShifts,
        SoftConstraint::AlternativeSkill,
        SoftConstraint::MinTimeBetweenShifts,
        SoftConstraint::NightShiftsBeforeFreeWeekend,
        SoftConstraint::MaxWorkingBankHolidays,
        SoftConstraint::MaxNumberOfShifts,
        SoftConstraint::MinConsecutiveFreeDays,
        SoftConstraint::MaxWorkingWeekendsInFourWeeks,
        SoftConstraint::MinConsecutiveWorkingDays,
    ];

    /// Zero-based position, so `SC1` maps to 0 and `SC21` to 20.
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|c| *c == self).unwrap()
    }

    /// External identifier, `SC1`..`SC21`.
    pub fn code(self) -> &'static str {
        const CODES: [&str; SOFT_CONSTRAINT_COUNT] = [
            "SC1", "SC2", "SC3", "SC4", "SC5", "SC6", "SC7", "SC8", "SC9",
            "SC10", "SC11", "SC12", "SC13", "SC14", "SC15", "SC16", "SC17",
            "SC18", "SC19", "SC20", "SC21",
        ];
        CODES[self.index()]
    }

    pub fn from_code(code: &str) -> Option<SoftConstraint> {
        Self::ALL.iter().copied().find(|c| c.code() == code)
    }
}

impl fmt::Display for SoftConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Per-constraint penalty weights. Defaults are the reference values for
/// the BCV 8.13.1 family of instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftWeights([u64; SOFT_CONSTRAINT_COUNT]);

impl SoftWeights {
    pub fn get(&self, c: SoftConstraint) -> u64 {
        self.0[c.index()]
    }

    pub fn set(&mut self, c: SoftConstraint, weight: u64) {
        self.0[c.index()] = weight;
    }

    pub fn as_array(&self) -> &[u64; SOFT_CONSTRAINT_COUNT] {
        &self.0
    }
}

impl Default for SoftWeights {
    fn default() -> Self {
        // SC1..SC21 in order.
        SoftWeights([
            0, 1, 40, 5, 0, 5, 0, 5, 1, 0, 10, 1, 10000, 1, 20, 0, 10, 5, 1,
            7, 1,
        ])
    }
}

/// Numeric limits the soft-constraint counters compare against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    pub max_consecutive_free_days: u32,
    pub max_shift_types: u32,
    pub max_consecutive_same_shift: u32,
    pub max_consecutive_working_days: u32,
    pub max_shift_types_per_week: u32,
    pub max_shifts_per_weekday: u32,
    pub min_rest_minutes: u32,
    pub max_working_bank_holidays: u32,
    pub max_shifts_total: u32,
    pub min_consecutive_free_days: u32,
    pub max_working_weekends_in_four_weeks: u32,
    pub min_consecutive_working_days: u32,
    pub max_blank_per_day: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_consecutive_free_days: 3,
            max_shift_types: 3,
            max_consecutive_same_shift: 4,
            max_consecutive_working_days: 6,
            max_shift_types_per_week: 2,
            max_shifts_per_weekday: 4,
            min_rest_minutes: 660,
            max_working_bank_holidays: 1,
            max_shifts_total: 20,
            min_consecutive_free_days: 2,
            max_working_weekends_in_four_weeks: 3,
            min_consecutive_working_days: 2,
            max_blank_per_day: 5,
        }
    }
}

impl Limits {
    fn validate(&self) -> Result<(), ModelError> {
        let fields: [(&'static str, u32); 13] = [
            ("max_consecutive_free_days", self.max_consecutive_free_days),
            ("max_shift_types", self.max_shift_types),
            ("max_consecutive_same_shift", self.max_consecutive_same_shift),
            (
                "max_consecutive_working_days",
                self.max_consecutive_working_days,
            ),
            ("max_shift_types_per_week", self.max_shift_types_per_week),
            ("max_shifts_per_weekday", self.max_shifts_per_weekday),
            ("min_rest_minutes", self.min_rest_minutes),
            (
                "max_working_bank_holidays",
                self.max_working_bank_holidays,
            ),
            ("max_shifts_total", self.max_shifts_total),
            ("min_consecutive_free_days", self.min_consecutive_free_days),
            (
                "max_working_weekends_in_four_weeks",
                self.max_working_weekends_in_four_weeks,
            ),
            (
                "min_consecutive_working_days",
                self.min_consecutive_working_days,
            ),
            ("max_blank_per_day", self.max_blank_per_day),
        ];
        for (name, value) in fields {
            if value == 0 {
                return Err(ModelError::NonPositiveLimit(name));
            }
        }
        Ok(())
    }
}

/// Weights, limits and the extra rule tables the counters consult.
///
/// `forbidden_successions` holds ordered (earlier, later) shift-id pairs
/// banned on consecutive days. `alternative_skills` holds
/// (alternative, covers) pairs: a nurse possessing `alternative` may take
/// a shift requiring `covers`, counted by the substitution constraints
/// instead of as a hard skill violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintConfig {
    pub weights: SoftWeights,
    pub limits: Limits,
    pub bank_holidays: BTreeSet<usize>,
    pub forbidden_successions: BTreeSet<(String, String)>,
    pub alternative_skills: BTreeSet<(String, String)>,
}

impl Default for ConstraintConfig {
    fn default() -> Self {
        let forbidden = [("N", "V"), ("N", "D"), ("N", "DH"), ("L", "V")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        ConstraintConfig {
            weights: SoftWeights::default(),
            limits: Limits::default(),
            bank_holidays: BTreeSet::new(),
            forbidden_successions: forbidden,
            alternative_skills: BTreeSet::new(),
        }
    }
}

/// How a nurse covers (or fails to cover) a shift's skill requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkillCover {
    /// No requirement, or the nurse holds the required skill.
    Direct,
    /// Covered through a declared alternative-skill mapping.
    Alternative,
    /// Not covered at all: a hard violation.
    Missing,
}

/// Default weekend: Saturday and Sunday with day 0 = Monday.
pub fn default_weekend_dow() -> BTreeSet<u8> {
    [5u8, 6u8].into_iter().collect()
}

/// A complete rostering problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RosterInstance {
    pub horizon_days: usize,
    pub nurses: Vec<Nurse>,
    pub shifts: Vec<ShiftType>,
    pub constraints: ConstraintConfig,
    /// Days-of-week (0 = Monday) that count as weekend days.
    pub weekend_dow: BTreeSet<u8>,
}

impl RosterInstance {
    pub fn new(
        horizon_days: usize,
        nurses: Vec<Nurse>,
        shifts: Vec<ShiftType>,
        constraints: ConstraintConfig,
        weekend_dow: BTreeSet<u8>,
    ) -> Result<Self, ModelError> {
        let instance = RosterInstance {
            horizon_days,
            nurses,
            shifts,
            constraints,
            weekend_dow,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.horizon_days == 0 {
            return Err(ModelError::EmptyHorizon);
        }
        if self.nurses.is_empty() {
            return Err(ModelError::NoNurses);
        }
        if self.shifts.is_empty() {
            return Err(ModelError::NoShifts);
        }
        let mut seen_shift = BTreeSet::new();
        for shift in &self.shifts {
            shift.validate()?;
            if !seen_shift.insert(shift.id.as_str()) {
                return Err(ModelError::DuplicateShiftId(shift.id.clone()));
            }
        }
        let mut ids: Vec<usize> = self.nurses.iter().map(|n| n.id).collect();
        ids.sort_unstable();
        if ids.iter().enumerate().any(|(i, id)| *id != i) {
            return Err(ModelError::BadNurseIds(self.nurses.len()));
        }
        for nurse in &self.nurses {
            self.validate_nurse(nurse)?;
        }
        for shift in &self.shifts {
            if let Some(skill) = &shift.required_skill {
                let covered =
                    self.nurses.iter().any(|n| n.skills.contains(skill));
                if !covered {
                    return Err(ModelError::UncoveredSkill(
                        shift.id.clone(),
                        skill.clone(),
                    ));
                }
            }
        }
        self.constraints.limits.validate()?;
        for (a, b) in self
            .constraints
            .forbidden_successions
            .iter()
            .chain(&self.constraints.alternative_skills)
        {
            if !is_valid_token(a) || !is_valid_token(b) {
                let bad = if is_valid_token(a) { b } else { a };
                return Err(ModelError::BadToken(bad.clone()));
            }
        }
        for &dow in &self.weekend_dow {
            if dow >= 7 {
                return Err(ModelError::BadWeekendDay(dow));
            }
        }
        for &day in &self.constraints.bank_holidays {
            if day >= self.horizon_days {
                return Err(ModelError::BadBankHoliday(day, self.horizon_days));
            }
        }
        Ok(())
    }

    fn validate_nurse(&self, nurse: &Nurse) -> Result<(), ModelError> {
        let fail = |msg: String| Err(ModelError::InvalidNurse(nurse.id, msg));
        if !is_valid_token(&nurse.name) {
            return fail(format!("name `{}` is not a valid token", nurse.name));
        }
        for skill in &nurse.skills {
            if !is_valid_token(skill) {
                return fail(format!("skill `{skill}` is not a valid token"));
            }
        }
        for &day in &nurse.requested_days_off {
            if day >= self.horizon_days {
                return fail(format!("requested day off {day} outside horizon"));
            }
        }
        for (day, shift) in
            nurse.requested_shifts_on.iter().chain(&nurse.requested_shifts_off)
        {
            if *day >= self.horizon_days {
                return fail(format!("request day {day} outside horizon"));
            }
            if self.shift_index(shift).is_none() {
                return fail(format!("request references unknown shift `{shift}`"));
            }
        }
        if let Some((day, shift)) = nurse
            .requested_shifts_on
            .intersection(&nurse.requested_shifts_off)
            .next()
        {
            return fail(format!(
                "shift `{shift}` on day {day} requested both on and off"
            ));
        }
        Ok(())
    }

    pub fn nurse_count(&self) -> usize {
        self.nurses.len()
    }

    pub fn shift_count(&self) -> usize {
        self.shifts.len()
    }

    /// Assignment options per cell: every shift plus `Off`.
    pub fn option_count(&self) -> usize {
        self.shifts.len() + 1
    }

    pub fn shift_index(&self, id: &str) -> Option<usize> {
        self.shifts.iter().position(|s| s.id == id)
    }

    pub fn is_weekend_day(&self, day: usize) -> bool {
        self.weekend_dow.contains(&((day % 7) as u8))
    }

    /// Maximal runs of consecutive weekend days within the horizon, as
    /// (first_day, last_day) pairs. With the default Saturday/Sunday
    /// weekend these are the (Sat, Sun) pairs.
    pub fn weekend_blocks(&self) -> Vec<(usize, usize)> {
        let mut blocks = Vec::new();
        let mut day = 0;
        while day < self.horizon_days {
            if self.is_weekend_day(day) {
                let start = day;
                while day + 1 < self.horizon_days && self.is_weekend_day(day + 1)
                {
                    day += 1;
                }
                blocks.push((start, day));
            }
            day += 1;
        }
        blocks
    }

    /// Skill-coverage status of `nurse` taking `shift`.
    pub fn skill_cover(&self, nurse: usize, shift: usize) -> SkillCover {
        let required = match &self.shifts[shift].required_skill {
            None => return SkillCover::Direct,
            Some(skill) => skill,
        };
        let nurse = &self.nurses[nurse];
        if nurse.skills.contains(required) {
            return SkillCover::Direct;
        }
        let substitutable = nurse.skills.iter().any(|held| {
            self.constraints
                .alternative_skills
                .contains(&(held.clone(), required.clone()))
        });
        if substitutable {
            SkillCover::Alternative
        } else {
            SkillCover::Missing
        }
    }
}

/// One cell of a schedule: a shift (by catalog index) or a day off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Assignment {
    Off,
    Shift(usize),
}

impl Assignment {
    pub fn is_working(self) -> bool {
        matches!(self, Assignment::Shift(_))
    }

    pub fn shift(self) -> Option<usize> {
        match self {
            Assignment::Off => None,
            Assignment::Shift(s) => Some(s),
        }
    }
}

/// A nurse × day grid of assignments; the candidate solution both
/// solvers search over. Exactly one assignment per cell, so at most one
/// shift per nurse per day holds structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    nurse_count: usize,
    horizon_days: usize,
    shift_count: usize,
    cells: Vec<Assignment>,
}

impl Schedule {
    /// All-`Off` schedule shaped for `instance`.
    pub fn empty(instance: &RosterInstance) -> Schedule {
        Schedule {
            nurse_count: instance.nurse_count(),
            horizon_days: instance.horizon_days,
            shift_count: instance.shift_count(),
            cells: vec![
                Assignment::Off;
                instance.nurse_count() * instance.horizon_days
            ],
        }
    }

    pub fn nurse_count(&self) -> usize {
        self.nurse_count
    }

    pub fn horizon_days(&self) -> usize {
        self.horizon_days
    }

    pub fn matches(&self, instance: &RosterInstance) -> bool {
        self.nurse_count == instance.nurse_count()
            && self.horizon_days == instance.horizon_days
            && self.shift_count == instance.shift_count()
    }

    /// Panics if `nurse` or `day` is out of range; use [`Schedule::set`]
    /// for checked access.
    pub fn get(&self, nurse: usize, day: usize) -> Assignment {
        assert!(nurse < self.nurse_count && day < self.horizon_days);
        self.cells[nurse * self.horizon_days + day]
    }

    /// Changes exactly the addressed cell.
    pub fn set(
        &mut self,
        nurse: usize,
        day: usize,
        value: Assignment,
    ) -> Result<(), ModelError> {
        if nurse >= self.nurse_count {
            return Err(ModelError::NurseOutOfRange {
                index: nurse,
                count: self.nurse_count,
            });
        }
        if day >= self.horizon_days {
            return Err(ModelError::DayOutOfRange {
                index: day,
                count: self.horizon_days,
            });
        }
        if let Assignment::Shift(s) = value {
            if s >= self.shift_count {
                return Err(ModelError::ShiftOutOfRange {
                    index: s,
                    count: self.shift_count,
                });
            }
        }
        self.cells[nurse * self.horizon_days + day] = value;
        Ok(())
    }

    /// One nurse's row across the horizon.
    pub fn row(&self, nurse: usize) -> &[Assignment] {
        let start = nurse * self.horizon_days;
        &self.cells[start..start + self.horizon_days]
    }

    pub fn working_days(&self, nurse: usize) -> usize {
        self.row(nurse).iter().filter(|a| a.is_working()).count()
    }
}
