//! Line-oriented text format for instances and rosters.
//!
//! An instance file has up to five sections: `[META]`, `[SHIFTS]`,
//! `[NURSES]`, `[COVER]` and `[CONSTRAINTS]`. Entries are `key = value`
//! lines or whitespace-separated records, `#` starts a comment, days are
//! 0-based and day-of-week 0 is Monday. [`serialize_instance`] emits a
//! canonical form (fixed key order, one declaration per line) that
//! re-parses to an equal instance.
//!
//! ```text
//! [META]
//! horizon_days = 28
//! weekend_days = 5,6
//!
//! [SHIFTS]
//! # id  start  end   skill       night|day
//! V     06:00  14:00 nurse       day
//! N     22:00  06:00 nurse       night
//!
//! [NURSES]
//! # id  name  key=value...
//! 0     anna  skills=nurse max_minutes=9600 days_off=3 on=4:V off=6:N
//!
//! [COVER]
//! max_blank_per_day = 5
//! ```
//!
//! A roster file is one line per nurse, one token per day: a shift id or
//! `-` for a day off.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{
    default_weekend_dow, Assignment, ConstraintConfig, Limits, ModelError,
    Nurse, RosterInstance, Schedule, ShiftType, SoftConstraint,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Semantic(String),
}

impl From<ModelError> for ParseError {
    fn from(err: ModelError) -> Self {
        ParseError::Semantic(err.to_string())
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Meta,
    Shifts,
    Nurses,
    Cover,
    Constraints,
}

impl Section {
    fn from_header(name: &str) -> Option<Section> {
        match name {
            "[META]" => Some(Section::Meta),
            "[SHIFTS]" => Some(Section::Shifts),
            "[NURSES]" => Some(Section::Nurses),
            "[COVER]" => Some(Section::Cover),
            "[CONSTRAINTS]" => Some(Section::Constraints),
            _ => None,
        }
    }
}

struct PartialInstance {
    horizon_days: Option<usize>,
    weekend_dow: Option<BTreeSet<u8>>,
    shifts: Vec<ShiftType>,
    nurses: Vec<Nurse>,
    config: ConstraintConfig,
    seen: Vec<Section>,
}

/// Parses an instance file. Syntax errors carry the 1-based line number;
/// semantic errors (duplicate ids, unknown shifts in requests, missing
/// sections, invariant violations) do not.
pub fn parse_instance(text: &str) -> Result<RosterInstance, ParseError> {
    let mut state = PartialInstance {
        horizon_days: None,
        weekend_dow: None,
        shifts: Vec::new(),
        nurses: Vec::new(),
        config: ConstraintConfig::default(),
        seen: Vec::new(),
    };
    let mut section: Option<Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            let sec = Section::from_header(line)
                .ok_or_else(|| syntax(line_no, format!("unknown section `{line}`")))?;
            if state.seen.contains(&sec) {
                return Err(syntax(line_no, format!("duplicate section `{line}`")));
            }
            state.seen.push(sec);
            section = Some(sec);
            continue;
        }
        match section {
            None => {
                return Err(syntax(line_no, "content before the first section"))
            }
            Some(Section::Meta) => parse_meta_line(&mut state, line, line_no)?,
            Some(Section::Shifts) => parse_shift_line(&mut state, line, line_no)?,
            Some(Section::Nurses) => parse_nurse_line(&mut state, line, line_no)?,
            Some(Section::Cover) => parse_cover_line(&mut state, line, line_no)?,
            Some(Section::Constraints) => {
                parse_constraint_line(&mut state, line, line_no)?
            }
        }
    }

    for (required, name) in [
        (Section::Meta, "[META]"),
        (Section::Shifts, "[SHIFTS]"),
        (Section::Nurses, "[NURSES]"),
    ] {
        if !state.seen.contains(&required) {
            return Err(ParseError::Semantic(format!("missing section {name}")));
        }
    }
    let horizon = state
        .horizon_days
        .ok_or_else(|| ParseError::Semantic("missing horizon_days in [META]".into()))?;
    if state.nurses.is_empty() {
        return Err(ParseError::Semantic("at least one nurse is required".into()));
    }

    check_duplicates(&state)?;
    check_requests(&state)?;

    state.nurses.sort_by_key(|n| n.id);
    let instance = RosterInstance::new(
        horizon,
        state.nurses,
        state.shifts,
        state.config,
        state.weekend_dow.unwrap_or_else(default_weekend_dow),
    )?;
    Ok(instance)
}

fn check_duplicates(state: &PartialInstance) -> Result<(), ParseError> {
    let mut shift_ids = BTreeSet::new();
    for shift in &state.shifts {
        if !shift_ids.insert(&shift.id) {
            return Err(ParseError::Semantic(format!(
                "duplicate shift id `{}`",
                shift.id
            )));
        }
    }
    let mut nurse_ids = BTreeSet::new();
    for nurse in &state.nurses {
        if !nurse_ids.insert(nurse.id) {
            return Err(ParseError::Semantic(format!(
                "duplicate nurse id {}",
                nurse.id
            )));
        }
    }
    Ok(())
}

fn check_requests(state: &PartialInstance) -> Result<(), ParseError> {
    for nurse in &state.nurses {
        for (_, shift) in
            nurse.requested_shifts_on.iter().chain(&nurse.requested_shifts_off)
        {
            if !state.shifts.iter().any(|s| &s.id == shift) {
                return Err(ParseError::Semantic(format!(
                    "nurse {} requests unknown shift `{shift}`",
                    nurse.id
                )));
            }
        }
    }
    Ok(())
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn split_key_value(line: &str, line_no: usize) -> Result<(&str, &str), ParseError> {
    let (key, value) = line
        .split_once('=')
        .ok_or_else(|| syntax(line_no, "expected `key = value`"))?;
    Ok((key.trim(), value.trim()))
}

fn parse_number<T: std::str::FromStr>(
    value: &str,
    what: &str,
    line_no: usize,
) -> Result<T, ParseError> {
    value
        .parse::<T>()
        .map_err(|_| syntax(line_no, format!("invalid {what} `{value}`")))
}

/// Comma-separated list; a lone `-` denotes the empty list.
fn parse_list(value: &str) -> Vec<&str> {
    if value == "-" || value.is_empty() {
        Vec::new()
    } else {
        value.split(',').map(str::trim).collect()
    }
}

fn parse_time(value: &str, line_no: usize) -> Result<u32, ParseError> {
    let (h, m) = value
        .split_once(':')
        .ok_or_else(|| syntax(line_no, format!("invalid time `{value}`, expected HH:MM")))?;
    let hours: u32 = parse_number(h, "hour", line_no)?;
    let minutes: u32 = parse_number(m, "minute", line_no)?;
    if hours >= 24 || minutes >= 60 {
        return Err(syntax(line_no, format!("time `{value}` out of range")));
    }
    Ok(hours * 60 + minutes)
}

fn format_time(minutes: u32) -> String {
    format!("{:02}:{:02}", minutes / 60, minutes % 60)
}

fn parse_meta_line(
    state: &mut PartialInstance,
    line: &str,
    line_no: usize,
) -> Result<(), ParseError> {
    let (key, value) = split_key_value(line, line_no)?;
    match key {
        "horizon_days" => {
            state.horizon_days = Some(parse_number(value, "horizon", line_no)?);
        }
        "weekend_days" => {
            let mut days = BTreeSet::new();
            for tok in parse_list(value) {
                days.insert(parse_number::<u8>(tok, "weekend day", line_no)?);
            }
            state.weekend_dow = Some(days);
        }
        other => {
            return Err(syntax(line_no, format!("unknown [META] key `{other}`")))
        }
    }
    Ok(())
}

fn parse_shift_line(
    state: &mut PartialInstance,
    line: &str,
    line_no: usize,
) -> Result<(), ParseError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != 5 {
        return Err(syntax(
            line_no,
            "expected `id start end skill night|day`",
        ));
    }
    let required_skill = match tokens[3] {
        "-" => None,
        skill => Some(skill.to_string()),
    };
    let is_night = match tokens[4] {
        "night" => true,
        "day" => false,
        other => {
            return Err(syntax(line_no, format!("expected `night` or `day`, got `{other}`")))
        }
    };
    state.shifts.push(ShiftType {
        id: tokens[0].to_string(),
        start: parse_time(tokens[1], line_no)?,
        end: parse_time(tokens[2], line_no)?,
        required_skill,
        is_night,
    });
    Ok(())
}

fn parse_day_shift_pairs(
    value: &str,
    line_no: usize,
) -> Result<BTreeSet<(usize, String)>, ParseError> {
    let mut pairs = BTreeSet::new();
    for tok in parse_list(value) {
        let (day, shift) = tok.split_once(':').ok_or_else(|| {
            syntax(line_no, format!("invalid request `{tok}`, expected day:shift"))
        })?;
        pairs.insert((parse_number(day, "day", line_no)?, shift.to_string()));
    }
    Ok(pairs)
}

fn parse_nurse_line(
    state: &mut PartialInstance,
    line: &str,
    line_no: usize,
) -> Result<(), ParseError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() < 2 {
        return Err(syntax(line_no, "expected `id name key=value...`"));
    }
    let id = parse_number(tokens[0], "nurse id", line_no)?;
    let mut nurse = Nurse::new(id, tokens[1]);
    for field in &tokens[2..] {
        let (key, value) = split_key_value(field, line_no)?;
        match key {
            "skills" => {
                nurse.skills =
                    parse_list(value).into_iter().map(String::from).collect();
            }
            "max_minutes" => {
                nurse.max_work_minutes =
                    parse_number(value, "max_minutes", line_no)?;
            }
            "days_off" => {
                nurse.requested_days_off = parse_list(value)
                    .into_iter()
                    .map(|d| parse_number(d, "day", line_no))
                    .collect::<Result<_, _>>()?;
            }
            "on" => {
                nurse.requested_shifts_on = parse_day_shift_pairs(value, line_no)?;
            }
            "off" => {
                nurse.requested_shifts_off = parse_day_shift_pairs(value, line_no)?;
            }
            other => {
                return Err(syntax(line_no, format!("unknown nurse key `{other}`")))
            }
        }
    }
    state.nurses.push(nurse);
    Ok(())
}

fn parse_cover_line(
    state: &mut PartialInstance,
    line: &str,
    line_no: usize,
) -> Result<(), ParseError> {
    let (key, value) = split_key_value(line, line_no)?;
    match key {
        "max_blank_per_day" => {
            state.config.limits.max_blank_per_day =
                parse_number(value, "max_blank_per_day", line_no)?;
        }
        other => {
            return Err(syntax(line_no, format!("unknown [COVER] key `{other}`")))
        }
    }
    Ok(())
}

fn parse_pair_list(
    value: &str,
    separator: char,
    line_no: usize,
) -> Result<BTreeSet<(String, String)>, ParseError> {
    let mut pairs = BTreeSet::new();
    for tok in parse_list(value) {
        let (a, b) = tok.split_once(separator).ok_or_else(|| {
            syntax(line_no, format!("invalid pair `{tok}`, expected a{separator}b"))
        })?;
        pairs.insert((a.to_string(), b.to_string()));
    }
    Ok(pairs)
}

fn parse_constraint_line(
    state: &mut PartialInstance,
    line: &str,
    line_no: usize,
) -> Result<(), ParseError> {
    let (key, value) = split_key_value(line, line_no)?;
    if let Some(constraint) = SoftConstraint::from_code(key) {
        let weight = parse_number(value, "weight", line_no)?;
        state.config.weights.set(constraint, weight);
        return Ok(());
    }
    let limits = &mut state.config.limits;
    let limit_slot: Option<&mut u32> = match key {
        "max_consecutive_free_days" => Some(&mut limits.max_consecutive_free_days),
        "max_shift_types" => Some(&mut limits.max_shift_types),
        "max_consecutive_same_shift" => {
            Some(&mut limits.max_consecutive_same_shift)
        }
        "max_consecutive_working_days" => {
            Some(&mut limits.max_consecutive_working_days)
        }
        "max_shift_types_per_week" => Some(&mut limits.max_shift_types_per_week),
        "max_shifts_per_weekday" => Some(&mut limits.max_shifts_per_weekday),
        "min_rest_minutes" => Some(&mut limits.min_rest_minutes),
        "max_working_bank_holidays" => {
            Some(&mut limits.max_working_bank_holidays)
        }
        "max_shifts_total" => Some(&mut limits.max_shifts_total),
        "min_consecutive_free_days" => Some(&mut limits.min_consecutive_free_days),
        "max_working_weekends_in_four_weeks" => {
            Some(&mut limits.max_working_weekends_in_four_weeks)
        }
        "min_consecutive_working_days" => {
            Some(&mut limits.min_consecutive_working_days)
        }
        _ => None,
    };
    if let Some(slot) = limit_slot {
        *slot = parse_number(value, "limit", line_no)?;
        return Ok(());
    }
    match key {
        "bank_holidays" => {
            state.config.bank_holidays = parse_list(value)
                .into_iter()
                .map(|d| parse_number(d, "day", line_no))
                .collect::<Result<_, _>>()?;
        }
        "forbidden_successions" => {
            state.config.forbidden_successions =
                parse_pair_list(value, '>', line_no)?;
        }
        "alternative_skills" => {
            state.config.alternative_skills =
                parse_pair_list(value, '>', line_no)?;
        }
        other => {
            return Err(syntax(
                line_no,
                format!("unknown [CONSTRAINTS] key `{other}`"),
            ))
        }
    }
    Ok(())
}

fn join_list<I: IntoIterator<Item = String>>(items: I) -> String {
    let joined: Vec<String> = items.into_iter().collect();
    if joined.is_empty() {
        "-".to_string()
    } else {
        joined.join(",")
    }
}

/// Serializes an instance to the canonical text form. Deterministic:
/// equal instances produce byte-identical text, and the output re-parses
/// to an equal instance. Sections with only default content are omitted.
pub fn serialize_instance(instance: &RosterInstance) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: &str| {
        out.push_str(line);
        out.push('\n');
    };

    push(&mut out, "[META]");
    push(&mut out, &format!("horizon_days = {}", instance.horizon_days));
    push(
        &mut out,
        &format!(
            "weekend_days = {}",
            join_list(instance.weekend_dow.iter().map(u8::to_string))
        ),
    );

    push(&mut out, "");
    push(&mut out, "[SHIFTS]");
    for shift in &instance.shifts {
        push(
            &mut out,
            &format!(
                "{} {} {} {} {}",
                shift.id,
                format_time(shift.start),
                format_time(shift.end),
                shift.required_skill.as_deref().unwrap_or("-"),
                if shift.is_night { "night" } else { "day" },
            ),
        );
    }

    push(&mut out, "");
    push(&mut out, "[NURSES]");
    for nurse in &instance.nurses {
        let mut line = format!(
            "{} {} skills={} max_minutes={}",
            nurse.id,
            nurse.name,
            join_list(nurse.skills.iter().cloned()),
            nurse.max_work_minutes,
        );
        if !nurse.requested_days_off.is_empty() {
            line.push_str(&format!(
                " days_off={}",
                join_list(nurse.requested_days_off.iter().map(usize::to_string))
            ));
        }
        if !nurse.requested_shifts_on.is_empty() {
            line.push_str(&format!(
                " on={}",
                join_list(
                    nurse
                        .requested_shifts_on
                        .iter()
                        .map(|(d, s)| format!("{d}:{s}"))
                )
            ));
        }
        if !nurse.requested_shifts_off.is_empty() {
            line.push_str(&format!(
                " off={}",
                join_list(
                    nurse
                        .requested_shifts_off
                        .iter()
                        .map(|(d, s)| format!("{d}:{s}"))
                )
            ));
        }
        push(&mut out, &line);
    }

    push(&mut out, "");
    push(&mut out, "[COVER]");
    push(
        &mut out,
        &format!(
            "max_blank_per_day = {}",
            instance.constraints.limits.max_blank_per_day
        ),
    );

    let constraint_lines = non_default_constraint_lines(&instance.constraints);
    if !constraint_lines.is_empty() {
        push(&mut out, "");
        push(&mut out, "[CONSTRAINTS]");
        for line in constraint_lines {
            push(&mut out, &line);
        }
    }
    out
}

fn non_default_constraint_lines(config: &ConstraintConfig) -> Vec<String> {
    let defaults = ConstraintConfig::default();
    let mut lines = Vec::new();
    for c in SoftConstraint::ALL {
        if config.weights.get(c) != defaults.weights.get(c) {
            lines.push(format!("{} = {}", c.code(), config.weights.get(c)));
        }
    }
    let limit_fields: [(&str, fn(&Limits) -> u32); 12] = [
        ("max_consecutive_free_days", |l| l.max_consecutive_free_days),
        ("max_shift_types", |l| l.max_shift_types),
        ("max_consecutive_same_shift", |l| l.max_consecutive_same_shift),
        ("max_consecutive_working_days", |l| l.max_consecutive_working_days),
        ("max_shift_types_per_week", |l| l.max_shift_types_per_week),
        ("max_shifts_per_weekday", |l| l.max_shifts_per_weekday),
        ("min_rest_minutes", |l| l.min_rest_minutes),
        ("max_working_bank_holidays", |l| l.max_working_bank_holidays),
        ("max_shifts_total", |l| l.max_shifts_total),
        ("min_consecutive_free_days", |l| l.min_consecutive_free_days),
        (
            "max_working_weekends_in_four_weeks",
            |l| l.max_working_weekends_in_four_weeks,
        ),
        ("min_consecutive_working_days", |l| l.min_consecutive_working_days),
    ];
    for (name, get) in limit_fields {
        if get(&config.limits) != get(&defaults.limits) {
            lines.push(format!("{name} = {}", get(&config.limits)));
        }
    }
    if config.bank_holidays != defaults.bank_holidays {
        lines.push(format!(
            "bank_holidays = {}",
            join_list(config.bank_holidays.iter().map(usize::to_string))
        ));
    }
    if config.forbidden_successions != defaults.forbidden_successions {
        lines.push(format!(
            "forbidden_successions = {}",
            join_list(
                config
                    .forbidden_successions
                    .iter()
                    .map(|(a, b)| format!("{a}>{b}"))
            )
        ));
    }
    if config.alternative_skills != defaults.alternative_skills {
        lines.push(format!(
            "alternative_skills = {}",
            join_list(
                config
                    .alternative_skills
                    .iter()
                    .map(|(a, b)| format!("{a}>{b}"))
            )
        ));
    }
    lines
}

/// Parses a roster file against its instance: one line per nurse in id
/// order, one token per day (shift id or `-`).
pub fn parse_schedule(
    text: &str,
    instance: &RosterInstance,
) -> Result<Schedule, ParseError> {
    let mut schedule = Schedule::empty(instance);
    let mut nurse = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if nurse >= instance.nurse_count() {
            return Err(syntax(
                line_no,
                format!("expected {} nurse rows", instance.nurse_count()),
            ));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != instance.horizon_days {
            return Err(syntax(
                line_no,
                format!(
                    "expected {} day columns, found {}",
                    instance.horizon_days,
                    tokens.len()
                ),
            ));
        }
        for (day, tok) in tokens.iter().enumerate() {
            let value = if *tok == "-" {
                Assignment::Off
            } else {
                let shift = instance.shift_index(tok).ok_or_else(|| {
                    syntax(line_no, format!("unknown shift id `{tok}`"))
                })?;
                Assignment::Shift(shift)
            };
            schedule.set(nurse, day, value)?;
        }
        nurse += 1;
    }
    if nurse != instance.nurse_count() {
        return Err(ParseError::Semantic(format!(
            "expected {} nurse rows, found {nurse}",
            instance.nurse_count()
        )));
    }
    Ok(schedule)
}

/// Writes a roster as text; inverse of [`parse_schedule`].
pub fn serialize_schedule(schedule: &Schedule, instance: &RosterInstance) -> String {
    let mut out = String::new();
    for nurse in 0..schedule.nurse_count() {
        let row: Vec<&str> = schedule
            .row(nurse)
            .iter()
            .map(|a| match a {
                Assignment::Off => "-",
                Assignment::Shift(s) => instance.shifts[*s].id.as_str(),
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
