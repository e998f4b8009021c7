//! Scenario file grammar and parser.
//!
//! A scenario is an INI-style text file with up to two sections:
//!
//! ```text
//! [dynamics]
//! length = 2        # optional; inferred from the first shape otherwise
//! dt = 0.001
//! t_end = 0.6931
//! gamma = 0         # optional, defaults to 0
//! subsumer = 01 1.0           # shape and initial strength, repeatable
//! input = 10 1.0              # shape and rate, repeatable
//! input = 10 1.0 0.0 0.5      # optional active window [start, end)
//!
//! [szilard]
//! temperature = 300 # optional, defaults to 300
//! epsilon = 0.1
//! cycles = 100000
//! seed = 42
//! ```
//!
//! `#` starts a comment to the end of the line; blank lines are ignored;
//! unknown keys, malformed values, and out-of-range parameters are rejected
//! with the offending line.

use std::fmt::Write as _;
use std::str::FromStr;

use thermocog::matching::Shape;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ScenarioError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ScenarioError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsumerSpec {
    pub shape: Shape,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    pub shape: Shape,
    pub rate: f64,
    pub window: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsSection {
    pub length: Option<usize>,
    pub dt: f64,
    pub t_end: f64,
    pub gamma: f64,
    pub subsumers: Vec<SubsumerSpec>,
    pub inputs: Vec<InputSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SzilardSection {
    pub temperature: f64,
    pub epsilon: f64,
    pub cycles: u64,
    pub seed: u64,
}

/// Default bath temperature when a scenario leaves it unspecified.
pub const DEFAULT_TEMPERATURE_K: f64 = 300.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub dynamics: Option<DynamicsSection>,
    pub szilard: Option<SzilardSection>,
}

impl Scenario {
    /// Temperature used for thermodynamic reporting.
    pub fn temperature(&self) -> f64 {
        self.szilard
            .as_ref()
            .map(|s| s.temperature)
            .unwrap_or(DEFAULT_TEMPERATURE_K)
    }

    /// Canonical text form; parsing it back yields an identical scenario.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(d) = &self.dynamics {
            out.push_str("[dynamics]\n");
            if let Some(len) = d.length {
                let _ = writeln!(out, "length = {len}");
            }
            let _ = writeln!(out, "dt = {}", d.dt);
            let _ = writeln!(out, "t_end = {}", d.t_end);
            let _ = writeln!(out, "gamma = {}", d.gamma);
            for s in &d.subsumers {
                let _ = writeln!(out, "subsumer = {} {}", s.shape, s.strength);
            }
            for i in &d.inputs {
                match i.window {
                    Some((start, end)) => {
                        let _ = writeln!(out, "input = {} {} {} {}", i.shape, i.rate, start, end);
                    }
                    None => {
                        let _ = writeln!(out, "input = {} {}", i.shape, i.rate);
                    }
                }
            }
        }
        if let Some(z) = &self.szilard {
            if self.dynamics.is_some() {
                out.push('\n');
            }
            out.push_str("[szilard]\n");
            let _ = writeln!(out, "temperature = {}", z.temperature);
            let _ = writeln!(out, "epsilon = {}", z.epsilon);
            let _ = writeln!(out, "cycles = {}", z.cycles);
            let _ = writeln!(out, "seed = {}", z.seed);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Dynamics,
    Szilard,
}

#[derive(Debug, Default)]
struct DynamicsDraft {
    header_line: usize,
    length: Option<(usize, usize)>,
    dt: Option<(f64, usize)>,
    t_end: Option<(f64, usize)>,
    gamma: Option<(f64, usize)>,
    subsumers: Vec<(SubsumerSpec, usize, usize)>,
    inputs: Vec<(InputSpec, usize, usize)>,
}

#[derive(Debug, Default)]
struct SzilardDraft {
    header_line: usize,
    temperature: Option<(f64, usize)>,
    epsilon: Option<(f64, usize)>,
    cycles: Option<(u64, usize)>,
    seed: Option<(u64, usize)>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut section: Option<Section> = None;
    let mut dynamics: Option<DynamicsDraft> = None;
    let mut szilard: Option<SzilardDraft> = None;
    let mut line_count = 0;

    for (index, raw_line) in text.lines().enumerate() {
        let line = index + 1;
        line_count = line;
        let content = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }

        if let Some(name) = trimmed.strip_prefix('[') {
            let column = column_of(content, trimmed) + 1;
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| ScenarioError::new(line, column, "unterminated section header"))?;
            section = Some(match name {
                "dynamics" => {
                    if dynamics.is_some() {
                        return Err(ScenarioError::new(
                            line,
                            column,
                            "duplicate [dynamics] section",
                        ));
                    }
                    dynamics = Some(DynamicsDraft {
                        header_line: line,
                        ..Default::default()
                    });
                    Section::Dynamics
                }
                "szilard" => {
                    if szilard.is_some() {
                        return Err(ScenarioError::new(
                            line,
                            column,
                            "duplicate [szilard] section",
                        ));
                    }
                    szilard = Some(SzilardDraft {
                        header_line: line,
                        ..Default::default()
                    });
                    Section::Szilard
                }
                other => {
                    return Err(ScenarioError::new(
                        line,
                        column,
                        format!("unknown section [{other}]; expected [dynamics] or [szilard]"),
                    ));
                }
            });
            continue;
        }

        let key_column = column_of(content, trimmed);
        let (key, value, value_column) = split_key_value(content, trimmed, line)?;
        match section {
            None => {
                return Err(ScenarioError::new(
                    line,
                    key_column,
                    format!("key `{key}` appears before any section header"),
                ));
            }
            Some(Section::Dynamics) => {
                let draft = dynamics.as_mut().expect("section implies draft");
                parse_dynamics_key(draft, key, value, line, key_column, value_column)?;
            }
            Some(Section::Szilard) => {
                let draft = szilard.as_mut().expect("section implies draft");
                parse_szilard_key(draft, key, value, line, key_column, value_column)?;
            }
        }
    }

    if dynamics.is_none() && szilard.is_none() {
        return Err(ScenarioError::new(
            line_count.max(1),
            1,
            "scenario defines no [dynamics] or [szilard] section",
        ));
    }

    Ok(Scenario {
        dynamics: dynamics.map(finish_dynamics).transpose()?,
        szilard: szilard.map(finish_szilard).transpose()?,
    })
}

fn column_of(content: &str, token: &str) -> usize {
    let offset = token.as_ptr() as usize - content.as_ptr() as usize;
    content[..offset].chars().count() + 1
}

fn split_key_value<'a>(
    content: &'a str,
    trimmed: &'a str,
    line: usize,
) -> Result<(&'a str, &'a str, usize), ScenarioError> {
    let eq = trimmed.find('=').ok_or_else(|| {
        ScenarioError::new(
            line,
            column_of(content, trimmed),
            "expected `key = value` or a section header",
        )
    })?;
    let key = trimmed[..eq].trim_end();
    let value = trimmed[eq + 1..].trim();
    if key.is_empty() {
        return Err(ScenarioError::new(
            line,
            column_of(content, trimmed),
            "missing key before `=`",
        ));
    }
    if value.is_empty() {
        return Err(ScenarioError::new(
            line,
            column_of(content, trimmed) + trimmed[..eq + 1].chars().count(),
            format!("missing value for key `{key}`"),
        ));
    }
    Ok((key, value, column_of(content, value)))
}

fn parse_finite_f64(value: &str, line: usize, column: usize, key: &str) -> Result<f64, ScenarioError> {
    let parsed: f64 = value.parse().map_err(|_| {
        ScenarioError::new(line, column, format!("`{key}` expects a number, got `{value}`"))
    })?;
    if !parsed.is_finite() {
        return Err(ScenarioError::new(
            line,
            column,
            format!("`{key}` must be finite, got `{value}`"),
        ));
    }
    Ok(parsed)
}

fn parse_u64(value: &str, line: usize, column: usize, key: &str) -> Result<u64, ScenarioError> {
    value.parse().map_err(|_| {
        ScenarioError::new(
            line,
            column,
            format!("`{key}` expects a nonnegative integer, got `{value}`"),
        )
    })
}

fn set_once<T>(
    slot: &mut Option<(T, usize)>,
    value: T,
    line: usize,
    column: usize,
    key: &str,
) -> Result<(), ScenarioError> {
    if let Some((_, first)) = slot {
        return Err(ScenarioError::new(
            line,
            column,
            format!("duplicate key `{key}`; first set on line {first}"),
        ));
    }
    *slot = Some((value, line));
    Ok(())
}

/// Splits a value into whitespace-separated tokens with their 1-based
/// columns in the original line.
fn tokens_with_columns<'a>(content: &'a str, value: &'a str) -> Vec<(&'a str, usize)> {
    let base = value.as_ptr() as usize - content.as_ptr() as usize;
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in value.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((&value[s..i], content[..base + s].chars().count() + 1));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((&value[s..], content[..base + s].chars().count() + 1));
    }
    out
}

fn parse_shape(token: &str, line: usize, column: usize) -> Result<Shape, ScenarioError> {
    Shape::from_str(token)
        .map_err(|e| ScenarioError::new(line, column, format!("invalid shape `{token}`: {e}")))
}

fn parse_dynamics_key(
    draft: &mut DynamicsDraft,
    key: &str,
    value: &str,
    line: usize,
    key_column: usize,
    value_column: usize,
) -> Result<(), ScenarioError> {
    match key {
        "length" => {
            let parsed: usize = value.parse().map_err(|_| {
                ScenarioError::new(
                    line,
                    value_column,
                    format!("`length` expects a positive integer, got `{value}`"),
                )
            })?;
            if parsed == 0 {
                return Err(ScenarioError::new(line, value_column, "`length` must be at least 1"));
            }
            set_once(&mut draft.length, parsed, line, value_column, key)
        }
        "dt" => {
            let parsed = parse_finite_f64(value, line, value_column, key)?;
            if parsed <= 0.0 {
                return Err(ScenarioError::new(line, value_column, "`dt` must be positive"));
            }
            set_once(&mut draft.dt, parsed, line, value_column, key)
        }
        "t_end" => {
            let parsed = parse_finite_f64(value, line, value_column, key)?;
            set_once(&mut draft.t_end, parsed, line, value_column, key)
        }
        "gamma" => {
            let parsed = parse_finite_f64(value, line, value_column, key)?;
            if parsed < 0.0 {
                return Err(ScenarioError::new(line, value_column, "`gamma` must be nonnegative"));
            }
            set_once(&mut draft.gamma, parsed, line, value_column, key)
        }
        "subsumer" => {
            // Columns refer to the unstripped line, which shares its prefix
            // with the comment-stripped content.
            let tokens = tokens_with_columns(value, value);
            let [(shape_tok, _), (strength_tok, strength_col)] = tokens.as_slice() else {
                return Err(ScenarioError::new(
                    line,
                    value_column,
                    "`subsumer` expects `<shape> <strength>`",
                ));
            };
            let shape = parse_shape(shape_tok, line, value_column)?;
            let strength =
                parse_finite_f64(strength_tok, line, value_column + strength_col - 1, "strength")?;
            if strength < 0.0 {
                return Err(ScenarioError::new(
                    line,
                    value_column + strength_col - 1,
                    "subsumer strength must be nonnegative",
                ));
            }
            draft
                .subsumers
                .push((SubsumerSpec { shape, strength }, line, value_column));
            Ok(())
        }
        "input" => {
            let tokens = tokens_with_columns(value, value);
            if tokens.len() != 2 && tokens.len() != 4 {
                return Err(ScenarioError::new(
                    line,
                    value_column,
                    "`input` expects `<shape> <rate>` or `<shape> <rate> <t_start> <t_end>`",
                ));
            }
            let shape = parse_shape(tokens[0].0, line, value_column)?;
            let rate_col = value_column + tokens[1].1 - 1;
            let rate = parse_finite_f64(tokens[1].0, line, rate_col, "rate")?;
            if rate < 0.0 {
                return Err(ScenarioError::new(line, rate_col, "input rate must be nonnegative"));
            }
            let window = if tokens.len() == 4 {
                let start_col = value_column + tokens[2].1 - 1;
                let start = parse_finite_f64(tokens[2].0, line, start_col, "t_start")?;
                let end = parse_finite_f64(tokens[3].0, line, value_column + tokens[3].1 - 1, "t_end")?;
                if start >= end {
                    return Err(ScenarioError::new(
                        line,
                        start_col,
                        format!("input window must satisfy start < end, got [{start}, {end})"),
                    ));
                }
                Some((start, end))
            } else {
                None
            };
            draft
                .inputs
                .push((InputSpec { shape, rate, window }, line, value_column));
            Ok(())
        }
        other => Err(ScenarioError::new(
            line,
            key_column,
            format!("unknown key `{other}` in [dynamics] section"),
        )),
    }
}

fn parse_szilard_key(
    draft: &mut SzilardDraft,
    key: &str,
    value: &str,
    line: usize,
    key_column: usize,
    value_column: usize,
) -> Result<(), ScenarioError> {
    match key {
        "temperature" => {
            let parsed = parse_finite_f64(value, line, value_column, key)?;
            if parsed <= 0.0 {
                return Err(ScenarioError::new(
                    line,
                    value_column,
                    "`temperature` must be positive kelvin",
                ));
            }
            set_once(&mut draft.temperature, parsed, line, value_column, key)
        }
        "epsilon" => {
            let parsed = parse_finite_f64(value, line, value_column, key)?;
            if !(0.0..0.5).contains(&parsed) {
                return Err(ScenarioError::new(
                    line,
                    value_column,
                    format!("`epsilon` must lie in [0, 0.5), got {parsed}"),
                ));
            }
            set_once(&mut draft.epsilon, parsed, line, value_column, key)
        }
        "cycles" => {
            let parsed = parse_u64(value, line, value_column, key)?;
            if parsed == 0 {
                return Err(ScenarioError::new(line, value_column, "`cycles` must be at least 1"));
            }
            set_once(&mut draft.cycles, parsed, line, value_column, key)
        }
        "seed" => {
            let parsed = parse_u64(value, line, value_column, key)?;
            set_once(&mut draft.seed, parsed, line, value_column, key)
        }
        other => Err(ScenarioError::new(
            line,
            key_column,
            format!("unknown key `{other}` in [szilard] section"),
        )),
    }
}

fn require<T>(
    slot: Option<(T, usize)>,
    key: &str,
    section: &str,
    header_line: usize,
) -> Result<T, ScenarioError> {
    slot.map(|(value, _)| value).ok_or_else(|| {
        ScenarioError::new(
            header_line,
            1,
            format!("missing key `{key}` in [{section}] section"),
        )
    })
}

fn finish_dynamics(draft: DynamicsDraft) -> Result<DynamicsSection, ScenarioError> {
    let header_line = draft.header_line;
    let dt = require(draft.dt, "dt", "dynamics", header_line)?;
    let (t_end, t_end_line) = draft.t_end.ok_or_else(|| {
        ScenarioError::new(header_line, 1, "missing key `t_end` in [dynamics] section")
    })?;
    if t_end < dt {
        return Err(ScenarioError::new(
            t_end_line,
            1,
            format!("`t_end` ({t_end}) must be at least one `dt` ({dt})"),
        ));
    }
    if draft.subsumers.is_empty() {
        return Err(ScenarioError::new(
            header_line,
            1,
            "[dynamics] section needs at least one `subsumer` line",
        ));
    }

    // Shape-length discipline: an explicit `length` wins; otherwise the
    // first shape fixes it. Violations point at the offending line.
    let mut expected = draft.length.map(|(len, _)| len);
    for (spec, line, column) in draft.subsumers.iter().map(|(s, l, c)| (&s.shape, l, c)).chain(
        draft.inputs.iter().map(|(i, l, c)| (&i.shape, l, c)),
    ) {
        match expected {
            None => expected = Some(spec.len()),
            Some(len) if spec.len() != len => {
                return Err(ScenarioError::new(
                    *line,
                    *column,
                    format!("shape `{spec}` has length {}, expected {len}", spec.len()),
                ));
            }
            Some(_) => {}
        }
    }

    Ok(DynamicsSection {
        length: draft.length.map(|(len, _)| len),
        dt,
        t_end,
        gamma: draft.gamma.map(|(g, _)| g).unwrap_or(0.0),
        subsumers: draft.subsumers.into_iter().map(|(s, _, _)| s).collect(),
        inputs: draft.inputs.into_iter().map(|(i, _, _)| i).collect(),
    })
}

fn finish_szilard(draft: SzilardDraft) -> Result<SzilardSection, ScenarioError> {
    let header_line = draft.header_line;
    Ok(SzilardSection {
        temperature: draft
            .temperature
            .map(|(t, _)| t)
            .unwrap_or(DEFAULT_TEMPERATURE_K),
        epsilon: require(draft.epsilon, "epsilon", "szilard", header_line)?,
        cycles: require(draft.cycles, "cycles", "szilard", header_line)?,
        seed: require(draft.seed, "seed", "szilard", header_line)?,
    })
}
