//! Line-oriented scenario files.
//!
//! ```text
//! # comment
//! experiment = double_slit_eraser
//! marker = 90 deg
//! eraser = polarizer:45deg
//!
//! [screen]
//! points = 801
//! ```

use std::fmt;

use dchoice_core::optics::ScreenConfig;
use thiserror::Error;

use crate::schema::{schema_for, SCREEN_FIELDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleUnit {
    Deg,
    Rad,
}

impl AngleUnit {
    fn suffix(self) -> &'static str {
        match self {
            AngleUnit::Deg => "deg",
            AngleUnit::Rad => "rad",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Integer(i64),
    Real(f64),
    Bool(bool),
    /// Kept in the unit it was written in so serialization is lossless.
    Angle { value: f64, unit: AngleUnit },
    Word(String),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Integer(_) => "integer",
            Value::Real(_) => "real",
            Value::Bool(_) => "boolean",
            Value::Angle { .. } => "angle",
            Value::Word(_) => "word",
        }
    }

    pub fn radians(&self) -> Option<f64> {
        match *self {
            Value::Angle { value, unit: AngleUnit::Deg } => Some(value.to_radians()),
            Value::Angle { value, unit: AngleUnit::Rad } => Some(value),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match *self {
            Value::Real(x) => Some(x),
            Value::Integer(n) => Some(n as f64),
            _ => None,
        }
    }
}

// `{:?}` on f64 is the shortest representation that reparses exactly and
// always carries a `.` or exponent, so reals stay reals.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Integer(n) => write!(f, "{n}"),
            Value::Real(x) => write!(f, "{x:?}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Angle { value, unit } => write!(f, "{value:?} {}", unit.suffix()),
            Value::Word(w) => f.write_str(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown experiment `{0}` (see --list)")]
    UnknownExperiment(String),
    #[error("missing `experiment = ...` line")]
    MissingExperiment,
    #[error("unknown key `{key}` in {context}")]
    UnknownKey { key: String, context: String },
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("`{key}` expects {expected}, found {found}")]
    TypeMismatch { key: String, expected: String, found: String },
    #[error("`{key}` out of range: {message}")]
    OutOfRange { key: String, message: String },
}

/// Parse failure; `line` and `column` are 1-based, `line == 0` means the
/// problem is with the file as a whole.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ScenarioError {
    pub line: usize,
    pub column: usize,
    pub kind: ErrorKind,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
        }
    }
}

fn err<T>(line: usize, column: usize, kind: ErrorKind) -> Result<T, ScenarioError> {
    Err(ScenarioError { line, column, kind })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub experiment: String,
    /// Experiment settings in file order, each already checked against the schema.
    pub settings: Vec<(String, Value)>,
    /// `[screen]` overrides in file order.
    pub screen: Vec<(String, Value)>,
    pub seed: u64,
    pub shots: usize,
    pub csv: bool,
    pub ascii: bool,
}

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SHOTS: usize = 10_000;

impl Scenario {
    /// Setting value, falling back to the schema default.
    pub fn value(&self, key: &str) -> Value {
        if let Some((_, v)) = self.settings.iter().find(|(k, _)| k == key) {
            return v.clone();
        }
        let field = schema_for(&self.experiment)
            .and_then(|s| s.fields.iter().find(|f| f.key == key))
            .unwrap_or_else(|| panic!("`{key}` is not a setting of {}", self.experiment));
        parse_value(field.default).expect("schema defaults parse")
    }

    pub fn real(&self, key: &str) -> f64 {
        self.value(key).as_real().expect("validated as real")
    }

    pub fn integer(&self, key: &str) -> i64 {
        match self.value(key) {
            Value::Integer(n) => n,
            v => panic!("`{key}` validated as integer, holds {v}"),
        }
    }

    pub fn boolean(&self, key: &str) -> bool {
        matches!(self.value(key), Value::Bool(true))
    }

    pub fn word(&self, key: &str) -> String {
        self.value(key).to_string()
    }

    pub fn screen_config(&self) -> ScreenConfig {
        let mut c = ScreenConfig::default();
        for (k, v) in &self.screen {
            match k.as_str() {
                "x_min" => c.x_min = v.as_real().unwrap(),
                "x_max" => c.x_max = v.as_real().unwrap(),
                "points" => c.points = v.as_real().unwrap() as usize,
                "a" => c.a = v.as_real().unwrap(),
                "sigma" => c.sigma = v.as_real().unwrap(),
                "kappa" => c.kappa = v.as_real().unwrap(),
                "center_phase" => c.center_phase = v.radians().unwrap(),
                _ => unreachable!("screen keys are validated"),
            }
        }
        c
    }
}

fn is_key(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_word(s: &str) -> bool {
    !s.is_empty()
        && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || "_:.+-".contains(c))
}

fn looks_numeric(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_digit() || "+-.".contains(c))
}

fn parse_number(s: &str) -> Option<Value> {
    if let Ok(n) = s.parse::<i64>() {
        return Some(Value::Integer(n));
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite()).map(Value::Real)
}

/// Angle literal such as `90 deg`, `90deg` or `-1.5 rad`.
pub fn parse_angle(s: &str) -> Option<Value> {
    for unit in [AngleUnit::Deg, AngleUnit::Rad] {
        if let Some(num) = s.strip_suffix(unit.suffix()) {
            let num = num.trim_end();
            if looks_numeric(num) {
                let value = parse_number(num)?.as_real()?;
                return Some(Value::Angle { value, unit });
            }
        }
    }
    None
}

/// Type a single value literal. The error is a message for the syntax error.
pub fn parse_value(s: &str) -> Result<Value, String> {
    match s {
        "" => return Err("missing value".into()),
        "true" => return Ok(Value::Bool(true)),
        "false" => return Ok(Value::Bool(false)),
        _ => {}
    }
    if looks_numeric(s) {
        if let Some(a) = parse_angle(s) {
            return Ok(a);
        }
        return parse_number(s).ok_or_else(|| format!("malformed number `{s}`"));
    }
    if is_word(s) {
        return Ok(Value::Word(s.to_string()));
    }
    Err(format!("cannot read `{s}` as a value"))
}

struct Entry {
    key: String,
    value: Value,
    line: usize,
    key_col: usize,
    value_col: usize,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut top: Vec<Entry> = Vec::new();
    let mut screen: Vec<Entry> = Vec::new();
    let mut in_screen = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let col = |byte: usize| content[..byte].chars().count() + 1;

        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return err(line, col(indent), ErrorKind::Syntax("unterminated section header".into()));
            };
            if name.trim() != "screen" {
                return err(line, col(indent), ErrorKind::Syntax(format!("unknown section `[{}]`", name.trim())));
            }
            if in_screen {
                return err(line, col(indent), ErrorKind::Syntax("`[screen]` appears twice".into()));
            }
            in_screen = true;
            continue;
        }

        let Some(eq) = content.find('=') else {
            return err(line, col(indent), ErrorKind::Syntax("expected `key = value`".into()));
        };
        let key = content[..eq].trim();
        if !is_key(key) {
            return err(line, col(indent), ErrorKind::Syntax(format!("invalid key `{key}`")));
        }
        let after = &content[eq + 1..];
        let value_start = eq + 1 + (after.len() - after.trim_start().len());
        let value = parse_value(after.trim())
            .or_else(|m| err(line, col(value_start), ErrorKind::Syntax(m)))?;

        let bucket = if in_screen { &mut screen } else { &mut top };
        if bucket.iter().any(|e| e.key == key) {
            return err(line, col(indent), ErrorKind::DuplicateKey(key.into()));
        }
        bucket.push(Entry {
            key: key.into(),
            value,
            line,
            key_col: col(indent),
            value_col: col(value_start),
        });
    }

    let Some(exp) = top.iter().find(|e| e.key == "experiment") else {
        return err(0, 0, ErrorKind::MissingExperiment);
    };
    let experiment = match &exp.value {
        Value::Word(w) => w.clone(),
        v => return err(exp.line, exp.value_col, mismatch("experiment", "an experiment name", v)),
    };
    let Some(schema) = schema_for(&experiment) else {
        return err(exp.line, exp.value_col, ErrorKind::UnknownExperiment(experiment));
    };

    let mut scenario = Scenario {
        experiment,
        settings: Vec::new(),
        screen: Vec::new(),
        seed: DEFAULT_SEED,
        shots: DEFAULT_SHOTS,
        csv: true,
        ascii: false,
    };

    for e in top {
        match e.key.as_str() {
            "experiment" => {}
            "seed" => match e.value {
                Value::Integer(n) if n >= 0 => scenario.seed = n as u64,
                Value::Integer(_) => return err(e.line, e.value_col, range("seed", "must be non-negative")),
                ref v => return err(e.line, e.value_col, mismatch("seed", "an integer", v)),
            },
            "shots" => match e.value {
                Value::Integer(n) if (1..=10_000_000).contains(&n) => scenario.shots = n as usize,
                Value::Integer(_) => return err(e.line, e.value_col, range("shots", "must lie in [1, 10000000]")),
                ref v => return err(e.line, e.value_col, mismatch("shots", "an integer", v)),
            },
            "csv" | "ascii" => {
                let Value::Bool(b) = e.value else {
                    return err(e.line, e.value_col, mismatch(&e.key, "a boolean", &e.value));
                };
                if e.key == "csv" {
                    scenario.csv = b;
                } else {
                    scenario.ascii = b;
                }
            }
            key => {
                let Some(field) = schema.fields.iter().find(|f| f.key == key) else {
                    return err(e.line, e.key_col, ErrorKind::UnknownKey {
                        key: key.into(),
                        context: format!("experiment `{}`", scenario.experiment),
                    });
                };
                field.kind.check(key, &e.value).or_else(|k| err(e.line, e.value_col, k))?;
                scenario.settings.push((e.key, e.value));
            }
        }
    }

    for e in screen {
        let Some(field) = SCREEN_FIELDS.iter().find(|f| f.key == e.key) else {
            return err(e.line, e.key_col, ErrorKind::UnknownKey {
                key: e.key,
                context: "[screen]".into(),
            });
        };
        field.kind.check(&e.key, &e.value).or_else(|k| err(e.line, e.value_col, k))?;
        scenario.screen.push((e.key, e.value));
    }
    if let Err(e) = scenario.screen_config().validate() {
        return err(0, 0, range("screen", &e.to_string()));
    }
    Ok(scenario)
}

pub(crate) fn mismatch(key: &str, expected: &str, found: &Value) -> ErrorKind {
    ErrorKind::TypeMismatch {
        key: key.into(),
        expected: expected.into(),
        found: format!("{} `{found}`", found.type_name()),
    }
}

pub(crate) fn range(key: &str, message: &str) -> ErrorKind {
    ErrorKind::OutOfRange { key: key.into(), message: message.into() }
}

/// Canonical text form; `parse_scenario(&serialize(&s)) == Ok(s)`.
pub fn serialize(s: &Scenario) -> String {
    let mut out = format!("experiment = {}\nseed = {}\nshots = {}\n", s.experiment, s.seed, s.shots);
    out += &format!("csv = {}\nascii = {}\n", s.csv, s.ascii);
    for (k, v) in &s.settings {
        out += &format!("{k} = {v}\n");
    }
    if !s.screen.is_empty() {
        out += "\n[screen]\n";
        for (k, v) in &s.screen {
            out += &format!("{k} = {v}\n");
        }
    }
    out
}
