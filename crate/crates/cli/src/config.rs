//! Flat `key = value` sweep configuration.
//!
//! ```text
//! # g-sweep at ω = Ω = 1
//! varied      = g                # g | omega | bigomega
//! xi1_grid    = 0.05, 1.45, 50   # start, stop, count
//! xi1_spacing = linear           # linear | reciprocal
//! alphas      = 1.2, 1.4, 1.6, 1.8, 2.0
//! omega       = 1
//! bigomega    = 1
//! method      = both             # exact | approx | both
//! n_max       = 40
//! growth_step = 20
//! tol         = 1e-10
//! hard_cap    = 400
//! output      = fig4.csv
//! format      = csv              # csv | json
//! ```
//!
//! `#` starts a comment. Lists may be wrapped in brackets. With
//! `xi1_spacing = reciprocal` the grid is uniform in `1/ξ1` and `start`,
//! `stop` are given in that reciprocal variable. The held parameters
//! default to 1 and the value of the varied one is ignored.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use isocycle_core::{Knob, Method, ModelParams, TruncationPolicy};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("key `{key}`: {message}")]
    Semantic { key: String, message: String },
}

fn semantic(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Semantic {
        key: key.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Reciprocal,
}

/// `count` points from `start` to `stop`, uniform in `ξ1` or in `1/ξ1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Grid { start, stop, count, spacing: Spacing::Linear }
    }

    pub fn reciprocal(start: f64, stop: f64, count: usize) -> Self {
        Grid { start, stop, count, spacing: Spacing::Reciprocal }
    }

    /// Grid values of the sweep variable (`ξ1` or `1/ξ1`).
    pub fn nodes(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }

    /// `ξ1` values.
    pub fn points(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => self.nodes(),
            Spacing::Reciprocal => self.nodes().into_iter().map(|u| 1.0 / u).collect(),
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.count < 2 {
            return Err(semantic("xi1_grid", "count must be at least 2"));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(semantic("xi1_grid", "start must be below stop"));
        }
        if self.spacing == Spacing::Reciprocal && self.start <= 0.0 {
            return Err(semantic("xi1_grid", "a reciprocal grid needs a positive start"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSet {
    Exact,
    Approx,
    Both,
}

impl MethodSet {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodSet::Exact => vec![Method::ExactNumeric],
            MethodSet::Approx => vec![Method::Approximate],
            MethodSet::Both => vec![Method::ExactNumeric, Method::Approximate],
        }
    }
}

impl FromStr for MethodSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "both" => Ok(MethodSet::Both),
            other => match other.parse::<Method>() {
                Ok(Method::ExactNumeric) => Ok(MethodSet::Exact),
                Ok(Method::Approximate) => Ok(MethodSet::Approx),
                Err(_) => Err(format!("unknown method `{other}` (expected exact, approx or both)")),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub varied: Knob,
    pub grid: Grid,
    pub alphas: Vec<f64>,
    pub fixed: ModelParams,
    pub methods: MethodSet,
    pub policy: TruncationPolicy,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl SweepConfig {
    /// Checks the rules that do not depend on the file syntax. The error
    /// names the key to fix.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.grid.validate()?;
        if let Err(e) = self.fixed.with(self.varied, 1.0).validate() {
            let key = match e {
                isocycle_core::Error::InvalidParameter { name, .. } => name,
                _ => self.varied.label(),
            };
            return Err(semantic(key, e.to_string()));
        }
        for x in self.grid.points() {
            if let Err(e) = self.fixed.with(self.varied, x).validate() {
                return Err(semantic("xi1_grid", format!("grid point {x}: {e}")));
            }
        }
        if self.alphas.is_empty() {
            return Err(semantic("alphas", "at least one adiabatic ratio is required"));
        }
        for &a in &self.alphas {
            if let Err(e) = self.varied.check_alpha(a) {
                return Err(semantic("alphas", e.to_string()));
            }
        }
        if self.varied == Knob::Tls && self.methods != MethodSet::Exact {
            return Err(semantic("method", "bigomega sweeps use exact levels only"));
        }
        let p = &self.policy;
        if p.n_max < 1 {
            return Err(semantic("n_max", "must be at least 1"));
        }
        if p.growth_step < 1 {
            return Err(semantic("growth_step", "must be at least 1"));
        }
        if !(p.tol.is_finite() && p.tol > 0.0) {
            return Err(semantic("tol", "must be positive"));
        }
        if p.hard_cap < p.n_max {
            return Err(semantic("hard_cap", "must be at least n_max"));
        }
        Ok(())
    }
}

const KEYS: &[&str] = &[
    "varied",
    "xi1_grid",
    "xi1_spacing",
    "alphas",
    "g",
    "omega",
    "bigomega",
    "method",
    "n_max",
    "growth_step",
    "tol",
    "hard_cap",
    "output",
    "format",
];

fn list(value: &str) -> Vec<&str> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .unwrap_or(value);
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<T>().map(Some).map_err(|e| ConfigError::Syntax {
                line,
                message: format!("`{key}`: cannot parse `{v}`: {e}"),
            }),
        }
    }

    fn floats(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => list(v)
                .into_iter()
                .map(|item| {
                    item.parse::<f64>().map_err(|_| ConfigError::Syntax {
                        line,
                        message: format!("`{key}`: `{item}` is not a number"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }
}

fn tokenize(text: &str) -> Result<Entries, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax { line, message: "missing key".into() });
        }
        if value.is_empty() {
            return Err(ConfigError::Syntax { line, message: format!("`{key}` has no value") });
        }
        if !KEYS.contains(&key) {
            return Err(semantic(key, "unknown key"));
        }
        if map.insert(key.to_string(), (line, value.to_string())).is_some() {
            return Err(ConfigError::Syntax { line, message: format!("duplicate key `{key}`") });
        }
    }
    Ok(Entries { map })
}

/// Parses and validates a configuration document, filling defaults.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let e = tokenize(text)?;
    let varied: Knob = match e.get("varied") {
        None => return Err(semantic("varied", "required")),
        Some((line, v)) => v.parse().map_err(|_| ConfigError::Syntax {
            line,
            message: format!("`varied`: unknown knob `{v}` (expected g, omega or bigomega)"),
        })?,
    };
    let grid = match e.floats("xi1_grid")? {
        None => return Err(semantic("xi1_grid", "required")),
        Some(v) => {
            if v.len() != 3 {
                return Err(semantic("xi1_grid", "expected `start, stop, count`"));
            }
            if v[2].fract() != 0.0 || v[2] < 0.0 {
                return Err(semantic("xi1_grid", "count must be a whole number"));
            }
            Grid::linear(v[0], v[1], v[2] as usize)
        }
    };
    let spacing = match e.get("xi1_spacing") {
        None | Some((_, "linear")) => Spacing::Linear,
        Some((_, "reciprocal")) => Spacing::Reciprocal,
        Some((line, other)) => {
            return Err(ConfigError::Syntax {
                line,
                message: format!("`xi1_spacing`: unknown spacing `{other}` (expected linear or reciprocal)"),
            })
        }
    };
    let alphas = e.floats("alphas")?.ok_or_else(|| semantic("alphas", "required"))?;
    let fixed = ModelParams {
        g: e.parse("g")?.unwrap_or(1.0),
        omega: e.parse("omega")?.unwrap_or(1.0),
        big_omega: e.parse("bigomega")?.unwrap_or(1.0),
        unit: varied.unit(),
    };
    let default_methods = if varied == Knob::Tls { MethodSet::Exact } else { MethodSet::Both };
    let d = TruncationPolicy::default();
    let config = SweepConfig {
        varied,
        grid: Grid { spacing, ..grid },
        alphas,
        fixed,
        methods: e.parse("method")?.unwrap_or(default_methods),
        policy: TruncationPolicy {
            n_max: e.parse("n_max")?.unwrap_or(d.n_max),
            growth_step: e.parse("growth_step")?.unwrap_or(d.growth_step),
            tol: e.parse("tol")?.unwrap_or(d.tol),
            hard_cap: e.parse("hard_cap")?.unwrap_or(d.hard_cap),
        },
        output: e.get("output").map(|(_, v)| PathBuf::from(v)),
        format: e.parse("format")?.unwrap_or_default(),
    };
    config.validate()?;
    Ok(config)
}
