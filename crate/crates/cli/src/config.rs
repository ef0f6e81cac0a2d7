//! Flat key-value scenario configuration.
//!
//! Files are TOML, but only as a carrier for dotted keys: nested tables are
//! flattened, so `[grid]` + `eta = [...]` and `grid.eta = [...]` are the same
//! key. Every scenario declares its keys with defaults; the resolved config
//! always holds all of them.

use std::collections::BTreeMap;

use serde_json::json;
use toml::Value;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Default {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(&'static str),
    /// a grid of increasing values
    Grid(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub key: &'static str,
    pub default: Default,
    pub help: &'static str,
}

pub fn float(key: &'static str, v: f64, help: &'static str) -> Param {
    Param { key, default: Default::Float(v), help }
}

pub fn int(key: &'static str, v: i64, help: &'static str) -> Param {
    Param { key, default: Default::Int(v), help }
}

pub fn flag(key: &'static str, v: bool, help: &'static str) -> Param {
    Param { key, default: Default::Bool(v), help }
}

pub fn text(key: &'static str, v: &'static str, help: &'static str) -> Param {
    Param { key, default: Default::Text(v), help }
}

pub fn grid(key: &'static str, v: Vec<f64>, help: &'static str) -> Param {
    Param { key, default: Default::Grid(v), help }
}

/// `points` values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        // weighted form hits both ends exactly and avoids most ulp noise in between
        n => (0..n).map(|i| (start * (n - 1 - i) as f64 + stop * i as f64) / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Grid(Vec<f64>),
}

impl Entry {
    fn kind(&self) -> &'static str {
        match self {
            Entry::Float(_) => "a number",
            Entry::Int(_) => "an integer",
            Entry::Bool(_) => "a boolean",
            Entry::Text(_) => "a string",
            Entry::Grid(_) => "a grid",
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Entry::Float(x) => json!(x),
            Entry::Int(x) => json!(x),
            Entry::Bool(x) => json!(x),
            Entry::Text(x) => json!(x),
            Entry::Grid(x) => json!(x),
        }
    }
}

/// Parse a config file into flat overrides. An empty file is rejected: a
/// config that sets nothing is almost certainly the wrong file.
pub fn parse(text: &str) -> Result<BTreeMap<String, Value>> {
    if text.trim().is_empty() {
        return Err(CliError::Parse("config file is empty".into()));
    }
    let table: toml::Table = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let mut out = BTreeMap::new();
    flatten("", &table, &mut out);
    if out.is_empty() {
        return Err(CliError::Parse("config file sets no keys".into()));
    }
    Ok(out)
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            // grid ranges stay whole so they can be expanded against their key
            Value::Table(t) if !is_range(t) => flatten(&key, t, out),
            _ => {
                out.insert(key, v.clone());
            }
        }
    }
}

fn is_range(t: &toml::Table) -> bool {
    t.contains_key("start") && t.contains_key("stop") && t.contains_key("points")
}

fn number(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn convert(key: &str, default: &Default, v: &Value) -> Result<Entry> {
    let mismatch = |want: &str| CliError::Validation(format!("key `{key}` must be {want}, got `{v}`"));
    let entry = match default {
        Default::Float(_) => Entry::Float(number(v).ok_or_else(|| mismatch("a number"))?),
        Default::Int(_) => match v {
            Value::Integer(i) => Entry::Int(*i),
            _ => return Err(mismatch("an integer")),
        },
        Default::Bool(_) => match v {
            Value::Boolean(b) => Entry::Bool(*b),
            _ => return Err(mismatch("a boolean")),
        },
        Default::Text(_) => match v {
            Value::String(s) => Entry::Text(s.clone()),
            _ => return Err(mismatch("a string")),
        },
        Default::Grid(_) => match v {
            Value::Array(items) => {
                Entry::Grid(items.iter().map(number).collect::<Option<Vec<_>>>().ok_or_else(|| mismatch("a list of numbers"))?)
            }
            Value::Table(t) if is_range(t) => {
                let start = number(&t["start"]).ok_or_else(|| mismatch("a range with numeric start"))?;
                let stop = number(&t["stop"]).ok_or_else(|| mismatch("a range with numeric stop"))?;
                let points = match &t["points"] {
                    Value::Integer(n) if *n >= 1 => *n as usize,
                    _ => return Err(mismatch("a range with a positive integer `points`")),
                };
                if t.len() != 3 {
                    return Err(mismatch("a range with exactly start, stop and points"));
                }
                Entry::Grid(linspace(start, stop, points))
            }
            _ => return Err(mismatch("a list of numbers or {start, stop, points}")),
        },
    };
    check_entry(key, &entry)?;
    Ok(entry)
}

fn check_entry(key: &str, e: &Entry) -> Result<()> {
    match e {
        Entry::Float(x) if !x.is_finite() => Err(CliError::Validation(format!("key `{key}` must be finite, got {x}"))),
        Entry::Grid(g) => {
            if g.is_empty() {
                return Err(CliError::Validation(format!("grid `{key}` is empty")));
            }
            if let Some(x) = g.iter().find(|x| !x.is_finite()) {
                return Err(CliError::Validation(format!("grid `{key}` holds non-finite value {x}")));
            }
            if g.windows(2).any(|w| w[1] <= w[0]) {
                return Err(CliError::Validation(format!("grid `{key}` must be strictly increasing")));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn from_default(d: &Default) -> Entry {
    match d {
        Default::Float(x) => Entry::Float(*x),
        Default::Int(x) => Entry::Int(*x),
        Default::Bool(x) => Entry::Bool(*x),
        Default::Text(x) => Entry::Text(x.to_string()),
        Default::Grid(x) => Entry::Grid(x.clone()),
    }
}

/// Defaults merged with overrides, for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    scenario: String,
    params: Vec<Param>,
    values: BTreeMap<String, Entry>,
}

impl Config {
    pub fn resolve(scenario: &str, params: Vec<Param>, overrides: &BTreeMap<String, Value>) -> Result<Self> {
        let mut values: BTreeMap<String, Entry> =
            params.iter().map(|p| (p.key.to_string(), from_default(&p.default))).collect();
        for (k, v) in overrides {
            let Some(p) = params.iter().find(|p| p.key == k) else {
                return Err(CliError::Validation(format!("unknown key `{k}` for scenario {scenario}")));
            };
            values.insert(k.clone(), convert(k, &p.default, v)?);
        }
        Ok(Self { scenario: scenario.to_string(), params, values })
    }

    pub fn scenario(&self) -> &str {
        &self.scenario
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    fn entry(&self, key: &str) -> &Entry {
        self.values.get(key).unwrap_or_else(|| panic!("scenario {} reads undeclared key `{key}`", self.scenario))
    }

    pub fn f64(&self, key: &str) -> f64 {
        match self.entry(key) {
            Entry::Float(x) => *x,
            Entry::Int(x) => *x as f64,
            e => panic!("key `{key}` holds {}", e.kind()),
        }
    }

    pub fn positive(&self, key: &str) -> Result<f64> {
        let x = self.f64(key);
        if x > 0.0 {
            Ok(x)
        } else {
            Err(CliError::Validation(format!("key `{key}` must be > 0, got {x}")))
        }
    }

    pub fn int(&self, key: &str) -> i64 {
        match self.entry(key) {
            Entry::Int(x) => *x,
            e => panic!("key `{key}` holds {}", e.kind()),
        }
    }

    /// An integer key that must be at least `min`.
    pub fn count(&self, key: &str, min: usize) -> Result<usize> {
        let x = self.int(key);
        if x >= min as i64 {
            Ok(x as usize)
        } else {
            Err(CliError::Validation(format!("key `{key}` must be >= {min}, got {x}")))
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        match self.entry(key) {
            Entry::Bool(x) => *x,
            e => panic!("key `{key}` holds {}", e.kind()),
        }
    }

    pub fn text(&self, key: &str) -> &str {
        match self.entry(key) {
            Entry::Text(x) => x,
            e => panic!("key `{key}` holds {}", e.kind()),
        }
    }

    pub fn grid(&self, key: &str) -> &[f64] {
        match self.entry(key) {
            Entry::Grid(x) => x,
            e => panic!("key `{key}` holds {}", e.kind()),
        }
    }

    /// Replace a numeric key, as a sweep does at each point.
    pub fn set_number(&mut self, key: &str, x: f64) -> Result<()> {
        let entry = match self.values.get(key) {
            None => return Err(CliError::Validation(format!("unknown key `{key}` for scenario {}", self.scenario))),
            Some(Entry::Float(_)) => Entry::Float(x),
            Some(Entry::Int(_)) => {
                if x.fract() != 0.0 {
                    return Err(CliError::Validation(format!("key `{key}` is an integer, got {x}")));
                }
                Entry::Int(x as i64)
            }
            Some(e) => {
                return Err(CliError::Validation(format!("key `{key}` holds {} and cannot be swept", e.kind())));
            }
        };
        check_entry(key, &entry)?;
        self.values.insert(key.to_string(), entry);
        Ok(())
    }

    pub fn is_numeric(&self, key: &str) -> bool {
        matches!(self.values.get(key), Some(Entry::Float(_) | Entry::Int(_)))
    }

    /// Every key with its resolved value, defaults included.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(self.values.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
    }

    /// The declared unit must be the one the scenario's parameters are
    /// expressed in.
    pub fn check_unit(&self, expected: &str) -> Result<()> {
        let unit = self.text("units.reference");
        if unit == expected {
            Ok(())
        } else {
            Err(CliError::Validation(format!(
                "units.reference is `{unit}`, but {} takes its parameters in units of `{expected}`",
                self.scenario
            )))
        }
    }
}
