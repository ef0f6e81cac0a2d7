//! Running a scenario once or along a swept axis on a fixed-size worker pool.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{linspace, Config};
use crate::error::{CliError, Result};
use crate::output::{write_output, Cell, Output, Plot, Table};
use crate::scenarios::Scenario;

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(CliError::Validation("worker count must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start {workers} workers: {e}")))
}

/// Metadata heading every summary file.
fn header(scenario: &Scenario, cfg: &Config) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("scenario".into(), json!(scenario.name));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("unit".into(), json!(scenario.unit));
    m.insert("config".into(), cfg.to_json());
    m
}

pub struct Run {
    pub config: Config,
    pub output: Output,
    pub header: Map<String, Value>,
}

impl Run {
    pub fn write(&self, dir: &Path, plot: bool) -> Result<()> {
        write_output(dir, self.header.clone(), &self.output, plot)
    }
}

pub fn run(scenario: &Scenario, overrides: &BTreeMap<String, toml::Value>, workers: usize) -> Result<Run> {
    let config = Config::resolve(scenario.name, scenario.params(), overrides)?;
    let pool = pool(workers)?;
    let output = pool.install(|| scenario.execute(&config))?;
    let header = header(scenario, &config);
    Ok(Run { config, output, header })
}

/// `key=start:stop:points` or `key=v1,v2,...`
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub key: String,
    pub values: Vec<f64>,
}

impl std::str::FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| CliError::Parse(format!("axis `{s}`: {why}"));
        let (key, spec) = s.split_once('=').ok_or_else(|| bad("expected key=start:stop:points"))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(bad("missing key"));
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(&format!("`{t}` is not a number")));
        let values = if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').collect();
            let [start, stop, points] = parts[..] else {
                return Err(bad("a range needs exactly start:stop:points"));
            };
            let points: usize = points.trim().parse().map_err(|_| bad("points must be a positive integer"))?;
            if points == 0 {
                return Err(bad("points must be a positive integer"));
            }
            linspace(num(start)?, num(stop)?, points)
        } else {
            spec.split(',').map(num).collect::<Result<Vec<_>>>()?
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(bad("values must be finite"));
        }
        Ok(Axis { key: key.to_string(), values })
    }
}

/// Flatten the scalar entries of a summary into cells, dotted for nested
/// objects; arrays are left out.
fn scalars(prefix: &str, v: &Map<String, Value>, out: &mut BTreeMap<String, Cell>) {
    for (k, v) in v {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        let cell = match v {
            Value::Null => Cell::Empty,
            Value::Bool(b) => Cell::Bool(*b),
            Value::Number(n) => n.as_i64().map_or_else(|| Cell::Num(n.as_f64().unwrap_or(f64::NAN)), Cell::Int),
            Value::String(s) => Cell::Text(s.clone()),
            Value::Object(m) => {
                scalars(&key, m, out);
                continue;
            }
            Value::Array(_) => continue,
        };
        out.insert(key, cell);
    }
}

/// Run the scenario at every axis value. A point that fails becomes a flagged
/// row rather than aborting the sweep; rows keep the axis order.
pub fn sweep(
    scenario: &Scenario,
    overrides: &BTreeMap<String, toml::Value>,
    axis: &Axis,
    workers: usize,
) -> Result<Run> {
    let config = Config::resolve(scenario.name, scenario.params(), overrides)?;
    if !config.params().iter().any(|p| p.key == axis.key) {
        return Err(CliError::Validation(format!("axis over unknown key `{}` for scenario {}", axis.key, scenario.name)));
    }
    if !config.is_numeric(&axis.key) {
        return Err(CliError::Validation(format!("axis key `{}` is not a scalar number", axis.key)));
    }
    let pool = pool(workers)?;
    let results: Vec<Result<Output>> = pool.install(|| {
        axis.values
            .par_iter()
            .map(|&x| {
                let mut cfg = config.clone();
                cfg.set_number(&axis.key, x)?;
                scenario.execute(&cfg)
            })
            .collect()
    });

    let column = |names: &[String]| {
        if names.contains(&axis.key) {
            format!("sweep.{}", axis.key)
        } else {
            axis.key.clone()
        }
    };
    let mut flat: Vec<Option<BTreeMap<String, Cell>>> = Vec::with_capacity(results.len());
    let mut keys: Vec<String> = Vec::new();
    for r in &results {
        flat.push(r.as_ref().ok().map(|o| {
            let mut m = BTreeMap::new();
            scalars("", &o.summary, &mut m);
            for k in m.keys() {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
            m
        }));
    }
    keys.sort();
    let axis_col = column(&keys);
    let mut columns: Vec<&str> = vec![&axis_col, "status", "error"];
    columns.extend(keys.iter().map(String::as_str));
    let mut table = Table::new("sweep", &columns);
    let mut failed = 0;
    for ((x, r), m) in axis.values.iter().zip(&results).zip(&flat) {
        let mut row: Vec<Cell> = vec![(*x).into()];
        match (r, m) {
            (Ok(_), Some(m)) => {
                row.push("ok".into());
                row.push(Cell::Empty);
                row.extend(keys.iter().map(|k| m.get(k).cloned().unwrap_or(Cell::Empty)));
            }
            (Err(e), _) => {
                failed += 1;
                row.push("failed".into());
                row.push(e.to_string().into());
                row.extend(keys.iter().map(|_| Cell::Empty));
            }
            (Ok(_), None) => unreachable!("summaries are flattened for every successful point"),
        }
        table.push(row);
    }

    // per-point tables stacked with the axis value in front
    let mut stacked: Vec<Table> = Vec::new();
    for (x, r) in axis.values.iter().zip(&results) {
        let Ok(o) = r else { continue };
        for t in &o.tables {
            let idx = match stacked.iter().position(|s| s.name == t.name) {
                Some(i) => i,
                None => {
                    let col = column(&t.columns);
                    let mut cols = vec![col.as_str()];
                    cols.extend(t.columns.iter().map(String::as_str));
                    stacked.push(Table::new(&t.name, &cols));
                    stacked.len() - 1
                }
            };
            for row in &t.rows {
                let mut full = vec![Cell::Num(*x)];
                full.extend(row.iter().cloned());
                stacked[idx].rows.push(full);
            }
        }
    }

    let mut output = Output::default();
    output.summarize("points", axis.values.len());
    output.summarize("failed", failed);
    output.tables = std::iter::once(table).chain(stacked).collect();
    let numeric: Vec<&str> = keys
        .iter()
        .filter(|k| flat.iter().flatten().any(|m| matches!(m.get(*k), Some(Cell::Num(_) | Cell::Int(_)))))
        .map(String::as_str)
        .collect();
    if !numeric.is_empty() {
        output.plots.push(Plot::new("sweep", &axis_col, &numeric));
    }
    let mut header = header(scenario, &config);
    header.insert("sweep".into(), json!({ "key": axis.key, "values": axis.values }));
    Ok(Run { config, output, header })
}

/// `<base>/<scenario>` for a run, `<base>/<scenario>-sweep-<key>` for a sweep.
pub fn output_dir(base: &Path, scenario: &Scenario, axis: Option<&Axis>) -> PathBuf {
    match axis {
        None => base.join(scenario.name),
        Some(a) => base.join(format!("{}-sweep-{}", scenario.name, a.key)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_forms() {
        let a: Axis = "eta=0.1:0.3:3".parse().unwrap();
        assert_eq!(a.key, "eta");
        assert_eq!(a.values.len(), 3);
        assert!((a.values[1] - 0.2).abs() < 1e-15);
        let b: Axis = "omega0=0.1,0.5".parse().unwrap();
        assert_eq!(b.values, vec![0.1, 0.5]);
        assert!("eta".parse::<Axis>().is_err());
        assert!("eta=0:1".parse::<Axis>().is_err());
        assert!("eta=0:1:0".parse::<Axis>().is_err());
        assert!("=1".parse::<Axis>().is_err());
    }
}
