//! Tables, summaries and plot scripts, and how they land on disk.
//!
//! Numbers are written in their shortest round-trip decimal form, and
//! nothing time- or machine-dependent goes into any file, so identical
//! inputs give identical bytes.

use std::fs;
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// Shortest decimal string that parses back to the same f64.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        // Debug is the shortest round-trip form, switching to exponent
        // notation for very large and very small magnitudes
        format!("{x:?}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(x) => x.to_string(),
            Cell::Bool(x) => x.to_string(),
            Cell::Text(x) => x.clone(),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(x) => Some(*x as f64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column, `None` for non-numeric cells.
    pub fn values(&self, name: &str) -> Vec<Option<f64>> {
        let Some(c) = self.column(name) else { return Vec::new() };
        self.rows.iter().map(|r| r[c].as_f64()).collect()
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("writing to memory");
        }
        w.into_inner().expect("flushing to memory")
    }
}

/// One figure panel: `y` columns against `x`, one curve per distinct value
/// of `group` when given.
#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub table: String,
    pub x: String,
    pub y: Vec<String>,
    pub group: Option<String>,
    pub log_y: bool,
}

impl Plot {
    pub fn new(table: &str, x: &str, y: &[&str]) -> Self {
        Self { table: table.into(), x: x.into(), y: y.iter().map(|s| s.to_string()).collect(), group: None, log_y: false }
    }

    pub fn grouped(mut self, group: &str) -> Self {
        self.group = Some(group.into());
        self
    }

    pub fn log_y(mut self) -> Self {
        self.log_y = true;
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct Output {
    pub tables: Vec<Table>,
    pub summary: Map<String, Value>,
    pub plots: Vec<Plot>,
}

impl Output {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn summarize(&mut self, key: &str, v: impl Into<Value>) {
        self.summary.insert(key.to_string(), v.into());
    }
}

fn python_list(items: &[String]) -> String {
    let quoted: Vec<String> = items.iter().map(|s| format!("{s:?}")).collect();
    format!("[{}]", quoted.join(", "))
}

/// A self-contained matplotlib script that draws every panel from the CSV
/// files next to it.
pub fn plot_script(scenario: &str, plots: &[Plot]) -> String {
    let mut s = String::new();
    s.push_str("#!/usr/bin/env python3\n");
    s.push_str(&format!("# plots for {scenario}; run from this directory\n"));
    s.push_str("import csv\nimport math\nimport matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\n\n");
    s.push_str(
        "def load(name):\n    with open(name + \".csv\") as f:\n        return list(csv.DictReader(f))\n\n\
         def num(v):\n    try:\n        return float(v)\n    except ValueError:\n        return math.nan\n\n\
         def panel(table, x, ys, group, log_y, out):\n    rows = load(table)\n    fig, ax = plt.subplots()\n    \
         keys = sorted({r[group] for r in rows}, key=num) if group else [None]\n    for key in keys:\n        \
         sel = [r for r in rows if group is None or r[group] == key]\n        for y in ys:\n            \
         label = y if key is None else f\"{y} ({group}={key})\"\n            \
         ax.plot([num(r[x]) for r in sel], [num(r[y]) for r in sel], label=label)\n    \
         ax.set_xlabel(x)\n    if log_y:\n        ax.set_yscale(\"log\")\n    ax.legend(fontsize=\"small\")\n    \
         fig.savefig(out, dpi=150)\n    plt.close(fig)\n\n",
    );
    for (i, p) in plots.iter().enumerate() {
        let group = p.group.as_ref().map_or("None".to_string(), |g| format!("{g:?}"));
        s.push_str(&format!(
            "panel({:?}, {:?}, {}, {}, {}, \"{}_{}.png\")\n",
            p.table,
            p.x,
            python_list(&p.y),
            group,
            if p.log_y { "True" } else { "False" },
            p.table,
            i
        ));
    }
    s
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// `<dir>/<table>.csv` for every table, `summary.json` with the resolved
/// config embedded, and `plot.py` when requested.
pub fn write_output(dir: &Path, header: Map<String, Value>, out: &Output, plot: bool) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    for t in &out.tables {
        write(&dir.join(format!("{}.csv", t.name)), &t.to_csv())?;
    }
    let mut doc = header;
    doc.insert("results".into(), Value::Object(out.summary.clone()));
    doc.insert("tables".into(), Value::Array(out.tables.iter().map(|t| Value::String(format!("{}.csv", t.name))).collect()));
    let mut json = serde_json::to_string_pretty(&Value::Object(doc)).expect("serialising a JSON value");
    json.push('\n');
    write(&dir.join("summary.json"), json.as_bytes())?;
    if plot && !out.plots.is_empty() {
        let scenario = dir.file_name().map_or(String::new(), |s| s.to_string_lossy().into_owned());
        write(&dir.join("plot.py"), plot_script(&scenario, &out.plots).as_bytes())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02e23, -0.0, 123456.789] {
            assert_eq!(format_number(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(format_number(0.1), "0.1");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("x", &["a", "b", "c"]);
        t.push(vec![1.5.into(), Cell::Empty, "gapless".into()]);
        assert_eq!(String::from_utf8(t.to_csv()).unwrap(), "a,b,c\n1.5,,gapless\n");
    }
}
