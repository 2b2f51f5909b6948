use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use glaeser_core::report::{exit_code, Check};
use serde::Serialize;
use serde_json::{Map, Value};

/// The structured document behind `--json`. Maps are ordered by key, so the
/// same inputs give the same bytes.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), inputs: Map::new(), results: Value::Null, checks: Vec::new() }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), to_value(value));
        self
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        if !self.results.is_object() {
            self.results = Value::Object(Map::new());
        }
        self.results.as_object_mut().expect("object").insert(key.into(), to_value(value));
        self
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(&self.checks)
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Everything a command produces, written out by `main` after the command returns.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub table: Vec<String>,
    /// `(file name, contents)` for `--csv`.
    pub csv: Vec<(String, String)>,
    /// `(file name, contents)` for `--plot`, `x value` per line.
    pub plots: Vec<(String, String)>,
}

impl Outcome {
    pub fn new(command: &str) -> Self {
        Outcome { report: Report::new(command), table: Vec::new(), csv: Vec::new(), plots: Vec::new() }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.table.push(s.into());
    }

    pub fn check(&mut self, c: Check) {
        self.report.checks.push(c);
    }

    pub fn plot<X: std::fmt::Display, Y: std::fmt::Display>(&mut self, name: &str, pts: impl IntoIterator<Item = (X, Y)>) {
        let mut s = String::new();
        for (x, y) in pts {
            let _ = writeln!(s, "{x} {y}");
        }
        self.plots.push((format!("{name}.dat"), s));
    }

    pub fn csv(&mut self, name: &str, contents: String) {
        self.csv.push((format!("{name}.csv"), contents));
    }
}

pub fn render_table(o: &Outcome) -> String {
    let mut s = String::new();
    for l in &o.table {
        let _ = writeln!(s, "{l}");
    }
    if !o.report.checks.is_empty() {
        let _ = writeln!(s, "checks:");
        for c in &o.report.checks {
            let _ = writeln!(s, "  {c}");
        }
    }
    s
}

pub fn write_json(path: &Path, r: &Report) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(r).map_err(std::io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

pub fn write_files(dir: &Path, files: &[(String, String)]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, contents) in files {
        fs::write(dir.join(name), contents)?;
    }
    Ok(())
}
