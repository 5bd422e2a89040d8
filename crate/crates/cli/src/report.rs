//! Tabular results with a commented `key=value` header and an optional JSON
//! sidecar.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// First 16 hex digits of the SHA-256 of the experiment settings as JSON.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let json = serde_json::to_string(&cfg.identity()).expect("config serializes");
    let digest = Sha256::digest(json.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// A CSV cell for a float; non-finite values become `inf`, `-inf` or `nan`.
pub fn num(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None if x.is_nan() => Value::String("nan".into()),
        None if x > 0.0 => Value::String("inf".into()),
        None => Value::String("-inf".into()),
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::String("na".into()), num)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    /// `columns` are the command's own columns; `seed` and `config_hash`
    /// are appended to every row.
    pub fn new(cfg: &ExperimentConfig, columns: &[&str]) -> Self {
        let mut cols: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
        cols.push("seed".into());
        cols.push("config_hash".into());
        Report {
            command: cfg.command.clone().unwrap_or_default(),
            config: cfg.identity(),
            config_hash: config_hash(cfg),
            columns: cols,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, mut row: Vec<Value>) {
        assert_eq!(row.len() + 2, self.columns.len(), "row width");
        row.push(self.config.seed.map_or(Value::String("na".into()), Value::from));
        row.push(Value::String(self.config_hash.clone()));
        self.rows.push(row);
    }

    /// Position of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cell text at `row`, `column`.
    pub fn get(&self, row: usize, name: &str) -> Option<String> {
        Some(cell(self.rows.get(row)?.get(self.column(name)?)?))
    }

    pub fn header(&self) -> String {
        let mut out = format!("# wiretap {} {}\n", self.command, env!("CARGO_PKG_VERSION"));
        if let Value::Object(map) = serde_json::to_value(&self.config).expect("config serializes") {
            for (k, v) in map {
                out.push_str(&format!("# {k}={}\n", cell(&v)));
            }
        }
        out.push_str(&format!("# config_hash={}\n", self.config_hash));
        out
    }

    /// The column header and data rows.
    pub fn body(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(cell)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn to_csv(&self) -> String {
        self.header() + &self.body()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Writes the CSV to `--out` (stdout otherwise) and the sidecar to `--json`.
    pub fn emit(&self, out: Option<&Path>, json: Option<&Path>) -> Result<(), CliError> {
        let write = |path: &Path, text: String| {
            std::fs::write(path, text).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })
        };
        match out {
            Some(path) => write(path, self.to_csv())?,
            None => print!("{}", self.to_csv()),
        }
        if let Some(path) = json {
            write(path, self.to_json())?;
        }
        Ok(())
    }
}
