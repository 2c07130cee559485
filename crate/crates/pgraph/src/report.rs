//! Machine-readable run reports and their JSON/CSV renderings.

use std::collections::BTreeSet;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = "pgraph";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub passed: bool,
    pub failures: Vec<Failure>,
}

/// Rows for the CSV rendering.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    /// Library operations the run invoked, sorted.
    pub ops: BTreeSet<&'static str>,
    pub result: Value,
    pub verification: Verification,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            command: command.to_owned(),
            config,
            ops: BTreeSet::new(),
            result: Value::Null,
            verification: Verification { passed: true, failures: Vec::new() },
            table: None,
        }
    }

    pub fn op(&mut self, name: &'static str) {
        self.ops.insert(name);
    }

    pub fn fail(&mut self, check: &str, detail: impl Into<String>, value: Option<f64>) {
        self.verification.passed = false;
        self.verification.failures.push(Failure { check: check.to_owned(), detail: detail.into(), value });
    }

    /// Records a failure unless `ok`.
    pub fn expect(&mut self, ok: bool, check: &str, detail: impl Into<String>, value: Option<f64>) {
        if !ok {
            self.fail(check, detail, value);
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// The table when present, otherwise the result flattened to
    /// `key,value` rows.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                w.write_record(&t.columns)?;
                for row in &t.rows {
                    w.write_record(row.iter().map(cell))?;
                }
            }
            None => {
                w.write_record(["key", "value"])?;
                let mut flat = Vec::new();
                flatten("", &self.result, &mut flat);
                for (k, v) in flat {
                    w.write_record([k, v])?;
                }
            }
        }
        w.flush()?;
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write_to<W: Write>(&self, mut out: W, csv_format: bool) -> std::io::Result<()> {
        let text = if csv_format { self.to_csv().map_err(std::io::Error::other)? } else { self.to_json() };
        out.write_all(text.as_bytes())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_owned()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&key(k), child, out);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), child, out);
            }
        }
        leaf => out.push((prefix.to_owned(), cell(leaf))),
    }
}
