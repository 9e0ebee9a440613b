use serde::Serialize;
use serde_json::{Map, Value};

use crate::Format;

/// A command's result: configuration echo, a table for CSV and a value for
/// JSON.
#[derive(Debug, Clone)]
pub struct Report {
    pub config: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub result: Value,
}

impl Report {
    pub fn new(subcommand: &str, args: &impl Serialize, columns: Vec<&'static str>) -> Self {
        let mut config = Map::new();
        config.insert("subcommand".into(), Value::from(subcommand));
        if let Ok(Value::Object(fields)) = serde_json::to_value(args) {
            config.extend(fields);
        }
        Report {
            config,
            columns,
            rows: Vec::new(),
            result: Value::Null,
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("config".into(), Value::Object(self.config.clone()));
                obj.insert("result".into(), self.result.clone());
                let mut s = serde_json::to_string_pretty(&Value::Object(obj))
                    .expect("JSON values always serialize");
                s.push('\n');
                s
            }
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.config {
            let v = match v {
                Value::String(s) => s.clone(),
                Value::Null => "none".into(),
                other => other.to_string(),
            };
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trip decimal form, in exponent notation outside
/// `[1e−6, 1e16)`; `nan`, `inf` and `-inf` for non-finite values.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x.is_finite() && a != 0.0 && !(1e-6..1e16).contains(&a) {
        format!("{x:e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x}")
    }
}
