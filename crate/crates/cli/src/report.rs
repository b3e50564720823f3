//! Output documents: canonical JSON or a flat CSV table.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "horoscope/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A command's result: the full JSON document plus a table view for CSV.
pub struct Report {
    pub command: &'static str,
    pub body: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &'static str, body: &impl Serialize) -> Self {
        Report {
            command,
            body: serde_json::to_value(body).expect("reports serialize to JSON"),
            header: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.header = header;
        self.rows = rows;
        self
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Json => {
                let mut doc = Map::new();
                doc.insert("schema".into(), SCHEMA.into());
                doc.insert("command".into(), self.command.into());
                doc.insert("result".into(), self.body.clone());
                let mut out = serde_json::to_vec_pretty(&canonical(Value::Object(doc))).unwrap();
                out.push(b'\n');
                out
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let mut header = vec!["schema"];
                header.extend(&self.header);
                w.write_record(&header).unwrap();
                for row in &self.rows {
                    w.write_record(std::iter::once(SCHEMA).chain(row.iter().map(String::as_str)))
                        .unwrap();
                }
                w.into_inner().unwrap()
            }
        }
    }

    pub fn write(&self, format: Format, out: Option<&std::path::Path>) -> std::io::Result<()> {
        let bytes = self.render(format);
        match out {
            Some(path) => std::fs::write(path, bytes),
            None => std::io::stdout().lock().write_all(&bytes),
        }
    }
}

/// Rebuilds every object with its keys sorted, whatever map type serde_json uses.
fn canonical(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, canonical(v))).collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_are_sorted() {
        let r = Report::new("growth", &serde_json::json!({"zeta": 1, "alpha": {"b": 2, "a": 1}}));
        let text = String::from_utf8(r.render(Format::Json)).unwrap();
        let positions: Vec<usize> = [
            "\"command\"",
            "\"result\"",
            "\"alpha\"",
            "\"a\"",
            "\"b\"",
            "\"zeta\"",
            "\"schema\"",
        ]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
    }

    #[test]
    fn csv_rows_carry_schema() {
        let r = Report::new("horo", &Value::Null).table(vec!["radius", "count"], vec![vec!["1".into(), "2".into()]]);
        assert_eq!(
            String::from_utf8(r.render(Format::Csv)).unwrap(),
            "schema,radius,count\nhoroscope/1,1,2\n"
        );
    }
}
