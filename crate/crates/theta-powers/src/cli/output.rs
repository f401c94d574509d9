//! Rendering of command results as text, CSV or JSON.
//!
//! Every number leaves as a decimal string; JSON documents carry `schema_version`.

use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A command result: metadata, one table and free-form notes.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(&'static str, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Report {
        Report { command, columns, ..Report::default() }
    }

    pub fn meta(&mut self, key: &'static str, value: impl Into<Value>) {
        self.meta.push((key, value.into()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format, config: &Value) -> String {
        match format {
            Format::Json => self.json(config),
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn json(&self, config: &Value) -> String {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("command".into(), json!(self.command));
        doc.insert("config".into(), config.clone());
        for (k, v) in &self.meta {
            doc.insert((*k).into(), v.clone());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| ((*c).to_string(), json!(v))).collect()))
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        doc.insert("notes".into(), json!(self.notes));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        let line = |cells: &mut dyn Iterator<Item = &str>| cells.map(csv_field).collect::<Vec<_>>().join(",") + "\n";
        out.push_str(&line(&mut self.columns.iter().copied()));
        for r in &self.rows {
            out.push_str(&line(&mut r.iter().map(String::as_str)));
        }
        out
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {v}\n"));
        }
        if !self.rows.is_empty() {
            let widths: Vec<usize> = (0..self.columns.len())
                .map(|i| self.rows.iter().map(|r| r[i].chars().count()).chain([self.columns[i].len()]).max().unwrap_or(0))
                .collect();
            let fmt_row = |cells: Vec<&str>| {
                let padded: Vec<String> =
                    cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&fmt_row(self.columns.clone()));
            for r in &self.rows {
                out.push_str(&fmt_row(r.iter().map(String::as_str).collect()));
            }
        } else if !self.columns.is_empty() {
            out.push_str("(no rows)\n");
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", vec!["m", "coeff"]);
        r.meta("k", 3);
        r.row(vec!["0".into(), "1".into()]);
        r.row(vec!["1".into(), "a,b".into()]);
        r.notes.push("reduced".into());
        r
    }

    #[test]
    fn csv_quotes_fields() {
        assert_eq!(sample().render(Format::Csv, &json!({})), "m,coeff\n0,1\n1,\"a,b\"\n");
    }

    #[test]
    fn json_carries_schema_version() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json, &json!({"precision": 50}))).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["rows"][1]["coeff"], "a,b");
        assert_eq!(v["config"]["precision"], 50);
    }

    #[test]
    fn text_aligns_columns() {
        let t = sample().render(Format::Text, &json!({}));
        assert!(t.contains("m  coeff\n0  1\n1  a,b\n"));
        assert!(t.starts_with("k: 3\n"));
    }
}
