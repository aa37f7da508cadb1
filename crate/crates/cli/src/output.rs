//! Rendering of command results. Rationals travel as `"p/q"` strings.

use clap::ValueEnum;
use mldkit::rat::{self, Rat};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Human,
}

pub fn rat_json(r: &Rat) -> Value {
    Value::String(rat::fmt_rat(r))
}

pub fn rats_json(rs: &[Rat]) -> Value {
    Value::Array(rs.iter().map(rat_json).collect())
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Human => human(v),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// `key: value` lines; arrays of objects become aligned tables.
fn human(v: &Value) -> String {
    let Value::Object(map) = v else {
        return format!("{}\n", scalar(v));
    };
    let mut out = String::new();
    for (key, val) in map {
        match val {
            Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) => {
                out.push_str(&format!("{key}:\n"));
                out.push_str(&table(rows));
            }
            _ => out.push_str(&format!("{key}: {}\n", scalar(val))),
        }
    }
    out
}

fn table(rows: &[Value]) -> String {
    let cols: Vec<&String> = rows[0].as_object().expect("object rows").keys().collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| cols.iter().map(|c| scalar(&r[c.as_str()])).collect())
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| {
            cells
                .iter()
                .map(|r| r[i].len())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |fields: Vec<&str>| {
        let padded: Vec<String> = fields
            .iter()
            .zip(&widths)
            .map(|(f, w)| format!("{f:<w$}"))
            .collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    let mut out = line(cols.iter().map(|c| c.as_str()).collect());
    for r in &cells {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
