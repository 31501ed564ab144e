//! Machine-readable reports: a versioned JSON envelope with optional CSV
//! and plain-text renderings.

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use std::fs;
use std::path::Path;

pub const SCHEMA: &str = "theta-code-lab/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for OutputFormat {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => anyhow::bail!("unknown format '{other}' (expected json, csv or text)"),
        }
    }
}

/// Wrap a command result in the versioned envelope.
pub fn envelope<T: Serialize>(command: &str, data: &T) -> Result<Value> {
    Ok(serde_json::json!({
        "schema": SCHEMA,
        "command": command,
        "data": serde_json::to_value(data)?,
    }))
}

/// Render the envelope in the requested format.
pub fn render(value: &Value, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(format!("{}\n", serde_json::to_string_pretty(value)?)),
        OutputFormat::Text => {
            let mut out = String::new();
            render_text(value, 0, &mut out);
            Ok(out)
        }
        OutputFormat::Csv => render_csv(value),
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {val}\n")),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {item}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

/// CSV rendering: the first array of objects found becomes the table;
/// scalar fields become a leading `key,value` preamble.
fn render_csv(v: &Value) -> Result<String> {
    let mut out = String::new();
    let data = v.get("data").unwrap_or(v);
    let mut table: Option<&Vec<Value>> = None;
    if let Value::Object(map) = data {
        for (k, val) in map {
            match val {
                Value::Array(items)
                    if table.is_none() && items.iter().all(|x| x.is_object()) && !items.is_empty() =>
                {
                    table = Some(items);
                    let _ = k;
                }
                Value::Array(_) | Value::Object(_) => {}
                scalar => out.push_str(&format!("{k},{scalar}\n")),
            }
        }
    }
    if let Some(rows) = table {
        let headers: Vec<&String> = match &rows[0] {
            Value::Object(m) => m.keys().collect(),
            _ => vec![],
        };
        out.push_str(&headers.iter().map(|h| h.as_str()).collect::<Vec<_>>().join(","));
        out.push('\n');
        for row in rows {
            if let Value::Object(m) = row {
                let cells: Vec<String> = headers
                    .iter()
                    .map(|h| m.get(*h).map(|x| x.to_string()).unwrap_or_default())
                    .collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
    }
    Ok(out)
}

/// Write to the output path, or standard output when none is given.
pub fn emit(rendered: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_carries_schema_and_round_trips() {
        let v = envelope("tangent report", &serde_json::json!({"genus": 4})).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        let json = render(&v, OutputFormat::Json).unwrap();
        let back: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn csv_and_text_render() {
        let v = envelope(
            "demo",
            &serde_json::json!({
                "genus": 3,
                "points": [
                    {"kind": "generic", "ratio": 1e-9},
                    {"kind": "diagonal", "ratio": 2e-9},
                ],
            }),
        )
        .unwrap();
        let csv = render(&v, OutputFormat::Csv).unwrap();
        assert!(csv.contains("genus,3"));
        assert!(csv.contains("kind,ratio"));
        let text = render(&v, OutputFormat::Text).unwrap();
        assert!(text.contains("genus: 3"));
    }
}
