//! Report rendering. The JSON form is the machine-readable record; the
//! table form indents the same tree for reading; the CSV form flattens it
//! into `path,value` rows. All three are deterministic: object keys are
//! emitted in sorted order.

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

pub fn render(value: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(value).unwrap(),
        OutputFormat::Table => {
            let mut out = String::new();
            render_table(value, 0, &mut out);
            out.trim_end().to_string()
        }
        OutputFormat::Csv => {
            let mut rows = vec!["path,value".to_string()];
            flatten(value, String::new(), &mut rows);
            rows.join("\n")
        }
    }
}

fn render_table(value: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if v.is_object() || v.is_array() {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_table(v, depth + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(v)));
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                if v.is_object() || v.is_array() {
                    out.push_str(&format!("{pad}[{i}]\n"));
                    render_table(v, depth + 1, out);
                } else {
                    out.push_str(&format!("{pad}[{i}] {}\n", scalar(v)));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn flatten(value: &Value, path: String, rows: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                flatten(v, p, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, format!("{path}[{i}]"), rows);
            }
        }
        other => rows.push(format!("{path},{}", csv_escape(&scalar(other)))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
