//! JSON and plain-text renderings of a report.

use serde_json::{json, Value};

use crate::error::DslError;
use crate::eval::{Record, Report};

pub fn error_value(e: &DslError) -> Value {
    json!({ "kind": e.kind, "message": e.message, "line": e.line, "column": e.col })
}

pub fn record_value(r: &Record) -> Value {
    let mut v = json!({
        "statement": r.statement,
        "line": r.line,
        "citations": r.citations,
        "notes": r.notes,
    });
    match &r.outcome {
        Ok(result) => {
            v["status"] = json!("ok");
            v["result"] = result.clone();
        }
        Err(e) => {
            v["status"] = json!("error");
            v["error"] = error_value(e);
        }
    }
    v
}

pub fn report_value(report: &Report) -> Value {
    json!({ "results": report.records.iter().map(record_value).collect::<Vec<_>>() })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(&report_value(report)).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{}.{}", prefix, k) };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{}[{}]", prefix, i), v, out);
            }
        }
        Value::String(s) => out.push(format!("  {} = {}", prefix, s)),
        other => out.push(format!("  {} = {}", prefix, other)),
    }
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    for r in &report.records {
        out.push_str(&format!("[line {}] {}\n", r.line, r.statement));
        match &r.outcome {
            Ok(v) => {
                let mut lines = Vec::new();
                flatten("", v, &mut lines);
                for l in lines {
                    out.push_str(&l);
                    out.push('\n');
                }
            }
            Err(e) => out.push_str(&format!("  error: {}\n", e)),
        }
        for c in &r.citations {
            out.push_str(&format!("  cites {}\n", c));
        }
        for n in &r.notes {
            out.push_str(&format!("  note: {}\n", n));
        }
    }
    out
}
