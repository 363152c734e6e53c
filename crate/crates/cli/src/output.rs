//! Rendering: pretty JSON with 17 significant digits, CSV tables, and atomic
//! file output.

use std::io::{self, Write};
use std::path::Path;

use serde_json::Value;
use varbvp_core::format::try_format_g17;

pub const SCHEMA_VERSION: &str = "1";

fn number(n: &serde_json::Number) -> String {
    if n.is_f64() {
        n.as_f64().and_then(try_format_g17).unwrap_or_else(|| "null".into())
    } else {
        n.to_string()
    }
}

fn string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, level: usize| out.extend(std::iter::repeat_n("  ", level));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&number(n)),
        Value::String(s) => out.push_str(&string(s)),
        // numeric arrays stay on one line
        Value::Array(items) if items.iter().all(Value::is_number) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, indent);
            }
            out.push(']');
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&string(k));
                out.push_str(": ");
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

/// Pretty JSON with keys sorted and every float printed as `%.17g`.
pub fn render_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

/// Text of a scalar cell; floats as `%.17g`.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => number(n),
        Value::String(s) => s.clone(),
        other => render_json(other).trim_end().to_string(),
    }
}

/// CSV with `# key=value` preamble lines.
pub fn render_csv(preamble: &[(&str, String)], header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for (k, v) in preamble {
        out.push_str(&format!("# {k}={v}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    out.push_str(&String::from_utf8(bytes).expect("utf-8 input"));
    out
}

/// Writes `text` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, text: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
