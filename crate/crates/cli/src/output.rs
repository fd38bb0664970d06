//! Deterministic writers. Floats always carry 17 significant digits.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

/// Tabular output, written as CSV with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let to_io = |e: csv::Error| CliError::Other(format!("csv: {e}"));
        w.write_record(&self.header).map_err(to_io)?;
        for r in &self.rows {
            w.write_record(r).map_err(to_io)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

/// Pretty JSON with fixed float formatting; non-finite numbers are already
/// `null` in a `Value`.
pub fn write_json<W: Write>(value: &Value, mut out: W) -> Result<(), CliError> {
    let mut s = String::new();
    emit(value, 0, &mut s);
    s.push('\n');
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn emit(v: &Value, depth: usize, s: &mut String) {
    let pad = |s: &mut String, d: usize| {
        for _ in 0..d {
            s.push_str("  ");
        }
    };
    match v {
        Value::Null => s.push_str("null"),
        Value::Bool(b) => s.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                s.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                s.push_str(&u.to_string());
            } else {
                s.push_str(&fmt_f64(n.as_f64().expect("finite")));
            }
        }
        Value::String(t) => s.push_str(&serde_json::to_string(t).expect("string")),
        Value::Array(items) => {
            // short numeric arrays (complex pairs, vectors) stay on one line
            if items.len() <= 3 && items.iter().all(|i| i.is_number() || i.is_null()) {
                s.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        s.push_str(", ");
                    }
                    emit(item, depth, s);
                }
                s.push(']');
                return;
            }
            if items.is_empty() {
                s.push_str("[]");
                return;
            }
            s.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(s, depth + 1);
                emit(item, depth + 1, s);
                if i + 1 < items.len() {
                    s.push(',');
                }
                s.push('\n');
            }
            pad(s, depth);
            s.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                s.push_str("{}");
                return;
            }
            s.push_str("{\n");
            let n = map.len();
            for (i, (k, item)) in map.iter().enumerate() {
                pad(s, depth + 1);
                s.push_str(&serde_json::to_string(k).expect("key"));
                s.push_str(": ");
                emit(item, depth + 1, s);
                if i + 1 < n {
                    s.push(',');
                }
                s.push('\n');
            }
            pad(s, depth);
            s.push('}');
        }
    }
}
