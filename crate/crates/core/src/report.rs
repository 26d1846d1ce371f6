//! Machine-readable check reports.

use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Warn,
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub tolerances: Map<String, Value>,
    pub status: Status,
    pub elapsed_ms: f64,
}

impl CheckReport {
    pub fn new(check_id: impl Into<String>) -> Self {
        Self {
            check_id: check_id.into(),
            inputs: Map::new(),
            outputs: Map::new(),
            tolerances: Map::new(),
            status: Status::Pass,
            elapsed_ms: 0.0,
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs
            .insert(key.into(), Value::String(value.to_string()));
        self
    }

    pub fn output(mut self, key: &str, value: impl Serialize) -> Self {
        self.outputs.insert(
            key.into(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
        self
    }

    /// Records `|measured| ≤ tol` (or the given predicate) and downgrades the
    /// status when it fails.
    pub fn assert_le(mut self, key: &str, measured: f64, tol: f64) -> Self {
        self.tolerances
            .insert(key.into(), serde_json::to_value(tol).unwrap_or(Value::Null));
        self.outputs.insert(
            key.into(),
            serde_json::to_value(measured).unwrap_or(Value::Null),
        );
        if !(measured.abs() <= tol) {
            self.status = Status::Fail;
        }
        self
    }

    pub fn assert_true(mut self, key: &str, ok: bool) -> Self {
        self.outputs.insert(key.into(), Value::Bool(ok));
        if !ok {
            self.status = Status::Fail;
        }
        self
    }

    pub fn warn(mut self, key: &str, note: &str) -> Self {
        self.outputs.insert(key.into(), Value::String(note.into()));
        if self.status == Status::Pass {
            self.status = Status::Warn;
        }
        self
    }

    pub fn failed(check_id: &str, err: &Error) -> Self {
        let mut r = Self::new(check_id);
        r.outputs
            .insert("error".into(), Value::String(err.to_string()));
        r.status = Status::Fail;
        r
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Runs `body`, stamping the elapsed time; errors become failed checks.
pub fn timed(check_id: &str, body: impl FnOnce() -> Result<CheckReport>) -> CheckReport {
    let start = Instant::now();
    let mut r = body().unwrap_or_else(|e| CheckReport::failed(check_id, &e));
    r.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}

/// Top-level report document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub status: Status,
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn new(command: impl Into<String>, checks: Vec<CheckReport>) -> Self {
        let status = if checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if checks.iter().any(|c| c.status == Status::Warn) {
            Status::Warn
        } else {
            Status::Pass
        };
        Self {
            schema: SCHEMA_VERSION,
            command: command.into(),
            status,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Pretty JSON with every float written to 17 significant digits.
    pub fn to_json(&self) -> Result<String> {
        let v = serde_json::to_value(self).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        serde_json::to_string_pretty(&fix_floats(v))
            .map_err(|e| Error::InvalidParameter(e.to_string()))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }
}

fn fix_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => match n.as_f64() {
            Some(x) => format_float(x),
            None => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(fix_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, fix_floats(v))).collect()),
        other => other,
    }
}

fn format_float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    let s = format!("{x:.16e}");
    s.parse::<Number>()
        .map(Value::Number)
        .unwrap_or(Value::String(s))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    use std::io::Write;
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    let io = |e: std::io::Error| Error::InvalidParameter(format!("{}: {e}", path.display()));
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Writes a two-column CSV table atomically.
pub fn write_csv(path: &Path, header: [&str; 2], rows: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::InvalidParameter(e.to_string());
    w.write_record(header).map_err(err)?;
    for (a, b) in rows {
        w.write_record([fmt_cell(*a), fmt_cell(*b)]).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    write_atomic(path, &bytes)
}

fn fmt_cell(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:.16e}")
    }
}

pub fn serialize_complex<S: Serializer>(
    c: &Complex64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&c.re)?;
    t.serialize_element(&c.im)?;
    t.end()
}

pub fn serialize_complex_array<S: Serializer, const N: usize>(
    cs: &[Complex64; N],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut t = s.serialize_tuple(N)?;
    for c in cs {
        t.serialize_element(&[c.re, c.im])?;
    }
    t.end()
}

/// `[re, im]` pairs for a slice of complex numbers.
pub fn complex_pairs(cs: &[Complex64]) -> Vec<[f64; 2]> {
    cs.iter().map(|c| [c.re, c.im]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_seventeen_digits() {
        let r = Report::new("t", vec![CheckReport::new("c").assert_le("x", 0.1, 1.0)]);
        let s = r.to_json().unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"schema\": 1"));
    }

    #[test]
    fn failing_assertion_fails_report() {
        let r = Report::new("t", vec![CheckReport::new("c").assert_le("x", 2.0, 1.0)]);
        assert!(!r.passed());
    }
}
