//! `svcp/1` documents and result CSVs.
//!
//! Documents are JSON. Ids and slots are 1-based, slot sets are lists of
//! inclusive `[first, last]` runs and rationals are `[numerator,
//! denominator]` pairs.

mod assignment;
mod instance;
mod results;
mod scenario;

pub use assignment::{read_assignment, write_assignment, write_trace};
pub use instance::{read_instance, read_instance_with, write_instance, ReadOptions};
pub use results::{read_results, write_gap_rows, write_results, GapRow, ResultRow};
pub use scenario::{read_scenario, write_scenario};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "svcp/1";

/// Parses JSON, rejecting fields the target type does not know.
pub(crate) fn from_json_strict<T: DeserializeOwned>(text: &str) -> Result<T> {
    from_json(text, true)
}

pub(crate) fn from_json<T: DeserializeOwned>(text: &str, strict: bool) -> Result<T> {
    let mut unknown = Vec::new();
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = {
        let mut record = |path: serde_ignored::Path<'_>| unknown.push(path.to_string());
        let ignored = serde_ignored::Deserializer::new(&mut de, &mut record);
        serde_path_to_error::deserialize(ignored).map_err(|err| {
            let path = err.path().to_string();
            let inner = err.into_inner();
            if inner.is_syntax() || inner.is_eof() {
                Error::Syntax {
                    line: inner.line(),
                    column: inner.column(),
                    message: inner.to_string(),
                }
            } else {
                let path = if path == "." { String::new() } else { path };
                Error::document(path, strip_position(&inner.to_string()))
            }
        })?
    };
    de.end().map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if strict {
        if let Some(path) = unknown.into_iter().next() {
            return Err(Error::document(path, "unknown field"));
        }
    }
    Ok(value)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Renders a document with one top-level key per line and one line per
/// element of top-level arrays, so documents diff well.
pub(crate) fn to_document_json<T: Serialize>(doc: &T) -> Vec<u8> {
    let value = serde_json::to_value(doc).expect("documents serialize to JSON");
    let mut out = String::new();
    match &value {
        Value::Object(map) => {
            out.push_str("{\n");
            let n = map.len();
            for (i, (key, v)) in map.iter().enumerate() {
                out.push_str("  ");
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                match v {
                    Value::Array(items) if !items.is_empty() => {
                        out.push_str("[\n");
                        for (j, item) in items.iter().enumerate() {
                            out.push_str("    ");
                            out.push_str(&item.to_string());
                            if j + 1 < items.len() {
                                out.push(',');
                            }
                            out.push('\n');
                        }
                        out.push_str("  ]");
                    }
                    other => out.push_str(&other.to_string()),
                }
                if i + 1 < n {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str("}\n");
        }
        other => {
            out.push_str(&other.to_string());
            out.push('\n');
        }
    }
    out.into_bytes()
}

pub(crate) fn check_header(schema_version: &str, kind: &str, want: &str) -> Result<()> {
    if schema_version != SCHEMA_VERSION {
        return Err(Error::document(
            "schema_version",
            format!("expected {SCHEMA_VERSION:?}, found {schema_version:?}"),
        ));
    }
    if kind != want {
        return Err(Error::document("kind", format!("expected {want:?}, found {kind:?}")));
    }
    Ok(())
}

pub(crate) fn utf8(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| Error::Syntax {
        line: 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        column: 0,
        message: "document is not UTF-8".into(),
    })
}

/// Inclusive 1-based runs of `true` entries.
pub(crate) fn mask_to_runs(mask: &[bool]) -> Vec<[usize; 2]> {
    let mut runs = Vec::new();
    let mut t = 0;
    while t < mask.len() {
        if mask[t] {
            let start = t;
            while t + 1 < mask.len() && mask[t + 1] {
                t += 1;
            }
            runs.push([start + 1, t + 1]);
        }
        t += 1;
    }
    runs
}

pub(crate) fn runs_to_mask(runs: &[[usize; 2]], len: usize, path: &str) -> Result<Vec<bool>> {
    let mut mask = vec![false; len];
    for (i, &[s, e]) in runs.iter().enumerate() {
        if s == 0 || s > e || e > len {
            return Err(Error::document(
                format!("{path}[{i}]"),
                format!("slot run [{s}, {e}] is not within 1..={len}"),
            ));
        }
        for m in &mut mask[s - 1..e] {
            *m = true;
        }
    }
    Ok(mask)
}

pub(crate) fn ratio_to_pair(r: crate::rational::SmallRatio) -> [i64; 2] {
    [*r.numer(), *r.denom()]
}

pub(crate) fn pair_to_ratio(p: [i64; 2], path: &str) -> Result<crate::rational::SmallRatio> {
    if p[1] == 0 {
        return Err(Error::document(path, "zero denominator"));
    }
    Ok(crate::rational::SmallRatio::new(p[0], p[1]))
}
