//! Reproducible text output: fixed 17-significant-digit floats and
//! provenance headers.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

/// Formats `x` with 17 significant digits in scientific notation, enough to
/// round-trip any `f64`.
///
/// ```
/// assert_eq!(paircorr::report::fmt_f64(0.5), "5.0000000000000000e-1");
/// assert_eq!(paircorr::report::fmt_f64(0.1), "1.0000000000000001e-1");
/// ```
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Name, version and settings of the run that produced an artifact.
///
/// Entries keep insertion order so headers are byte-stable.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Provenance {
    entries: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(tool: &str, version: &str) -> Self {
        let mut p = Self::default();
        p.push("tool", tool);
        p.push("version", version);
        p
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// `# key: value` lines.
    pub fn write_comment_header<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(out, "# {k}: {v}")?;
        }
        Ok(())
    }

    /// The entries as a JSON object of strings.
    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self.entries.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        Value::Object(map)
    }
}

/// `{"meta": <provenance>, ...body}` serialized with two-space indentation and
/// a trailing newline.
pub fn json_with_meta<T: Serialize>(meta: &Provenance, body: &T) -> serde_json::Result<String> {
    let mut doc = Map::new();
    doc.insert("meta".to_owned(), meta.to_json());
    match serde_json::to_value(body)? {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("result".to_owned(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc))?;
    text.push('\n');
    Ok(text)
}
