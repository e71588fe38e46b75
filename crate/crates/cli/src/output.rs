use crate::config::Format;
use anyhow::{Context, Result};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

/// A row-oriented report, renderable as CSV (header plus LF-terminated rows)
/// or as a JSON array.
pub struct Table {
    pub csv: String,
    pub json: serde_json::Value,
}

impl Table {
    pub fn new<R: Serialize>(header: &[&str], rows: &[R], cells: impl Fn(&R) -> Vec<String>) -> Table {
        let mut csv = header.join(",");
        csv.push('\n');
        for r in rows {
            writeln!(csv, "{}", cells(r).join(",")).unwrap();
        }
        Table { csv, json: serde_json::to_value(rows).expect("rows serialize") }
    }

    /// A table whose CSV was produced elsewhere.
    pub fn prerendered<R: Serialize>(csv: String, rows: &[R]) -> Table {
        Table { csv, json: serde_json::to_value(rows).expect("rows serialize") }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv.clone(),
            Format::Json => json_text(&self.json),
        }
    }
}

pub fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

/// Write the artifact to `path`, or to stdout.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                // a closed pipe (`| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}
