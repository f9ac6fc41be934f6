//! Sectioned `key = value` report text.

use std::fmt::Write;

use crate::floatfmt::FloatFormat;

/// Builder for a report made of `[section]` blocks of `key = value` lines.
#[derive(Debug)]
pub struct Report {
    text: String,
    floats: FloatFormat,
}

impl Report {
    pub fn new(title: &str, floats: FloatFormat) -> Self {
        let mut text = String::new();
        writeln!(text, "# {title}").unwrap();
        writeln!(text, "# float_format = {floats}").unwrap();
        Self { text, floats }
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        writeln!(self.text, "\n[{name}]").unwrap();
        self
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        writeln!(self.text, "{key} = {value}").unwrap();
        self
    }

    pub fn float(&mut self, key: &str, value: f64) -> &mut Self {
        let v = self.floats.encode(value);
        self.kv(key, v)
    }

    pub fn floats(&mut self, key: &str, values: &[f64]) -> &mut Self {
        let items: Vec<String> = values.iter().map(|v| self.floats.encode(*v)).collect();
        self.kv(key, format!("[{}]", items.join(", ")))
    }

    /// Verbatim lines (used for the canonical system block).
    pub fn raw(&mut self, block: &str) -> &mut Self {
        self.text.push_str(block);
        if !block.ends_with('\n') {
            self.text.push('\n');
        }
        self
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Parses the `[section]` / `key = value` structure back into triples.
pub fn parse_report(text: &str) -> Vec<(String, String, String)> {
    let mut section = String::new();
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = name.to_string();
        } else if let Some((k, v)) = line.split_once(" = ") {
            out.push((section.clone(), k.to_string(), v.to_string()));
        }
    }
    out
}
