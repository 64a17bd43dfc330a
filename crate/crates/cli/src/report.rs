use std::fmt::{Display, Write};

use clap::ValueEnum;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    /// Aligned `key  value` lines under section headings.
    Human,
    /// One `key=value` pair per line.
    Kv,
}

/// A command's report: the reproducibility header followed by results.
#[derive(Debug)]
pub struct Report {
    header: Vec<(String, String)>,
    fields: Vec<(String, String)>,
    notes: Vec<String>,
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let mut s = String::with_capacity(71);
    s.push_str("sha256:");
    for b in hash {
        let _ = write!(s, "{b:02x}");
    }
    s
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Report {
        let header = vec![
            ("command".to_string(), command.to_string()),
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("seed".to_string(), seed.to_string()),
            ("field".to_string(), "none".to_string()),
        ];
        Report { header, fields: Vec::new(), notes: Vec::new() }
    }

    pub fn field(&mut self, name: impl Display) {
        self.header[3].1 = name.to_string();
    }

    /// Records an input file by content hash.
    pub fn input(&mut self, flag: &str, bytes: &[u8]) {
        self.header.push((format!("input.{flag}"), digest(bytes)));
    }

    pub fn set(&mut self, key: &str, value: impl Display) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn render(&self, format: Format) -> String {
        let mut s = String::new();
        match format {
            Format::Kv => {
                for (k, v) in self.header.iter().chain(&self.fields) {
                    let _ = writeln!(s, "{k}={v}");
                }
                for n in &self.notes {
                    let _ = writeln!(s, "note={n}");
                }
            }
            Format::Human => {
                let width = self.header.iter().chain(&self.fields).map(|(k, _)| k.len()).max().unwrap_or(0);
                s.push_str("run\n");
                for (k, v) in &self.header {
                    let _ = writeln!(s, "  {k:width$}  {v}");
                }
                if !self.fields.is_empty() {
                    s.push_str("result\n");
                    for (k, v) in &self.fields {
                        let _ = writeln!(s, "  {k:width$}  {v}");
                    }
                }
                for n in &self.notes {
                    let _ = writeln!(s, "note: {n}");
                }
            }
        }
        s
    }

    /// The report as `#` comment lines, so it can precede an artifact on
    /// standard output without breaking re-parsing.
    pub fn render_commented(&self, format: Format) -> String {
        self.render(format).lines().map(|l| format!("# {l}\n")).collect()
    }
}
