use std::cell::Cell;
use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use rainbow_core::{Error, Result};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    /// One line of `key=value` fields per record.
    Kv,
}

/// Writes artifacts and reports. Reports go to stdout unless an artifact
/// already went there, in which case they move to stderr.
pub struct Reporter {
    format: Format,
    stdout_taken: Cell<bool>,
}

pub type Fields<'a> = Vec<(&'a str, String)>;

pub fn field(key: &str, v: impl Display) -> (&str, String) {
    (key, v.to_string())
}

fn kv_value(v: &str) -> String {
    if !v.is_empty() && v.chars().all(|c| !c.is_whitespace() && c != '"' && c != '=') {
        v.to_string()
    } else {
        format!("{v:?}")
    }
}

impl Reporter {
    pub fn new(format: Format) -> Self {
        Reporter { format, stdout_taken: Cell::new(false) }
    }

    pub fn artifact(&self, path: Option<&Path>, text: &str) -> Result<()> {
        match path {
            Some(p) => std::fs::write(p, text)
                .map_err(|e| Error::usage(format!("cannot write {}: {e}", p.display()))),
            None => {
                self.stdout_taken.set(true);
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| Error::usage(format!("cannot write to stdout: {e}")))
            }
        }
    }

    fn emit(&self, line: &str) {
        if self.stdout_taken.get() {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }

    pub fn record(&self, fields: &[(&str, String)]) {
        let line = match self.format {
            Format::Kv => fields
                .iter()
                .map(|(k, v)| format!("{k}={}", kv_value(v)))
                .collect::<Vec<_>>()
                .join(" "),
            Format::Text => fields
                .iter()
                .map(|(k, v)| format!("{k}: {v}"))
                .collect::<Vec<_>>()
                .join("\n"),
        };
        self.emit(&line);
    }

    /// A preformatted line, shown in every format.
    pub fn raw(&self, line: &str) {
        self.emit(line);
    }

    /// Free-form text, shown only in text mode.
    pub fn note(&self, text: impl Display) {
        if self.format == Format::Text {
            self.emit(&text.to_string());
        }
    }

    pub fn is_kv(&self) -> bool {
        self.format == Format::Kv
    }

    pub fn error(&self, e: &Error) {
        match self.format {
            Format::Text => eprintln!("error: {e}"),
            Format::Kv => {
                let kind = match e {
                    Error::Usage(_) => "usage",
                    Error::Resource(_) => "resource",
                    Error::Capability(_) => "capability",
                    Error::Parse { .. } => "parse",
                    Error::Internal(_) => "internal",
                };
                eprintln!("error={kind} exit={} message={}", e.exit_code(), kv_value(&e.to_string()));
            }
        }
    }
}
