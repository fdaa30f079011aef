//! Buffered TSV output with a reproducibility header.

use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

use crate::Cli;

pub fn score(v: f64) -> String {
    format!("{v:.6}")
}

pub struct Report {
    header: Vec<String>,
    body: Vec<String>,
    trailer: Vec<String>,
}

impl Report {
    pub fn new(cli: &Cli) -> Self {
        // everything that can change the output, threads excluded
        let canonical = format!("seed={}\n{:?}", cli.seed, cli.command);
        let hash = Sha256::digest(canonical.as_bytes());
        let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
        Self {
            header: vec![
                format!("# hinsim {}", env!("CARGO_PKG_VERSION")),
                format!("# config-sha256 {hex}"),
                format!("# seed {}", cli.seed),
            ],
            body: Vec::new(),
            trailer: Vec::new(),
        }
    }

    /// Echoes a parameter as a header comment.
    pub fn param(&mut self, key: &str, value: impl Display) {
        self.header.push(format!("# {key}={value}"));
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: impl IntoIterator<Item = S>) {
        let fields: Vec<String> = fields.into_iter().map(|f| f.as_ref().to_string()).collect();
        self.body.push(fields.join("\t"));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.body.push(text.into());
    }

    /// A comment written after the body.
    pub fn trailer(&mut self, text: impl Display) {
        self.trailer.push(format!("# {text}"));
    }

    pub fn finish(self, path: Option<&Path>) -> Result<()> {
        let mut text = String::new();
        for l in self.header.iter().chain(&self.body).chain(&self.trailer) {
            text.push_str(l);
            text.push('\n');
        }
        match path {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}
