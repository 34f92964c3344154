//! Deterministic delimited output: `# ` comment lines, a header row, and
//! numbers with 17 significant digits.

use std::io::Write;
use std::path::Path;

use crate::config::Format;
use crate::error::CliError;

pub fn number(x: f64) -> String {
    // No negative zero from conjugation.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub struct Table {
    format: Format,
    comments: Vec<String>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(format: Format, header: &[&'static str]) -> Self {
        Self {
            format,
            comments: Vec::new(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn row(&mut self, fields: Vec<String>) {
        debug_assert_eq!(fields.len(), self.header.len());
        self.rows.push(fields);
    }

    pub fn render(&self) -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        for c in &self.comments {
            // Keep every comment on one line.
            writeln!(buf, "# {}", c.replace('\n', " "))?;
        }
        let mut w = csv::WriterBuilder::new()
            .delimiter(self.format.delimiter())
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(buf);
        let io = |e: csv::Error| CliError::validation(format!("output error: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.into_inner()
            .map_err(|e| CliError::validation(format!("output error: {e}")))
    }

    /// Writes the whole table at once, so failures never leave partial files.
    pub fn write_to(&self, path: Option<&Path>) -> Result<(), CliError> {
        let bytes = self.render()?;
        match path {
            Some(p) => std::fs::write(p, bytes)
                .map_err(|e| CliError::validation(format!("cannot write {}: {e}", p.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&bytes)?;
                out.flush()?;
                Ok(())
            }
        }
    }
}
