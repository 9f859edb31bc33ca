//! CSV output with a reproducibility header.
//!
//! Every file starts with `#`-prefixed comment lines carrying the fully
//! resolved configuration; re-running with those values reproduces the file
//! byte-identically except for the `generated_at_unix` line. Rows are plain
//! RFC-4180-style CSV: comma separators, `.` decimal point, header row.

use std::io::Write;
use std::path::Path;

use crate::config::Settings;
use crate::CliError;

pub struct CsvWriter<W: Write> {
    out: W,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, settings: &Settings) -> Result<Self, CliError> {
        for (key, value) in settings.resolved() {
            writeln!(out, "# {key} = {value}").map_err(CliError::io)?;
        }
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        // Excluded from byte-identity comparisons.
        writeln!(out, "# generated_at_unix = {stamp}").map_err(CliError::io)?;
        Ok(Self { out })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let line: Vec<String> = fields.into_iter().map(|f| f.as_ref().to_string()).collect();
        writeln!(self.out, "{}", line.join(",")).map_err(CliError::io)?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), CliError> {
        self.out.flush().map_err(CliError::io)
    }
}

/// Opens `--out` as a buffered file writer, or stdout when absent.
pub fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent).map_err(CliError::io)?;
                }
            }
            let file = std::fs::File::create(path).map_err(CliError::io)?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::BufWriter::new(std::io::stdout()))),
    }
}

/// Formats a float with full round-trip precision and no locale surprises.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        let mut s = format!("{v}");
        if !s.contains('.') {
            s.push_str(".0");
        }
        s
    }
}
