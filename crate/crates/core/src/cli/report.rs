//! Report rows shared by every subcommand. Each row checks `lower <= upper`
//! (strictly where the row says so); a missing side means nothing to compare.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub m: Option<u64>,
    pub quantity: String,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub reference: Option<f64>,
    pub paper_ref: &'static str,
    pub pass: bool,
    /// Replayable description of the input behind the row; not serialized.
    #[serde(skip)]
    pub witness: String,
}

impl Row {
    /// A row that passes when lower <= upper (both present), with relative slack.
    pub fn le(quantity: &str, tag: &'static str, m: Option<u64>, lower: f64, upper: f64) -> Row {
        Row {
            m,
            quantity: quantity.to_string(),
            lower: Some(lower),
            upper: Some(upper),
            reference: None,
            paper_ref: tag,
            pass: lower <= upper * (1.0 + SLACK) || lower <= upper + SLACK,
            witness: String::new(),
        }
    }

    /// A row that passes when lower < upper.
    pub fn lt(quantity: &str, tag: &'static str, m: Option<u64>, lower: f64, upper: f64) -> Row {
        Row {
            pass: lower < upper,
            ..Row::le(quantity, tag, m, lower, upper)
        }
    }

    /// A row whose verdict was decided elsewhere (e.g. in exact arithmetic).
    pub fn verdict(quantity: &str, tag: &'static str, m: Option<u64>, pass: bool) -> Row {
        Row {
            m,
            quantity: quantity.to_string(),
            lower: None,
            upper: None,
            reference: None,
            paper_ref: tag,
            pass,
            witness: String::new(),
        }
    }

    pub fn with_values(mut self, lower: Option<f64>, upper: Option<f64>) -> Row {
        self.lower = lower;
        self.upper = upper;
        self
    }

    pub fn with_reference(mut self, reference: f64) -> Row {
        self.reference = Some(reference);
        self
    }

    pub fn with_pass(mut self, pass: bool) -> Row {
        self.pass = pass;
        self
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Row {
        self.witness = witness.into();
        self
    }
}

/// Relative slack for float comparisons in rows.
pub const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn render(rows: &[Row], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
        }
    }
}

/// Writes to `out`, or stdout when absent.
pub fn emit(text: &str, out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
