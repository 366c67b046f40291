//! Machine-readable output: the JSON envelope, CSV tables and NDJSON traces.

use std::io::{self, Write};

use ctxprob_core::sim::{SimReport, TrialRecord};
use ctxprob_core::Sign;
use serde::Serialize;

/// Significant digits in CSV cells.
pub const CSV_DIGITS: usize = 12;

/// Significant digits in human-readable tables.
pub const TABLE_DIGITS: usize = 6;

/// Failures while rendering or writing output.
#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    /// Underlying IO failure.
    #[error("io: {0}")]
    Io(#[from] io::Error),
    /// JSON encoding failure.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    /// CSV encoding failure.
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Top-level JSON object of every command.
#[derive(Debug, Serialize)]
pub struct Envelope<I, R> {
    /// Subcommand name.
    pub command: &'static str,
    /// Validated inputs.
    pub inputs: I,
    /// Computed results.
    pub results: R,
    /// Seed used by randomized commands, `null` otherwise.
    pub seed: Option<u64>,
}

impl<I: Serialize, R: Serialize> Envelope<I, R> {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String, OutputError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// `x` rounded to `digits` significant digits, in shortest decimal form.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().expect("float literal");
    // avoid "-0"
    if rounded == 0.0 {
        return "0".into();
    }
    rounded.to_string()
}

/// CSV cell form of a sign.
pub fn sign_cell(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+1",
        Sign::Minus => "-1",
    }
}

/// One row per `(β, γ)` cell: `beta,gamma,count,estimate,std_error`.
pub fn write_report_csv<W: Write>(report: &SimReport, out: W) -> Result<(), OutputError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["beta", "gamma", "count", "estimate", "std_error"])?;
    for beta in Sign::ALL {
        for gamma in Sign::ALL {
            let (b, g) = (beta.index(), gamma.index());
            w.write_record([
                sign_cell(beta).to_string(),
                sign_cell(gamma).to_string(),
                report.counts[b][g].to_string(),
                fmt_sig(report.estimated_conditionals.get(beta, gamma), CSV_DIGITS),
                fmt_sig(report.std_errors[b][g], CSV_DIGITS),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Arbitrary CSV table with a header row.
pub fn write_csv<W: Write>(header: &[&str], rows: &[Vec<String>], out: W) -> Result<(), OutputError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one JSON object per trial. The first error is kept and later
/// records are dropped.
pub struct NdjsonSink<W: Write> {
    out: W,
    error: Option<OutputError>,
}

impl<W: Write> NdjsonSink<W> {
    /// Wraps a writer.
    pub fn new(out: W) -> Self {
        NdjsonSink { out, error: None }
    }

    /// Appends a record.
    pub fn push(&mut self, record: &TrialRecord) {
        if self.error.is_some() {
            return;
        }
        let res = serde_json::to_writer(&mut self.out, record)
            .map_err(OutputError::from)
            .and_then(|()| self.out.write_all(b"\n").map_err(OutputError::from));
        if let Err(e) = res {
            self.error = Some(e);
        }
    }

    /// Flushes and reports the first error.
    pub fn finish(mut self) -> Result<W, OutputError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}
