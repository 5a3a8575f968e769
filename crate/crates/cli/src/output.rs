use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::args::Format;
use crate::error::CliResult;

/// A row type with a fixed CSV column order.
pub trait Table {
    const HEADER: &'static [&'static str];
    fn record(&self) -> Vec<String>;
}

/// 17 significant digits, so every f64 round-trips.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_bytes<R: Table>(rows: &[R]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(R::HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

pub fn json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value).map_err(std::io::Error::from)?;
    v.push(b'\n');
    Ok(v)
}

/// Rows as CSV, or `whole` as JSON.
pub fn render<R: Table, T: Serialize>(format: Format, rows: &[R], whole: &T) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => csv_bytes(rows),
        Format::Json => json_bytes(whole),
    }
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}
