use crate::error::{CliError, CliResult};
use homflow_core::MonitorSample;
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

pub const CSV_HEADER: [&str; 10] = [
    "t", "alpha", "beta", "gamma", "mu", "nu", "eps", "x", "scal", "lambda_min",
];

/// 17 significant digits: enough for every `f64` to round-trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn sample_row(s: &MonitorSample) -> [f64; 10] {
    let m = &s.m;
    [s.t, m.alpha, m.beta, m.gamma, m.mu, m.nu, s.eps, s.x, s.scal, s.lambda_min]
}

pub fn write_csv(path: &Path, samples: &[MonitorSample]) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let to_err = |e: csv::Error| CliError::io(path, e);
    w.write_record(CSV_HEADER).map_err(to_err)?;
    for s in samples {
        w.write_record(sample_row(s).map(fmt_f64)).map_err(to_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(path, e))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}
