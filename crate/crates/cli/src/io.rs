//! Signal-file and CSV plumbing.
//!
//! Signal files hold one ASCII decimal per line; lines starting with '#' and
//! blank lines are skipped. All CSV numbers are written through `{}` so they
//! parse back to exactly the same f64; missing values (a risk estimate the
//! rule never computed) become empty fields rather than "NaN".

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sureblock_core::{BenchRecord, LevelDiagnostic, SummaryRow};

use crate::error::CliError;

pub fn read_signal(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| {
            CliError::input(format!("{}:{}: expected a number, got {line:?}", path.display(), idx + 1))
        })?;
        if !value.is_finite() {
            return Err(CliError::input(format!(
                "{}:{}: samples must be finite, got {line}",
                path.display(),
                idx + 1
            )));
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::input(format!("{}: no samples found", path.display())));
    }
    Ok(values)
}

pub fn write_signal(path: &Path, values: &[f64]) -> Result<(), CliError> {
    let mut out = String::with_capacity(values.len() * 20);
    for v in values {
        writeln!(out, "{v}").expect("string writes are infallible");
    }
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}

/// A float CSV field: shortest round-trip form, with NaN as an empty field.
pub fn float_field(v: f64) -> String {
    if v.is_nan() { String::new() } else { format!("{v}") }
}

pub fn write_diagnostics(path: &Path, per_level: &[LevelDiagnostic]) -> Result<(), CliError> {
    let mut out = String::from("level,branch,L_star,lambda_star,sure_value,coeff_count\n");
    for diag in per_level {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            diag.level,
            diag.rule.branch,
            diag.rule.block_size,
            float_field(diag.rule.threshold),
            float_field(diag.rule.sure_value),
            diag.coeff_count
        )
        .expect("string writes are infallible");
    }
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}

pub fn write_bench_csv(path: &Path, records: &[BenchRecord]) -> Result<(), CliError> {
    let mut out = String::from("function,n,snr,method,rep,seed,ase,sigma_hat\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.function,
            r.n,
            float_field(r.snr),
            r.method,
            r.rep,
            r.seed,
            float_field(r.ase),
            float_field(r.sigma_hat)
        )
        .expect("string writes are infallible");
    }
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<(), CliError> {
    let mut out = String::from("function,n,snr,method,mean_ase,ratio_to_sureblock\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.function,
            r.n,
            float_field(r.snr),
            r.method,
            float_field(r.mean_ase),
            float_field(r.ratio_to_sureblock)
        )
        .expect("string writes are infallible");
    }
    fs::write(path, out).map_err(|e| CliError::io(path, e))
}
