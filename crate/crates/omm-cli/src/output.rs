//! Deterministic result emission. CSV uses a header row, `.` decimals,
//! `\n` line ends, and exponent-form floats; JSON floats use the shortest
//! representation that re-parses to the identical bits, so outputs
//! round-trip exactly and identical configs produce byte-identical files.

use std::path::{Path, PathBuf};

use serde::Serialize;

use omm_core::entanglement::SweepResult;
use omm_core::gaussian::CovarianceMatrix;
use omm_core::transfer::WignerGrid;

use crate::CliError;

/// Exponent-form float with shortest round-trip mantissa.
pub fn fmt(value: f64) -> String {
    format!("{value:e}")
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(CliError::Io)?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(CliError::Io)?;
    Ok(path)
}

pub fn cm_rows(cm: &CovarianceMatrix) -> Vec<Vec<f64>> {
    let n = cm.dim();
    (0..n)
        .map(|i| (0..n).map(|j| cm.matrix()[(i, j)]).collect())
        .collect()
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("JSON serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn cm_csv(cm: &CovarianceMatrix, header: &str) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in cm_rows(cm) {
        let line: Vec<String> = row.iter().map(|&v| fmt(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    match result.param2 {
        Some(p2) => {
            out.push_str(&format!(
                "{},{},e_n,stable,max_real_eig\n",
                result.param1.name(),
                p2.name()
            ));
            for row in &result.rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt(row.value1),
                    fmt(row.value2.expect("two-axis sweep rows carry value2")),
                    fmt(row.e_n),
                    row.stable,
                    fmt(row.max_real_eig)
                ));
            }
        }
        None => {
            out.push_str(&format!(
                "{},e_n,stable,max_real_eig\n",
                result.param1.name()
            ));
            for row in &result.rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt(row.value1),
                    fmt(row.e_n),
                    row.stable,
                    fmt(row.max_real_eig)
                ));
            }
        }
    }
    out
}

pub fn wigner_csv(grid: &WignerGrid) -> String {
    let mut out = String::from("q,p,w\n");
    for (iq, &q) in grid.q_values.iter().enumerate() {
        for (ip, &p) in grid.p_values.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt(q),
                fmt(p),
                fmt(grid.value(iq, ip))
            ));
        }
    }
    out
}

#[derive(Serialize)]
pub struct WignerJson {
    pub q_values: Vec<f64>,
    pub p_values: Vec<f64>,
    /// Row-major over (q, p).
    pub density: Vec<f64>,
    pub normalization: f64,
}

impl From<&WignerGrid> for WignerJson {
    fn from(grid: &WignerGrid) -> Self {
        Self {
            q_values: grid.q_values.clone(),
            p_values: grid.p_values.clone(),
            density: grid.density.clone(),
            normalization: grid.normalization,
        }
    }
}
