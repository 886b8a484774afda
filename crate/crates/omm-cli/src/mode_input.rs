//! Displacement-mode input: structured JSON (flat field arrays with
//! explicit grid shape) or CSV point clouds (x,y,z,chi_x,chi_y,chi_z)
//! from which the uniform lattice is reconstructed.

use std::path::Path;

use serde::Deserialize;

use omm_core::magnetoelastic::DisplacementMode;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonMode {
    nx: usize,
    ny: usize,
    nz: usize,
    dx: f64,
    dy: f64,
    dz: f64,
    /// Flat arrays indexed `(iz*ny + iy)*nx + ix` (x fastest).
    chi_x: Vec<f64>,
    chi_y: Vec<f64>,
    chi_z: Vec<f64>,
}

fn load_json(path: &Path, d_zpm: f64) -> Result<DisplacementMode, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read mode file `{}`: {e}", path.display()))
    })?;
    let raw: JsonMode = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("mode file `{}`: {e}", path.display())))?;
    DisplacementMode::new(
        raw.nx, raw.ny, raw.nz, raw.dx, raw.dy, raw.dz, raw.chi_x, raw.chi_y, raw.chi_z, d_zpm,
    )
    .map_err(|e| CliError::Config(format!("mode file `{}`: {e}", path.display())))
}

/// Distinct sorted coordinate values with exact f64 equality; the lattice
/// must be written exactly uniform.
fn distinct_sorted(values: &[f64]) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sorted.dedup();
    sorted
}

fn uniform_spacing(coords: &[f64], axis: &str) -> Result<f64, CliError> {
    if coords.len() < 2 {
        return Err(CliError::Config(format!(
            "mode CSV: axis {axis} has fewer than 2 distinct coordinates"
        )));
    }
    let step = coords[1] - coords[0];
    for pair in coords.windows(2) {
        if ((pair[1] - pair[0]) - step).abs() > 1e-9 * step.abs() {
            return Err(CliError::Config(format!(
                "mode CSV: axis {axis} is not uniformly spaced"
            )));
        }
    }
    Ok(step)
}

fn load_csv(path: &Path, d_zpm: f64) -> Result<DisplacementMode, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read mode file `{}`: {e}", path.display()))
    })?;
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config(format!("mode file `{}` is empty", path.display())))?
        .1;
    let expected_header = "x,y,z,chi_x,chi_y,chi_z";
    if header.trim() != expected_header {
        return Err(CliError::Config(format!(
            "mode file `{}`: expected header `{expected_header}`, got `{header}`",
            path.display()
        )));
    }

    let mut rows: Vec<[f64; 6]> = Vec::new();
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(CliError::Config(format!(
                "mode file `{}` line {}: expected 6 fields, got {}",
                path.display(),
                line_no + 1,
                fields.len()
            )));
        }
        let mut row = [0.0; 6];
        for (k, field) in fields.iter().enumerate() {
            row[k] = field.trim().parse::<f64>().map_err(|e| {
                CliError::Config(format!(
                    "mode file `{}` line {}: {e}",
                    path.display(),
                    line_no + 1
                ))
            })?;
        }
        rows.push(row);
    }

    let xs = distinct_sorted(&rows.iter().map(|r| r[0]).collect::<Vec<_>>());
    let ys = distinct_sorted(&rows.iter().map(|r| r[1]).collect::<Vec<_>>());
    let zs = distinct_sorted(&rows.iter().map(|r| r[2]).collect::<Vec<_>>());
    let (nx, ny, nz) = (xs.len(), ys.len(), zs.len());
    if rows.len() != nx * ny * nz {
        return Err(CliError::Config(format!(
            "mode file `{}`: {} rows do not fill a {}x{}x{} lattice",
            path.display(),
            rows.len(),
            nx,
            ny,
            nz
        )));
    }
    let dx = uniform_spacing(&xs, "x")?;
    let dy = uniform_spacing(&ys, "y")?;
    let dz = uniform_spacing(&zs, "z")?;

    let position = |coords: &[f64], v: f64| coords.binary_search_by(|c| c.partial_cmp(&v).unwrap());
    let total = nx * ny * nz;
    let mut chi_x = vec![f64::NAN; total];
    let mut chi_y = vec![f64::NAN; total];
    let mut chi_z = vec![f64::NAN; total];
    let mut seen = vec![false; total];
    for row in &rows {
        let ix = position(&xs, row[0]).expect("x coordinate from the distinct set");
        let iy = position(&ys, row[1]).expect("y coordinate from the distinct set");
        let iz = position(&zs, row[2]).expect("z coordinate from the distinct set");
        let idx = (iz * ny + iy) * nx + ix;
        if seen[idx] {
            return Err(CliError::Config(format!(
                "mode file `{}`: duplicate lattice point ({}, {}, {})",
                path.display(),
                row[0],
                row[1],
                row[2]
            )));
        }
        seen[idx] = true;
        chi_x[idx] = row[3];
        chi_y[idx] = row[4];
        chi_z[idx] = row[5];
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(CliError::Config(format!(
            "mode file `{}`: lattice point index {} is missing",
            path.display(),
            missing
        )));
    }

    DisplacementMode::new(nx, ny, nz, dx, dy, dz, chi_x, chi_y, chi_z, d_zpm)
        .map_err(|e| CliError::Config(format!("mode file `{}`: {e}", path.display())))
}

/// Load a displacement mode, dispatching on the file extension
/// (`.json` or `.csv`).
pub fn load_mode(path: &Path, d_zpm: f64) -> Result<DisplacementMode, CliError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => load_json(path, d_zpm),
        Some("csv") => load_csv(path, d_zpm),
        _ => Err(CliError::Config(format!(
            "mode file `{}` must end in .json or .csv",
            path.display()
        ))),
    }
}
