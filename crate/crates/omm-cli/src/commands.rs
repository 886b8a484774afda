//! The four subcommands. Each one runs its pipeline, writes deterministic
//! result files into the output directory, and returns the one-line
//! summary for standard output.

use serde::Serialize;

use omm_core::entanglement::{stationary_entanglement, sweep};
use omm_core::magnetoelastic::{classify_regime, g_dispersive, g_linear, g_parametric};
use omm_core::transfer::full_readout;

use crate::config::{OutputFormat, RunConfig};
use crate::mode_input::load_mode;
use crate::output::{cm_csv, cm_rows, fmt, sweep_csv, to_json, wigner_csv, write_file, WignerJson};
use crate::CliError;

const CM6_HEADER: &str = "q,p,x_a,y_a,x_m,y_m";
const CM2_HEADER: &str = "q,p";

fn numerical<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numerical(e.to_string())
}

#[derive(Serialize)]
struct EntangleJson {
    e_n: f64,
    stable: bool,
    max_real_eig: f64,
    covariance: Option<Vec<Vec<f64>>>,
}

pub fn run_entangle(config: &RunConfig) -> Result<String, CliError> {
    let result = stationary_entanglement(&config.params).map_err(numerical)?;
    let out = &config.output;
    match out.format {
        OutputFormat::Csv => {
            let mut summary = String::from("e_n,stable,max_real_eig\n");
            summary.push_str(&format!(
                "{},{},{}\n",
                fmt(result.e_n),
                result.stable,
                fmt(result.max_real_eig)
            ));
            write_file(&out.dir, "entangle.csv", &summary)?;
            if let Some(cm) = &result.cm {
                write_file(&out.dir, "entangle_cm.csv", &cm_csv(cm, CM6_HEADER))?;
            }
        }
        OutputFormat::Json => {
            let doc = EntangleJson {
                e_n: result.e_n,
                stable: result.stable,
                max_real_eig: result.max_real_eig,
                covariance: result.cm.as_ref().map(cm_rows),
            };
            write_file(&out.dir, "entangle.json", &to_json(&doc)?)?;
        }
    }
    Ok(format!(
        "E_N={} stable={} max_real_eig={}",
        result.e_n, result.stable, result.max_real_eig
    ))
}

#[derive(Serialize)]
struct SweepRowJson {
    value1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    value2: Option<f64>,
    e_n: f64,
    stable: bool,
    max_real_eig: f64,
}

#[derive(Serialize)]
struct SweepJson {
    param1: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    param2: Option<&'static str>,
    rows: Vec<SweepRowJson>,
}

pub fn run_sweep(config: &RunConfig) -> Result<String, CliError> {
    let spec = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep requires a [sweep] block".into()))?;
    let result = sweep(spec).map_err(numerical)?;
    let out = &config.output;
    match out.format {
        OutputFormat::Csv => {
            write_file(&out.dir, "sweep.csv", &sweep_csv(&result))?;
        }
        OutputFormat::Json => {
            let doc = SweepJson {
                param1: result.param1.name(),
                param2: result.param2.map(|p| p.name()),
                rows: result
                    .rows
                    .iter()
                    .map(|r| SweepRowJson {
                        value1: r.value1,
                        value2: r.value2,
                        e_n: r.e_n,
                        stable: r.stable,
                        max_real_eig: r.max_real_eig,
                    })
                    .collect(),
            };
            write_file(&out.dir, "sweep.json", &to_json(&doc)?)?;
        }
    }
    let best = result
        .argmax()
        .ok_or_else(|| CliError::Numerical("sweep produced no rows".into()))?;
    let mut at = format!("{}={}", result.param1.name(), best.value1);
    if let (Some(p2), Some(v2)) = (result.param2, best.value2) {
        at.push_str(&format!(" {}={}", p2.name(), v2));
    }
    Ok(format!(
        "rows={} max_E_N={} at {at} stable={}",
        result.rows.len(),
        best.e_n,
        best.stable
    ))
}

#[derive(Serialize)]
struct TransferJson {
    f1: f64,
    efficiency: f64,
    f_total: f64,
    rwa_ratio: f64,
    v_b: Vec<Vec<f64>>,
    v_out: Vec<Vec<f64>>,
    v_mb: Vec<Vec<f64>>,
}

pub fn run_transfer(config: &RunConfig) -> Result<String, CliError> {
    let bath = config
        .bath
        .as_ref()
        .ok_or_else(|| CliError::Config("transfer requires a [bath] block".into()))?;
    let pulse = config
        .pulse
        .as_ref()
        .ok_or_else(|| CliError::Config("transfer requires a [pulse] block".into()))?;
    let outcome =
        full_readout(&config.params, bath, pulse, &config.output.wigner).map_err(numerical)?;

    let out = &config.output;
    let panels = [
        ("wigner_magnon", &outcome.wigner_magnon),
        ("wigner_mechanical", &outcome.wigner_mechanical),
        ("wigner_output", &outcome.wigner_output),
    ];
    match out.format {
        OutputFormat::Csv => {
            let mut summary = String::from("f1,efficiency,f_total,rwa_ratio\n");
            summary.push_str(&format!(
                "{},{},{},{}\n",
                fmt(outcome.swap.fidelity),
                fmt(outcome.efficiency),
                fmt(outcome.total_fidelity),
                fmt(outcome.swap.rwa_ratio)
            ));
            write_file(&out.dir, "transfer.csv", &summary)?;
            write_file(
                &out.dir,
                "transfer_v_b.csv",
                &cm_csv(&outcome.swap.v_b, CM2_HEADER),
            )?;
            write_file(
                &out.dir,
                "transfer_v_out.csv",
                &cm_csv(&outcome.v_out, CM2_HEADER),
            )?;
            for (name, grid) in panels {
                write_file(&out.dir, &format!("{name}.csv"), &wigner_csv(grid))?;
            }
        }
        OutputFormat::Json => {
            let doc = TransferJson {
                f1: outcome.swap.fidelity,
                efficiency: outcome.efficiency,
                f_total: outcome.total_fidelity,
                rwa_ratio: outcome.swap.rwa_ratio,
                v_b: cm_rows(&outcome.swap.v_b),
                v_out: cm_rows(&outcome.v_out),
                v_mb: cm_rows(&outcome.swap.v_mb),
            };
            write_file(&out.dir, "transfer.json", &to_json(&doc)?)?;
            for (name, grid) in panels {
                write_file(
                    &out.dir,
                    &format!("{name}.json"),
                    &to_json(&WignerJson::from(grid))?,
                )?;
            }
        }
    }
    Ok(format!(
        "F1={} S={} F_total={}",
        outcome.swap.fidelity, outcome.efficiency, outcome.total_fidelity
    ))
}

#[derive(Serialize)]
struct CouplingsJson {
    g_dispersive: f64,
    g_linear_re: f64,
    g_linear_im: f64,
    g_parametric_re: f64,
    g_parametric_im: f64,
    regime: &'static str,
}

pub fn run_couplings(config: &RunConfig) -> Result<String, CliError> {
    let material = config
        .material
        .as_ref()
        .ok_or_else(|| CliError::Config("couplings requires a [material] block".into()))?;
    let mode_file = config
        .mode_file
        .as_ref()
        .ok_or_else(|| CliError::Config("couplings requires a [mode] block".into()))?;
    let d_zpm = config
        .mode_d_zpm
        .ok_or_else(|| CliError::Config("couplings requires mode.d_zpm_m".into()))?;

    let mode = load_mode(mode_file, d_zpm)?;
    let g_disp = g_dispersive(&mode, material).map_err(numerical)?;
    let g_lin = g_linear(&mode, material).map_err(numerical)?;
    let g_pa = g_parametric(&mode, material).map_err(numerical)?;
    let regime = classify_regime(config.params.omega_b, config.params.omega_m);

    let out = &config.output;
    match out.format {
        OutputFormat::Csv => {
            let mut text = String::from(
                "g_dispersive,g_linear_re,g_linear_im,g_parametric_re,g_parametric_im,regime\n",
            );
            text.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt(g_disp),
                fmt(g_lin.re),
                fmt(g_lin.im),
                fmt(g_pa.re),
                fmt(g_pa.im),
                regime.label()
            ));
            write_file(&out.dir, "couplings.csv", &text)?;
        }
        OutputFormat::Json => {
            let doc = CouplingsJson {
                g_dispersive: g_disp,
                g_linear_re: g_lin.re,
                g_linear_im: g_lin.im,
                g_parametric_re: g_pa.re,
                g_parametric_im: g_pa.im,
                regime: regime.label(),
            };
            write_file(&out.dir, "couplings.json", &to_json(&doc)?)?;
        }
    }
    Ok(format!(
        "g_disp={} g_lin={}{:+e}i g_pa={}{:+e}i regime={}",
        fmt(g_disp),
        fmt(g_lin.re),
        g_lin.im,
        fmt(g_pa.re),
        g_pa.im,
        regime
    ))
}
