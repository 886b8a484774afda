//! Configuration loading: a single TOML file with nested sections, unit
//! suffixes on every dimensioned key (`*_hz` values are ordinary
//! frequencies and are converted to angular frequencies on load), strict
//! rejection of unknown keys, and dotted-path `--set` overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use omm_core::entanglement::{SweepAxis, SweepParameter, SweepSpec};
use omm_core::magnetoelastic::MaterialParams;
use omm_core::model::{Drive, SystemParams};
use omm_core::transfer::{PulseSpec, SqueezedBath, WignerGridSpec};

use crate::CliError;

const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    params: RawParams,
    sweep: Option<RawSweep>,
    bath: Option<RawBath>,
    pulse: Option<RawPulse>,
    material: Option<RawMaterial>,
    mode: Option<RawMode>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    omega_m_hz: f64,
    omega_b_hz: f64,
    lambda_opt_m: f64,
    kappa_a_hz: f64,
    kappa_m_hz: f64,
    gamma_b_hz: f64,
    g_a_hz: f64,
    g_m_hz: f64,
    temperature_kelvin: f64,
    delta_a_hz: f64,
    delta_m_hz: f64,
    drive: RawDrive,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDrive {
    laser_power_watt: Option<f64>,
    rabi_hz: Option<f64>,
    g_a_eff_hz: Option<f64>,
    g_m_eff_hz: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis1: RawAxis,
    axis2: Option<RawAxis>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    param: String,
    values_hz: Option<Vec<f64>>,
    values_kelvin: Option<Vec<f64>>,
    min_hz: Option<f64>,
    max_hz: Option<f64>,
    min_kelvin: Option<f64>,
    max_kelvin: Option<f64>,
    count: Option<usize>,
    log: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBath {
    r: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPulse {
    g_a_eff_hz: f64,
    duration_s: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    b1_joule_per_m3: f64,
    b2_joule_per_m3: f64,
    saturation_magnetization_a_per_m: f64,
    gyromagnetic_ratio_rad_per_s_tesla: f64,
    volume_m3: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMode {
    file: String,
    d_zpm_m: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    format: Option<String>,
    dir: Option<String>,
    wigner_points: Option<usize>,
    wigner_span_sigmas: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::Config(format!(
                "output.format must be `csv` or `json`, got `{other}`"
            ))),
        }
    }
}

/// Output settings after defaults and flag overrides.
#[derive(Debug, Clone)]
pub struct OutputSettings {
    pub format: OutputFormat,
    pub dir: PathBuf,
    pub wigner: WignerGridSpec,
}

/// Which subcommand a config's optional blocks belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfiguredCommand {
    Entangle,
    Sweep,
    Transfer,
    Couplings,
}

impl ConfiguredCommand {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Entangle => "entangle",
            Self::Sweep => "sweep",
            Self::Transfer => "transfer",
            Self::Couplings => "couplings",
        }
    }
}

/// Everything a run needs, in core units.
#[derive(Debug)]
pub struct RunConfig {
    pub params: SystemParams,
    pub sweep: Option<SweepSpec>,
    pub bath: Option<SqueezedBath>,
    pub pulse: Option<PulseSpec>,
    pub material: Option<MaterialParams>,
    pub mode_file: Option<PathBuf>,
    pub mode_d_zpm: Option<f64>,
    pub output: OutputSettings,
    pub configured_command: ConfiguredCommand,
}

fn parse_override_value(raw: &str) -> toml::Value {
    if let Ok(b) = raw.parse::<bool>() {
        return toml::Value::Boolean(b);
    }
    if let Ok(i) = raw.parse::<i64>() {
        return toml::Value::Integer(i);
    }
    if let Ok(f) = raw.parse::<f64>() {
        return toml::Value::Float(f);
    }
    toml::Value::String(raw.to_string())
}

/// Apply one `--set key.path=value` override to the parsed TOML tree,
/// creating intermediate tables as needed. Unknown keys are caught later
/// by strict deserialization.
fn apply_override(tree: &mut toml::Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw_value) = assignment.split_once('=').ok_or_else(|| {
        CliError::Config(format!("--set expects key.path=value, got `{assignment}`"))
    })?;
    let segments: Vec<&str> = path.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(CliError::Config(format!(
            "--set path `{path}` has an empty segment"
        )));
    }
    let mut cursor = tree;
    for segment in &segments[..segments.len() - 1] {
        let table = cursor.as_table_mut().ok_or_else(|| {
            CliError::Config(format!("--set path `{path}`: `{segment}` is not a table"))
        })?;
        cursor = table
            .entry(segment.to_string())
            .or_insert_with(|| toml::Value::Table(toml::map::Map::new()));
    }
    let leaf = segments[segments.len() - 1];
    let table = cursor.as_table_mut().ok_or_else(|| {
        CliError::Config(format!("--set path `{path}` does not end inside a table"))
    })?;
    table.insert(leaf.to_string(), parse_override_value(raw_value));
    Ok(())
}

fn build_drive(raw: &RawDrive) -> Result<Drive, CliError> {
    let power_keys = [raw.laser_power_watt, raw.rabi_hz];
    let direct_keys = [raw.g_a_eff_hz, raw.g_m_eff_hz];
    let power_present = power_keys.iter().any(Option::is_some);
    let direct_present = direct_keys.iter().any(Option::is_some);
    match (power_present, direct_present) {
        (true, true) => Err(CliError::Config(
            "params.drive mixes power-mode keys (laser_power_watt, rabi_hz) with direct-mode \
             keys (g_a_eff_hz, g_m_eff_hz)"
                .into(),
        )),
        (false, false) => Err(CliError::Config(
            "params.drive needs either laser_power_watt + rabi_hz or g_a_eff_hz + g_m_eff_hz"
                .into(),
        )),
        (true, false) => {
            let laser_power = raw.laser_power_watt.ok_or_else(|| {
                CliError::Config("params.drive.laser_power_watt is missing".into())
            })?;
            let rabi_hz = raw
                .rabi_hz
                .ok_or_else(|| CliError::Config("params.drive.rabi_hz is missing".into()))?;
            Ok(Drive::Power {
                laser_power,
                rabi: TAU * rabi_hz,
            })
        }
        (false, true) => {
            let g_a = raw
                .g_a_eff_hz
                .ok_or_else(|| CliError::Config("params.drive.g_a_eff_hz is missing".into()))?;
            let g_m = raw
                .g_m_eff_hz
                .ok_or_else(|| CliError::Config("params.drive.g_m_eff_hz is missing".into()))?;
            Ok(Drive::Direct {
                g_a_eff: TAU * g_a,
                g_m_eff: TAU * g_m,
            })
        }
    }
}

fn build_axis(raw: &RawAxis, which: &str) -> Result<SweepAxis, CliError> {
    let param: SweepParameter = raw
        .param
        .parse()
        .map_err(|e| CliError::Config(format!("sweep.{which}.param: {e}")))?;

    let frequency = param.is_frequency();
    // Reject keys carrying the wrong unit for this parameter.
    if frequency
        && (raw.values_kelvin.is_some() || raw.min_kelvin.is_some() || raw.max_kelvin.is_some())
    {
        return Err(CliError::Config(format!(
            "sweep.{which}: parameter {} takes *_hz keys, not *_kelvin",
            param.name()
        )));
    }
    if !frequency && (raw.values_hz.is_some() || raw.min_hz.is_some() || raw.max_hz.is_some()) {
        return Err(CliError::Config(format!(
            "sweep.{which}: parameter {} takes *_kelvin keys, not *_hz",
            param.name()
        )));
    }

    let scale = if frequency { TAU } else { 1.0 };
    let explicit = if frequency {
        raw.values_hz.clone()
    } else {
        raw.values_kelvin.clone()
    };
    let range = {
        let (min, max) = if frequency {
            (raw.min_hz, raw.max_hz)
        } else {
            (raw.min_kelvin, raw.max_kelvin)
        };
        match (min, max, raw.count) {
            (None, None, None) => None,
            (Some(min), Some(max), Some(count)) => Some((min, max, count)),
            _ => {
                return Err(CliError::Config(format!(
                    "sweep.{which}: a range needs min, max and count together"
                )))
            }
        }
    };

    let values: Vec<f64> = match (explicit, range) {
        (Some(values), None) => {
            if values.is_empty() {
                return Err(CliError::Config(format!(
                    "sweep.{which}: the axis value list is empty"
                )));
            }
            values.into_iter().map(|v| scale * v).collect()
        }
        (None, Some((min, max, count))) => {
            if count < 2 {
                return Err(CliError::Config(format!(
                    "sweep.{which}: count must be at least 2"
                )));
            }
            let log = raw.log.unwrap_or(false);
            if log && (min <= 0.0 || max <= 0.0) {
                return Err(CliError::Config(format!(
                    "sweep.{which}: log spacing needs positive min and max"
                )));
            }
            (0..count)
                .map(|i| {
                    let t = i as f64 / (count - 1) as f64;
                    let v = if log {
                        min * (max / min).powf(t)
                    } else {
                        min + (max - min) * t
                    };
                    scale * v
                })
                .collect()
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Config(format!(
                "sweep.{which}: give either a value list or a min/max/count range, not both"
            )))
        }
        (None, None) => {
            return Err(CliError::Config(format!(
                "sweep.{which}: no values given (use values_* or min/max/count)"
            )))
        }
    };

    Ok(SweepAxis { param, values })
}

fn infer_command(raw: &RawConfig) -> Result<ConfiguredCommand, CliError> {
    let has_sweep = raw.sweep.is_some();
    let has_transfer = raw.bath.is_some() || raw.pulse.is_some();
    let has_couplings = raw.material.is_some() || raw.mode.is_some();
    match (has_sweep, has_transfer, has_couplings) {
        (false, false, false) => Ok(ConfiguredCommand::Entangle),
        (true, false, false) => Ok(ConfiguredCommand::Sweep),
        (false, true, false) => {
            if raw.bath.is_none() || raw.pulse.is_none() {
                return Err(CliError::Config(
                    "transfer configs need both [bath] and [pulse] blocks".into(),
                ));
            }
            Ok(ConfiguredCommand::Transfer)
        }
        (false, false, true) => {
            if raw.material.is_none() || raw.mode.is_none() {
                return Err(CliError::Config(
                    "couplings configs need both [material] and [mode] blocks".into(),
                ));
            }
            Ok(ConfiguredCommand::Couplings)
        }
        _ => Err(CliError::Config(
            "config mixes blocks of different subcommands; provide exactly one of: nothing \
             (entangle), [sweep], [bath]+[pulse] (transfer), [material]+[mode] (couplings)"
                .into(),
        )),
    }
}

/// Load, override, validate, and convert a configuration file.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config `{}`: {e}", path.display())))?;
    let mut tree: toml::Value = text
        .parse()
        .map_err(|e| CliError::Config(format!("config `{}`: {e}", path.display())))?;
    for assignment in overrides {
        apply_override(&mut tree, assignment)?;
    }
    let raw: RawConfig = tree
        .try_into()
        .map_err(|e| CliError::Config(format!("config `{}`: {e}", path.display())))?;

    let configured_command = infer_command(&raw)?;

    let p = &raw.params;
    let params = SystemParams {
        omega_m: TAU * p.omega_m_hz,
        omega_b: TAU * p.omega_b_hz,
        lambda_opt: p.lambda_opt_m,
        kappa_a: TAU * p.kappa_a_hz,
        kappa_m: TAU * p.kappa_m_hz,
        gamma_b: TAU * p.gamma_b_hz,
        g_a: TAU * p.g_a_hz,
        g_m: TAU * p.g_m_hz,
        temperature: p.temperature_kelvin,
        delta_a: TAU * p.delta_a_hz,
        delta_m: TAU * p.delta_m_hz,
        drive: build_drive(&p.drive)?,
    };
    params
        .validate()
        .map_err(|e| CliError::Config(format!("params: {e}")))?;

    let sweep = match &raw.sweep {
        Some(raw_sweep) => {
            let axis1 = build_axis(&raw_sweep.axis1, "axis1")?;
            let axis2 = raw_sweep
                .axis2
                .as_ref()
                .map(|a| build_axis(a, "axis2"))
                .transpose()?;
            Some(SweepSpec {
                axis1,
                axis2,
                base: params.clone(),
            })
        }
        None => None,
    };

    let bath = raw
        .bath
        .as_ref()
        .map(|b| SqueezedBath::new(b.r).map_err(|e| CliError::Config(format!("bath: {e}"))))
        .transpose()?;

    let pulse = raw
        .pulse
        .as_ref()
        .map(|pl| {
            PulseSpec::new(TAU * pl.g_a_eff_hz, pl.duration_s, params.kappa_a)
                .map_err(|e| CliError::Config(format!("pulse: {e}")))
        })
        .transpose()?;

    let material = raw.material.as_ref().map(|m| MaterialParams {
        b1: m.b1_joule_per_m3,
        b2: m.b2_joule_per_m3,
        saturation_magnetization: m.saturation_magnetization_a_per_m,
        gyromagnetic_ratio: m.gyromagnetic_ratio_rad_per_s_tesla,
        volume: m.volume_m3,
    });
    if let Some(mat) = &material {
        mat.validate()
            .map_err(|e| CliError::Config(format!("material: {e}")))?;
    }

    // Mode files resolve relative to the config file's directory.
    let config_dir = path.parent().unwrap_or_else(|| Path::new("."));
    let (mode_file, mode_d_zpm) = match &raw.mode {
        Some(mode) => {
            if mode.d_zpm_m.is_nan() || mode.d_zpm_m <= 0.0 {
                return Err(CliError::Config("mode.d_zpm_m must be positive".into()));
            }
            (Some(config_dir.join(&mode.file)), Some(mode.d_zpm_m))
        }
        None => (None, None),
    };

    let output = {
        let raw_out = raw.output.as_ref();
        let format = match raw_out.and_then(|o| o.format.as_deref()) {
            Some(f) => OutputFormat::parse(f)?,
            None => OutputFormat::Csv,
        };
        let dir = raw_out
            .and_then(|o| o.dir.clone())
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        let defaults = WignerGridSpec::default();
        let points = raw_out
            .and_then(|o| o.wigner_points)
            .unwrap_or(defaults.points);
        if points < 2 {
            return Err(CliError::Config(
                "output.wigner_points must be at least 2".into(),
            ));
        }
        let span_sigmas = raw_out
            .and_then(|o| o.wigner_span_sigmas)
            .unwrap_or(defaults.span_sigmas);
        if span_sigmas.is_nan() || span_sigmas <= 0.0 {
            return Err(CliError::Config(
                "output.wigner_span_sigmas must be positive".into(),
            ));
        }
        OutputSettings {
            format,
            dir,
            wigner: WignerGridSpec {
                points,
                span_sigmas,
            },
        }
    };

    Ok(RunConfig {
        params,
        sweep,
        bath,
        pulse,
        material,
        mode_file,
        mode_d_zpm,
        output,
        configured_command,
    })
}
