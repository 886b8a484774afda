//! Stationary optomagnonic entanglement and parameter sweeps.
//!
//! Blue-detuning the magnon drive activates the magnomechanical Stokes
//! scattering (two-mode squeezing with the phonons) while red-detuning the
//! cavity drive activates the optomechanical anti-Stokes scattering (a
//! phonon–photon state swap); together they leave the magnon and cavity
//! modes entangled in the steady state. This module evaluates that
//! entanglement from the 6×6 linearized model and sweeps it over
//! detunings, temperature, damping, and couplings.

use rayon::prelude::*;
use thiserror::Error;

use crate::gaussian::{is_stable, log_negativity, solve_lyapunov, CovarianceMatrix, GaussianError};
use crate::model::{build_diffusion_6, build_drift_6, linearize, Drive, ModelError, SystemParams};

/// E_N level below which the entanglement is considered gone; survival
/// thresholds are located by bisection on this level.
pub const SURVIVAL_THRESHOLD: f64 = 1e-5;

/// Default number of grid points per sweep axis.
pub const DEFAULT_AXIS_POINTS: usize = 41;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntanglementError {
    #[error(
        "unknown sweep parameter `{0}` (expected one of Delta_a, Delta_m, T, gamma_b, G_a, G_m)"
    )]
    UnknownParameter(String),
    #[error("sweep axis `{0}` has no values")]
    EmptyAxis(String),
    #[error("sweep axis `{axis}` contains a non-finite value {value}")]
    NonFiniteValue { axis: String, value: f64 },
    #[error("sweeping {0} requires the base parameters to use direct effective couplings")]
    AxisRequiresDirectDrive(SweepParameter),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
}

/// Sweepable parameters (the published whitelist).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Effective cavity detuning Δ̃_a \[rad/s\].
    DeltaA,
    /// Effective magnon detuning Δ̃_m \[rad/s\].
    DeltaM,
    /// Bath temperature \[K\].
    Temperature,
    /// Mechanical damping rate γ_b \[rad/s\].
    GammaB,
    /// Effective optomechanical coupling G_a \[rad/s\].
    CouplingA,
    /// Effective magnomechanical coupling G_m \[rad/s\].
    CouplingM,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            Self::DeltaA => "Delta_a",
            Self::DeltaM => "Delta_m",
            Self::Temperature => "T",
            Self::GammaB => "gamma_b",
            Self::CouplingA => "G_a",
            Self::CouplingM => "G_m",
        }
    }

    /// Whether the axis values carry frequency units (rad/s) as opposed to
    /// kelvin.
    pub fn is_frequency(&self) -> bool {
        !matches!(self, Self::Temperature)
    }

    fn apply(&self, params: &mut SystemParams, value: f64) -> Result<(), EntanglementError> {
        match self {
            Self::DeltaA => params.delta_a = value,
            Self::DeltaM => params.delta_m = value,
            Self::Temperature => params.temperature = value,
            Self::GammaB => params.gamma_b = value,
            Self::CouplingA => match &mut params.drive {
                Drive::Direct { g_a_eff, .. } => *g_a_eff = value,
                Drive::Power { .. } => {
                    return Err(EntanglementError::AxisRequiresDirectDrive(*self))
                }
            },
            Self::CouplingM => match &mut params.drive {
                Drive::Direct { g_m_eff, .. } => *g_m_eff = value,
                Drive::Power { .. } => {
                    return Err(EntanglementError::AxisRequiresDirectDrive(*self))
                }
            },
        }
        Ok(())
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = EntanglementError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Delta_a" => Ok(Self::DeltaA),
            "Delta_m" => Ok(Self::DeltaM),
            "T" => Ok(Self::Temperature),
            "gamma_b" => Ok(Self::GammaB),
            "G_a" => Ok(Self::CouplingA),
            "G_m" => Ok(Self::CouplingM),
            other => Err(EntanglementError::UnknownParameter(other.to_string())),
        }
    }
}

impl std::fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One sweep axis: a whitelisted parameter and its grid values (rad/s for
/// frequency-like parameters, kelvin for temperature).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: SweepParameter,
    pub values: Vec<f64>,
}

impl SweepAxis {
    fn validate(&self) -> Result<(), EntanglementError> {
        if self.values.is_empty() {
            return Err(EntanglementError::EmptyAxis(self.param.name().to_string()));
        }
        if let Some(&bad) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(EntanglementError::NonFiniteValue {
                axis: self.param.name().to_string(),
                value: bad,
            });
        }
        Ok(())
    }
}

/// A one- or two-axis sweep over a base configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis1: SweepAxis,
    pub axis2: Option<SweepAxis>,
    pub base: SystemParams,
}

/// One evaluated grid point. Unstable points are data, not errors: they
/// carry E_N = 0 and `stable = false`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value1: f64,
    pub value2: Option<f64>,
    pub e_n: f64,
    pub stable: bool,
    pub max_real_eig: f64,
}

/// Sweep output: one row per grid point in row-major order over
/// (axis1, axis2), independent of evaluation order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub param1: SweepParameter,
    pub param2: Option<SweepParameter>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Row with the largest E_N (first such row on ties).
    pub fn argmax(&self) -> Option<&SweepRow> {
        self.rows
            .iter()
            .fold(None, |best: Option<&SweepRow>, row| match best {
                Some(b) if b.e_n >= row.e_n => Some(b),
                _ => Some(row),
            })
    }
}

/// Steady-state entanglement between the cavity and magnon modes.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryEntanglement {
    /// Logarithmic negativity of the cavity–magnon pair; 0 when unstable.
    pub e_n: f64,
    /// Whether the drift matrix is Hurwitz.
    pub stable: bool,
    /// Largest eigenvalue real part of the drift matrix, rad/s.
    pub max_real_eig: f64,
    /// Full 6×6 steady-state covariance matrix; absent when unstable.
    pub cm: Option<CovarianceMatrix>,
}

/// Build the 6×6 drift and diffusion matrices for `params`, solve for the
/// steady state when stable, and quantify the cavity–magnon entanglement.
/// Instability is flagged in the result rather than treated as a failure.
pub fn stationary_entanglement(
    params: &SystemParams,
) -> Result<StationaryEntanglement, EntanglementError> {
    let lin = linearize(params)?;
    let a = build_drift_6(
        lin.g_a_eff,
        lin.g_m_eff,
        lin.delta_a_eff,
        lin.delta_m_eff,
        params,
    );
    let stability = is_stable(&a);
    if !stability.stable {
        return Ok(StationaryEntanglement {
            e_n: 0.0,
            stable: false,
            max_real_eig: stability.max_real_part,
            cm: None,
        });
    }
    let d = build_diffusion_6(params)?;
    let v = solve_lyapunov(&a, &d)?;
    let v4 = v.extract_modes(&[1, 2])?;
    let e_n = log_negativity(&v4)?;
    Ok(StationaryEntanglement {
        e_n,
        stable: true,
        max_real_eig: stability.max_real_part,
        cm: Some(v),
    })
}

fn evaluate_point(
    base: &SystemParams,
    assignments: &[(SweepParameter, f64)],
) -> Result<StationaryEntanglement, EntanglementError> {
    let mut params = base.clone();
    for (param, value) in assignments {
        param.apply(&mut params, *value)?;
    }
    stationary_entanglement(&params)
}

/// Evaluate the stationary entanglement on every grid point of the sweep.
/// Points are independent and evaluated in parallel; rows are assembled in
/// deterministic row-major order.
pub fn sweep(spec: &SweepSpec) -> Result<SweepResult, EntanglementError> {
    spec.axis1.validate()?;
    if let Some(axis2) = &spec.axis2 {
        axis2.validate()?;
    }

    let points: Vec<(f64, Option<f64>)> = match &spec.axis2 {
        Some(axis2) => spec
            .axis1
            .values
            .iter()
            .flat_map(|&v1| axis2.values.iter().map(move |&v2| (v1, Some(v2))))
            .collect(),
        None => spec.axis1.values.iter().map(|&v| (v, None)).collect(),
    };

    let rows = points
        .par_iter()
        .map(|&(v1, v2)| {
            let mut assignments = vec![(spec.axis1.param, v1)];
            if let (Some(axis2), Some(v2)) = (&spec.axis2, v2) {
                assignments.push((axis2.param, v2));
            }
            evaluate_point(&spec.base, &assignments).map(|ent| SweepRow {
                value1: v1,
                value2: v2,
                e_n: ent.e_n,
                stable: ent.stable,
                max_real_eig: ent.max_real_eig,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(SweepResult {
        param1: spec.axis1.param,
        param2: spec.axis2.as_ref().map(|a| a.param),
        rows,
    })
}

/// Locate where E_N falls through [`SURVIVAL_THRESHOLD`] along one
/// parameter: scan the grid for a bracketing pair, then bisect. Returns
/// `None` when no crossing is bracketed by the grid.
pub fn survival_threshold(
    base: &SystemParams,
    param: SweepParameter,
    grid: &[f64],
) -> Result<Option<f64>, EntanglementError> {
    let axis = SweepAxis {
        param,
        values: grid.to_vec(),
    };
    axis.validate()?;

    let e_n_at = |value: f64| -> Result<f64, EntanglementError> {
        Ok(evaluate_point(base, &[(param, value)])?.e_n)
    };

    let levels = grid
        .par_iter()
        .map(|&v| e_n_at(v))
        .collect::<Result<Vec<_>, _>>()?;

    for i in 0..levels.len().saturating_sub(1) {
        if levels[i] > SURVIVAL_THRESHOLD && levels[i + 1] <= SURVIVAL_THRESHOLD {
            let (mut lo, mut hi) = (grid[i], grid[i + 1]);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if e_n_at(mid)? > SURVIVAL_THRESHOLD {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Drive;
    use approx::assert_relative_eq;

    const TAU: f64 = std::f64::consts::TAU;

    fn reference_params() -> SystemParams {
        SystemParams {
            omega_m: TAU * 5.0e9,
            omega_b: TAU * 40.0e6,
            lambda_opt: 1064.0e-9,
            kappa_a: TAU * 2.0e6,
            kappa_m: TAU * 3.0e6,
            gamma_b: TAU * 10.0,
            g_a: TAU * 1.0e3,
            g_m: TAU * 10.0,
            temperature: 0.010,
            delta_a: TAU * 40.0e6,
            delta_m: -TAU * 40.0e6,
            drive: Drive::Direct {
                g_a_eff: TAU * 4.0e6,
                g_m_eff: TAU * 1.0e6,
            },
        }
    }

    #[test]
    fn undriven_system_is_separable() {
        let mut params = reference_params();
        params.drive = Drive::Direct {
            g_a_eff: 0.0,
            g_m_eff: 0.0,
        };
        let ent = stationary_entanglement(&params).unwrap();
        assert!(ent.stable);
        assert_eq!(ent.e_n, 0.0);
    }

    #[test]
    fn reference_point_is_stable_and_entangled() {
        let ent = stationary_entanglement(&reference_params()).unwrap();
        assert!(ent.stable);
        assert!(ent.e_n > 0.1);
        assert!(ent.max_real_eig < 0.0);
    }

    #[test]
    fn both_legs_red_detuned_entangle_less() {
        // Pure state swap on both legs provides no two-mode-squeezing
        // source, so the optimal blue/red arrangement must win clearly.
        let optimal = stationary_entanglement(&reference_params()).unwrap();
        let mut red = reference_params();
        red.delta_m = red.omega_b;
        let swapped = stationary_entanglement(&red).unwrap();
        assert!(swapped.e_n < 0.1 * optimal.e_n);
    }

    #[test]
    fn no_magnomechanical_leg_no_entanglement() {
        let mut params = reference_params();
        params.drive = Drive::Direct {
            g_a_eff: TAU * 4.0e6,
            g_m_eff: 0.0,
        };
        let ent = stationary_entanglement(&params).unwrap();
        assert_eq!(ent.e_n, 0.0);
    }

    #[test]
    fn sweep_is_row_major_and_complete() {
        let base = reference_params();
        let wb = base.omega_b;
        let spec = SweepSpec {
            axis1: SweepAxis {
                param: SweepParameter::DeltaM,
                values: vec![-1.5 * wb, -wb],
            },
            axis2: Some(SweepAxis {
                param: SweepParameter::DeltaA,
                values: vec![0.5 * wb, wb, 1.5 * wb],
            }),
            base,
        };
        let result = sweep(&spec).unwrap();
        assert_eq!(result.rows.len(), 6);
        assert_eq!(result.rows[0].value1, -1.5 * wb);
        assert_eq!(result.rows[0].value2, Some(0.5 * wb));
        assert_eq!(result.rows[1].value2, Some(wb));
        assert_eq!(result.rows[3].value1, -wb);
        // The optimal arrangement is in this small grid.
        let best = result.argmax().unwrap();
        assert_eq!(best.value1, -wb);
        assert_eq!(best.value2, Some(wb));
    }

    #[test]
    fn empty_axis_is_rejected() {
        let spec = SweepSpec {
            axis1: SweepAxis {
                param: SweepParameter::Temperature,
                values: vec![],
            },
            axis2: None,
            base: reference_params(),
        };
        assert!(matches!(sweep(&spec), Err(EntanglementError::EmptyAxis(_))));
    }

    #[test]
    fn unknown_parameter_name_is_rejected() {
        let err = "Delta_q".parse::<SweepParameter>().unwrap_err();
        assert!(matches!(err, EntanglementError::UnknownParameter(s) if s == "Delta_q"));
    }

    #[test]
    fn coupling_axis_requires_direct_drive() {
        let mut base = reference_params();
        base.drive = Drive::Power {
            laser_power: 7.51e-3,
            rabi: 1.7784e13,
        };
        let spec = SweepSpec {
            axis1: SweepAxis {
                param: SweepParameter::CouplingA,
                values: vec![TAU * 1.0e6],
            },
            axis2: None,
            base,
        };
        assert!(matches!(
            sweep(&spec),
            Err(EntanglementError::AxisRequiresDirectDrive(_))
        ));
    }

    #[test]
    fn entanglement_decreases_with_temperature() {
        let base = reference_params();
        let mut previous = f64::INFINITY;
        for t in [0.0, 0.025, 0.050, 0.100, 0.150] {
            let mut params = base.clone();
            params.temperature = t;
            let e_n = stationary_entanglement(&params).unwrap().e_n;
            assert!(
                e_n < previous || (e_n == 0.0 && previous == 0.0),
                "E_N not decreasing at T = {t}"
            );
            previous = e_n;
        }
    }

    #[test]
    fn survival_threshold_brackets_and_bisects() {
        let base = reference_params();
        let grid: Vec<f64> = (0..=20).map(|i| 0.010 * i as f64).collect();
        let t_star = survival_threshold(&base, SweepParameter::Temperature, &grid)
            .unwrap()
            .expect("threshold bracketed");
        assert_relative_eq!(t_star, 0.146, max_relative = 0.05);
    }
}
