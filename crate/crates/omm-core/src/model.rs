//! From physical parameters to the linearized three-mode model.
//!
//! The cavity and magnon modes are driven strongly, so the dynamics are
//! linearized around the classical steady state. This module computes the
//! drive amplitude from laser power, the self-consistent steady-state
//! amplitudes (the mechanical displacement shifts both detunings), the
//! effective coupling strengths, and the 6×6 drift/diffusion matrices of
//! the quadrature fluctuations, ordered (q, p, X_a, Y_a, X_m, Y_m).

use nalgebra::{Complex, DMatrix};
use thiserror::Error;

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::gaussian::{thermal_occupation, DiffusionMatrix, DriftMatrix, GaussianError};

type C64 = Complex<f64>;

/// Damping factor of the Picard iteration for the steady-state fixed point.
const PICARD_DAMPING: f64 = 0.5;
/// Iteration cap; hitting it signals a bistable parameter region.
const PICARD_MAX_ITER: usize = 10_000;
/// Relative tolerance on successive displacement iterates.
const PICARD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} must be positive")]
    NonPositiveInput { name: &'static str },
    #[error("{name} must be non-negative")]
    NegativeInput { name: &'static str },
    #[error("{name} must be finite")]
    NonFiniteInput { name: &'static str },
    #[error(
        "steady-state iteration did not converge after {iterations} iterations \
         (last displacement {last_displacement:.6e}, residual {residual:.3e}); \
         the drive likely sits in a bistable region"
    )]
    NoConvergence {
        iterations: usize,
        last_displacement: f64,
        residual: f64,
    },
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
}

/// Drive specification: either the physical drive strengths, from which
/// the effective couplings follow self-consistently, or the effective
/// couplings directly (possibly signed), which is how measured setups are
/// usually quoted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// Laser power on the cavity \[W\] and microwave Rabi frequency on the
    /// magnon mode \[rad/s\].
    Power { laser_power: f64, rabi: f64 },
    /// Effective couplings G_a, G_m \[rad/s\], used as-is in the drift
    /// matrix together with the configured detunings (taken as the
    /// effective ones).
    Direct { g_a_eff: f64, g_m_eff: f64 },
}

/// All physical rates, frequencies, drive settings, and temperature for
/// one configuration. Angular frequencies in rad/s throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Magnon frequency ω_m.
    pub omega_m: f64,
    /// Mechanical frequency ω_b.
    pub omega_b: f64,
    /// Optical wavelength \[m\]; fixes the laser frequency ω_L ≈ ω_a.
    pub lambda_opt: f64,
    /// Cavity decay rate κ_a.
    pub kappa_a: f64,
    /// Magnon dissipation rate κ_m.
    pub kappa_m: f64,
    /// Mechanical damping rate γ_b.
    pub gamma_b: f64,
    /// Bare optomechanical coupling g_a.
    pub g_a: f64,
    /// Bare magnomechanical coupling g_m.
    pub g_m: f64,
    /// Common bath temperature \[K\].
    pub temperature: f64,
    /// Cavity–drive detuning Δ_a (bare in `Drive::Power` mode, effective
    /// in `Drive::Direct` mode).
    pub delta_a: f64,
    /// Magnon–drive detuning Δ_m (same convention as `delta_a`).
    pub delta_m: f64,
    pub drive: Drive,
}

impl SystemParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = [
            (self.omega_m, "omega_m"),
            (self.omega_b, "omega_b"),
            (self.lambda_opt, "lambda_opt"),
            (self.kappa_a, "kappa_a"),
            (self.kappa_m, "kappa_m"),
            (self.gamma_b, "gamma_b"),
        ];
        for (value, name) in positive {
            if value.is_nan() || value <= 0.0 {
                return Err(ModelError::NonPositiveInput { name });
            }
            if !value.is_finite() {
                return Err(ModelError::NonFiniteInput { name });
            }
        }
        let non_negative = [
            (self.g_a, "g_a"),
            (self.g_m, "g_m"),
            (self.temperature, "temperature"),
        ];
        for (value, name) in non_negative {
            if value < 0.0 {
                return Err(ModelError::NegativeInput { name });
            }
            if !value.is_finite() {
                return Err(ModelError::NonFiniteInput { name });
            }
        }
        let signed = match self.drive {
            Drive::Power { laser_power, rabi } => {
                if laser_power < 0.0 {
                    return Err(ModelError::NegativeInput {
                        name: "laser_power",
                    });
                }
                [laser_power, rabi, self.delta_a, self.delta_m]
            }
            Drive::Direct { g_a_eff, g_m_eff } => [g_a_eff, g_m_eff, self.delta_a, self.delta_m],
        };
        if signed.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NonFiniteInput {
                name: "drive/detuning",
            });
        }
        Ok(())
    }

    /// Resolved-sideband sanity flag: ω_b above both linewidths. Recorded,
    /// not enforced.
    pub fn resolved_sideband(&self) -> bool {
        self.omega_b > self.kappa_a && self.omega_b > self.kappa_m
    }
}

/// Classical steady-state averages of the driven system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyAmplitudes {
    /// Cavity amplitude ⟨a⟩.
    pub cavity: C64,
    /// Magnon amplitude ⟨m⟩.
    pub magnon: C64,
    /// Mechanical displacement ⟨q⟩ (the momentum average is zero).
    pub displacement: f64,
    /// Effective cavity detuning including the displacement shift.
    pub delta_a_eff: f64,
    /// Effective magnon detuning including the displacement shift.
    pub delta_m_eff: f64,
    /// Picard iterations used.
    pub iterations: usize,
}

/// Cavity–laser coupling strength `E = √(κ_a P_L / ℏω_L)` with
/// `ω_L = 2πc/λ`.
pub fn laser_amplitude(power: f64, wavelength: f64, kappa_a: f64) -> Result<f64, ModelError> {
    if power < 0.0 {
        return Err(ModelError::NegativeInput { name: "power" });
    }
    if wavelength.is_nan() || wavelength <= 0.0 {
        return Err(ModelError::NonPositiveInput { name: "wavelength" });
    }
    if kappa_a.is_nan() || kappa_a <= 0.0 {
        return Err(ModelError::NonPositiveInput { name: "kappa_a" });
    }
    let omega_l = std::f64::consts::TAU * SPEED_OF_LIGHT / wavelength;
    Ok((kappa_a * power / (HBAR * omega_l)).sqrt())
}

fn amplitudes_at(
    params: &SystemParams,
    drive_e: f64,
    rabi: f64,
    displacement: f64,
) -> (C64, C64, f64, f64) {
    let delta_a_eff = params.delta_a - params.g_a * displacement;
    let delta_m_eff = params.delta_m + params.g_m * displacement;
    let cavity = C64::new(drive_e, 0.0) / C64::new(params.kappa_a / 2.0, delta_a_eff);
    let magnon = C64::new(rabi, 0.0) / C64::new(params.kappa_m / 2.0, delta_m_eff);
    (cavity, magnon, delta_a_eff, delta_m_eff)
}

fn displacement_map(params: &SystemParams, drive_e: f64, rabi: f64, q: f64) -> f64 {
    let (cavity, magnon, _, _) = amplitudes_at(params, drive_e, rabi, q);
    (params.g_a * cavity.norm_sqr() - params.g_m * magnon.norm_sqr()) / params.omega_b
}

/// Self-consistent classical steady state under drive amplitude `drive_e`
/// on the cavity and Rabi frequency `rabi` on the magnon mode.
///
/// The displacement obeys `⟨q⟩ = (g_a|⟨a⟩|² − g_m|⟨m⟩|²)/ω_b` while both
/// amplitudes depend on ⟨q⟩ through the shifted detunings; the fixed point
/// is reached by damped Picard iteration (β = ½). Failure to converge
/// signals a bistable drive region and reports the last iterate.
pub fn steady_amplitudes(
    params: &SystemParams,
    drive_e: f64,
    rabi: f64,
) -> Result<SteadyAmplitudes, ModelError> {
    params.validate()?;

    // Decoupled bare couplings: the map no longer depends on q, so the
    // closed forms are exact and no iteration is needed.
    if params.g_a == 0.0 && params.g_m == 0.0 {
        let (cavity, magnon, da, dm) = amplitudes_at(params, drive_e, rabi, 0.0);
        return Ok(SteadyAmplitudes {
            cavity,
            magnon,
            displacement: 0.0,
            delta_a_eff: da,
            delta_m_eff: dm,
            iterations: 1,
        });
    }

    let mut q = 0.0_f64;
    for iteration in 1..=PICARD_MAX_ITER {
        let target = displacement_map(params, drive_e, rabi, q);
        let next = (1.0 - PICARD_DAMPING) * q + PICARD_DAMPING * target;
        let delta = (next - q).abs();
        q = next;
        if delta <= PICARD_TOL * q.abs().max(f64::EPSILON) {
            let (cavity, magnon, da, dm) = amplitudes_at(params, drive_e, rabi, q);
            return Ok(SteadyAmplitudes {
                cavity,
                magnon,
                displacement: q,
                delta_a_eff: da,
                delta_m_eff: dm,
                iterations: iteration,
            });
        }
    }
    Err(ModelError::NoConvergence {
        iterations: PICARD_MAX_ITER,
        last_displacement: q,
        residual: (displacement_map(params, drive_e, rabi, q) - q).abs(),
    })
}

/// Effective coupling strengths derived from the classical amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCouplings {
    /// G_a = i√2 g_a ⟨a⟩.
    pub g_a: C64,
    /// G_m = −i√2 g_m ⟨m⟩.
    pub g_m: C64,
    /// Whether both couplings are close to real (|Im G| < 0.1·|G|), the
    /// regime |Δ̃| ≫ κ of approximately pure-imaginary amplitudes in which
    /// the real-coupling drift matrix form is valid.
    pub nearly_real: bool,
}

impl EffectiveCouplings {
    pub fn g_a_magnitude(&self) -> f64 {
        self.g_a.norm()
    }

    pub fn g_m_magnitude(&self) -> f64 {
        self.g_m.norm()
    }
}

fn nearly_real(g: C64) -> bool {
    let norm = g.norm();
    norm == 0.0 || g.im.abs() < 0.1 * norm
}

pub fn effective_couplings(params: &SystemParams, amps: &SteadyAmplitudes) -> EffectiveCouplings {
    let i = C64::new(0.0, 1.0);
    let g_a = i * 2.0_f64.sqrt() * params.g_a * amps.cavity;
    let g_m = -i * 2.0_f64.sqrt() * params.g_m * amps.magnon;
    EffectiveCouplings {
        g_a,
        g_m,
        nearly_real: nearly_real(g_a) && nearly_real(g_m),
    }
}

/// Drift matrix of the quadrature fluctuations (q, p, X_a, Y_a, X_m, Y_m)
/// for real effective couplings:
///
/// ```text
///      ⎛   0     ω_b     0      0      0      0   ⎞
///      ⎜ −ω_b   −γ_b     0    −G_a     0    −G_m  ⎟
/// A =  ⎜  G_a     0   −κ_a/2   Δ̃_a     0      0   ⎟
///      ⎜   0      0   −Δ̃_a  −κ_a/2    0      0   ⎟
///      ⎜  G_m     0      0      0   −κ_m/2   Δ̃_m  ⎟
///      ⎝   0      0      0      0   −Δ̃_m  −κ_m/2 ⎠
/// ```
pub fn build_drift_6(
    g_a_eff: f64,
    g_m_eff: f64,
    delta_a_eff: f64,
    delta_m_eff: f64,
    params: &SystemParams,
) -> DriftMatrix {
    let (wb, gb, ka, km) = (
        params.omega_b,
        params.gamma_b,
        params.kappa_a,
        params.kappa_m,
    );
    let m = DMatrix::from_row_slice(
        6,
        6,
        &[
            0.0,
            wb,
            0.0,
            0.0,
            0.0,
            0.0, //
            -wb,
            -gb,
            0.0,
            -g_a_eff,
            0.0,
            -g_m_eff, //
            g_a_eff,
            0.0,
            -ka / 2.0,
            delta_a_eff,
            0.0,
            0.0, //
            0.0,
            0.0,
            -delta_a_eff,
            -ka / 2.0,
            0.0,
            0.0, //
            g_m_eff,
            0.0,
            0.0,
            0.0,
            -km / 2.0,
            delta_m_eff, //
            0.0,
            0.0,
            0.0,
            0.0,
            -delta_m_eff,
            -km / 2.0,
        ],
    );
    DriftMatrix::new(m).expect("6x6 drift matrix is square")
}

/// Diffusion matrix of the input noise in the same quadrature ordering:
/// `diag[0, 2γ_b(N_b+½), κ_a/2, κ_a/2, κ_m(N_m+½), κ_m(N_m+½)]`, with the
/// thermal occupations evaluated at ω_b and ω_m. The optical bath is
/// vacuum at any laboratory temperature.
pub fn build_diffusion_6(params: &SystemParams) -> Result<DiffusionMatrix, ModelError> {
    params.validate()?;
    let n_b = thermal_occupation(params.omega_b, params.temperature)?;
    let n_m = thermal_occupation(params.omega_m, params.temperature)?;
    let diag = nalgebra::DVector::from_vec(vec![
        0.0,
        2.0 * params.gamma_b * (n_b + 0.5),
        params.kappa_a / 2.0,
        params.kappa_a / 2.0,
        params.kappa_m * (n_m + 0.5),
        params.kappa_m * (n_m + 0.5),
    ]);
    Ok(DiffusionMatrix::new(DMatrix::from_diagonal(&diag))?)
}

/// Inputs of the linearized fluctuation dynamics, resolved from either
/// drive mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedModel {
    /// Real effective optomechanical coupling used in the drift matrix.
    pub g_a_eff: f64,
    /// Real effective magnomechanical coupling (signed).
    pub g_m_eff: f64,
    pub delta_a_eff: f64,
    pub delta_m_eff: f64,
    /// Classical fixed point, present in `Drive::Power` mode.
    pub amplitudes: Option<SteadyAmplitudes>,
    /// See [`EffectiveCouplings::nearly_real`]; trivially true in direct
    /// mode.
    pub nearly_real: bool,
}

/// Resolve the drive into real couplings and effective detunings.
///
/// In `Drive::Direct` mode the configured values pass through unchanged.
/// In `Drive::Power` mode the classical fixed point is solved and each
/// complex coupling is projected onto a signed real value (magnitude with
/// the sign of its real part), which is exact in the |Δ̃| ≫ κ regime
/// flagged by `nearly_real`.
pub fn linearize(params: &SystemParams) -> Result<LinearizedModel, ModelError> {
    params.validate()?;
    match params.drive {
        Drive::Direct { g_a_eff, g_m_eff } => Ok(LinearizedModel {
            g_a_eff,
            g_m_eff,
            delta_a_eff: params.delta_a,
            delta_m_eff: params.delta_m,
            amplitudes: None,
            nearly_real: true,
        }),
        Drive::Power { laser_power, rabi } => {
            let drive_e = laser_amplitude(laser_power, params.lambda_opt, params.kappa_a)?;
            let amps = steady_amplitudes(params, drive_e, rabi)?;
            let couplings = effective_couplings(params, &amps);
            let signed = |g: C64| g.re.signum() * g.norm();
            Ok(LinearizedModel {
                g_a_eff: signed(couplings.g_a),
                g_m_eff: signed(couplings.g_m),
                delta_a_eff: amps.delta_a_eff,
                delta_m_eff: amps.delta_m_eff,
                amplitudes: Some(amps),
                nearly_real: couplings.nearly_real,
            })
        }
    }
}
