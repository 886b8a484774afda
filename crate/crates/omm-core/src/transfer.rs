//! Two-step optical readout of magnonic states.
//!
//! Step 1: a red-detuned microwave drive activates the magnomechanical
//! beam-splitter (state-swap) interaction; the magnon mode, held in a
//! squeezed vacuum by its bath, imprints its state on the mechanical mode.
//! The steady state follows from the 4×4 Lyapunov equation in the rotating
//! frame, ordered (q, p, X_m, Y_m).
//!
//! Step 2: with the drive off and the magnons decayed, a weak red-detuned
//! flattop optical pulse swaps the mechanical state onto the cavity output
//! field. With the cavity adiabatically eliminated the output temporal
//! mode obeys the closed-form map `V_out = S·V_b(0) + (1−S)·V_in` with
//! conversion efficiency `S = 1 − e^{−2𝒢_a t}`, `𝒢_a = G_a²/2κ_a`, and a
//! vacuum pulse input `V_in = ½·I`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use thiserror::Error;

use crate::gaussian::{
    overlap_fidelity, solve_lyapunov, thermal_occupation, wigner, CovarianceMatrix,
    DiffusionMatrix, DriftMatrix, GaussianError,
};
use crate::model::{linearize, ModelError, SystemParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransferError {
    #[error("squeezing parameter must be non-negative, got {0}")]
    NegativeSqueezing(f64),
    #[error("{name} must be positive")]
    NonPositiveInput { name: &'static str },
    #[error("pulse duration must be non-negative, got {0}")]
    NegativeDuration(f64),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Squeezed vacuum bath of the magnon mode, parameterized by the squeezing
/// parameter r: occupation `N = sinh²r` and correlation `M = sinh r cosh r`
/// (so `M² = N(N+1)` holds exactly).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedBath {
    r: f64,
    occupation: f64,
    correlation: f64,
}

impl SqueezedBath {
    pub fn new(r: f64) -> Result<Self, TransferError> {
        if r.is_nan() || r < 0.0 {
            return Err(TransferError::NegativeSqueezing(r));
        }
        let (sh, ch) = (r.sinh(), r.cosh());
        Ok(Self {
            r,
            occupation: sh * sh,
            correlation: sh * ch,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// N = sinh²r.
    pub fn occupation(&self) -> f64 {
        self.occupation
    }

    /// M = sinh r cosh r.
    pub fn correlation(&self) -> f64 {
        self.correlation
    }
}

/// Flattop optical readout pulse: effective coupling while on, duration,
/// and the cavity decay rate it works against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    /// Effective optomechanical coupling G_a during the pulse \[rad/s\].
    pub g_a_eff: f64,
    /// Pulse duration \[s\].
    pub duration: f64,
    /// Cavity decay rate κ_a \[rad/s\].
    pub kappa_a: f64,
}

impl PulseSpec {
    pub fn new(g_a_eff: f64, duration: f64, kappa_a: f64) -> Result<Self, TransferError> {
        if kappa_a.is_nan() || kappa_a <= 0.0 {
            return Err(TransferError::NonPositiveInput { name: "kappa_a" });
        }
        if duration.is_nan() || duration < 0.0 {
            return Err(TransferError::NegativeDuration(duration));
        }
        Ok(Self {
            g_a_eff,
            duration,
            kappa_a,
        })
    }

    /// Effective conversion rate 𝒢_a = G_a²/2κ_a.
    pub fn conversion_rate(&self) -> f64 {
        self.g_a_eff * self.g_a_eff / (2.0 * self.kappa_a)
    }

    /// |G_a|/κ_a, the small parameter of the adiabatic elimination.
    pub fn coupling_ratio(&self) -> f64 {
        self.g_a_eff.abs() / self.kappa_a
    }

    /// Weak-coupling flag recorded on the spec: |G_a|/κ_a < 0.5.
    pub fn weak_coupling(&self) -> bool {
        self.coupling_ratio() < 0.5
    }
}

/// Covariance matrix of a magnon mode squeezed by r along X:
/// `diag(e^{−2r}/2, e^{+2r}/2)`. Pure for every r (4·det V = 1).
pub fn initial_magnon_cm(r: f64) -> CovarianceMatrix {
    assert!(r >= 0.0, "squeezing parameter must be non-negative");
    let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        (-2.0 * r).exp() / 2.0,
        (2.0 * r).exp() / 2.0,
    ]));
    CovarianceMatrix::new(m).expect("diagonal positive matrix is a valid CM")
}

/// Drift matrix of the resonant magnomechanical state swap in the rotating
/// frame, ordered (q, p, X_m, Y_m):
///
/// ```text
///      ⎛ −γ_b/2    0    −G_m/2    0    ⎞
/// R =  ⎜   0    −γ_b/2    0    −G_m/2  ⎟
///      ⎜  G_m/2    0    −κ_m/2    0    ⎟
///      ⎝   0     G_m/2    0    −κ_m/2  ⎠
/// ```
///
/// Beam-splitter dynamics: Hurwitz for any G_m whenever both rates are
/// positive.
pub fn build_swap_drift(g_m_eff: f64, kappa_m: f64, gamma_b: f64) -> DriftMatrix {
    let (g, km, gb) = (g_m_eff / 2.0, kappa_m / 2.0, gamma_b / 2.0);
    let m = DMatrix::from_row_slice(
        4,
        4,
        &[
            -gb, 0.0, -g, 0.0, //
            0.0, -gb, 0.0, -g, //
            g, 0.0, -km, 0.0, //
            0.0, g, 0.0, -km,
        ],
    );
    DriftMatrix::new(m).expect("4x4 drift matrix is square")
}

/// Diffusion matrix of the swap stage: thermal mechanical noise
/// `γ_b(N_b+½)·I₂` and the squeezed magnon bath block
/// `diag[(κ_m/2)(2N+1+2M), (κ_m/2)(2N+1−2M)]` (the cross entries vanish
/// for real M).
pub fn build_swap_diffusion(
    bath: &SqueezedBath,
    n_mech: f64,
    gamma_b: f64,
    kappa_m: f64,
) -> DiffusionMatrix {
    let mech = gamma_b * (n_mech + 0.5);
    let two_n_plus_1 = 2.0 * bath.occupation() + 1.0;
    let two_m = 2.0 * bath.correlation();
    let diag = nalgebra::DVector::from_vec(vec![
        mech,
        mech,
        kappa_m / 2.0 * (two_n_plus_1 + two_m),
        kappa_m / 2.0 * (two_n_plus_1 - two_m),
    ]);
    DiffusionMatrix::new(DMatrix::from_diagonal(&diag))
        .expect("swap diffusion is diagonal non-negative")
}

/// Outcome of the magnon → phonon swap stage.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnonPhononTransfer {
    /// Steady-state 4×4 CM of the (mechanical, magnon) pair, expressed in
    /// the squeezing-aligned quadrature frame.
    pub v_mb: CovarianceMatrix,
    /// Mechanical 2×2 block of `v_mb`.
    pub v_b: CovarianceMatrix,
    /// Overlap fidelity between the initial squeezed magnon state and the
    /// transferred mechanical state.
    pub fidelity: f64,
    /// |G_m|/ω_b; the rotating-wave swap model assumes this is small.
    pub rwa_ratio: f64,
}

/// Transfer the squeezed magnon state onto the mechanical mode: solve
/// `R V + V Rᵀ = −Z` for the steady state at the optimal red detuning
/// Δ̃_m = ω_b.
///
/// The bath correlations fix the squeezing ellipse orientation only up to
/// the drive phase; the solution is re-expressed in the frame (a π/2
/// quadrature rotation of each mode, a local symplectic operation) where
/// the squeezed axis is X, matching [`initial_magnon_cm`], so the fidelity
/// compares like-oriented states.
pub fn magnon_to_phonon(
    params: &SystemParams,
    bath: &SqueezedBath,
) -> Result<MagnonPhononTransfer, TransferError> {
    let lin = linearize(params)?;
    let n_mech = thermal_occupation(params.omega_b, params.temperature)?;
    let drift = build_swap_drift(lin.g_m_eff, params.kappa_m, params.gamma_b);
    let diffusion = build_swap_diffusion(bath, n_mech, params.gamma_b, params.kappa_m);
    let raw = solve_lyapunov(&drift, &diffusion)?;
    let v_mb = raw
        .rotate_mode(0, std::f64::consts::FRAC_PI_2)?
        .rotate_mode(1, std::f64::consts::FRAC_PI_2)?;
    let v_b = v_mb.extract_modes(&[0])?;
    let fidelity = overlap_fidelity(&initial_magnon_cm(bath.r()), &v_b)?;
    Ok(MagnonPhononTransfer {
        v_mb,
        v_b,
        fidelity,
        rwa_ratio: lin.g_m_eff.abs() / params.omega_b,
    })
}

/// Outcome of the pulsed phonon → photon readout stage.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseReadout {
    /// State conversion efficiency S ∈ \[0, 1).
    pub efficiency: f64,
    /// CM of the pulse output temporal mode.
    pub v_out: CovarianceMatrix,
    /// Whether |G_a|/κ_a < 0.3, the regime where the adiabatic
    /// elimination behind the closed-form map is comfortable.
    pub adiabatic: bool,
}

/// Map the mechanical state onto the pulse output temporal mode:
/// `V_out = S·V_b(0) + (1−S)·½I` with `S = 1 − e^{−2𝒢_a t}`.
/// Mechanical damping during the (short) pulse is neglected.
pub fn pulse_readout(
    v_b0: &CovarianceMatrix,
    pulse: &PulseSpec,
) -> Result<PulseReadout, TransferError> {
    if v_b0.dim() != 2 {
        return Err(TransferError::Gaussian(GaussianError::WrongDimension {
            expected: 2,
            actual: v_b0.dim(),
        }));
    }
    let s = 1.0 - (-2.0 * pulse.conversion_rate() * pulse.duration).exp();
    let vacuum = DMatrix::identity(2, 2) * 0.5;
    let v_out = CovarianceMatrix::new(v_b0.matrix() * s + vacuum * (1.0 - s))?;
    Ok(PulseReadout {
        efficiency: s,
        v_out,
        adiabatic: pulse.coupling_ratio() < 0.3,
    })
}

/// A 2-D sampled Wigner density over a phase-space window.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    /// Position-quadrature sample points (uniform).
    pub q_values: Vec<f64>,
    /// Momentum-quadrature sample points (uniform).
    pub p_values: Vec<f64>,
    /// Densities in row-major order: `density[iq * p_values.len() + ip]`.
    pub density: Vec<f64>,
    /// Trapezoid integral of the sampled density over the window; within
    /// 1e-2 of 1 whenever the window spans at least 5σ.
    pub normalization: f64,
}

impl WignerGrid {
    pub fn value(&self, iq: usize, ip: usize) -> f64 {
        self.density[iq * self.p_values.len() + ip]
    }
}

/// Sampling settings for Wigner grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerGridSpec {
    /// Points per axis.
    pub points: usize,
    /// Half-width of the window in units of the largest quadrature
    /// standard deviation.
    pub span_sigmas: f64,
}

impl Default for WignerGridSpec {
    fn default() -> Self {
        Self {
            points: 201,
            span_sigmas: 5.0,
        }
    }
}

fn linspace(half_span: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![0.0];
    }
    let step = 2.0 * half_span / (points - 1) as f64;
    (0..points).map(|i| -half_span + step * i as f64).collect()
}

fn trapezoid_2d(values: &[f64], nq: usize, np: usize, dq: f64, dp: f64) -> f64 {
    let weight = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
    let mut total = 0.0;
    for iq in 0..nq {
        for ip in 0..np {
            total += weight(iq, nq) * weight(ip, np) * values[iq * np + ip];
        }
    }
    total * dq * dp
}

/// Sample the Wigner density of a single-mode state over a symmetric
/// window of the given half-width.
pub fn wigner_grid_with_span(
    v: &CovarianceMatrix,
    spec: &WignerGridSpec,
    half_span: f64,
) -> Result<WignerGrid, GaussianError> {
    let q_values = linspace(half_span, spec.points);
    let p_values = linspace(half_span, spec.points);
    let density = q_values
        .par_iter()
        .map(|&q| -> Result<Vec<f64>, GaussianError> {
            p_values.iter().map(|&p| wigner(v, q, p)).collect()
        })
        .collect::<Result<Vec<_>, _>>()?
        .concat();
    let (nq, np) = (q_values.len(), p_values.len());
    let dq = if nq > 1 {
        q_values[1] - q_values[0]
    } else {
        1.0
    };
    let dp = if np > 1 {
        p_values[1] - p_values[0]
    } else {
        1.0
    };
    let normalization = trapezoid_2d(&density, nq, np, dq, dp);
    Ok(WignerGrid {
        q_values,
        p_values,
        density,
        normalization,
    })
}

/// Sample the Wigner density over ±`span_sigmas`·σ_max, where σ_max is the
/// largest quadrature standard deviation of the state.
pub fn wigner_grid(
    v: &CovarianceMatrix,
    spec: &WignerGridSpec,
) -> Result<WignerGrid, GaussianError> {
    let sigma = v.matrix()[(0, 0)].max(v.matrix()[(1, 1)]).sqrt();
    wigner_grid_with_span(v, spec, spec.span_sigmas * sigma)
}

/// Full two-step readout outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutOutcome {
    /// Magnon → phonon stage.
    pub swap: MagnonPhononTransfer,
    /// Conversion efficiency of the pulse stage.
    pub efficiency: f64,
    /// CM of the pulse output temporal mode.
    pub v_out: CovarianceMatrix,
    /// Overlap fidelity between the initial magnon state and the pulse
    /// output state.
    pub total_fidelity: f64,
    /// Wigner densities of the initial magnon, steady mechanical, and
    /// pulse output states, sampled on a common window.
    pub wigner_magnon: WignerGrid,
    pub wigner_mechanical: WignerGrid,
    pub wigner_output: WignerGrid,
}

/// Chain both readout steps and sample the three Wigner panels on a shared
/// window (±`span_sigmas` of the largest standard deviation among the
/// three states, so the panels are directly comparable).
pub fn full_readout(
    params: &SystemParams,
    bath: &SqueezedBath,
    pulse: &PulseSpec,
    grid_spec: &WignerGridSpec,
) -> Result<ReadoutOutcome, TransferError> {
    let swap = magnon_to_phonon(params, bath)?;
    let readout = pulse_readout(&swap.v_b, pulse)?;
    let v_magnon = initial_magnon_cm(bath.r());
    let total_fidelity = overlap_fidelity(&v_magnon, &readout.v_out)?;

    let sigma_max = [&v_magnon, &swap.v_b, &readout.v_out]
        .iter()
        .map(|v| v.matrix()[(0, 0)].max(v.matrix()[(1, 1)]).sqrt())
        .fold(0.0_f64, f64::max);
    let half_span = grid_spec.span_sigmas * sigma_max;
    let wigner_magnon = wigner_grid_with_span(&v_magnon, grid_spec, half_span)?;
    let wigner_mechanical = wigner_grid_with_span(&swap.v_b, grid_spec, half_span)?;
    let wigner_output = wigner_grid_with_span(&readout.v_out, grid_spec, half_span)?;

    Ok(ReadoutOutcome {
        swap,
        efficiency: readout.efficiency,
        v_out: readout.v_out,
        total_fidelity,
        wigner_magnon,
        wigner_mechanical,
        wigner_output,
    })
}
