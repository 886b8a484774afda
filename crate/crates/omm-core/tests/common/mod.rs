//! Shared helpers for the integration suites: random stable systems, a
//! time-domain Lyapunov oracle, quadrature oracles, and the reference
//! parameter set. Oracles here are deliberately independent of the
//! implementation paths they check.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;

use omm_core::gaussian::{CovarianceMatrix, DiffusionMatrix, DriftMatrix};
use omm_core::model::{Drive, SystemParams};

pub const TAU: f64 = std::f64::consts::TAU;

/// Reference configuration: ω_m/2π = 5 GHz, ω_b/2π = 40 MHz, λ = 1064 nm,
/// κ_m/2π = 3 MHz, κ_a/2π = 2 MHz, γ_b/2π = 10 Hz, g_m/2π = 10 Hz,
/// g_a/2π = 1 kHz, T = 10 mK, direct couplings G_a/2π = 4 MHz,
/// G_m/2π = 1 MHz at −Δ̃_m = Δ̃_a = ω_b.
pub fn reference_params() -> SystemParams {
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

/// Same configuration with the smaller red-detuned swap drive
/// G_m/2π = −0.1 MHz used for the state-readout studies.
pub fn readout_params() -> SystemParams {
    let mut params = reference_params();
    params.drive = Drive::Direct {
        g_a_eff: TAU * 0.3e6,
        g_m_eff: -TAU * 0.1e6,
    };
    params.delta_a = TAU * 40.0e6;
    params.delta_m = TAU * 40.0e6;
    params
}

/// Random drift matrix with entries O(1), shifted so the largest
/// eigenvalue real part lands in [−1.5, −0.5].
pub fn random_stable_drift<R: Rng>(rng: &mut R, dim: usize) -> DriftMatrix {
    let raw = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
    let max_re = raw
        .complex_eigenvalues()
        .iter()
        .fold(f64::NEG_INFINITY, |acc, e| acc.max(e.re));
    let shift = max_re + rng.gen_range(0.5..1.5);
    let shifted = raw - DMatrix::identity(dim, dim) * shift;
    DriftMatrix::new(shifted).unwrap()
}

/// Random positive semi-definite diffusion matrix, D = B·Bᵀ.
pub fn random_psd_diffusion<R: Rng>(rng: &mut R, dim: usize) -> DiffusionMatrix {
    let b = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
    DiffusionMatrix::new(&b * b.transpose()).unwrap()
}

/// Matrix exponential by scaling-and-squaring of a Taylor series; kept
/// separate from any library routine so the time-domain oracle stays
/// independent.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let squarings = if norm > 0.0 {
        (norm.log2().ceil() as i32 + 4).max(0) as u32
    } else {
        0
    };
    let scaled = m / 2.0_f64.powi(squarings as i32);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=16 {
        term = &term * &scaled / k as f64;
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Time-domain steady-state covariance `V = ∫₀^∞ e^{At} D e^{Aᵀt} dt`,
/// evaluated by composite Simpson quadrature with step halving until the
/// result is stable to `tol` (relative, max norm). The integrand at the
/// uniform nodes is advanced with the step propagator e^{Ah}.
pub fn lyapunov_time_integral(a: &DriftMatrix, d: &DiffusionMatrix, tol: f64) -> DMatrix<f64> {
    let max_re = a
        .matrix()
        .complex_eigenvalues()
        .iter()
        .fold(f64::NEG_INFINITY, |acc, e| acc.max(e.re));
    assert!(max_re < 0.0, "oracle needs a stable drift matrix");
    let horizon = 40.0 / (-max_re);

    let simpson = |intervals: usize| -> DMatrix<f64> {
        let h = horizon / intervals as f64;
        let propagator = expm(&(a.matrix() * h));
        let mut integrand = d.matrix().clone();
        let mut acc = integrand.clone(); // weight 1 at t = 0 (Simpson end)
        for k in 1..=intervals {
            integrand = &propagator * integrand * propagator.transpose();
            let weight = if k == intervals {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += &integrand * weight;
        }
        acc * (h / 3.0)
    };

    let mut intervals = 256;
    let mut previous = simpson(intervals);
    loop {
        intervals *= 2;
        let current = simpson(intervals);
        let scale = current.amax().max(f64::MIN_POSITIVE);
        let diff = (&current - &previous).amax();
        if diff <= tol * scale || intervals >= 1 << 16 {
            return current;
        }
        previous = current;
    }
}

/// Composite Simpson integral of `f` over [lo, hi] with `intervals`
/// subintervals (forced even).
pub fn simpson_1d(lo: f64, hi: f64, intervals: usize, f: impl Fn(f64) -> f64) -> f64 {
    let n = intervals + intervals % 2;
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + h * k as f64);
    }
    acc * h / 3.0
}

/// 2-D Simpson integral over the square [−half, half]², refined by
/// doubling until stable to `tol` relative.
pub fn adaptive_square_integral(half: f64, tol: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
    let grid = |n: usize| -> f64 {
        simpson_1d(-half, half, n, |q| simpson_1d(-half, half, n, |p| f(q, p)))
    };
    let mut n = 64;
    let mut previous = grid(n);
    loop {
        n *= 2;
        let current = grid(n);
        if (current - previous).abs() <= tol * current.abs().max(f64::MIN_POSITIVE) || n >= 2048 {
            return current;
        }
        previous = current;
    }
}

/// Random physical single-mode covariance matrix: a squeezed thermal
/// state (symplectic eigenvalue ν ≥ ½) rotated by a random angle.
pub fn random_single_mode_cm<R: Rng>(rng: &mut R) -> CovarianceMatrix {
    let nu: f64 = rng.gen_range(0.5..1.5);
    let r: f64 = rng.gen_range(0.0..0.6);
    let theta = rng.gen_range(0.0..std::f64::consts::PI);
    let (s, c) = theta.sin_cos();
    let rot = DMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
    let diag = DMatrix::from_row_slice(
        2,
        2,
        &[nu * (-2.0 * r).exp(), 0.0, 0.0, nu * (2.0 * r).exp()],
    );
    let m = &rot * diag * rot.transpose();
    CovarianceMatrix::new((&m + m.transpose()) * 0.5).unwrap()
}

/// Two-mode squeezed vacuum CM with squeezing parameter r.
pub fn two_mode_squeezed(r: f64) -> CovarianceMatrix {
    let ch = (2.0 * r).cosh() / 2.0;
    let sh = (2.0 * r).sinh() / 2.0;
    let m = DMatrix::from_row_slice(
        4,
        4,
        &[
            ch, 0.0, sh, 0.0, //
            0.0, ch, 0.0, -sh, //
            sh, 0.0, ch, 0.0, //
            0.0, -sh, 0.0, ch,
        ],
    );
    CovarianceMatrix::new(m).unwrap()
}
