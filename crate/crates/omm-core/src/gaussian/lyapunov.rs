//! Steady-state Lyapunov solver and Hurwitz stability test.

use nalgebra::{DMatrix, DVector};

use super::matrices::{CovarianceMatrix, DiffusionMatrix, DriftMatrix, GaussianError};

/// Outcome of the Hurwitz test on a drift matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    /// All eigenvalue real parts below the scale-aware margin.
    pub stable: bool,
    /// Largest eigenvalue real part, rad/s.
    pub max_real_part: f64,
}

/// Scale-aware margin for rejecting marginally stable drift matrices:
/// 1e-6 of the largest diagonal magnitude, floored at 1e-3 rad/s.
fn stability_margin(a: &DMatrix<f64>) -> f64 {
    let max_diag = a
        .diagonal()
        .iter()
        .fold(0.0_f64, |acc, &d| acc.max(d.abs()));
    (1e-6 * max_diag).max(1e-3)
}

/// Test whether the drift matrix is Hurwitz: every eigenvalue real part
/// must lie below the negative stability margin. Returns the verdict
/// together with the largest real part.
pub fn is_stable(a: &DriftMatrix) -> Stability {
    let eigs = a.matrix().complex_eigenvalues();
    let max_real_part = eigs.iter().fold(f64::NEG_INFINITY, |acc, e| acc.max(e.re));
    Stability {
        stable: max_real_part < -stability_margin(a.matrix()),
        max_real_part,
    }
}

/// Solve the steady-state Lyapunov equation `A V + V Aᵀ + D = 0` for the
/// covariance matrix V.
///
/// The equation is vectorized as `(I ⊗ A + A ⊗ I) vec(V) = −vec(D)` and
/// solved densely; exact and cheap at the dimensions used here (≤ 6). The
/// result is symmetrized before being returned.
///
/// Errors with [`GaussianError::NotStable`] when A is not Hurwitz (no
/// unique steady state) and [`GaussianError::DimensionMismatch`] when A
/// and D differ in size.
pub fn solve_lyapunov(
    a: &DriftMatrix,
    d: &DiffusionMatrix,
) -> Result<CovarianceMatrix, GaussianError> {
    let n = a.dim();
    if d.dim() != n {
        return Err(GaussianError::DimensionMismatch {
            left: n,
            right: d.dim(),
        });
    }
    let stability = is_stable(a);
    if !stability.stable {
        return Err(GaussianError::NotStable {
            max_real_part: stability.max_real_part,
        });
    }

    let eye = DMatrix::<f64>::identity(n, n);
    let system = eye.kronecker(a.matrix()) + a.matrix().kronecker(&eye);
    // vec() is column-major, matching the Kronecker identity
    // vec(A V B) = (Bᵀ ⊗ A) vec(V).
    let rhs = DVector::from_iterator(n * n, d.matrix().iter().map(|&x| -x));
    let vec_v = system.lu().solve(&rhs).ok_or(GaussianError::NotStable {
        max_real_part: stability.max_real_part,
    })?;
    let v = DMatrix::from_iterator(n, n, vec_v.iter().copied());
    let sym = (&v + v.transpose()) * 0.5;
    CovarianceMatrix::new(sym)
}
