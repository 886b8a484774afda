//! Gaussian-state measures: logarithmic negativity, Wigner density,
//! overlap fidelity, symplectic spectrum.

use nalgebra::DMatrix;

use super::matrices::{CovarianceMatrix, GaussianError};

/// Absolute grace below zero for the partial-transpose discriminant;
/// round-off at the separability boundary is treated as exactly zero.
const DISCRIMINANT_TOL: f64 = 1e-9;

fn det2(m: &DMatrix<f64>, r: usize, c: usize) -> f64 {
    m[(r, c)] * m[(r + 1, c + 1)] - m[(r, c + 1)] * m[(r + 1, c)]
}

/// Logarithmic negativity of a two-mode Gaussian state with covariance
/// matrix `V₄ = [V_a, V_am; V_amᵀ, V_m]`:
///
/// `E_N = max[0, −ln(2η⁻)]`, where
/// `η⁻ = 2^{−1/2}·[Σ − (Σ² − 4 det V₄)^{1/2}]^{1/2}` is the smallest
/// symplectic eigenvalue of the partially transposed state and
/// `Σ = det V_a + det V_m − 2 det V_am`.
///
/// The bracket is evaluated as `4 det V₄ / (Σ + √(Σ² − 4 det V₄))` to
/// avoid the catastrophic cancellation that otherwise caps accuracy for
/// strongly entangled states.
pub fn log_negativity(v4: &CovarianceMatrix) -> Result<f64, GaussianError> {
    if v4.dim() != 4 {
        return Err(GaussianError::WrongDimension {
            expected: 4,
            actual: v4.dim(),
        });
    }
    let m = v4.matrix();
    let det_a = det2(m, 0, 0);
    let det_b = det2(m, 2, 2);
    let det_c = m[(0, 2)] * m[(1, 3)] - m[(0, 3)] * m[(1, 2)];
    let sigma = det_a + det_b - 2.0 * det_c;
    let det4 = m.determinant();

    let mut disc = sigma * sigma - 4.0 * det4;
    if disc < -DISCRIMINANT_TOL {
        return Err(GaussianError::InvalidCm(format!(
            "partial-transpose discriminant is negative ({disc:.6e})"
        )));
    }
    disc = disc.max(0.0);
    let denom = sigma + disc.sqrt();
    if denom <= 0.0 || det4 <= 0.0 {
        return Err(GaussianError::InvalidCm(
            "smallest PT symplectic eigenvalue is not real and positive".into(),
        ));
    }
    let eta_minus = (2.0 * det4 / denom).sqrt();
    Ok((-(2.0 * eta_minus).ln()).max(0.0))
}

/// Wigner density of a zero-mean single-mode Gaussian state at the
/// phase-space point (q, p):
///
/// `W(u) = exp(−u V⁻¹ uᵀ) / (π √det V)` with `u = (q, p)`.
///
/// The exponent carries no factor ½; with the vacuum ½·I convention used
/// throughout, this form is normalized to unity over phase space.
pub fn wigner(v: &CovarianceMatrix, q: f64, p: f64) -> Result<f64, GaussianError> {
    if v.dim() != 2 {
        return Err(GaussianError::WrongDimension {
            expected: 2,
            actual: v.dim(),
        });
    }
    let m = v.matrix();
    let det = det2(m, 0, 0);
    if det <= 0.0 {
        return Err(GaussianError::SingularCm);
    }
    // u V^{-1} u^T, with the 2x2 inverse written out.
    let quad = (q * q * m[(1, 1)] - 2.0 * q * p * m[(0, 1)] + p * p * m[(0, 0)]) / det;
    Ok((-quad).exp() / (std::f64::consts::PI * det.sqrt()))
}

/// Overlap fidelity of two zero-mean single-mode Gaussian states,
/// `F = π ∫ W₁(α) W₂(α) d²α = 1/√det(V₁ + V₂)`.
///
/// Symmetric in its arguments; equals 1 iff the states coincide and are
/// pure.
pub fn overlap_fidelity(
    v1: &CovarianceMatrix,
    v2: &CovarianceMatrix,
) -> Result<f64, GaussianError> {
    for v in [v1, v2] {
        if v.dim() != 2 {
            return Err(GaussianError::WrongDimension {
                expected: 2,
                actual: v.dim(),
            });
        }
    }
    let sum = v1.matrix() + v2.matrix();
    let det = sum[(0, 0)] * sum[(1, 1)] - sum[(0, 1)] * sum[(1, 0)];
    if det <= 0.0 {
        return Err(GaussianError::SingularCm);
    }
    Ok(1.0 / det.sqrt())
}

/// Symplectic eigenvalues of an n-mode covariance matrix, ascending.
///
/// These are the moduli of the (purely imaginary, paired) eigenvalues of
/// Ω V, where Ω is the symplectic form ⊕ `[[0,1],[−1,0]]`. A physical state
/// has every symplectic eigenvalue ≥ ½.
pub fn symplectic_eigenvalues(v: &CovarianceMatrix) -> Vec<f64> {
    let n = v.dim();
    let mut omega = DMatrix::<f64>::zeros(n, n);
    for k in 0..n / 2 {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    let eigs = (omega * v.matrix()).complex_eigenvalues();
    let mut mags: Vec<f64> = eigs.iter().map(|e| e.im.abs()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // The spectrum of ΩV comes in ±iν pairs; keep one of each.
    mags.into_iter().step_by(2).collect()
}

/// Smallest symplectic eigenvalue; ≥ ½ for a physical state.
pub fn min_symplectic_eigenvalue(v: &CovarianceMatrix) -> f64 {
    symplectic_eigenvalues(v)[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Two-mode squeezed vacuum with squeezing r: diagonal blocks
    /// cosh(2r)/2·I, off-diagonal sinh(2r)/2·diag(1,−1).
    pub(crate) fn two_mode_squeezed(r: f64) -> CovarianceMatrix {
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

    #[test]
    fn two_vacua_are_separable() {
        let v = CovarianceMatrix::vacuum(2);
        assert_eq!(log_negativity(&v).unwrap(), 0.0);
    }

    #[test]
    fn squeezed_vacuum_negativity_is_twice_r() {
        for r in [0.25, 0.5, 1.0] {
            let v = two_mode_squeezed(r);
            assert_relative_eq!(log_negativity(&v).unwrap(), 2.0 * r, epsilon = 1e-9);
        }
    }

    #[test]
    fn negative_discriminant_is_rejected() {
        // An indefinite symmetric matrix whose partial-transpose
        // discriminant is clearly negative (≈ −0.383).
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.44, 0.77, 0.85, 0.09, //
                0.77, 0.74, 0.85, -0.28, //
                0.85, 0.85, 0.34, -0.19, //
                0.09, -0.28, -0.19, 0.85,
            ],
        );
        let v = CovarianceMatrix::new(m).unwrap();
        assert!(matches!(
            log_negativity(&v),
            Err(GaussianError::InvalidCm(_))
        ));
    }

    #[test]
    fn non_real_symplectic_eigenvalue_is_rejected() {
        // Inter-mode correlations in both quadratures with the same sign
        // drive Σ negative while det V₄ stays positive.
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.5, 0.0, 2.0, 0.0, //
                0.0, 0.5, 0.0, 1.5, //
                2.0, 0.0, 0.5, 0.0, //
                0.0, 1.5, 0.0, 0.5,
            ],
        );
        let v = CovarianceMatrix::new(m).unwrap();
        assert!(matches!(
            log_negativity(&v),
            Err(GaussianError::InvalidCm(_))
        ));
    }

    #[test]
    fn vacuum_wigner_at_origin() {
        let v = CovarianceMatrix::vacuum(1);
        let w = wigner(&v, 0.0, 0.0).unwrap();
        assert_relative_eq!(w, 2.0 / std::f64::consts::PI, max_relative = 1e-15);
    }

    #[test]
    fn vacuum_wigner_off_origin() {
        let v = CovarianceMatrix::vacuum(1);
        let w = wigner(&v, 1.0, 0.0).unwrap();
        assert_relative_eq!(
            w,
            2.0 / std::f64::consts::PI * (-2.0_f64).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn wigner_rejects_singular() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let v = CovarianceMatrix::new(m).unwrap();
        assert!(matches!(
            wigner(&v, 0.0, 0.0),
            Err(GaussianError::SingularCm)
        ));
    }

    #[test]
    fn identical_vacua_have_unit_fidelity() {
        let v = CovarianceMatrix::vacuum(1);
        assert_relative_eq!(overlap_fidelity(&v, &v).unwrap(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn thermal_fidelity_closed_form() {
        // V1 = V2 = (N + ½)·I gives F = 1/(2N+1); N = 1 → 1/3.
        let n = 1.0;
        let m = DMatrix::identity(2, 2) * (n + 0.5);
        let v = CovarianceMatrix::new(m).unwrap();
        assert_relative_eq!(
            overlap_fidelity(&v, &v).unwrap(),
            1.0 / 3.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn vacuum_symplectic_spectrum() {
        let v = CovarianceMatrix::vacuum(3);
        let nus = symplectic_eigenvalues(&v);
        assert_eq!(nus.len(), 3);
        for nu in nus {
            assert_relative_eq!(nu, 0.5, max_relative = 1e-12);
        }
    }

    #[test]
    fn squeezed_state_is_pure() {
        // Single-mode squeezed vacuum (4·det V = 1): symplectic eigenvalue
        // exactly ½.
        let m = DMatrix::from_row_slice(2, 2, &[0.1, 0.0, 0.0, 2.5]);
        let v = CovarianceMatrix::new(m).unwrap();
        assert_relative_eq!(min_symplectic_eigenvalue(&v), 0.5, max_relative = 1e-12);
    }
}
