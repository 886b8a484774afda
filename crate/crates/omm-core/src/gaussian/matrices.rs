//! Covariance, drift, and diffusion matrix types.

use nalgebra::DMatrix;
use thiserror::Error;

/// Relative tolerance against which symmetry of covariance and diffusion
/// matrices is enforced.
const SYMMETRY_TOL: f64 = 1e-10;

/// Relative tolerance for the positive-semidefiniteness check on
/// diffusion matrices.
const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussianError {
    #[error("matrix dimensions do not match: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expected a {expected}x{expected} matrix, got {actual}x{actual}")]
    WrongDimension { expected: usize, actual: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("drift matrix is not Hurwitz (max eigenvalue real part {max_real_part:.6e} rad/s)")]
    NotStable { max_real_part: f64 },
    #[error("invalid covariance matrix: {0}")]
    InvalidCm(String),
    #[error("invalid diffusion matrix: {0}")]
    InvalidDiffusion(String),
    #[error("covariance matrix is singular or not positive definite")]
    SingularCm,
    #[error("mode index {index} out of range for {modes} modes")]
    IndexOutOfRange { index: usize, modes: usize },
    #[error("duplicate mode index {0}")]
    DuplicateMode(usize),
    #[error("frequency must be positive")]
    NonPositiveFrequency,
    #[error("temperature must be non-negative")]
    NegativeTemperature,
}

fn check_symmetric(m: &DMatrix<f64>, what: &str) -> Result<(), String> {
    let scale = m.amax();
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(format!(
                    "{what} asymmetric at ({i},{j}): {} vs {}",
                    m[(i, j)],
                    m[(j, i)]
                ));
            }
        }
    }
    Ok(())
}

/// Covariance matrix of quadrature second moments,
/// `V_ij = ⟨u_i u_j + u_j u_i⟩/2`, dimensionless.
///
/// Invariants enforced on construction: even positive dimension, symmetry
/// to 1e-10 relative, non-negative diagonal. The stored matrix is exactly
/// symmetrized.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    m: DMatrix<f64>,
}

impl CovarianceMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self, GaussianError> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(GaussianError::NotSquare {
                rows: n,
                cols: m.ncols(),
            });
        }
        if n == 0 || !n.is_multiple_of(2) {
            return Err(GaussianError::InvalidCm(format!(
                "dimension must be a positive even number, got {n}"
            )));
        }
        check_symmetric(&m, "covariance matrix").map_err(GaussianError::InvalidCm)?;
        for i in 0..n {
            if m[(i, i)] < 0.0 {
                return Err(GaussianError::InvalidCm(format!(
                    "negative diagonal entry {} at ({i},{i})",
                    m[(i, i)]
                )));
            }
        }
        let sym = (&m + m.transpose()) * 0.5;
        Ok(Self { m: sym })
    }

    /// Vacuum state of `modes` modes: exactly ½·I.
    pub fn vacuum(modes: usize) -> Self {
        Self {
            m: DMatrix::identity(2 * modes, 2 * modes) * 0.5,
        }
    }

    /// Number of quadratures (rows).
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn n_modes(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.m
    }

    /// Keep only the quadrature rows/columns of the selected modes, in the
    /// order given (the partial trace of a Gaussian state onto those modes).
    /// Mode indices are 0-based.
    pub fn extract_modes(&self, modes: &[usize]) -> Result<Self, GaussianError> {
        let total = self.n_modes();
        for (k, &mode) in modes.iter().enumerate() {
            if mode >= total {
                return Err(GaussianError::IndexOutOfRange {
                    index: mode,
                    modes: total,
                });
            }
            if modes[..k].contains(&mode) {
                return Err(GaussianError::DuplicateMode(mode));
            }
        }
        let rows: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let sub = DMatrix::from_fn(rows.len(), rows.len(), |i, j| self.m[(rows[i], rows[j])]);
        Ok(Self { m: sub })
    }

    /// Conjugate the quadratures of one mode by a planar rotation R(θ),
    /// returning R V Rᵀ. This is a local symplectic operation; it changes
    /// no entanglement or purity property of the state.
    pub fn rotate_mode(&self, mode: usize, angle: f64) -> Result<Self, GaussianError> {
        let total = self.n_modes();
        if mode >= total {
            return Err(GaussianError::IndexOutOfRange {
                index: mode,
                modes: total,
            });
        }
        let n = self.dim();
        let mut rot = DMatrix::identity(n, n);
        let (s, c) = angle.sin_cos();
        let k = 2 * mode;
        rot[(k, k)] = c;
        rot[(k, k + 1)] = s;
        rot[(k + 1, k)] = -s;
        rot[(k + 1, k + 1)] = c;
        let m = (&rot * &self.m * rot.transpose() + (&rot * &self.m * rot.transpose()).transpose())
            * 0.5;
        Ok(Self { m })
    }
}

/// Drift matrix of linearized Langevin dynamics `u̇ = A u + n`, rad/s.
///
/// No Hurwitz requirement is imposed here; stability is a queried property
/// (see [`is_stable`](super::is_stable)).
#[derive(Debug, Clone, PartialEq)]
pub struct DriftMatrix {
    m: DMatrix<f64>,
}

impl DriftMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self, GaussianError> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(GaussianError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        Ok(Self { m })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }
}

/// Diffusion matrix of the input noise,
/// `D_ij = ⟨n_i n_j + n_j n_i⟩/2`, rad/s.
///
/// Symmetric and positive semi-definite (both checked on construction, to
/// 1e-10 relative).
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionMatrix {
    m: DMatrix<f64>,
}

impl DiffusionMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self, GaussianError> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(GaussianError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        check_symmetric(&m, "diffusion matrix").map_err(GaussianError::InvalidDiffusion)?;
        let sym = (&m + m.transpose()) * 0.5;
        let eigs = sym.symmetric_eigenvalues();
        let max = eigs.iter().fold(0.0_f64, |a, &e| a.max(e.abs()));
        let min = eigs.iter().fold(f64::INFINITY, |a, &e| a.min(e));
        if min < -PSD_TOL * max.max(1.0) {
            return Err(GaussianError::InvalidDiffusion(format!(
                "not positive semi-definite (min eigenvalue {min:.6e})"
            )));
        }
        Ok(Self { m: sym })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }
}
