//! The language of zero-mean Gaussian states.
//!
//! Everything here is pure matrix math with no physics parameters: the
//! covariance/drift/diffusion matrix types, the steady-state Lyapunov
//! solver and Hurwitz stability test, and the Gaussian measures
//! (logarithmic negativity, Wigner density, overlap fidelity, symplectic
//! spectrum, thermal occupation).
//!
//! Conventions: quadratures are ordered (X₁, Y₁, X₂, Y₂, …) with
//! X = (a + a†)/√2 and Y = i(a† − a)/√2, so the vacuum state of n modes
//! has covariance matrix ½·I. All operations are pure functions and safe
//! to call concurrently.

mod lyapunov;
mod matrices;
mod measures;
mod thermal;

pub use lyapunov::{is_stable, solve_lyapunov, Stability};
pub use matrices::{CovarianceMatrix, DiffusionMatrix, DriftMatrix, GaussianError};
pub use measures::{
    log_negativity, min_symplectic_eigenvalue, overlap_fidelity, symplectic_eigenvalues, wigner,
};
pub use thermal::thermal_occupation;
