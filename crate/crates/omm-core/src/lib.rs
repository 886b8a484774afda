//! Steady-state Gaussian dynamics of an opto-magnomechanical system.
//!
//! A mechanical vibration mode couples dispersively to a magnon mode in a
//! ferrimagnetic crystal (magnetostriction) and to an optical cavity
//! (radiation pressure). This crate builds the linearized drift/diffusion
//! model of the three-mode system, solves for stationary covariance
//! matrices, quantifies magnon–photon entanglement, and models a two-step
//! pulsed optical readout of magnonic states.
//!
//! Module map:
//! - [`gaussian`] — covariance-matrix language: Lyapunov solver, stability
//!   analysis, logarithmic negativity, Wigner evaluation, overlap fidelity.
//! - [`model`] — physical parameters to steady-state amplitudes, effective
//!   couplings, and the 6×6 drift/diffusion matrices.
//! - [`entanglement`] — stationary optomagnonic entanglement and parameter
//!   sweeps.
//! - [`transfer`] — magnon → phonon → optical-pulse state readout.
//! - [`magnetoelastic`] — magnon–phonon coupling rates integrated from
//!   sampled displacement eigenmodes.
//!
//! All angular frequencies and rates are in rad/s; covariance matrices are
//! dimensionless with the vacuum equal to ½·I.

pub mod constants;
pub mod entanglement;
pub mod gaussian;
pub mod magnetoelastic;
pub mod model;
pub mod transfer;
