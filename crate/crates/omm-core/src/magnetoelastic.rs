//! Magnon–phonon coupling rates from sampled displacement eigenmodes.
//!
//! For a cubic magnetic crystal the magnetoelastic energy couples the
//! magnetization to the elastic strain. Depending on the ratio of phonon
//! to magnon frequency the dominant interaction is dispersive
//! (ω_b ≪ ω_m), linear/beam-splitter (ω_b ≈ ω_m), or magnon parametric
//! amplification (ω_b ≈ 2ω_m). Given a dimensionless displacement
//! eigenmode χ sampled on a uniform 3-D lattice, this module evaluates the
//! corresponding coupling-rate integrals with central finite differences
//! (one-sided second-order stencils at the boundaries) and trapezoid
//! quadrature.

use nalgebra::Complex;
use thiserror::Error;

use crate::constants::HBAR;

type C64 = Complex<f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MagnetoelasticError {
    #[error("grid too small: need at least 3 points per axis, got {nx}x{ny}x{nz}")]
    GridTooSmall { nx: usize, ny: usize, nz: usize },
    #[error("field arrays must have nx*ny*nz = {expected} entries, got {actual}")]
    FieldShapeMismatch { expected: usize, actual: usize },
    #[error("{name} must be positive")]
    NonPositiveInput { name: &'static str },
}

/// Axis along which a partial derivative is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
    Z,
}

/// A dimensionless displacement eigenmode sampled on a uniform lattice,
/// with lattice index `(iz·ny + iy)·nx + ix` (x fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementMode {
    nx: usize,
    ny: usize,
    nz: usize,
    dx: f64,
    dy: f64,
    dz: f64,
    chi_x: Vec<f64>,
    chi_y: Vec<f64>,
    chi_z: Vec<f64>,
    /// Zero-point amplitude of the mode \[m\].
    d_zpm: f64,
}

impl DisplacementMode {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        nx: usize,
        ny: usize,
        nz: usize,
        dx: f64,
        dy: f64,
        dz: f64,
        chi_x: Vec<f64>,
        chi_y: Vec<f64>,
        chi_z: Vec<f64>,
        d_zpm: f64,
    ) -> Result<Self, MagnetoelasticError> {
        if nx < 3 || ny < 3 || nz < 3 {
            return Err(MagnetoelasticError::GridTooSmall { nx, ny, nz });
        }
        for (value, name) in [(dx, "dx"), (dy, "dy"), (dz, "dz"), (d_zpm, "d_zpm")] {
            if value.is_nan() || value <= 0.0 {
                return Err(MagnetoelasticError::NonPositiveInput { name });
            }
        }
        let expected = nx * ny * nz;
        for field in [&chi_x, &chi_y, &chi_z] {
            if field.len() != expected {
                return Err(MagnetoelasticError::FieldShapeMismatch {
                    expected,
                    actual: field.len(),
                });
            }
        }
        Ok(Self {
            nx,
            ny,
            nz,
            dx,
            dy,
            dz,
            chi_x,
            chi_y,
            chi_z,
            d_zpm,
        })
    }

    /// Sample an analytic mode shape on a lattice spanning
    /// `[0, (n−1)·d]` per axis; mostly a convenience for tests and demos.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fn(
        nx: usize,
        ny: usize,
        nz: usize,
        dx: f64,
        dy: f64,
        dz: f64,
        d_zpm: f64,
        shape: impl Fn(f64, f64, f64) -> [f64; 3],
    ) -> Result<Self, MagnetoelasticError> {
        let total = nx * ny * nz;
        let mut chi_x = vec![0.0; total];
        let mut chi_y = vec![0.0; total];
        let mut chi_z = vec![0.0; total];
        for iz in 0..nz {
            for iy in 0..ny {
                for ix in 0..nx {
                    let idx = (iz * ny + iy) * nx + ix;
                    let [x, y, z] = [ix as f64 * dx, iy as f64 * dy, iz as f64 * dz];
                    let chi = shape(x, y, z);
                    chi_x[idx] = chi[0];
                    chi_y[idx] = chi[1];
                    chi_z[idx] = chi[2];
                }
            }
        }
        Self::new(nx, ny, nz, dx, dy, dz, chi_x, chi_y, chi_z, d_zpm)
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.nx, self.ny, self.nz)
    }

    pub fn spacings(&self) -> (f64, f64, f64) {
        (self.dx, self.dy, self.dz)
    }

    pub fn d_zpm(&self) -> f64 {
        self.d_zpm
    }

    fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (iz * self.ny + iy) * self.nx + ix
    }

    /// ∂field/∂axis: 2nd-order central differences in the interior,
    /// 2nd-order one-sided stencils on the boundary planes.
    fn partial(&self, field: &[f64], axis: Axis) -> Vec<f64> {
        let (n_axis, h) = match axis {
            Axis::X => (self.nx, self.dx),
            Axis::Y => (self.ny, self.dy),
            Axis::Z => (self.nz, self.dz),
        };
        let at = |ix: usize, iy: usize, iz: usize| field[self.index(ix, iy, iz)];
        let mut out = vec![0.0; field.len()];
        for iz in 0..self.nz {
            for iy in 0..self.ny {
                for ix in 0..self.nx {
                    let i = match axis {
                        Axis::X => ix,
                        Axis::Y => iy,
                        Axis::Z => iz,
                    };
                    let sample = |k: usize| match axis {
                        Axis::X => at(k, iy, iz),
                        Axis::Y => at(ix, k, iz),
                        Axis::Z => at(ix, iy, k),
                    };
                    let d = if i == 0 {
                        (-3.0 * sample(0) + 4.0 * sample(1) - sample(2)) / (2.0 * h)
                    } else if i == n_axis - 1 {
                        (3.0 * sample(i) - 4.0 * sample(i - 1) + sample(i - 2)) / (2.0 * h)
                    } else {
                        (sample(i + 1) - sample(i - 1)) / (2.0 * h)
                    };
                    out[self.index(ix, iy, iz)] = d;
                }
            }
        }
        out
    }

    /// Trapezoid quadrature of a sampled field over the lattice volume.
    fn integrate(&self, field: &[f64]) -> f64 {
        let w = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for iz in 0..self.nz {
            for iy in 0..self.ny {
                for ix in 0..self.nx {
                    total += w(ix, self.nx)
                        * w(iy, self.ny)
                        * w(iz, self.nz)
                        * field[self.index(ix, iy, iz)];
                }
            }
        }
        total * self.dx * self.dy * self.dz
    }
}

/// Magnetoelastic material constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Longitudinal magnetoelastic coefficient B₁ \[J/m³\].
    pub b1: f64,
    /// Shear magnetoelastic coefficient B₂ \[J/m³\].
    pub b2: f64,
    /// Saturation magnetization M_S \[A/m\].
    pub saturation_magnetization: f64,
    /// Gyromagnetic ratio γ \[rad/(s·T)\].
    pub gyromagnetic_ratio: f64,
    /// Crystal volume V \[m³\].
    pub volume: f64,
}

impl MaterialParams {
    pub fn validate(&self) -> Result<(), MagnetoelasticError> {
        for (value, name) in [
            (self.saturation_magnetization, "saturation_magnetization"),
            (self.volume, "volume"),
            (self.gyromagnetic_ratio, "gyromagnetic_ratio"),
        ] {
            if value.is_nan() || value <= 0.0 {
                return Err(MagnetoelasticError::NonPositiveInput { name });
            }
        }
        Ok(())
    }
}

/// The six sampled strain components of a displacement mode,
/// `ε_ij = ½(∂u_i/∂l_j + ∂u_j/∂l_i)` (units 1/m for the dimensionless χ).
#[derive(Debug, Clone, PartialEq)]
pub struct StrainField {
    pub e_xx: Vec<f64>,
    pub e_yy: Vec<f64>,
    pub e_zz: Vec<f64>,
    pub e_xy: Vec<f64>,
    pub e_xz: Vec<f64>,
    pub e_yz: Vec<f64>,
}

/// Strain tensor fields of the sampled mode.
pub fn strain(mode: &DisplacementMode) -> StrainField {
    let dxx = mode.partial(&mode.chi_x, Axis::X);
    let dyy = mode.partial(&mode.chi_y, Axis::Y);
    let dzz = mode.partial(&mode.chi_z, Axis::Z);
    let dxy = mode.partial(&mode.chi_x, Axis::Y);
    let dyx = mode.partial(&mode.chi_y, Axis::X);
    let dxz = mode.partial(&mode.chi_x, Axis::Z);
    let dzx = mode.partial(&mode.chi_z, Axis::X);
    let dyz = mode.partial(&mode.chi_y, Axis::Z);
    let dzy = mode.partial(&mode.chi_z, Axis::Y);
    let half_sum = |a: &[f64], b: &[f64]| -> Vec<f64> {
        a.iter().zip(b).map(|(&u, &v)| 0.5 * (u + v)).collect()
    };
    StrainField {
        e_xx: dxx,
        e_yy: dyy,
        e_zz: dzz,
        e_xy: half_sum(&dxy, &dyx),
        e_xz: half_sum(&dxz, &dzx),
        e_yz: half_sum(&dyz, &dzy),
    }
}

/// Dispersive magnon–phonon coupling rate [rad/s]:
///
/// `g = (B₁/M_S)(γ/V) ∫ d_zpm (∂χ_x/∂x + ∂χ_y/∂y − 2 ∂χ_z/∂z) dl³`.
pub fn g_dispersive(
    mode: &DisplacementMode,
    mat: &MaterialParams,
) -> Result<f64, MagnetoelasticError> {
    mat.validate()?;
    let dxx = mode.partial(&mode.chi_x, Axis::X);
    let dyy = mode.partial(&mode.chi_y, Axis::Y);
    let dzz = mode.partial(&mode.chi_z, Axis::Z);
    let integrand: Vec<f64> = dxx
        .iter()
        .zip(&dyy)
        .zip(&dzz)
        .map(|((&xx, &yy), &zz)| xx + yy - 2.0 * zz)
        .collect();
    let prefactor = mat.b1 / mat.saturation_magnetization * mat.gyromagnetic_ratio / mat.volume;
    Ok(prefactor * mode.d_zpm * mode.integrate(&integrand))
}

/// Linear (beam-splitter) magnon–phonon coupling rate [rad/s]:
///
/// `g = (B₂/M_S)·√(γM_S/2ℏV)·d_zpm·[∫(∂χ_x/∂z + ∂χ_z/∂x) + i∫(∂χ_y/∂z + ∂χ_z/∂y)] dl³`.
pub fn g_linear(mode: &DisplacementMode, mat: &MaterialParams) -> Result<C64, MagnetoelasticError> {
    mat.validate()?;
    let dxz = mode.partial(&mode.chi_x, Axis::Z);
    let dzx = mode.partial(&mode.chi_z, Axis::X);
    let dyz = mode.partial(&mode.chi_y, Axis::Z);
    let dzy = mode.partial(&mode.chi_z, Axis::Y);
    let real: Vec<f64> = dxz.iter().zip(&dzx).map(|(&a, &b)| a + b).collect();
    let imag: Vec<f64> = dyz.iter().zip(&dzy).map(|(&a, &b)| a + b).collect();
    let prefactor = mat.b2 / mat.saturation_magnetization
        * (mat.gyromagnetic_ratio * mat.saturation_magnetization / (2.0 * HBAR * mat.volume))
            .sqrt();
    Ok(C64::new(
        prefactor * mode.d_zpm * mode.integrate(&real),
        prefactor * mode.d_zpm * mode.integrate(&imag),
    ))
}

/// Magnon parametric-amplification coupling rate [rad/s]:
///
/// `g = (γ/2VM_S)·d_zpm·∫[B₁(∂χ_x/∂x − ∂χ_y/∂y) + i·B₂(∂χ_x/∂y + ∂χ_y/∂x)] dl³`.
pub fn g_parametric(
    mode: &DisplacementMode,
    mat: &MaterialParams,
) -> Result<C64, MagnetoelasticError> {
    mat.validate()?;
    let dxx = mode.partial(&mode.chi_x, Axis::X);
    let dyy = mode.partial(&mode.chi_y, Axis::Y);
    let dxy = mode.partial(&mode.chi_x, Axis::Y);
    let dyx = mode.partial(&mode.chi_y, Axis::X);
    let real: Vec<f64> = dxx.iter().zip(&dyy).map(|(&a, &b)| a - b).collect();
    let imag: Vec<f64> = dxy.iter().zip(&dyx).map(|(&a, &b)| a + b).collect();
    let prefactor =
        mat.gyromagnetic_ratio / (2.0 * mat.volume * mat.saturation_magnetization) * mode.d_zpm;
    Ok(C64::new(
        prefactor * mat.b1 * mode.integrate(&real),
        prefactor * mat.b2 * mode.integrate(&imag),
    ))
}

/// Which magnetoelastic coupling dominates for a given phonon/magnon
/// frequency pair. Thresholds on ω_b/ω_m: below 0.2 dispersive, within
/// [1.8, 2.2] parametric amplification, between them linear, above 2.2
/// off-resonant. The thresholds are a tool convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingRegime {
    /// ω_b ≪ ω_m: dispersive coupling, magnon number to displacement.
    Dispersive,
    /// ω_b ≈ ω_m: linear beam-splitter coupling.
    Linear,
    /// ω_b ≈ 2ω_m: magnon parametric amplification.
    ParametricAmplification,
    /// No near-resonant magnetoelastic process.
    OffResonant,
}

impl CouplingRegime {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Dispersive => "dispersive",
            Self::Linear => "linear",
            Self::ParametricAmplification => "parametric_amplification",
            Self::OffResonant => "off_resonant",
        }
    }
}

impl std::fmt::Display for CouplingRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify_regime(omega_b: f64, omega_m: f64) -> CouplingRegime {
    let ratio = omega_b / omega_m;
    if ratio < 0.2 {
        CouplingRegime::Dispersive
    } else if ratio < 1.8 {
        CouplingRegime::Linear
    } else if ratio <= 2.2 {
        CouplingRegime::ParametricAmplification
    } else {
        CouplingRegime::OffResonant
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_material() -> MaterialParams {
        MaterialParams {
            b1: 1.0,
            b2: 1.0,
            saturation_magnetization: 1.0,
            gyromagnetic_ratio: 1.0,
            volume: 1.0,
        }
    }

    fn box_mode(n: usize, l: f64, shape: impl Fn(f64, f64, f64) -> [f64; 3]) -> DisplacementMode {
        let d = l / (n - 1) as f64;
        DisplacementMode::from_fn(n, n, n, d, d, d, 1.0, shape).unwrap()
    }

    #[test]
    fn rigid_translation_has_no_strain() {
        let mode = box_mode(5, 1.0, |_, _, _| [0.3, -0.1, 0.7]);
        let s = strain(&mode);
        for field in [&s.e_xx, &s.e_yy, &s.e_zz, &s.e_xy, &s.e_xz, &s.e_yz] {
            assert!(field.iter().all(|&e| e.abs() < 1e-12));
        }
    }

    #[test]
    fn uniaxial_stretch_strain() {
        let l = 2.0;
        let mode = box_mode(7, l, |_, _, z| [0.0, 0.0, z / l]);
        let s = strain(&mode);
        for &e in &s.e_zz {
            assert_relative_eq!(e, 1.0 / l, max_relative = 1e-12);
        }
        for field in [&s.e_xx, &s.e_yy, &s.e_xy, &s.e_xz, &s.e_yz] {
            assert!(field.iter().all(|&e| e.abs() < 1e-12));
        }
    }

    #[test]
    fn shear_strain() {
        let l = 1.0;
        let mode = box_mode(5, l, |_, y, _| [y / l, 0.0, 0.0]);
        let s = strain(&mode);
        for &e in &s.e_xy {
            assert_relative_eq!(e, 1.0 / (2.0 * l), max_relative = 1e-12);
        }
    }

    #[test]
    fn grid_too_small_is_rejected() {
        let result =
            DisplacementMode::from_fn(2, 5, 5, 0.1, 0.1, 0.1, 1.0, |_, _, _| [0.0, 0.0, 0.0]);
        assert!(matches!(
            result,
            Err(MagnetoelasticError::GridTooSmall { nx: 2, .. })
        ));
    }

    #[test]
    fn dispersive_vanishes_for_rigid_translation() {
        let mode = box_mode(5, 1.0, |_, _, _| [1.0, 2.0, 3.0]);
        assert_eq!(g_dispersive(&mode, &unit_material()).unwrap(), 0.0);
    }

    #[test]
    fn dispersive_uniaxial_stretch_matches_analytic() {
        // χ_z = z/L on an L³ box: integrand −2/L, integral −2L².
        let l = 1.5;
        let mode = box_mode(9, l, |_, _, z| [0.0, 0.0, z / l]);
        let mut mat = unit_material();
        mat.volume = l * l * l;
        let expected = 1.0 / mat.volume * mode.d_zpm() * (-2.0 / l) * l * l * l;
        assert_relative_eq!(
            g_dispersive(&mode, &mat).unwrap(),
            expected,
            max_relative = 1e-3
        );
    }

    #[test]
    fn dispersive_vanishes_for_volume_preserving_shear() {
        // ∂χ_x/∂x = −∂χ_y/∂y, χ_z = 0: the integrand cancels pointwise.
        let l = 1.0;
        let mode = box_mode(7, l, |x, y, _| [x / l, -y / l, 0.0]);
        let g = g_dispersive(&mode, &unit_material()).unwrap();
        assert!(g.abs() < 1e-12);
    }

    #[test]
    fn linear_xz_shear_is_real() {
        let l = 1.0;
        let mode = box_mode(7, l, |_, _, z| [z / l, 0.0, 0.0]);
        let mat = unit_material();
        let g = g_linear(&mode, &mat).unwrap();
        let prefactor = 1.0 * (1.0 / (2.0 * HBAR)).sqrt();
        let expected = prefactor * mode.d_zpm() * 1.0 / l; // V/L with V = L³ = 1
        assert_relative_eq!(g.re, expected, max_relative = 1e-3);
        assert!(g.im.abs() <= 1e-12 * expected.abs());
    }

    #[test]
    fn linear_yz_shear_is_imaginary() {
        let l = 1.0;
        let mode = box_mode(7, l, |_, _, z| [0.0, z / l, 0.0]);
        let g = g_linear(&mode, &unit_material()).unwrap();
        assert_eq!(g.re, 0.0);
        assert!(g.im > 0.0);
    }

    #[test]
    fn parametric_isotropic_stretch_cancels() {
        let l = 1.0;
        let mode = box_mode(7, l, |x, y, _| [x / l, y / l, 0.0]);
        let g = g_parametric(&mode, &unit_material()).unwrap();
        assert!(g.re.abs() < 1e-12);
        assert!(g.im.abs() < 1e-12);
    }

    #[test]
    fn parametric_uniaxial_stretch_matches_analytic() {
        let l = 1.0;
        let mode = box_mode(7, l, |x, _, _| [x / l, 0.0, 0.0]);
        let g = g_parametric(&mode, &unit_material()).unwrap();
        // (γ/2VM_S)·B₁·d·V/L with everything 1 except L.
        assert_relative_eq!(g.re, 0.5 / l, max_relative = 1e-3);
        assert!(g.im.abs() < 1e-12);
    }

    #[test]
    fn parametric_pure_shear_is_imaginary() {
        let l = 1.0;
        let mode = box_mode(7, l, |x, y, _| [y / l, x / l, 0.0]);
        let g = g_parametric(&mode, &unit_material()).unwrap();
        assert!(g.re.abs() < 1e-12);
        assert_relative_eq!(g.im, 1.0 / l, max_relative = 1e-3);
    }

    #[test]
    fn couplings_are_linear_in_zpm_and_coefficients() {
        let l = 1.0;
        let d1 = 1.0;
        let d2 = 3.5;
        let shape =
            |x: f64, y: f64, z: f64| [0.2 * z / l + x / l, 0.1 * x / l, z / l - 0.3 * y / l];
        let n = 7;
        let d = l / (n - 1) as f64;
        let mode1 = DisplacementMode::from_fn(n, n, n, d, d, d, d1, shape).unwrap();
        let mode2 = DisplacementMode::from_fn(n, n, n, d, d, d, d2, shape).unwrap();
        let mat = unit_material();
        assert_relative_eq!(
            g_dispersive(&mode2, &mat).unwrap(),
            d2 / d1 * g_dispersive(&mode1, &mat).unwrap(),
            max_relative = 1e-12
        );
        let mut mat_b = mat;
        mat_b.b1 = 2.0;
        assert_relative_eq!(
            g_dispersive(&mode1, &mat_b).unwrap(),
            2.0 * g_dispersive(&mode1, &mat).unwrap(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            g_parametric(&mode1, &mat_b).unwrap().re,
            2.0 * g_parametric(&mode1, &mat).unwrap().re,
            max_relative = 1e-12
        );
    }

    #[test]
    fn translation_offset_changes_nothing() {
        let l = 1.0;
        let n = 7;
        let d = l / (n - 1) as f64;
        let shape = |x: f64, y: f64, z: f64| [z / l + 0.2 * x / l, x / l, 0.5 * z / l + y / l];
        let shifted = |x: f64, y: f64, z: f64| -> [f64; 3] {
            let v = shape(x, y, z);
            [v[0] + 10.0, v[1] - 3.0, v[2] + 0.5]
        };
        let mode = DisplacementMode::from_fn(n, n, n, d, d, d, 1.0, shape).unwrap();
        let mode_shifted = DisplacementMode::from_fn(n, n, n, d, d, d, 1.0, shifted).unwrap();
        let mat = unit_material();
        assert_relative_eq!(
            g_dispersive(&mode, &mat).unwrap(),
            g_dispersive(&mode_shifted, &mat).unwrap(),
            epsilon = 1e-12
        );
        let (ga, gb) = (
            g_linear(&mode, &mat).unwrap(),
            g_linear(&mode_shifted, &mat).unwrap(),
        );
        assert_relative_eq!(ga.re, gb.re, epsilon = 1e-9);
        assert_relative_eq!(ga.im, gb.im, epsilon = 1e-9);
    }

    #[test]
    fn halving_spacing_converges_for_smooth_mode() {
        use std::f64::consts::PI;
        let l = 1.0;
        let shape = |x: f64, _y: f64, z: f64| {
            [
                (PI * z / l).sin() * 0.3,
                (PI * x / l).sin() * 0.2,
                (PI * x / l).sin() * (0.5 + z / l),
            ]
        };
        let coarse = {
            let n = 17;
            let d = l / (n - 1) as f64;
            DisplacementMode::from_fn(n, n, n, d, d, d, 1.0, shape).unwrap()
        };
        let fine = {
            let n = 33;
            let d = l / (n - 1) as f64;
            DisplacementMode::from_fn(n, n, n, d, d, d, 1.0, shape).unwrap()
        };
        let mat = unit_material();
        let gc = g_dispersive(&coarse, &mat).unwrap();
        let gf = g_dispersive(&fine, &mat).unwrap();
        assert!(
            (gc - gf).abs() <= 0.005 * gf.abs(),
            "coarse {gc} vs fine {gf}"
        );
    }

    #[test]
    fn regime_thresholds() {
        assert_eq!(classify_regime(1.0, 10.0), CouplingRegime::Dispersive);
        assert_eq!(classify_regime(1.0, 1.0), CouplingRegime::Linear);
        assert_eq!(
            classify_regime(2.0, 1.0),
            CouplingRegime::ParametricAmplification
        );
        assert_eq!(classify_regime(3.0, 1.0), CouplingRegime::OffResonant);
    }
}
