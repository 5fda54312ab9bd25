//! Scattering Green tensor of a perfectly reflecting plane at coincident
//! points, and its contraction with hyperfine dipole matrix elements.
//!
//! The surface is the plane `Z = 0` and the atom sits at height `Z > 0`.
//! The tensor is diagonal in the Cartesian frame; `Gxx = Gyy` by the
//! rotational symmetry of the plane. Normalization follows the Maxwell
//! equation `[k^2 - curl curl] G = delta I`, which makes the static limit of
//! every component negative on the real axis:
//!
//! ```text
//! Gxx = Gyy = -e^{2ikZ} (1 - 2ikZ - 4k^2 Z^2) / (32 pi k^2 Z^3)
//! Gzz       =  e^{2ikZ} (-1 + 2ikZ)          / (16 pi k^2 Z^3)
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::atomic::{hyperfine_dipole, HyperfineState, TransitionLine};
use crate::constants::SPEED_OF_LIGHT;
use crate::error::{AtomicError, GreenError};
use crate::halfint::HalfInt;

/// Below this `kZ` the real-axis bracket is evaluated from its Taylor series.
pub const NEAR_FIELD_SERIES_THRESHOLD: f64 = 1e-3;

/// Which frequency axis a [`GreenDiagonal`] was evaluated on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FrequencyAxis {
    /// Real angular frequency ω, rad/s.
    Real(f64),
    /// Imaginary-axis frequency u (ω = iu), rad/s.
    Imaginary(f64),
}

/// Diagonal of the coincident-point scattering Green tensor, 1/m.
///
/// The off-diagonal entries vanish for a planar mirror and are not stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenDiagonal {
    pub gxx: Complex64,
    pub gyy: Complex64,
    pub gzz: Complex64,
    pub z: f64,
    pub axis: FrequencyAxis,
}

impl GreenDiagonal {
    /// Builds a planar-symmetric diagonal, `Gyy` set equal to `Gxx`.
    pub fn planar(transverse: Complex64, normal: Complex64, z: f64, axis: FrequencyAxis) -> Self {
        Self {
            gxx: transverse,
            gyy: transverse,
            gzz: normal,
            z,
            axis,
        }
    }

    /// Component-wise real part.
    pub fn real_part(&self) -> Self {
        let re = |c: Complex64| Complex64::new(c.re, 0.0);
        Self {
            gxx: re(self.gxx),
            gyy: re(self.gyy),
            gzz: re(self.gzz),
            ..*self
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            gxx: self.gxx * factor,
            gyy: self.gyy * factor,
            gzz: self.gzz * factor,
            ..*self
        }
    }
}

/// Source of coincident-point Green tensors. The perfect mirror is the only
/// backend shipped; a lossy surface would implement the same two methods.
pub trait GreenBackend {
    fn real_axis(&self, z: f64, omega: f64) -> Result<GreenDiagonal, GreenError>;
    fn imaginary_axis(&self, z: f64, u: f64) -> Result<GreenDiagonal, GreenError>;
}

/// Perfectly reflecting plane.
#[derive(Clone, Copy, Debug, Default)]
pub struct PerfectMirror;

impl GreenBackend for PerfectMirror {
    fn real_axis(&self, z: f64, omega: f64) -> Result<GreenDiagonal, GreenError> {
        green_real(z, omega)
    }

    fn imaginary_axis(&self, z: f64, u: f64) -> Result<GreenDiagonal, GreenError> {
        green_imag(z, u)
    }
}

fn check_inputs(z: f64, freq: f64) -> Result<(), GreenError> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(GreenError::NonPositiveDistance(z));
    }
    if !(freq > 0.0 && freq.is_finite()) {
        return Err(GreenError::NonPositiveFrequency(freq));
    }
    Ok(())
}

/// Brackets `e^y (1 - y + y^2)` and `e^y (-1 + y)` with `y = 2ikZ`.
fn real_axis_brackets(kz: f64) -> (Complex64, Complex64) {
    let y = Complex64::new(0.0, 2.0 * kz);
    if kz < NEAR_FIELD_SERIES_THRESHOLD {
        // the linear terms cancel exactly; keep the series through y^5
        let y2 = y * y;
        let y3 = y2 * y;
        let y4 = y3 * y;
        let y5 = y4 * y;
        let transverse = 1.0 + y2 / 2.0 + y3 * (2.0 / 3.0) + y4 * (3.0 / 8.0) + y5 * (2.0 / 15.0);
        let normal = -1.0 + y2 / 2.0 + y3 / 3.0 + y4 / 8.0 + y5 / 30.0;
        (transverse, normal)
    } else {
        let e = y.exp();
        (e * (1.0 - y + y * y), e * (y - 1.0))
    }
}

/// Green tensor on the real frequency axis, `k = ω/c`.
pub fn green_real(z: f64, omega: f64) -> Result<GreenDiagonal, GreenError> {
    check_inputs(z, omega)?;
    let k = omega / SPEED_OF_LIGHT;
    let (transverse, normal) = real_axis_brackets(k * z);
    let scale = 1.0 / (k * k * z * z * z);
    Ok(GreenDiagonal::planar(
        -transverse * (scale / (32.0 * PI)),
        normal * (scale / (16.0 * PI)),
        z,
        FrequencyAxis::Real(omega),
    ))
}

/// Green tensor at imaginary frequency `ω = iu`; real and positive.
pub fn green_imag(z: f64, u: f64) -> Result<GreenDiagonal, GreenError> {
    check_inputs(z, u)?;
    let (transverse, normal) = imag_axis_components(z, u);
    Ok(GreenDiagonal::planar(
        Complex64::new(transverse, 0.0),
        Complex64::new(normal, 0.0),
        z,
        FrequencyAxis::Imaginary(u),
    ))
}

fn imag_axis_components(z: f64, u: f64) -> (f64, f64) {
    let x = u * z / SPEED_OF_LIGHT;
    let kappa = u / SPEED_OF_LIGHT;
    let envelope = (-2.0 * x).exp() / (kappa * kappa * z * z * z);
    (
        envelope * (1.0 + 2.0 * x + 4.0 * x * x) / (32.0 * PI),
        envelope * (1.0 + 2.0 * x) / (16.0 * PI),
    )
}

/// Dipole products entering the trace for one intermediate state, grouped by
/// the Green-tensor combination they multiply.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TraceWeights {
    /// `<g|d_0|i><e|d_0|i>`, multiplies `Gxx`.
    pub axial: f64,
    /// `(<g|d_+|i><e|d_-|i> + <g|d_-|i><e|d_+|i>)/2`, multiplies `Gzz - Gyy`.
    pub opposite: f64,
    /// `(<g|d_+|i><e|d_+|i> + <g|d_-|i><e|d_-|i>)/2`, multiplies `Gzz + Gyy`.
    pub same: f64,
}

impl TraceWeights {
    pub fn for_states(
        g: &HyperfineState,
        e: &HyperfineState,
        i: &HyperfineState,
        line: &TransitionLine,
        nuclear_spin: HalfInt,
    ) -> Result<Self, AtomicError> {
        let d = |s: &HyperfineState, q| hyperfine_dipole(s, i, q, line, nuclear_spin);
        let (g0, gp, gm) = (d(g, 0)?, d(g, 1)?, d(g, -1)?);
        let (e0, ep, em) = (d(e, 0)?, d(e, 1)?, d(e, -1)?);
        Ok(Self {
            axial: g0 * e0,
            opposite: 0.5 * (gp * em + gm * ep),
            same: 0.5 * (gp * ep + gm * em),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.axial == 0.0 && self.opposite == 0.0 && self.same == 0.0
    }

    pub fn contract(&self, green: &GreenDiagonal) -> Complex64 {
        green.gxx * self.axial + (green.gzz - green.gyy) * self.opposite + (green.gzz + green.gyy) * self.same
    }
}

/// `Tr{<g|d|i> . G . <i|d|e>}` in C^2 m, for the quantization axis along x.
pub fn trace_contract(
    g: &HyperfineState,
    e: &HyperfineState,
    i: &HyperfineState,
    green: &GreenDiagonal,
    line: &TransitionLine,
    nuclear_spin: HalfInt,
) -> Result<Complex64, AtomicError> {
    Ok(TraceWeights::for_states(g, e, i, line, nuclear_spin)?.contract(green))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_nonpositive_inputs() {
        assert!(matches!(green_real(0.0, 1e15), Err(GreenError::NonPositiveDistance(_))));
        assert!(matches!(
            green_real(1e-7, -1.0),
            Err(GreenError::NonPositiveFrequency(_))
        ));
        assert!(matches!(
            green_imag(-1e-7, 1e15),
            Err(GreenError::NonPositiveDistance(_))
        ));
        assert!(matches!(
            green_imag(1e-7, 0.0),
            Err(GreenError::NonPositiveFrequency(_))
        ));
    }

    #[test]
    fn near_field_ratio_tends_to_two() {
        let z = 1e-9;
        let omega = 1e-6 * SPEED_OF_LIGHT / z;
        let g = green_real(z, omega).unwrap();
        assert_relative_eq!((g.gzz / g.gxx).re, 2.0, max_relative = 1e-10);
        let k = omega / SPEED_OF_LIGHT;
        assert_relative_eq!(g.gxx.re, -1.0 / (32.0 * PI * k * k * z.powi(3)), max_relative = 1e-10);
    }

    #[test]
    fn series_matches_closed_form_at_threshold() {
        let z = 50e-9;
        let k = NEAR_FIELD_SERIES_THRESHOLD / z;
        let (below_t, below_n) = real_axis_brackets(k * z * (1.0 - 1e-12));
        let y = Complex64::new(0.0, 2.0 * k * z);
        let e = y.exp();
        let (exact_t, exact_n) = (e * (1.0 - y + y * y), e * (y - 1.0));
        assert!((below_t - exact_t).norm() < 1e-12);
        assert!((below_n - exact_n).norm() < 1e-12);
    }

    #[test]
    fn transverse_components_equal() {
        for &(z, w) in &[(40e-9, 2.4e15), (1e-6, 1e14), (3e-7, 9e15)] {
            let g = green_real(z, w).unwrap();
            assert_eq!(g.gxx, g.gyy);
            let g = green_imag(z, w).unwrap();
            assert_eq!(g.gxx, g.gyy);
            assert_eq!(g.gzz.im, 0.0);
        }
    }
}
