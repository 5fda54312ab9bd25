//! Casimir-Polder couplings between two lower sublevels `a`, `b` through the
//! hyperfine Zeeman sublevels of every upper manifold.
//!
//! * [`offresonant_shift`]: imaginary-frequency integral of the Green tensor
//!   weighted by `u² ω_i / (u² + ω_i²)`, with `ω_i` the intermediate-state
//!   frequency measured from the pair energy. Covers the additive (`a == b`)
//!   and the non-additive (`a != b`) shifts.
//! * [`resonant_shift`]: real-axis contribution of intermediates lying below
//!   the pair energy.
//! * [`nonadditive_leading`]: closed-form first order in the hyperfine
//!   intervals for the ⁸⁷Rb `|F=1, mF=∓1>` pair.
//! * [`rabi_params`]: complex Rabi parameters from the four shifts.
//!
//! Energies are SI joules. See [`Normalization`] for the overall factor.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::atomic::{HyperfineState, SpeciesData};
use crate::constants::{HBAR, PLANCK, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::error::{AtomicError, CouplingError, GreenError};
use crate::green::{GreenBackend, PerfectMirror, TraceWeights};
use crate::halfint::HalfInt;
use crate::quadrature::{integrate_semiinfinite, QuadratureOptions};

/// Overall normalization of the dipole-Green-dipole coupling.
///
/// `Literal` contracts the Green tensor with the dipole matrix elements
/// exactly once. `Calibrated` doubles it, which is the normalization under
/// which the full shifts agree with the closed form in
/// [`nonadditive_leading`]. Ratios between shifts do not depend on the choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    #[default]
    Calibrated,
    Literal,
}

impl Normalization {
    pub fn factor(self) -> f64 {
        match self {
            Normalization::Calibrated => 2.0,
            Normalization::Literal => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ShiftSettings {
    pub quadrature: QuadratureOptions,
    pub normalization: Normalization,
}

impl ShiftSettings {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            quadrature: QuadratureOptions::with_rel_tol(rel_tol),
            ..Self::default()
        }
    }
}

/// An energy shift with its numerical error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftEstimate {
    /// J
    pub energy: f64,
    /// J
    pub abs_error: f64,
    pub evaluations: usize,
}

impl ShiftEstimate {
    /// Shift expressed as a frequency `δE/h`, Hz.
    pub fn hz(&self) -> f64 {
        self.energy / PLANCK
    }
}

/// A shift-plus-damping pair representing `δE - iħΓ/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexRate {
    /// J
    pub shift: f64,
    /// 1/s
    pub damping: f64,
}

impl ComplexRate {
    pub fn new(shift: f64, damping: f64) -> Self {
        Self { shift, damping }
    }

    pub fn conservative(shift: f64) -> Self {
        Self { shift, damping: 0.0 }
    }
}

/// The four couplings of the two-state problem.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ShiftSet {
    pub gg: ComplexRate,
    pub ee: ComplexRate,
    pub ge: ComplexRate,
    pub eg: ComplexRate,
}

impl ShiftSet {
    /// Diagonal dampings are decay rates and must be non-negative.
    pub fn new(gg: ComplexRate, ee: ComplexRate, ge: ComplexRate, eg: ComplexRate) -> Result<Self, CouplingError> {
        for (name, rate) in [("gg", gg), ("ee", ee)] {
            if rate.damping.is_nan() || rate.damping < 0.0 {
                return Err(CouplingError::NegativeDamping(format!("Γ_{name} = {}", rate.damping)));
            }
        }
        Ok(Self { gg, ee, ge, eg })
    }
}

/// Complex frequencies of the damped two-state problem, rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiParams {
    pub omega_g_tilde: Complex64,
    pub omega_e_tilde: Complex64,
    /// `ω̃_e - ω̃_g`
    pub delta_tilde: Complex64,
    /// `2δE_ge/ħ - iΓ_ge`
    pub omega: Complex64,
    /// `2δE_eg/ħ - iΓ_eg`; not the complex conjugate of `omega` once damped.
    pub omega_star: Complex64,
    /// `sqrt(Ω Ω* + Δ̃²)`
    pub omega_r: Complex64,
}

impl RabiParams {
    /// `(ω̃_g + ω̃_e) / 2`
    pub fn mean_frequency(&self) -> Complex64 {
        0.5 * (self.omega_g_tilde + self.omega_e_tilde)
    }

    /// `|Ω|² ≡ Ω Ω*`
    pub fn omega_squared(&self) -> Complex64 {
        self.omega * self.omega_star
    }
}

/// Angular frequency of the pair energy `(E_a + E_b)/2`, measured from the
/// lower reference level.
pub fn pair_frequency(a: &HyperfineState, b: &HyperfineState) -> f64 {
    0.5 * (a.energy_offset + b.energy_offset)
}

/// One intermediate sublevel: its frequency above the lower reference level
/// and the dipole products it contributes.
#[derive(Clone, Copy, Debug)]
struct Intermediate {
    frequency: f64,
    weights: TraceWeights,
}

fn check_lower(state: &HyperfineState, species: &SpeciesData) -> Result<(), AtomicError> {
    if state.level() != species.lower {
        return Err(AtomicError::ManifoldMismatch(format!(
            "{state} is not a sublevel of the lower level {}",
            species.lower
        )));
    }
    Ok(())
}

/// Enumerates all hyperfine Zeeman sublevels of every line; selection rules
/// drop the ones that do not couple to both `a` and `b`.
///
/// Degenerate intermediates are merged. A merged weight that cancels down to
/// rounding level is the angular sum rule at work and is set to exactly zero.
fn intermediates(
    a: &HyperfineState,
    b: &HyperfineState,
    species: &SpeciesData,
) -> Result<Vec<Intermediate>, AtomicError> {
    check_lower(a, species)?;
    check_lower(b, species)?;
    // (frequency, summed weights, summed magnitudes)
    let mut merged: Vec<(f64, TraceWeights, TraceWeights)> = Vec::new();
    for line in &species.lines {
        for i in species.upper_states(line) {
            let w = TraceWeights::for_states(a, b, &i, line, species.nuclear_spin)?;
            if w.is_zero() {
                continue;
            }
            let frequency = line.base_frequency + i.energy_offset;
            let magnitude = TraceWeights {
                axial: w.axial.abs(),
                opposite: w.opposite.abs(),
                same: w.same.abs(),
            };
            match merged.iter_mut().find(|(f, _, _)| *f == frequency) {
                Some((_, sum, mag)) => {
                    sum.axial += w.axial;
                    sum.opposite += w.opposite;
                    sum.same += w.same;
                    mag.axial += magnitude.axial;
                    mag.opposite += magnitude.opposite;
                    mag.same += magnitude.same;
                }
                None => merged.push((frequency, w, magnitude)),
            }
        }
    }
    let snap = |x: f64, scale: f64| if x.abs() <= 64.0 * f64::EPSILON * scale { 0.0 } else { x };
    Ok(merged
        .into_iter()
        .map(|(frequency, w, mag)| Intermediate {
            frequency,
            weights: TraceWeights {
                axial: snap(w.axial, mag.axial),
                opposite: snap(w.opposite, mag.opposite),
                same: snap(w.same, mag.same),
            },
        })
        .filter(|s| !s.weights.is_zero())
        .collect())
}

fn check_distance(z: f64) -> Result<(), CouplingError> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(GreenError::NonPositiveDistance(z).into());
    }
    Ok(())
}

/// Off-resonant shift with the perfect-mirror Green tensor.
pub fn offresonant_shift(
    a: &HyperfineState,
    b: &HyperfineState,
    species: &SpeciesData,
    z: f64,
    pair_freq: f64,
    settings: &ShiftSettings,
) -> Result<ShiftEstimate, CouplingError> {
    offresonant_shift_with(&PerfectMirror, a, b, species, z, pair_freq, settings)
}

/// `δE_ab = -(1/πε₀c²) Σ_i ∫_0^∞ du u² ω_i/(u² + ω_i²) Tr{<a|d|i> G(Z, iu) <i|d|b>}`,
/// times the normalization factor, with `ω_i` measured from `pair_freq`.
///
/// The integral runs over `x = uZ/c` so that the integrand decays like `e^{-2x}`.
pub fn offresonant_shift_with<B: GreenBackend>(
    backend: &B,
    a: &HyperfineState,
    b: &HyperfineState,
    species: &SpeciesData,
    z: f64,
    pair_freq: f64,
    settings: &ShiftSettings,
) -> Result<ShiftEstimate, CouplingError> {
    check_distance(z)?;
    let states = intermediates(a, b, species)?;
    if states.is_empty() {
        return Ok(ShiftEstimate {
            energy: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }

    let backend_error: Cell<Option<GreenError>> = Cell::new(None);
    let integrand = |x: f64| {
        let u = x * SPEED_OF_LIGHT / z;
        let green = match backend.imaginary_axis(z, u) {
            Ok(g) => g,
            Err(e) => {
                backend_error.set(Some(e));
                return f64::NAN;
            }
        };
        let u2 = u * u;
        states
            .iter()
            .map(|s| {
                let w = s.frequency - pair_freq;
                u2 * w / (u2 + w * w) * s.weights.contract(&green).re
            })
            .sum::<f64>()
    };

    let result = integrate_semiinfinite(integrand, 2.0, &settings.quadrature);
    if let Some(e) = backend_error.take() {
        return Err(e.into());
    }
    let result = result?;
    let prefactor = -settings.normalization.factor() / (PI * VACUUM_PERMITTIVITY * SPEED_OF_LIGHT * SPEED_OF_LIGHT)
        * (SPEED_OF_LIGHT / z);
    Ok(ShiftEstimate {
        energy: prefactor * result.value,
        abs_error: prefactor.abs() * result.abs_error_estimate,
        evaluations: result.evaluations,
    })
}

/// Resonant shift with the perfect-mirror Green tensor.
pub fn resonant_shift(
    a: &HyperfineState,
    b: &HyperfineState,
    species: &SpeciesData,
    z: f64,
    pair_freq: f64,
    settings: &ShiftSettings,
) -> Result<f64, CouplingError> {
    resonant_shift_with(&PerfectMirror, a, b, species, z, pair_freq, settings)
}

/// `(1/ε₀c²) Σ_i Θ(ω_Ei) ω_Ei² Tr{<a|d|i> Re G(Z, ω_Ei) <i|d|b>}` times the
/// normalization factor, where `ω_Ei = pair_freq - ω_i` and `Θ(0) = 0`.
pub fn resonant_shift_with<B: GreenBackend>(
    backend: &B,
    a: &HyperfineState,
    b: &HyperfineState,
    species: &SpeciesData,
    z: f64,
    pair_freq: f64,
    settings: &ShiftSettings,
) -> Result<f64, CouplingError> {
    check_distance(z)?;
    let mut total = 0.0;
    for s in intermediates(a, b, species)? {
        let w = pair_freq - s.frequency;
        if w > 0.0 {
            let green = backend.real_axis(z, w)?.real_part();
            total += w * w * s.weights.contract(&green).re;
        }
    }
    Ok(settings.normalization.factor() / (VACUUM_PERMITTIVITY * SPEED_OF_LIGHT * SPEED_OF_LIGHT) * total)
}

/// `f(u) = e^{-2u} (1 + 2u - 4u²)`
pub fn retardation_profile(u: f64) -> f64 {
    (-2.0 * u).exp() * (1.0 + 2.0 * u - 4.0 * u * u)
}

/// Leading-order non-additive shift `δE_eg` of the ⁸⁷Rb `|F=1, mF=∓1>` pair:
///
/// ```text
/// Σ_{j,F} -|<S||d||P_j>|² (ω_j^{F=1})² / (2^{(j-1/2)(F-1)} 384 π² c³ ε₀) δω_j^F
///         × ∫_0^∞ du [κ_j^{-2} f(u)/(u² + κ_j²) - 2 f(u)/(u² + κ_j²)²],   κ_j = ω_j^{F=1} Z/c
/// ```
///
/// The closed-form angular weights hold for a J = 1/2 lower level with
/// nuclear spin 3/2 and upper levels J' = 1/2, 3/2; only F' = 0, 1, 2 couple
/// to the F = 1 pair. The expression corresponds to
/// [`Normalization::Calibrated`] and is rescaled for other normalizations.
pub fn nonadditive_leading(
    species: &SpeciesData,
    z: f64,
    settings: &ShiftSettings,
) -> Result<ShiftEstimate, CouplingError> {
    check_distance(z)?;
    if species.lower.j != HalfInt::HALF || species.nuclear_spin != HalfInt::from_twice(3) {
        return Err(CouplingError::UnsupportedSpecies(format!(
            "lower J = {}, I = {}",
            species.lower.j, species.nuclear_spin
        )));
    }
    let scale = settings.normalization.factor() / Normalization::Calibrated.factor();
    let c = SPEED_OF_LIGHT;
    let mut energy = 0.0;
    let mut abs_error = 0.0;
    let mut evaluations = 0;

    for line in &species.lines {
        let j = line.upper.j;
        let j_excess = match j.twice() {
            1 => 0,
            3 => 1,
            _ => {
                return Err(CouplingError::UnsupportedSpecies(format!("upper J = {j}")));
            }
        };
        let omega1 = line.base_frequency;
        let kappa = omega1 * z / c;
        if kappa.is_nan() || kappa <= 0.0 {
            return Err(CouplingError::NonPositiveKappa(kappa));
        }
        let k2 = kappa * kappa;
        let integral = integrate_semiinfinite(
            |u| {
                let f = retardation_profile(u);
                let d = u * u + k2;
                f / (k2 * d) - 2.0 * f / (d * d)
            },
            2.0,
            &settings.quadrature,
        )?;
        evaluations += integral.evaluations;

        let base = -line.reduced_dipole.powi(2) * omega1 * omega1 / (384.0 * PI * PI * c * c * c * VACUUM_PERMITTIVITY);
        for (&f, &interval) in &line.hyperfine_intervals {
            let Some(f_int) = f.as_integer() else { continue };
            if !(0..=2).contains(&f_int) {
                continue;
            }
            let exponent = j_excess * (f_int - 1);
            let coefficient = scale * base / 2f64.powi(exponent) * interval;
            energy += coefficient * integral.value;
            abs_error += coefficient.abs() * integral.abs_error_estimate;
        }
    }

    Ok(ShiftEstimate {
        energy,
        abs_error,
        evaluations,
    })
}

/// Assembles the complex Rabi parameters.
///
/// `Ω_R` is the square root continued from the dissipationless limit: the
/// dampings are ramped from zero and the root followed without jumping
/// sheets. Without damping it is the non-negative real root whenever
/// `ΩΩ* + Δ̃² ≥ 0`.
pub fn rabi_params(shifts: &ShiftSet, omega_g: f64, omega_e: f64) -> RabiParams {
    let assemble = |s: f64| {
        let i = Complex64::i();
        let og = omega_g + shifts.gg.shift / HBAR - i * (s * shifts.gg.damping / 2.0);
        let oe = omega_e + shifts.ee.shift / HBAR - i * (s * shifts.ee.damping / 2.0);
        let om = Complex64::new(2.0 * shifts.ge.shift / HBAR, -s * shifts.ge.damping);
        let om_star = Complex64::new(2.0 * shifts.eg.shift / HBAR, -s * shifts.eg.damping);
        (og, oe, om, om_star)
    };
    let radicand = |s: f64| {
        let (og, oe, om, om_star) = assemble(s);
        om * om_star + (oe - og) * (oe - og)
    };

    const RAMP_STEPS: usize = 64;
    let mut root = radicand(0.0).sqrt();
    let damped = [shifts.gg, shifts.ee, shifts.ge, shifts.eg]
        .iter()
        .any(|r| r.damping != 0.0);
    if damped {
        for step in 1..=RAMP_STEPS {
            let next = radicand(step as f64 / RAMP_STEPS as f64).sqrt();
            root = if (next - root).norm() <= (next + root).norm() {
                next
            } else {
                -next
            };
        }
    }

    let (og, oe, om, om_star) = assemble(1.0);
    RabiParams {
        omega_g_tilde: og,
        omega_e_tilde: oe,
        delta_tilde: oe - og,
        omega: om,
        omega_star: om_star,
        omega_r: root,
    }
}
