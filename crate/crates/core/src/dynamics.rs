//! Two-state evolution under the complex Rabi parameters, and the
//! surface-loss feasibility estimate.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coupling::RabiParams;
use crate::error::DynamicsError;

/// Below this `|Ω_R T|` the ratio `sin(Ω_R T/2)/Ω_R` is taken from its series.
pub const SMALL_ROTATION: f64 = 1e-6;

/// Relative tolerance used by [`angular_momentum_x`] for its preconditions.
pub const PRECONDITION_TOLERANCE: f64 = 1e-6;

/// Allowed deviation of `|a_g|² + |a_e|²` from 1 in [`populations`].
pub const NORM_TOLERANCE: f64 = 1e-9;

/// `U(T) = exp(-iHT)` for `H = [[ω̃_g, Ω/2], [Ω*/2, ω̃_e]]` in the `{|g>, |e>}` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionOperator {
    pub ugg: Complex64,
    pub uge: Complex64,
    pub ueg: Complex64,
    pub uee: Complex64,
    /// s
    pub duration: f64,
}

impl EvolutionOperator {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            ugg: one,
            uge: zero,
            ueg: zero,
            uee: one,
            duration: 0.0,
        }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.ugg, self.uge], [self.ueg, self.uee]]
    }

    pub fn determinant(&self) -> Complex64 {
        self.ugg * self.uee - self.uge * self.ueg
    }

    /// `(a_g, a_e) -> U (a_g, a_e)`
    pub fn apply(&self, a_g: Complex64, a_e: Complex64) -> (Complex64, Complex64) {
        (self.ugg * a_g + self.uge * a_e, self.ueg * a_g + self.uee * a_e)
    }

    /// `self · earlier`, i.e. `earlier` acts first.
    pub fn then_after(&self, earlier: &Self) -> Self {
        Self {
            ugg: self.ugg * earlier.ugg + self.uge * earlier.ueg,
            uge: self.ugg * earlier.uge + self.uge * earlier.uee,
            ueg: self.ueg * earlier.ugg + self.uee * earlier.ueg,
            uee: self.ueg * earlier.uge + self.uee * earlier.uee,
            duration: self.duration + earlier.duration,
        }
    }
}

/// Closed-form evolution operator.
///
/// With `ω̄ = (ω̃_g + ω̃_e)/2`, `Δ̃ = ω̃_e - ω̃_g`, `θ = Ω_R T/2`:
///
/// ```text
/// U_gg = e^{-iω̄T} [cos θ + i (Δ̃/Ω_R) sin θ]
/// U_ee = e^{-iω̄T} [cos θ - i (Δ̃/Ω_R) sin θ]
/// U_ge = -i e^{-iω̄T} (Ω /Ω_R) sin θ
/// U_eg = -i e^{-iω̄T} (Ω*/Ω_R) sin θ
/// ```
///
/// Both `cos θ` and `sin θ / Ω_R` are even in `Ω_R`, so the result does not
/// depend on the branch of the square root.
pub fn evolve(params: &RabiParams, t: f64) -> Result<EvolutionOperator, DynamicsError> {
    if !t.is_finite() || t < 0.0 {
        return Err(DynamicsError::NegativeTime(t));
    }
    let i = Complex64::i();
    let phase = (-i * params.mean_frequency() * t).exp();
    let theta = params.omega_r * (0.5 * t);
    let cos = theta.cos();
    let sin_over = if (params.omega_r * t).norm() < SMALL_ROTATION {
        (1.0 - theta * theta / 6.0) * (0.5 * t)
    } else {
        theta.sin() / params.omega_r
    };
    let detuned = i * params.delta_tilde * sin_over;
    Ok(EvolutionOperator {
        ugg: phase * (cos + detuned),
        uee: phase * (cos - detuned),
        uge: -i * phase * params.omega * sin_over,
        ueg: -i * phase * params.omega_star * sin_over,
        duration: t,
    })
}

/// `(|a_g(T)|², |a_e(T)|²)` for a normalized initial state.
pub fn populations(op: &EvolutionOperator, a_g0: Complex64, a_e0: Complex64) -> Result<(f64, f64), DynamicsError> {
    let norm = a_g0.norm_sqr() + a_e0.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(DynamicsError::Unnormalized(norm));
    }
    let (g, e) = op.apply(a_g0, a_e0);
    Ok((g.norm_sqr(), e.norm_sqr()))
}

/// `<F_x>(t) = -cos(Ω_R t)` for the pair prepared in `|F=1, mF=-1>`.
///
/// Valid only without damping, on resonance (`Δ̃ = 0`) and for `Ω = Ω*`.
pub fn angular_momentum_x(params: &RabiParams, t: f64) -> Result<f64, DynamicsError> {
    if !t.is_finite() || t < 0.0 {
        return Err(DynamicsError::NegativeTime(t));
    }
    let scale = params.omega_r.norm().max(f64::MIN_POSITIVE);
    let tol = PRECONDITION_TOLERANCE * scale;
    let damped = [
        params.omega_g_tilde,
        params.omega_e_tilde,
        params.omega,
        params.omega_star,
    ]
    .iter()
    .any(|w| w.im != 0.0);
    if damped {
        return Err(DynamicsError::Precondition("damping must vanish".into()));
    }
    if params.delta_tilde.norm() > tol {
        return Err(DynamicsError::Precondition(format!(
            "detuning {} rad/s is not negligible against Ω_R = {scale} rad/s",
            params.delta_tilde.norm()
        )));
    }
    if (params.omega - params.omega_star).norm() > tol {
        return Err(DynamicsError::Precondition("Ω and Ω* differ".into()));
    }
    Ok(-(params.omega_r.re * t).cos())
}

/// Loss-rate anchors `(Z, Γ ξ²)`: the product of loss rate and squared skin
/// depth at the two ends of the distance range, m and s⁻¹ m².
pub const LOSS_ANCHORS: [(f64, f64); 2] = [
    (40e-9, 20.0 * PI * 40e-9 * 40e-9),
    (270e-9, 0.065 * PI * 270e-9 * 270e-9),
];

/// Loss-rate estimate against the Rabi frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feasibility {
    /// Estimated loss rate Γ, 1/s.
    pub gamma: f64,
    /// `Γ / Ω_R`
    pub ratio: f64,
    /// `Γ < Ω_R`
    pub feasible: bool,
}

/// `Γ(Z) ≈ A(Z)/ξ²`, with `A` interpolated log-log between [`LOSS_ANCHORS`].
///
/// Distances outside the anchored range are refused rather than extrapolated.
pub fn loss_rate(xi: f64, z: f64) -> Result<f64, DynamicsError> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(DynamicsError::NonPositiveSkinDepth(xi));
    }
    let [(z0, a0), (z1, a1)] = LOSS_ANCHORS;
    let slack = 1e-9;
    if !(z >= z0 * (1.0 - slack) && z <= z1 * (1.0 + slack)) {
        return Err(DynamicsError::Unanchored { z });
    }
    let s = ((z.ln() - z0.ln()) / (z1.ln() - z0.ln())).clamp(0.0, 1.0);
    let a = (a0.ln() + s * (a1.ln() - a0.ln())).exp();
    Ok(a / (xi * xi))
}

/// Compares the estimated loss rate with `omega_r` (rad/s).
pub fn feasibility_window(xi: f64, z: f64, omega_r: f64) -> Result<Feasibility, DynamicsError> {
    let gamma = loss_rate(xi, z)?;
    let ratio = gamma / omega_r.abs();
    Ok(Feasibility {
        gamma,
        ratio,
        feasible: gamma < omega_r.abs(),
    })
}
