//! Casimir-Polder induced Rabi oscillations between degenerate Zeeman
//! sublevels of an atom held near a perfectly reflecting plane.
//!
//! The off-diagonal surface coupling between `|F=1, mF=-1>` and
//! `|F=1, mF=+1>` drives population exchange at the Rabi frequency `Ω_R`.
//! The crate computes the hyperfine dipole matrix elements, the mirror
//! Green tensor, the level shifts and couplings, and the resulting
//! two-state evolution.
//!
//! ```
//! use cprabi::{rubidium87, nonadditive_leading, ShiftSettings, PLANCK};
//!
//! let rb = rubidium87();
//! let shift = nonadditive_leading(&rb, 40e-9, &ShiftSettings::default()).unwrap();
//! let rabi_hz = 2.0 * shift.energy.abs() / PLANCK;
//! assert!(rabi_hz > 0.1 && rabi_hz < 10.0);
//! ```

pub mod angular;
pub mod atomic;
pub mod constants;
pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod green;
pub mod halfint;
pub mod quadrature;

pub use angular::{clebsch_gordan, wigner3j, wigner6j};
pub use atomic::{
    hyperfine_dipole, load_species, rubidium87, selection_rule_sum, HyperfineState, LevelLabel, SpeciesData,
    TransitionLine,
};
pub use constants::{HBAR, PLANCK, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
pub use coupling::{
    nonadditive_leading, offresonant_shift, pair_frequency, rabi_params, resonant_shift, ComplexRate, Normalization,
    RabiParams, ShiftEstimate, ShiftSet, ShiftSettings,
};
pub use dynamics::{angular_momentum_x, evolve, feasibility_window, populations, EvolutionOperator, Feasibility};
pub use error::{AngularError, AtomicError, CouplingError, DynamicsError, GreenError, QuadratureError};
pub use green::{green_imag, green_real, trace_contract, GreenBackend, GreenDiagonal, PerfectMirror};
pub use halfint::HalfInt;
pub use quadrature::{integrate_semiinfinite, QuadratureOptions, QuadratureResult};
