//! CSV sweeps over the atom-surface distance.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cprabi::{
    feasibility_window, load_species, nonadditive_leading, offresonant_shift, pair_frequency, rabi_params,
    resonant_shift, rubidium87, ComplexRate, CouplingError, DynamicsError, Feasibility, HyperfineState, RabiParams,
    ShiftSet, ShiftSettings, SpeciesData, PLANCK,
};
use rayon::prelude::*;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// m
    pub z_min: f64,
    /// m
    pub z_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    /// Bundled ⁸⁷Rb data when absent.
    pub species_path: Option<PathBuf>,
    /// Skin depth, m.
    pub xi: Option<f64>,
    /// Standard output when absent.
    pub output_path: Option<PathBuf>,
    pub settings: ShiftSettings,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            z_min: 40e-9,
            z_max: 1e-6,
            points: 50,
            spacing: Spacing::Linear,
            species_path: None,
            xi: None,
            output_path: None,
            settings: ShiftSettings::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.z_min > 0.0 && self.z_min.is_finite()) {
            return Err(CliError::Config(format!(
                "--z-min must be positive, got {}",
                self.z_min
            )));
        }
        if !(self.z_max > self.z_min && self.z_max.is_finite()) {
            return Err(CliError::Config(format!(
                "--z-max ({}) must exceed --z-min ({})",
                self.z_max, self.z_min
            )));
        }
        if self.points < 2 {
            return Err(CliError::Config(format!(
                "--points must be at least 2, got {}",
                self.points
            )));
        }
        if let Some(xi) = self.xi {
            if !(xi > 0.0 && xi.is_finite()) {
                return Err(CliError::Config(format!("--xi must be positive, got {xi}")));
            }
        }
        let tol = self.settings.quadrature.rel_tol;
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::Config(format!("--tolerance must lie in (0, 1), got {tol}")));
        }
        Ok(())
    }

    /// Strictly increasing distances, endpoints included exactly.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|k| {
                if k == 0 {
                    return self.z_min;
                }
                if k == n - 1 {
                    return self.z_max;
                }
                let s = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.z_min + s * (self.z_max - self.z_min),
                    Spacing::Log => (self.z_min.ln() + s * (self.z_max.ln() - self.z_min.ln())).exp(),
                }
            })
            .collect()
    }
}

pub fn load_species_file(path: Option<&Path>) -> Result<SpeciesData, CliError> {
    match path {
        None => Ok(rubidium87()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read species file {}: {e}", p.display())))?;
            Ok(load_species(&text)?)
        }
    }
}

/// Everything computed at one distance.
#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    /// m
    pub z: f64,
    /// `2|δE_eg|/h` from the closed-form leading order; `None` for species it
    /// does not cover.
    pub rabi_leading_hz: Option<f64>,
    /// `Ω_R / 2π` from the full shifts, Hz.
    pub rabi_full_hz: f64,
    /// `δE_gg / h`, Hz.
    pub gg_hz: f64,
    pub shifts: ShiftSet,
    pub params: RabiParams,
    /// `None` without a skin depth; `Some(Err)` outside the anchored range.
    pub feasibility: Option<Result<Feasibility, DynamicsError>>,
}

fn pair_shift(
    a: &HyperfineState,
    b: &HyperfineState,
    species: &SpeciesData,
    z: f64,
    settings: &ShiftSettings,
) -> Result<f64, CouplingError> {
    let pair = pair_frequency(a, b);
    let off = offresonant_shift(a, b, species, z, pair, settings)?.energy;
    let res = resonant_shift(a, b, species, z, pair, settings)?;
    Ok(off + res)
}

pub fn compute_point(
    species: &SpeciesData,
    z: f64,
    xi: Option<f64>,
    settings: &ShiftSettings,
) -> Result<PointResult, CliError> {
    let (g, e) = species.default_pair()?;
    let num = |err: CouplingError| CliError::numerical(z, err);
    let shift = |a, b| pair_shift(a, b, species, z, settings).map_err(num);
    let shifts = ShiftSet::new(
        ComplexRate::conservative(shift(&g, &g)?),
        ComplexRate::conservative(shift(&e, &e)?),
        ComplexRate::conservative(shift(&g, &e)?),
        ComplexRate::conservative(shift(&e, &g)?),
    )
    .map_err(num)?;
    let params = rabi_params(&shifts, g.energy_offset, e.energy_offset);

    let rabi_leading_hz = match nonadditive_leading(species, z, settings) {
        Ok(est) => Some(2.0 * est.energy.abs() / PLANCK),
        Err(CouplingError::UnsupportedSpecies(_)) => None,
        Err(err) => return Err(num(err)),
    };
    let rabi_full_hz = params.omega_r.re / (2.0 * std::f64::consts::PI);
    let feasibility = xi.map(|xi| feasibility_window(xi, z, params.omega_r.re));
    if let Some(Err(err)) = &feasibility {
        if !matches!(err, DynamicsError::Unanchored { .. }) {
            return Err(CliError::numerical(z, err.clone()));
        }
    }
    Ok(PointResult {
        z,
        rabi_leading_hz,
        rabi_full_hz,
        gg_hz: shifts.gg.shift / PLANCK,
        shifts,
        params,
        feasibility,
    })
}

/// Scientific notation with 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

pub const BASE_COLUMNS: [&str; 4] = ["Z_m", "omega_R_over_2pi_Hz", "omega_R_full_Hz", "delta_E_gg_over_h_Hz"];
pub const FEASIBILITY_COLUMNS: [&str; 2] = ["gamma_estimate_Hz", "feasible"];

pub fn header(with_xi: bool) -> String {
    let mut cols: Vec<&str> = BASE_COLUMNS.to_vec();
    if with_xi {
        cols.extend(FEASIBILITY_COLUMNS);
    }
    cols.join(",")
}

pub fn csv_row(p: &PointResult) -> String {
    let mut fields = vec![
        format_number(p.z),
        p.rabi_leading_hz.map(format_number).unwrap_or_default(),
        format_number(p.rabi_full_hz),
        format_number(p.gg_hz),
    ];
    match &p.feasibility {
        None => {}
        Some(Ok(f)) => {
            fields.push(format_number(f.gamma));
            fields.push(f.feasible.to_string());
        }
        Some(Err(_)) => {
            fields.push(String::new());
            fields.push("unanchored".into());
        }
    }
    fields.join(",")
}

/// Computes every grid point (in parallel) and renders the CSV document.
pub fn run_sweep(cfg: &SweepConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let species = load_species_file(cfg.species_path.as_deref())?;
    species.default_pair()?;
    let rows: Vec<PointResult> = cfg
        .grid()
        .par_iter()
        .map(|&z| compute_point(&species, z, cfg.xi, &cfg.settings))
        .collect::<Result<_, _>>()?;

    let mut out = String::new();
    writeln!(out, "{}", header(cfg.xi.is_some())).expect("writing to a String");
    for row in &rows {
        writeln!(out, "{}", csv_row(row)).expect("writing to a String");
    }
    Ok(out)
}
