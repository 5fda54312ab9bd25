//! Human-readable report at a single distance.

use std::f64::consts::PI;
use std::fmt::Write as _;

use cprabi::{angular_momentum_x, evolve, populations, ShiftSettings, SpeciesData, PLANCK};
use num_complex::Complex64;

use crate::sweep::{compute_point, format_number, PointResult};
use crate::CliError;

/// Sampling times for the population table.
#[derive(Clone, Debug, PartialEq)]
pub enum TimeGrid {
    /// `samples` equally spaced times over `periods` Rabi periods `2π/Ω_R`,
    /// both ends included.
    Periods { samples: usize, periods: f64 },
    /// Explicit times, s.
    Explicit(Vec<f64>),
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid::Periods {
            samples: 9,
            periods: 1.0,
        }
    }
}

impl TimeGrid {
    fn times(&self, omega_r: f64, z: f64) -> Result<Vec<f64>, CliError> {
        match self {
            TimeGrid::Explicit(ts) => {
                if let Some(&t) = ts.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
                    return Err(CliError::Config(format!(
                        "sampling times must be non-negative, got {t}"
                    )));
                }
                Ok(ts.clone())
            }
            &TimeGrid::Periods { samples, periods } => {
                if samples < 2 || !(periods > 0.0 && periods.is_finite()) {
                    return Err(CliError::Config(format!(
                        "time grid needs at least 2 samples over a positive number of periods, got {samples} over {periods}"
                    )));
                }
                if !(omega_r > 0.0 && omega_r.is_finite()) {
                    return Err(CliError::numerical(
                        z,
                        crate::NumericalError::Other(format!("Rabi frequency {omega_r} rad/s has no period")),
                    ));
                }
                let span = periods * 2.0 * PI / omega_r;
                let last = (samples - 1) as f64;
                Ok((0..samples).map(|k| span * k as f64 / last).collect())
            }
        }
    }
}

fn complex(c: Complex64) -> String {
    format!(
        "{} {} {}i",
        format_number(c.re),
        if c.im < 0.0 { '-' } else { '+' },
        format_number(c.im.abs())
    )
}

/// Shifts, Rabi parameters, feasibility and the population table at `z`.
pub fn report_point(
    species: &SpeciesData,
    z: f64,
    xi: Option<f64>,
    grid: &TimeGrid,
    settings: &ShiftSettings,
) -> Result<String, CliError> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(CliError::Config(format!("--report distance must be positive, got {z}")));
    }
    if let Some(xi) = xi {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(CliError::Config(format!("--xi must be positive, got {xi}")));
        }
    }
    let point = compute_point(species, z, xi, settings)?;
    let (g, e) = species.default_pair()?;
    let times = grid.times(point.params.omega_r.re, z)?;
    render(species, &point, &g.to_string(), &e.to_string(), &times)
}

fn render(species: &SpeciesData, p: &PointResult, g: &str, e: &str, times: &[f64]) -> Result<String, CliError> {
    let mut out = String::new();
    let w = &mut out;
    let line = |w: &mut String, key: &str, value: String| {
        writeln!(w, "{key:<24}{value}").expect("writing to a String");
    };

    line(w, "species", species.name.clone().unwrap_or_else(|| "unnamed".into()));
    line(w, "|g>", g.to_string());
    line(w, "|e>", e.to_string());
    line(w, "Z_m", format_number(p.z));
    line(
        w,
        "omega_R_over_2pi_Hz",
        p.rabi_leading_hz.map(format_number).unwrap_or_else(|| "n/a".into()),
    );
    line(w, "omega_R_full_Hz", format_number(p.rabi_full_hz));
    line(w, "delta_E_gg_over_h_Hz", format_number(p.gg_hz));
    line(w, "delta_E_ee_over_h_Hz", format_number(p.shifts.ee.shift / PLANCK));
    line(w, "delta_E_ge_over_h_Hz", format_number(p.shifts.ge.shift / PLANCK));
    line(w, "delta_E_eg_over_h_Hz", format_number(p.shifts.eg.shift / PLANCK));
    writeln!(w, "\nRabi parameters, rad/s").expect("writing to a String");
    line(w, "omega_g_tilde", complex(p.params.omega_g_tilde));
    line(w, "omega_e_tilde", complex(p.params.omega_e_tilde));
    line(w, "delta_tilde", complex(p.params.delta_tilde));
    line(w, "Omega", complex(p.params.omega));
    line(w, "Omega_star", complex(p.params.omega_star));
    line(w, "Omega_R", complex(p.params.omega_r));

    writeln!(w, "\nDissipation (estimate from anchored loss rates)").expect("writing to a String");
    match &p.feasibility {
        None => line(w, "feasibility", "not requested (pass --xi)".into()),
        Some(Err(err)) => line(w, "feasibility", format!("unanchored: {err}")),
        Some(Ok(f)) => {
            line(w, "gamma_estimate_Hz", format_number(f.gamma));
            line(w, "gamma_over_Omega_R", format_number(f.ratio));
            line(w, "feasible", f.feasible.to_string());
        }
    }

    writeln!(w, "\nEvolution from |g>\nT_s,P_g,P_e,L_x_hbar").expect("writing to a String");
    let g0 = Complex64::new(1.0, 0.0);
    let e0 = Complex64::new(0.0, 0.0);
    for &t in times {
        let op = evolve(&p.params, t).map_err(|err| CliError::numerical(p.z, err))?;
        let (pg, pe) = populations(&op, g0, e0).map_err(|err| CliError::numerical(p.z, err))?;
        let lx = angular_momentum_x(&p.params, t)
            .map(format_number)
            .unwrap_or_else(|_| "n/a".into());
        writeln!(
            w,
            "{},{},{},{}",
            format_number(t),
            format_number(pg),
            format_number(pe),
            lx
        )
        .expect("writing to a String");
    }
    Ok(out)
}
