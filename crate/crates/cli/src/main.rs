use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use cprabi::{Normalization, QuadratureOptions, ShiftSettings};
use cprabi_cli::{load_species_file, report_point, run_sweep, CliError, Spacing, SweepConfig, TimeGrid};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormalizationArg {
    Calibrated,
    Literal,
}

/// Casimir-Polder induced Rabi oscillations between the |F=1, mF=-1> and
/// |F=1, mF=+1> ground sublevels of an atom near a perfect mirror.
///
/// Without --report, writes a CSV sweep over the atom-surface distance.
/// Distances and skin depths are in metres.
#[derive(Debug, Parser)]
#[command(name = "cprabi", version)]
struct Args {
    /// Smallest distance of the sweep, m.
    #[arg(long, default_value_t = 40e-9)]
    z_min: f64,
    /// Largest distance of the sweep, m.
    #[arg(long, default_value_t = 1e-6)]
    z_max: f64,
    /// Number of sweep points, endpoints included.
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Logarithmic instead of linear spacing.
    #[arg(long)]
    log: bool,
    /// Species JSON file; bundled 87Rb data if omitted.
    #[arg(long)]
    species: Option<PathBuf>,
    /// Skin depth of the mirror, m; adds the dissipation estimate.
    #[arg(long)]
    xi: Option<f64>,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a report at this distance (m) instead of sweeping.
    #[arg(long, value_name = "Z")]
    report: Option<f64>,
    /// Relative tolerance of the frequency integrals.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Report: number of sampling times.
    #[arg(long, default_value_t = 9)]
    samples: usize,
    /// Report: sampled span in Rabi periods.
    #[arg(long, default_value_t = 1.0)]
    periods: f64,
    /// Overall normalization of the surface coupling.
    #[arg(long, value_enum, default_value_t = NormalizationArg::Calibrated)]
    normalization: NormalizationArg,
}

fn settings(args: &Args) -> Result<ShiftSettings, CliError> {
    if !(args.tolerance > 0.0 && args.tolerance < 1.0) {
        return Err(CliError::Config(format!(
            "--tolerance must lie in (0, 1), got {}",
            args.tolerance
        )));
    }
    Ok(ShiftSettings {
        quadrature: QuadratureOptions::with_rel_tol(args.tolerance),
        normalization: match args.normalization {
            NormalizationArg::Calibrated => Normalization::Calibrated,
            NormalizationArg::Literal => Normalization::Literal,
        },
    })
}

fn write_output(path: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Config(e.to_string()))
            .with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: Args) -> anyhow::Result<()> {
    let settings = settings(&args)?;
    let text = match args.report {
        Some(z) => {
            let species = load_species_file(args.species.as_deref())?;
            let grid = TimeGrid::Periods {
                samples: args.samples,
                periods: args.periods,
            };
            report_point(&species, z, args.xi, &grid, &settings)?
        }
        None => {
            let cfg = SweepConfig {
                z_min: args.z_min,
                z_max: args.z_max,
                points: args.points,
                spacing: if args.log { Spacing::Log } else { Spacing::Linear },
                species_path: args.species.clone(),
                xi: args.xi,
                output_path: args.out.clone(),
                settings,
            };
            run_sweep(&cfg)?
        }
    };
    write_output(args.out.as_ref(), &text)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            ExitCode::from(code)
        }
    }
}
