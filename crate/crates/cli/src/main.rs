mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use crate::commands::{ConvertOptions, SampleOptions};
use crate::error::{CliError, CliResult};
use crate::io::{emit, Format};

/// Sampling and reconstruction of spin states on the Riemann sphere.
#[derive(Debug, Parser)]
#[command(name = "riemann-sample", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Random unit-norm spin state (--two-s) or band-limited state (--J).
    #[command(group(ArgGroup::new("spin").required(true).args(["two_s", "j_max"])))]
    Gen {
        #[arg(long = "two-s")]
        two_s: Option<u32>,
        #[arg(long = "J")]
        j_max: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Sample a state at the roots of unity, on a parallels grid, or in the Euler picture.
    Sample {
        state: PathBuf,
        /// Number of roots of unity (defaults to 2s + 1).
        #[arg(short = 'n', long = "samples")]
        n: Option<usize>,
        /// Parallel radii for a band-limited state, comma separated.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        /// Sample the Euler picture on this parallel instead.
        #[arg(long)]
        theta0: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the reconstruction on a square grid in the disk |z| <= R.
    Reconstruct {
        samples: PathBuf,
        #[arg(long, default_value_t = 21)]
        grid: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// State to compare against; adds an abs_err column.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Recover state coefficients from samples.
    Coeffs {
        samples: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Reconstruction filter and reciprocal overlap eigenvalues.
    Filter {
        #[arg(long = "two-s")]
        two_s: u32,
        #[arg(short = 'n', long = "samples")]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Convert between Majorana samples and Euler-picture samples.
    Convert {
        input: PathBuf,
        /// Target parallel for Majorana input.
        #[arg(long)]
        theta0: Option<f64>,
        /// Relative threshold below which an omega mode counts as dead.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Fit the even coefficients of equator samples.
        #[arg(long)]
        equator_alias: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Kernel spectra and timings over a sweep of N (--two-s) or J (--J).
    #[command(group(ArgGroup::new("sweep").required(true).args(["two_s", "j_max"])))]
    Bench {
        #[arg(long = "two-s")]
        two_s: Option<u32>,
        #[arg(long = "n-min", default_value_t = 1)]
        n_min: usize,
        /// Defaults to 2s + 9.
        #[arg(long = "n-max")]
        n_max: Option<usize>,
        /// Largest band limit of the sweep.
        #[arg(long = "J")]
        j_max: Option<u32>,
        #[arg(long = "j-min", default_value_t = 1)]
        j_min: u32,
        #[command(flatten)]
        output: Output,
    },
}

fn table_only(format: Option<Format>) -> CliResult<()> {
    match format {
        None | Some(Format::Csv) => Ok(()),
        Some(Format::Json) => Err(CliError::input("this command writes CSV only")),
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Gen {
            two_s,
            j_max,
            seed,
            output,
        } => {
            let doc = commands::gen(two_s, j_max, seed)?;
            emit(
                output.out.as_deref(),
                &doc.render(output.format.unwrap_or(Format::Json)),
            )
        }
        Command::Sample {
            state,
            n,
            radii,
            theta0,
            output,
        } => {
            let doc = commands::sample(&state, SampleOptions { n, radii, theta0 })?;
            emit(
                output.out.as_deref(),
                &doc.render(output.format.unwrap_or(Format::Json)),
            )
        }
        Command::Reconstruct {
            samples,
            grid,
            radius,
            reference,
            output,
        } => {
            let rec = commands::reconstruct(&samples, grid, radius, reference.as_deref())?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => rec.to_csv(),
                Format::Json => rec.to_json(),
            };
            emit(output.out.as_deref(), &text)
        }
        Command::Coeffs { samples, output } => {
            let doc = commands::coeffs(&samples)?;
            emit(
                output.out.as_deref(),
                &doc.render(output.format.unwrap_or(Format::Json)),
            )
        }
        Command::Filter { two_s, n, output } => {
            let f = commands::filter(two_s, n)?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => f.to_csv(),
                Format::Json => f.to_json(),
            };
            emit(output.out.as_deref(), &text)
        }
        Command::Convert {
            input,
            theta0,
            tol,
            equator_alias,
            output,
        } => {
            let doc = commands::convert(
                &input,
                ConvertOptions {
                    theta0,
                    tol,
                    equator_alias,
                },
            )?;
            emit(
                output.out.as_deref(),
                &doc.render(output.format.unwrap_or(Format::Json)),
            )
        }
        Command::Bench {
            two_s,
            n_min,
            n_max,
            j_max,
            j_min,
            output,
        } => {
            table_only(output.format)?;
            let text = match (two_s, j_max) {
                (Some(two_s), None) => {
                    commands::bench_single(two_s, n_min, n_max.unwrap_or(two_s as usize + 9))?
                }
                (None, Some(j_max)) => commands::bench_multi(j_min, j_max)?,
                _ => return Err(CliError::input("give exactly one of --two-s and --J")),
            };
            emit(output.out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
