use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zeno_info::output::{self, Format, OutputSpec, ZenoRow};
use zeno_info::{spectrum, verify, Error};

#[derive(Parser)]
#[command(name = "zeno-info", version, about = "Intensity spectra and information of a distributed polarizer chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// table, csv or json
    #[arg(long, default_value = "table")]
    format: Format,
    /// Decimal digits for real values (1..=17)
    #[arg(long, default_value_t = output::DEFAULT_PRECISION as u8,
          value_parser = clap::value_parser!(u8).range(1..=17))]
    precision: u8,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Quantum,
    Classical,
}

#[derive(Subcommand)]
enum Command {
    /// Table of the partition function p(n) for n = 1..=n-max
    Partitions {
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Detector intensity classes for one n
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "quantum")]
        kind: Kind,
        /// Per-unit attenuation of the classical model
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classical vs quantum information for n-min..=n-max
    Compare {
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Survival probability with every polarizer installed
    Zeno {
        /// One or more chain lengths (repeat the flag or separate with commas)
        #[arg(long = "n", value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the built-in reference checks
    Verify {
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn spec_of(args: &OutputArgs) -> Result<OutputSpec, Error> {
    OutputSpec::new(args.format, args.out.clone(), args.precision.into())
}

fn emit(spec: &OutputSpec, text: &str) -> io::Result<()> {
    match &spec.destination {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

/// Rendered output plus whether the command succeeded.
fn run(command: Command) -> Result<(OutputSpec, String, bool), Error> {
    Ok(match command {
        Command::Partitions { n_max, output } => {
            let spec = spec_of(&output)?;
            let counts = zeno_info::partition_counts(n_max)?;
            let text = output::render_partitions(&counts, &spec);
            (spec, text, true)
        }
        Command::Spectrum { n, kind, alpha, output } => {
            let spec = spec_of(&output)?;
            let report = match kind {
                Kind::Quantum => spectrum::quantum_spectrum::<f64>(n)?,
                Kind::Classical => spectrum::classical_spectrum::<f64>(n, alpha)?,
            };
            let text = output::render_spectrum(&report, &spec);
            (spec, text, true)
        }
        Command::Compare { n_min, n_max, output } => {
            let spec = spec_of(&output)?;
            let rows = spectrum::information_series::<f64>(n_min, n_max)?;
            let crossover = spectrum::entropy_crossover(&rows);
            let text = output::render_series(&rows, crossover, &spec);
            (spec, text, true)
        }
        Command::Zeno { n, output } => {
            let spec = spec_of(&output)?;
            let rows = n
                .iter()
                .map(|&n| {
                    Ok(ZenoRow {
                        n,
                        survival: zeno_info::zeno_survival(n)?,
                        approximation: zeno_info::zeno_approximation(n)?,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let text = output::render_zeno(&rows, &spec);
            (spec, text, true)
        }
        Command::Verify { output } => {
            let spec = spec_of(&output)?;
            let checks = verify::run_checks();
            let text = output::render_checks(&checks, &spec);
            (spec, text, verify::all_passed(&checks))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((spec, text, ok)) => {
            if let Err(e) = emit(&spec, &text) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
