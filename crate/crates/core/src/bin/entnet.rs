use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entnet::runner::{
    self, emit_csv, render_csv, run_figure, run_sweep, FigurePreset, Measure, Overrides,
    SweepParams,
};
use entnet::{Axis, Error};

/// Exact simulator of a DM-coupled Bell-pair network: concurrence and
/// teleportation-fidelity sweeps emitted as CSV with a replayable manifest.
#[derive(Parser)]
#[command(name = "entnet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named figure preset (fig2..fig5, fig7, fig8)
    Figure {
        /// Preset name: fig2|fig3|fig4|fig5|fig7|fig8
        #[arg(long)]
        fig: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run an explicit parameter sweep on the four-node network
    Sweep {
        /// Interaction axis: x|y|z
        #[arg(long)]
        axis: String,
        /// Node pairs to measure, as i-j[,i-j...] (unused for --measure min)
        #[arg(long)]
        pairs: Option<String>,
        /// What to compute: concurrence|min|fidelity
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Regenerate a CSV from the manifest block of an existing one
    Replay {
        /// Previously emitted CSV file
        input: PathBuf,
        /// Verify byte-identity against the input instead of writing
        #[arg(long)]
        check: bool,
        /// Output path (defaults to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// DM interaction strength
    #[arg(long, default_value_t = 0.2)]
    strength: f64,
    /// End of the time grid
    #[arg(long, default_value_t = 20.0)]
    tmax: f64,
    /// Time grid step
    #[arg(long, default_value_t = 0.05)]
    dt: f64,
    /// Evolution route: analytic|oracle
    #[arg(long, default_value = "oracle")]
    method: String,
    /// Receiver-side conditional Pauli: on|off (fidelity only)
    #[arg(long, default_value = "on")]
    corrections: String,
    /// |alpha|^2 of the fixed teleportation input, in [0, 1]
    #[arg(long = "input-alpha2", default_value_t = 0.7)]
    input_alpha2: f64,
    /// Average the fidelity over N sampled inputs instead (0 = fixed input)
    #[arg(long = "input-samples", default_value_t = 0)]
    input_samples: u32,
    /// RNG seed for input sampling
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output path (defaults to stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn overrides(&self) -> Result<Overrides, Error> {
        Ok(Overrides {
            strength: Some(self.strength),
            tmax: Some(self.tmax),
            dt: Some(self.dt),
            method: Some(self.method.parse()?),
            corrections: Some(self.corrections.parse()?),
            input_alpha2: Some(self.input_alpha2),
            input_samples: Some(self.input_samples),
            seed: Some(self.seed),
        })
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = if err.is_numerical() {
                3
            } else if matches!(err, Error::Io(_)) {
                1
            } else {
                2
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Figure { fig, common } => {
            let preset: FigurePreset = fig.parse()?;
            let result = run_figure(preset, &common.overrides()?)?;
            write_result(&result, common.out.as_deref())
        }
        Command::Sweep {
            axis,
            pairs,
            measure,
            common,
        } => {
            let measure: Measure = measure.parse()?;
            let axis: Axis = axis.parse()?;
            let mut params = SweepParams::new(axis, measure);
            params.strength = common.strength;
            params.tmax = common.tmax;
            params.dt = common.dt;
            params.method = common.method.parse()?;
            params.corrections = common.corrections.parse()?;
            params.input_alpha2 = common.input_alpha2;
            params.input_samples = common.input_samples;
            params.seed = common.seed;
            match (measure, pairs) {
                (Measure::MinConcurrence, _) => {}
                (_, Some(list)) => params.pairs = runner::parse_pairs(&list)?,
                (_, None) => {
                    return Err(Error::InvalidArgument(
                        "--pairs is required for this measure".into(),
                    ))
                }
            }
            let result = run_sweep(&params)?;
            write_result(&result, common.out.as_deref())
        }
        Command::Replay { input, check, out } => {
            let (original, result) = runner::replay_file(&input)?;
            if check {
                let regenerated = render_csv(&result);
                if regenerated == original {
                    println!("byte-identical: {}", input.display());
                    Ok(())
                } else {
                    Err(Error::InvariantViolation(format!(
                        "replay of {} is not byte-identical",
                        input.display()
                    )))
                }
            } else {
                write_result(&result, out.as_deref())
            }
        }
    }
}

fn write_result(result: &runner::SweepResult, out: Option<&std::path::Path>) -> Result<(), Error> {
    match out {
        Some(path) => emit_csv(result, path),
        None => {
            print!("{}", render_csv(result));
            Ok(())
        }
    }
}
