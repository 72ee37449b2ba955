use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qgk_cli::commands::{self, CliError, Construction, QecPath, Report, SynthMode};

/// Exact quantum gate simulation, decomposition checks and stabilizer-code
/// network synthesis.
#[derive(Parser)]
#[command(name = "qgk", version)]
struct Cli {
    /// Seed for measurement sampling and random inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Emit an indented human-readable listing instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Tolerance for pass/fail checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a circuit file.
    Run {
        file: PathBuf,
        /// Basis label such as `0110`, `zeros`, or `random`.
        #[arg(long, default_value = "zeros")]
        input: String,
        /// Force a measurement outcome, e.g. `--force m=1`.
        #[arg(long = "force", value_parser = parse_force)]
        force: Vec<(String, bool)>,
    },
    /// Build a construction and compare it with its target matrix.
    Verify {
        #[arg(value_enum)]
        name: Construction,
        /// Number of random unitaries for `sw`, `abc` and `chain`.
        #[arg(long, default_value_t = 1)]
        random: usize,
    },
    /// Five-qubit code: inject a single-qubit error and correct it.
    Qec {
        /// `none`, `all`, or a letter and qubit, e.g. `X2`.
        #[arg(long, conflicts_with = "all")]
        error: Option<String>,
        /// Run no error and all 15 single-qubit errors.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value = "restore")]
        path: QecPath,
        /// Include final amplitudes.
        #[arg(long)]
        amplitudes: bool,
    },
    /// Synthesize measurement or decoding circuits from a generator file.
    Synth {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "decode")]
        mode: SynthMode,
        /// Write the circuit here instead of embedding it in the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// GHZ state and Mermin operator checks.
    GhzCheck {
        /// Demolishing-measurement runs per operator.
        #[arg(long, default_value_t = 1000)]
        runs: usize,
    },
}

fn parse_force(s: &str) -> Result<(String, bool), String> {
    match s.split_once('=') {
        Some((slot, "0")) => Ok((slot.to_string(), false)),
        Some((slot, "1")) => Ok((slot.to_string(), true)),
        _ => Err(format!("expected SLOT=0 or SLOT=1, found `{s}`")),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Run { file, input, force } => commands::run(&read(file)?, input, cli.seed, force),
        Command::Verify { name, random } => commands::verify(*name, *random, cli.seed, cli.tol),
        Command::Qec {
            error,
            all,
            path,
            amplitudes,
        } => commands::qec(
            error.as_deref(),
            *all,
            *path,
            cli.seed,
            cli.tol,
            *amplitudes,
        ),
        Command::Synth { file, mode, out } => {
            let (mut report, text) = commands::synth(&read(file)?, *mode)?;
            match out {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    report.json["circuit_file"] = path.display().to_string().into();
                }
                None => report.json["circuit"] = text.into(),
            }
            Ok(report)
        }
        Command::GhzCheck { runs } => commands::ghz_check(cli.seed, *runs, cli.tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(report) => {
            let text = if cli.pretty {
                commands::pretty(&report.json)
            } else {
                serde_json::to_string_pretty(&report.json).expect("serializable") + "\n"
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().write_all(text.as_bytes());
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("qgk: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
