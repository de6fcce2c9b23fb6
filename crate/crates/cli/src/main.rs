use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use photon_detect_cli::config::{parse_config, ExperimentKind};
use photon_detect_cli::run::run;
use photon_detect_cli::table::write_table;

/// Finite-mode photon-detection experiments.
#[derive(Parser)]
#[command(name = "photon-detect", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path; overrides the config's `[output]` table.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the timestamp line so identical configs give byte-identical
    /// output files.
    #[arg(long)]
    reproducible: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Detection probability versus detuning for a finite window.
    Lineshape(CommonArgs),
    /// Interferometer film scan with visibility and distinguishability.
    Mzi(CommonArgs),
    /// Equal-time electric/magnetic commutator report.
    Commutator(CommonArgs),
    /// Meter completeness under the exact channel.
    PovmCheck(CommonArgs),
    /// First-order versus exact probability as the coupling shrinks.
    PerturbationScaling(CommonArgs),
}

impl Command {
    fn split(self) -> (ExperimentKind, CommonArgs) {
        match self {
            Command::Lineshape(a) => (ExperimentKind::Lineshape, a),
            Command::Mzi(a) => (ExperimentKind::Mzi, a),
            Command::Commutator(a) => (ExperimentKind::Commutator, a),
            Command::PovmCheck(a) => (ExperimentKind::PovmCheck, a),
            Command::PerturbationScaling(a) => (ExperimentKind::PerturbationScaling, a),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    match execute(kind, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn execute(kind: ExperimentKind, args: &CommonArgs) -> Result<(), photon_detect_cli::CliError> {
    let mut config = parse_config(&args.config, kind)?;
    if let Some(out) = &args.out {
        config.output_path = out.clone();
    }
    let table = run(&config, args.reproducible)?;
    write_table(&table, &config.output_path)?;
    println!(
        "wrote {} ({} rows)",
        config.output_path.display(),
        table.rows.len()
    );
    for line in &table.footer {
        println!("{line}");
    }
    Ok(())
}
