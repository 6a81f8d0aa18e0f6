//! `gravnano`: potentials, Gaussian dynamics, Choquard states and figure data.

mod commands;
mod error;
mod figures;
mod output;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::{BoundstateArgs, ChoquardArgs, EvolveArgs, LatticeArgs, PotentialArgs, RegimeArgs};
use error::CliError;
use figures::Figure;
use output::Format;
use scenario::Scenario;

#[derive(Debug, Parser)]
#[command(name = "gravnano", version, about = "Self-gravity of crystalline nanospheres")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Omit the timestamp so identical inputs give identical bytes.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker threads for parallel sums and sweeps.
    #[arg(long, global = true, env = "GRAVNANO_JOBS")]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Overlap energy of a sphere and its translated replica.
    Potential(PotentialArgs),
    /// Pair energy of a cubic lattice sphere along a cell edge.
    Lattice(LatticeArgs),
    /// Evolve a real Gaussian under a self-gravity kernel.
    Evolve {
        /// JSON scenario; replaces the physics flags.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[command(flatten)]
        args: EvolveArgs,
    },
    /// Bound-state width over a sweep of radii.
    Boundstate(BoundstateArgs),
    /// Radial Choquard state with a given node count.
    Choquard(ChoquardArgs),
    /// Regime classification and derived scales.
    Regime(RegimeArgs),
    /// Data for one of the preset figures.
    Figure {
        #[arg(value_enum)]
        name: Figure,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let Cli { common, command } = cli;
    if let Some(n) = common.jobs {
        if n == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size worker pool: {e}")))?;
    }
    let mut path = common.output.clone();
    let mut format = common.format;
    let artifact = match &command {
        Command::Potential(a) => commands::potential(a)?,
        Command::Lattice(a) => commands::lattice(a)?,
        Command::Evolve { scenario, args } => {
            let sc = match scenario {
                Some(p) => Scenario::load(p)?,
                None => args.scenario()?,
            };
            if let Some(t) = &sc.output {
                path = path.or_else(|| Some(t.path.clone()));
                format = format.or(Some(t.format));
            }
            commands::evolve_scenario(&sc)?
        }
        Command::Boundstate(a) => commands::boundstate(a)?,
        Command::Choquard(a) => commands::choquard(a, format)?,
        Command::Regime(a) => commands::regime(a)?,
        Command::Figure { name } => figures::run(*name)?,
    };
    let format = format.unwrap_or_else(|| artifact.default_format());
    let text = output::render(&artifact, format, common.deterministic)?;
    output::emit(&text, path.as_deref())
}

fn report(e: &CliError) -> ExitCode {
    let code = e.exit_code();
    let obj = json!({
        "error": { "kind": e.kind(), "message": e.to_string() },
        "exit_code": code,
    });
    eprintln!("{obj}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return report(&CliError::Config(e.to_string()));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}
