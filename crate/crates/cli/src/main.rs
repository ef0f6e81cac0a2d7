use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boundfloq_cli::config;
use boundfloq_cli::runner::{self, Axis};
use boundfloq_cli::scenarios::{self, catalog};
use boundfloq_cli::{CliError, Result};
use clap::{Args, Parser, Subcommand};

/// Environment variable naming the default output directory.
const OUT_ENV: &str = "BOUNDFLOQ_OUT";

#[derive(Parser)]
#[command(name = "boundfloq", version, about = "Bound-state open-system and Floquet scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario
    Run {
        scenario: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a scenario at every point of an axis over one numeric key
    Sweep {
        scenario: String,
        /// key=start:stop:points or key=v1,v2,...
        #[arg(long)]
        axis: String,
        #[command(flatten)]
        common: Common,
    },
    /// List the built-in scenarios
    List,
}

#[derive(Args)]
struct Common {
    /// TOML file overriding scenario keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// base output directory [default: $BOUNDFLOQ_OUT or ./boundfloq-out]
    #[arg(long)]
    out: Option<PathBuf>,
    /// worker threads
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    /// skip writing plot.py
    #[arg(long)]
    no_plot: bool,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn overrides(path: Option<&Path>) -> Result<BTreeMap<String, toml::Value>> {
    let Some(path) = path else { return Ok(BTreeMap::new()) };
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    config::parse(&text).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        e => e,
    })
}

fn base_dir(out: Option<PathBuf>) -> PathBuf {
    out.or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("boundfloq-out"))
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::List => {
            let width = catalog().iter().map(|s| s.name.len()).max().unwrap_or(0);
            for s in catalog() {
                println!("{:width$}  {}", s.name, s.description);
            }
            Ok(())
        }
        Command::Run { scenario, common } => {
            let scenario = scenarios::find(&scenario)?;
            let run = runner::run(scenario, &overrides(common.config.as_deref())?, common.workers)?;
            let dir = runner::output_dir(&base_dir(common.out), scenario, None);
            run.write(&dir, !common.no_plot)?;
            println!("{}", dir.display());
            Ok(())
        }
        Command::Sweep { scenario, axis, common } => {
            let scenario = scenarios::find(&scenario)?;
            let axis: Axis = axis.parse()?;
            let run = runner::sweep(scenario, &overrides(common.config.as_deref())?, &axis, common.workers)?;
            let dir = runner::output_dir(&base_dir(common.out), scenario, Some(&axis));
            run.write(&dir, !common.no_plot)?;
            let failed = run.output.summary.get("failed").and_then(|v| v.as_u64()).unwrap_or(0);
            if failed > 0 {
                eprintln!("warning: {failed} of {} sweep points failed; see the status column", axis.values.len());
            }
            println!("{}", dir.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
