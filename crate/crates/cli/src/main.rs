use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cpa_cli::config::{read_config, Geometry, Model};
use cpa_cli::sweep::{sweep, SweepSpec};
use cpa_cli::verify::{run_all, VerifyOptions};
use cpa_cli::{emit, emit_sweep, parse_config, run, CliError, CliResult, ExperimentConfig, Format};

#[derive(Parser)]
#[command(
    name = "cpa",
    version,
    about = "Classical-field photon models checked against single-photon quantum optics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment.
    Simulate(Io),
    /// Run an experiment over a grid of T values.
    Sweep {
        #[command(flatten)]
        io: Io,
        /// Grid, e.g. `T=0.05:0.95:0.05`.
        #[arg(long)]
        sweep: SweepSpec,
    },
    /// Quantum weak values on the interferometer arms.
    WeakValues(Io),
    /// Run the acceptance checks and print one line per criterion.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Args)]
struct Io {
    /// Experiment config (JSON); stdin if omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<i64>,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Io {
    fn read(&self) -> CliResult<Vec<u8>> {
        match &self.config {
            Some(path) => fs::read(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e)),
            None => {
                let mut buf = Vec::new();
                io::stdin()
                    .read_to_end(&mut buf)
                    .map_err(|e| CliError::io("reading stdin", e))?;
                Ok(buf)
            }
        }
    }

    fn apply_overrides(&self, config: &mut ExperimentConfig) {
        if self.seed.is_some() {
            config.seed = self.seed;
        }
        if self.samples.is_some() {
            config.samples = self.samples;
        }
    }

    fn write(&self, f: impl FnOnce(&mut dyn Write) -> CliResult<()>) -> CliResult<()> {
        match &self.out {
            Some(path) => {
                let mut file = create(path)?;
                f(&mut file)?;
                file.flush()
                    .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
            }
            None => f(&mut io::stdout().lock()),
        }
    }
}

fn create(path: &Path) -> CliResult<io::BufWriter<fs::File>> {
    fs::File::create(path)
        .map(io::BufWriter::new)
        .map_err(|e| CliError::io(format!("creating {}", path.display()), e))
}

fn execute(command: Command) -> CliResult<ExitCode> {
    match command {
        Command::Simulate(io) => {
            let mut config = parse_config(&io.read()?)?;
            io.apply_overrides(&mut config);
            let report = run(&config)?;
            io.write(|w| emit(&report, io.format, w))?;
        }
        Command::Sweep { io, sweep: grid } => {
            let mut config = read_config(&io.read()?)?;
            io.apply_overrides(&mut config);
            let result = sweep(&config, grid)?;
            io.write(|w| emit_sweep(&result, io.format, w))?;
        }
        Command::WeakValues(io) => {
            let mut config = parse_config(&io.read()?)?;
            if config.geometry != Geometry::Interferometer {
                return Err(CliError::validation("geometry", "weak values need the interferometer"));
            }
            config.model = Model::Oracle;
            io.apply_overrides(&mut config);
            let report = run(&config)?;
            io.write(|w| emit(&report, io.format, w))?;
        }
        Command::Verify { seed, samples } => {
            let defaults = VerifyOptions::default();
            let opts = VerifyOptions {
                seed: seed.unwrap_or(defaults.seed),
                samples: samples.unwrap_or(defaults.samples),
            };
            let results = run_all(opts);
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!("{} of {} criteria passed", results.len() - failed, results.len());
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
