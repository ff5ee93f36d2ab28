use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tomwalk::{PassageConfig, WalkKind};
use tomwalk_cli::commands::{self, ExperimentConfig, GraphFormat};
use tomwalk_cli::error::CliError;
use tomwalk_cli::output::TableFormat;

#[derive(Parser)]
#[command(name = "tomwalk", version, about = "Open quantum walks on Apollonian networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Classical,
    Simple4,
    Case1,
    Case2,
    Case3,
}

impl From<Experiment> for WalkKind {
    fn from(e: Experiment) -> Self {
        match e {
            Experiment::Classical => WalkKind::Classical,
            Experiment::Simple4 => WalkKind::Simple4,
            Experiment::Case1 => WalkKind::Case1,
            Experiment::Case2 => WalkKind::Case2,
            Experiment::Case3 => WalkKind::Case3,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NetFormat {
    Csv,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long, value_enum)]
    experiment: Experiment,
    /// Network generation; defaults per experiment.
    #[arg(long)]
    generation: Option<usize>,
    /// identity, e0..e3, x, y, z, plus or imag.
    #[arg(long, default_value = "identity")]
    view: String,
    /// default, maximally-mixed or ket-x.
    #[arg(long, default_value = "default")]
    initial: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn config(&self, passage: PassageConfig) -> ExperimentConfig {
        ExperimentConfig {
            kind: self.experiment.into(),
            generation: self.generation,
            view: self.view.clone(),
            initial: self.initial.clone(),
            passage,
            format: match self.format {
                OutFormat::Csv => TableFormat::Csv,
                OutFormat::Json => TableFormat::Json,
            },
            jobs: self.jobs,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the edge list of a generation-g network.
    Network {
        #[arg(long)]
        generation: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: NetFormat,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute all first passage and return times of one experiment.
    Run {
        #[command(flatten)]
        common: Common,
        /// Stop once the undetected mass falls below this.
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
        #[arg(long, default_value_t = 1_000_000)]
        t_max: usize,
        /// Output directory for qmfpt and degree tables.
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Per-step detection probabilities of the unmonitored walk.
    Distribution {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        source: usize,
        #[arg(long, default_value_t = 12)]
        t_steps: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Network { generation, format, out } => {
            let format = match format {
                NetFormat::Csv => GraphFormat::Csv,
                NetFormat::Dot => GraphFormat::Dot,
            };
            commands::network(generation, format, out.as_deref())
        }
        Command::Run { common, threshold, t_max, out } => {
            let passage = PassageConfig {
                residual_threshold: threshold,
                t_max,
                ..PassageConfig::default()
            };
            let written = commands::run(&common.config(passage), &out)?;
            for p in written {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::Distribution { common, source, t_steps, out } => {
            commands::distribution(&common.config(PassageConfig::default()), source, t_steps, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
