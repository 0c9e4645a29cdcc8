//! `deceptext`: config-driven runs of the deception-detection pipeline.
//!
//! Exit codes: 0 success, 2 invalid input, 3 schema or config mismatch,
//! 4 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod context;
mod failure;
mod output;

use context::{Context, Overrides};
use failure::{CliResult, Failure};
use output::Sidecar;

#[derive(Debug, Parser)]
#[command(name = "deceptext", version, about = "Text-based deception detection experiments")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, env = "DECEPTEXT_CONFIG")]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true, env = "DECEPTEXT_SEED")]
    seed: Option<u64>,
    /// Maximum number of experiments run at once.
    #[arg(long, global = true, env = "DECEPTEXT_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Overrides the config output directory.
    #[arg(long, global = true, env = "DECEPTEXT_OUT")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate corpora and print their sizes.
    Ingest {
        /// Dataset manifests; defaults to those in the config.
        manifests: Vec<PathBuf>,
    },
    /// Write the cue vector of every document.
    Cues,
    /// Mann-Whitney screen of the cues, then the correlation filter.
    Significance,
    /// Logistic regression on the cues that pass the screen.
    Mlr,
    /// Within-dataset experiments for every configured setup.
    Train,
    /// Score a saved model.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        /// Score every document of this dataset instead of the test share
        /// of the training dataset.
        #[arg(long)]
        dataset: Option<String>,
    },
    /// Leave-one-dataset-out experiments.
    Cross,
    /// Collect reports into tables and compare them with reference values.
    Report {
        /// Reference cells; the bundled ones by default.
        #[arg(long)]
        expectations: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ingest { .. } => "ingest",
            Command::Cues => "cues",
            Command::Significance => "significance",
            Command::Mlr => "mlr",
            Command::Train => "train",
            Command::Evaluate { .. } => "evaluate",
            Command::Cross => "cross",
            Command::Report { .. } => "report",
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    if cli.jobs == 0 {
        return Err(Failure::input("--jobs must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global()
        .map_err(|e| Failure::input(format!("thread pool: {e}")))?;
    let overrides = Overrides {
        seed: cli.seed,
        out: cli.out.clone(),
    };
    let started = output::unix_seconds();
    let ctx = match &cli.config {
        Some(p) => Some(Context::load(p, &overrides)?),
        None => None,
    };

    if let Command::Ingest { manifests } = &cli.command {
        let out = ctx.as_ref().map(|c| c.out.clone()).or_else(|| cli.out.clone());
        commands::ingest(ctx.as_ref(), manifests, out.as_deref())?;
        return Ok(());
    }
    let ctx = ctx.ok_or_else(|| Failure::input(format!("{} needs --config", cli.command.name())))?;
    log::info!("config hash {}", ctx.hash);
    let written = match &cli.command {
        Command::Ingest { .. } => unreachable!("handled above"),
        Command::Cues => commands::cues(&ctx)?,
        Command::Significance => commands::significance(&ctx)?,
        Command::Mlr => commands::mlr(&ctx)?,
        Command::Train => commands::train(&ctx)?,
        Command::Evaluate { model, dataset } => commands::evaluate(&ctx, model, dataset.as_deref())?,
        Command::Cross => commands::cross(&ctx)?,
        Command::Report { expectations } => commands::report(&ctx, expectations.as_deref())?,
    };
    output::write(&ctx.out.join("config.toml"), &ctx.config.canonical())?;
    for p in &written.0 {
        println!("{}", p.display());
    }
    Sidecar {
        command: cli.command.name().to_string(),
        config_hash: ctx.hash.clone(),
        started,
        jobs: cli.jobs,
        outputs: written.0,
    }
    .write(&ctx.out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("DECEPTEXT_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
