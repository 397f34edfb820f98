use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pipeline_cli::stages::{run_all, run_stage, RunContext, Stage};
use pipeline_cli::{PipelineConfig, PipelineError};

#[derive(Parser)]
#[command(
    name = "molscreen",
    about = "Candidate screening pipeline: extract, pool, enrich, refine, select, report"
)]
struct Cli {
    /// TOML config file; omitted keys fall back to defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Pool ledger path (overrides config).
    #[arg(long, global = true)]
    pool: Option<PathBuf>,

    /// Directory with recorded HTTP fixtures and bundled inputs (overrides config).
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,

    /// Selection profile (overrides config).
    #[arg(long, global = true)]
    profile: Option<String>,

    /// Directory run artifacts are written to (overrides config).
    #[arg(long, global = true)]
    run_dir: Option<PathBuf>,

    /// Fail fast if the fixtures directory is absent. Transport is
    /// replay-only either way; this only hardens the precondition.
    #[arg(long, global = true)]
    offline: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Fetch target protein and reference drug records.
    Extract,
    /// Pool generated molecules (round 0).
    Ingest,
    /// Attach predicted property profiles and binding affinities.
    Predict,
    /// Flag the dominant weakness of each profiled candidate.
    Flag,
    /// Apply refinement proposals and classify per-property outcomes.
    RefineApply,
    /// Compute descriptors, rule gates, and desirability scores.
    Filter,
    /// Apply the selection profile to filtered candidates.
    Select,
    /// Write report sheets (stats, histograms, weakness, radar).
    Report,
    /// Write structure job manifests for selected candidates.
    StructureManifest,
    /// Ingest structure tool results as advisory fields.
    StructureIngest,
    /// Run every enabled stage in order.
    All,
}

impl Cmd {
    fn stage(self) -> Option<Stage> {
        match self {
            Cmd::Extract => Some(Stage::Extract),
            Cmd::Ingest => Some(Stage::Ingest),
            Cmd::Predict => Some(Stage::Predict),
            Cmd::Flag => Some(Stage::Flag),
            Cmd::RefineApply => Some(Stage::RefineApply),
            Cmd::Filter => Some(Stage::Filter),
            Cmd::Select => Some(Stage::Select),
            Cmd::Report => Some(Stage::Report),
            Cmd::StructureManifest => Some(Stage::StructureManifest),
            Cmd::StructureIngest => Some(Stage::StructureIngest),
            Cmd::All => None,
        }
    }
}

fn run(cli: &Cli) -> Result<(), PipelineError> {
    let mut config = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(profile) = &cli.profile {
        config.profile = profile.clone();
    }

    let run_dir = cli
        .run_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(&config.run_dir));
    let fixtures = cli
        .fixtures
        .clone()
        .unwrap_or_else(|| PathBuf::from(&config.fixtures_dir));
    let pool = cli.pool.clone().unwrap_or_else(|| {
        if config.pool_file.is_empty() {
            run_dir.join("pool.jsonl")
        } else {
            PathBuf::from(&config.pool_file)
        }
    });

    let ctx = RunContext::new(config, run_dir, pool, fixtures, cli.offline)?;
    match cli.command.stage() {
        Some(stage) => {
            let notices = run_stage(&ctx, stage)?;
            for n in &notices {
                println!("[{}] {n}", stage.name());
            }
        }
        None => {
            for (stage, notices) in run_all(&ctx)? {
                for n in &notices {
                    println!("[{}] {n}", stage.name());
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
