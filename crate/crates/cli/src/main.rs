//! `idr` — command-line pipeline for field-level interdisciplinarity
//! analytics: ingest, train, infer-grants, distances, score, impact,
//! analyze, regress, synth, eval-model.

mod commands;
mod manifest;
mod tables;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "idr",
    version,
    about = "Interdisciplinarity analytics over papers, grants and field taxonomies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load papers, grants, links and the taxonomy into a corpus artifact
    Ingest(commands::ingest::IngestArgs),
    /// Train the label-constrained topic model on paper abstracts
    Train(commands::train::TrainArgs),
    /// Infer field posteriors for grant abstracts
    InferGrants(commands::infer_grants::InferGrantsArgs),
    /// Build a field-distance matrix (reference, citation or word based)
    Distances(commands::distances::DistancesArgs),
    /// Rao-Stirling scores for papers and grants
    Score(commands::score::ScoreArgs),
    /// Citation impact: c10, normalization, hit flags, field decomposition
    Impact(commands::impact::ImpactArgs),
    /// Reproduce an analysis figure as plot-ready CSV
    Analyze(commands::analyze::AnalyzeArgs),
    /// Run a regression table
    Regress(commands::regress::RegressArgs),
    /// Generate a synthetic corpus with planted ground truth
    Synth(commands::synth::SynthArgs),
    /// Held-out model validation (precision and label distance)
    EvalModel(commands::eval_model::EvalModelArgs),
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("IDR_LOG")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(args) => commands::ingest::run(args),
        Command::Train(args) => commands::train::run(args),
        Command::InferGrants(args) => commands::infer_grants::run(args),
        Command::Distances(args) => commands::distances::run(args),
        Command::Score(args) => commands::score::run(args),
        Command::Impact(args) => commands::impact::run(args),
        Command::Analyze(args) => commands::analyze::run(args),
        Command::Regress(args) => commands::regress::run(args),
        Command::Synth(args) => commands::synth::run(args),
        Command::EvalModel(args) => commands::eval_model::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
