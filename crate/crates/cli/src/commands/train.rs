use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use idr_core::lda::{LdaParams, build_training_set, train};

use crate::manifest::{Manifest, ensure_out_dir};
use crate::tables::load_corpus;

#[derive(Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Minimum abstract length in words (pre-tokenization)
    #[arg(long, default_value_t = 100)]
    pub min_words: usize,
    /// Minimum document frequency for vocabulary tokens
    #[arg(long, default_value_t = 5)]
    pub min_df: usize,
    /// Document-topic prior (default 50/K)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Topic-word prior
    #[arg(long, default_value_t = 0.01)]
    pub eta: f64,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    /// Sweeps discarded before averaging (default iterations/2)
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// 1 = exact deterministic sampler; >1 = sharded approximate sampler
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Exclude a held-out fraction of eligible documents (same convention
    /// as `eval-model`)
    #[arg(long, default_value_t = 0.0)]
    pub holdout_fraction: f64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Deterministic held-out assignment shared by `train` and `eval-model`.
pub fn is_held_out(doc_id: &str, seed: u64, fraction: f64) -> bool {
    if fraction <= 0.0 {
        return false;
    }
    let mut h = seed ^ 0x51ed_270b;
    for &b in doc_id.as_bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    (h as f64 / u64::MAX as f64) < fraction
}

pub fn run(args: TrainArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let store = load_corpus(&args.corpus)?;
    let mut docs = build_training_set(&store, args.min_words)?;
    let eligible = docs.len();
    if args.holdout_fraction > 0.0 {
        docs.retain(|d| !is_held_out(&d.id, args.seed, args.holdout_fraction));
    }
    log::info!("training on {} of {eligible} eligible documents", docs.len());

    let params = LdaParams {
        alpha: args.alpha,
        eta: args.eta,
        iterations: args.iterations,
        burn_in: args.burn_in,
        seed: args.seed,
        min_df: args.min_df,
        threads: args.threads,
    };
    let mut model = train(&docs, store.k(), &params)?;

    let mut manifest = Manifest::new(
        "train",
        serde_json::json!({
            "min_words": args.min_words,
            "min_df": args.min_df,
            "alpha": model.alpha,
            "eta": model.eta,
            "iterations": args.iterations,
            "burn_in": model.burn_in,
            "seed": args.seed,
            "threads": args.threads,
            "holdout_fraction": args.holdout_fraction,
        }),
    );
    manifest.add_input(&args.corpus)?;
    let corpus_hash = manifest.inputs.values().next().cloned().unwrap_or_default();
    model.metadata.insert("corpus_hash".into(), corpus_hash);

    model.save(&args.out.join("model.llda"))?;
    let sidecar = serde_json::json!({
        "k": model.k,
        "v": model.v(),
        "alpha": model.alpha,
        "eta": model.eta,
        "seed": model.seed,
        "iterations": model.iterations,
        "burn_in": model.burn_in,
        "trained_docs": model.trained_docs,
        "trained_tokens": model.trained_tokens,
        "metadata": model.metadata,
    });
    let file = std::fs::File::create(args.out.join("model.json"))
        .context("creating model.json")?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), &sidecar)
        .context("writing model.json")?;

    manifest.add_output("model.llda");
    manifest.add_output("model.json");
    manifest.write(&args.out)
}
