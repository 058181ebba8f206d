use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use idr_core::corpus::{IngestOptions, ingest_corpus};

use crate::manifest::{Manifest, ensure_out_dir};

#[derive(Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub papers: PathBuf,
    #[arg(long)]
    pub grants: PathBuf,
    #[arg(long)]
    pub links: PathBuf,
    #[arg(long)]
    pub taxonomy: PathBuf,
    /// Grant start-year window, inclusive
    #[arg(long, default_value_t = 1985)]
    pub year_min: i32,
    #[arg(long, default_value_t = 2009)]
    pub year_max: i32,
    /// Keep papers regardless of reference/citer counts
    #[arg(long)]
    pub no_analysis_filter: bool,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: IngestArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let opts = IngestOptions {
        window: (args.year_min, args.year_max),
        analysis_filter: !args.no_analysis_filter,
    };
    let (store, report) = ingest_corpus(
        &args.papers,
        &args.grants,
        &args.links,
        &args.taxonomy,
        &opts,
    )?;
    log::info!(
        "loaded {} papers, {} grants, {} links ({} external records)",
        store.papers.len(),
        store.grants.len(),
        store.links.len(),
        store.externals.len()
    );

    store.save_json(&args.out.join("corpus.json"))?;
    let report_file = std::fs::File::create(args.out.join("report.json"))
        .context("creating report.json")?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(report_file), &report)
        .context("writing report.json")?;

    let mut manifest = Manifest::new(
        "ingest",
        serde_json::json!({
            "year_min": args.year_min,
            "year_max": args.year_max,
            "analysis_filter": !args.no_analysis_filter,
        }),
    );
    for path in [&args.papers, &args.grants, &args.links, &args.taxonomy] {
        manifest.add_input(path)?;
    }
    manifest.add_output("corpus.json");
    manifest.add_output("report.json");
    manifest.write(&args.out)
}
