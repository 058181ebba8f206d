//! Flat-file emission for synthetic corpora: the exact JSONL/TSV schemas the
//! ingest stage reads, plus `groundtruth.json`.

use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// One papers.jsonl record.
#[derive(Debug, Clone, Serialize)]
pub struct PaperOut {
    pub id: String,
    pub year: i32,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub fields: Vec<(usize, f64)>,
    pub refs: Vec<String>,
    pub cites: Vec<(String, i32)>,
    pub n_authors: u32,
    pub n_institutes: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_author_cites: Option<u64>,
}

/// One grants.jsonl record.
#[derive(Debug, Clone, Serialize)]
pub struct GrantOut {
    pub id: String,
    pub agency: String,
    pub country: String,
    pub year: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amount_usd: Option<f64>,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkOut {
    pub grant: String,
    pub paper: String,
}

pub fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let file =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut w = BufWriter::new(file);
    for record in records {
        serde_json::to_writer(&mut w, record)
            .map_err(|e| Error::InvalidParameter(format!("serializing record: {e}")))?;
        writeln!(w).map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(())
}

pub fn write_taxonomy(path: &Path, k: usize) -> Result<()> {
    let file =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut w = BufWriter::new(file);
    for field in 0..k {
        writeln!(w, "{field}\tfield{field:03}")
            .map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(())
}

pub fn write_groundtruth<T: Serialize>(path: &Path, truth: &T) -> Result<()> {
    let file =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    serde_json::to_writer_pretty(BufWriter::new(file), truth)
        .map_err(|e| Error::InvalidParameter(format!("serializing ground truth: {e}")))
}

/// Write an LDA-recovery corpus as corpus-module flat files. Documents get
/// chained reference/citer edges so every record passes the analysis filter.
pub fn write_lda_corpus(
    docs: &[crate::lda::LabeledDoc],
    truth: &super::LdaGroundTruth,
    k: usize,
    year: i32,
    dir: &Path,
) -> Result<()> {
    let n = docs.len();
    let papers: Vec<PaperOut> = docs
        .iter()
        .enumerate()
        .map(|(i, doc)| {
            let w = 1.0 / doc.labels.len() as f64;
            PaperOut {
                id: doc.id.clone(),
                year,
                abstract_text: doc.text.clone(),
                fields: doc.labels.iter().map(|&f| (f, w)).collect(),
                refs: vec![docs[(i + n - 1) % n].id.clone()],
                cites: vec![(docs[(i + 1) % n].id.clone(), year)],
                n_authors: 1,
                n_institutes: 0,
                max_author_cites: None,
            }
        })
        .collect();
    write_jsonl(&dir.join("papers.jsonl"), &papers)?;
    write_jsonl::<GrantOut>(&dir.join("grants.jsonl"), &[])?;
    write_jsonl::<LinkOut>(&dir.join("links.jsonl"), &[])?;
    write_taxonomy(&dir.join("taxonomy.tsv"), k)?;
    write_groundtruth(&dir.join("groundtruth.json"), truth)
}
