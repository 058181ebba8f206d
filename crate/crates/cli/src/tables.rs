//! Tabular artifacts shared between pipeline stages: scores.csv, impact.csv
//! and grant_vectors.jsonl. CSV files carry `#`-prefixed header comments.

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result, bail};
use idr_core::impact::ImpactRecord;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScoreRow {
    pub subject_id: String,
    pub subject_type: String,
    pub basis: String,
    pub rs_value: f64,
    pub quantile_bin: usize,
}

pub fn write_scores(path: &Path, comment: &str, rows: &[ScoreRow]) -> Result<()> {
    let file = std::fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "# {comment}")?;
    writeln!(w, "subject_id,subject_type,basis,rs_value,quantile_bin")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{:.9},{}",
            r.subject_id, r.subject_type, r.basis, r.rs_value, r.quantile_bin
        )?;
    }
    Ok(())
}

pub fn read_scores(path: &Path) -> Result<Vec<ScoreRow>> {
    if !path.exists() {
        bail!(
            "missing scores input: {} (run `idr score` first)",
            path.display()
        );
    }
    let file = std::fs::File::open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.is_empty() || line.starts_with('#') || line.starts_with("subject_id") {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 5 {
            bail!("{}:{}: expected 5 cells", path.display(), i + 1);
        }
        rows.push(ScoreRow {
            subject_id: cells[0].to_string(),
            subject_type: cells[1].to_string(),
            basis: cells[2].to_string(),
            rs_value: cells[3].parse().context("rs_value")?,
            quantile_bin: cells[4].parse().context("quantile_bin")?,
        });
    }
    Ok(rows)
}

pub fn write_impact(path: &Path, records: &[ImpactRecord]) -> Result<()> {
    let file = std::fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "# per-paper citation impact within (primary_field, year) strata")?;
    writeln!(
        w,
        "paper_id,year,primary_field,c10,c10_norm,hit,in_field,out_field,excluded_citers"
    )?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{:.9},{},{},{},{}",
            r.paper_id,
            r.year,
            r.primary_field,
            r.c10,
            r.c10_norm,
            r.hit,
            r.in_field,
            r.out_field,
            r.excluded_citers
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ImpactRow {
    pub paper_id: String,
    pub year: i32,
    pub primary_field: usize,
    pub c10: u64,
    pub c10_norm: f64,
    pub hit: bool,
    pub in_field: u64,
    pub out_field: u64,
}

pub fn read_impact(path: &Path) -> Result<Vec<ImpactRow>> {
    if !path.exists() {
        bail!(
            "missing impact input: {} (run `idr impact` first)",
            path.display()
        );
    }
    let file = std::fs::File::open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.is_empty() || line.starts_with('#') || line.starts_with("paper_id") {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 9 {
            bail!("{}:{}: expected 9 cells", path.display(), i + 1);
        }
        rows.push(ImpactRow {
            paper_id: cells[0].to_string(),
            year: cells[1].parse().context("year")?,
            primary_field: cells[2].parse().context("primary_field")?,
            c10: cells[3].parse().context("c10")?,
            c10_norm: cells[4].parse().context("c10_norm")?,
            hit: cells[5].parse().context("hit")?,
            in_field: cells[6].parse().context("in_field")?,
            out_field: cells[7].parse().context("out_field")?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrantVector {
    pub id: String,
    pub theta: Vec<f64>,
    #[serde(default)]
    pub fallback: bool,
}

pub fn write_grant_vectors(path: &Path, rows: &[GrantVector]) -> Result<()> {
    let file = std::fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    for row in rows {
        serde_json::to_writer(&mut w, row)?;
        writeln!(w)?;
    }
    Ok(())
}

/// Read grant vectors from grant_vectors.jsonl or from a groundtruth.json
/// with a `grant_theta` map.
pub fn read_grant_vectors(path: &Path) -> Result<Vec<GrantVector>> {
    let content = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    if content.trim_start().starts_with('{') {
        #[derive(Deserialize)]
        struct GroundTruthVectors {
            grant_theta: std::collections::BTreeMap<String, Vec<f64>>,
        }
        let truth: GroundTruthVectors =
            serde_json::from_str(&content).context("parsing ground-truth grant vectors")?;
        return Ok(truth
            .grant_theta
            .into_iter()
            .map(|(id, theta)| GrantVector {
                id,
                theta,
                fallback: false,
            })
            .collect());
    }
    let mut rows = Vec::new();
    for (i, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: GrantVector = serde_json::from_str(line)
            .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn load_corpus(path: &Path) -> Result<idr_core::corpus::CorpusStore> {
    idr_core::corpus::CorpusStore::load_json(path)
        .with_context(|| format!("loading corpus from {}", path.display()))
}
