//! Field-space primitives: probability vectors over the taxonomy, the
//! symmetric field-distance matrix, and cosine geometry shared by the
//! reference-, citation- and word-distribution-based routes.

use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats;

/// Probability vector over the K taxonomy fields. Entries are nonnegative
/// and sum to 1 (checked to 1e-9 on construction).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDistribution {
    probs: Vec<f64>,
}

impl FieldDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyInput("zero-length field distribution"));
        }
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "field distribution has a negative or non-finite entry".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "field distribution sums to {sum}, expected 1"
            )));
        }
        Ok(Self { probs })
    }

    /// Normalize nonnegative weights into a distribution.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 || !sum.is_finite() {
            return Err(Error::InvalidParameter(
                "cannot normalize weights with non-positive sum".into(),
            ));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    /// Unit mass on a single field.
    pub fn unit(k: usize, field: usize) -> Self {
        let mut probs = vec![0.0; k];
        probs[field] = 1.0;
        Self { probs }
    }

    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, field: usize) -> f64 {
        self.probs[field]
    }

    /// Index of the largest entry, smallest index on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }
}

/// How a distance matrix was derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    ReferenceBased,
    CitationBased,
    LdaBased,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::ReferenceBased => "reference-based",
            Provenance::CitationBased => "citation-based",
            Provenance::LdaBased => "lda-based",
        };
        f.write_str(s)
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reference-based" | "references" => Ok(Provenance::ReferenceBased),
            "citation-based" | "citations" => Ok(Provenance::CitationBased),
            "lda-based" | "lda" => Ok(Provenance::LdaBased),
            other => Err(Error::InvalidParameter(format!(
                "unknown provenance `{other}`"
            ))),
        }
    }
}

/// Symmetric K x K field-distance table with zero diagonal. Fields without
/// data are masked unavailable rather than given a fabricated distance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistanceMatrix {
    k: usize,
    values: Vec<f64>,
    available: Vec<bool>,
    provenance: Provenance,
}

impl DistanceMatrix {
    pub fn new(
        k: usize,
        values: Vec<f64>,
        available: Vec<bool>,
        provenance: Provenance,
    ) -> Result<Self> {
        if values.len() != k * k || available.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "distance matrix of K={k} with {} values, {} availability flags",
                values.len(),
                available.len()
            )));
        }
        let m = Self {
            k,
            values,
            available,
            provenance,
        };
        for i in 0..k {
            if m.raw(i, i) != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "distance matrix diagonal ({i},{i}) is not zero"
                )));
            }
            for j in 0..k {
                let d = m.raw(i, j);
                if m.available[i] && m.available[j] && !(0.0..=1.0).contains(&d) {
                    return Err(Error::InvalidParameter(format!(
                        "distance ({i},{j}) = {d} outside [0,1]"
                    )));
                }
                if (d - m.raw(j, i)).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "distance matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_available(&self, field: usize) -> bool {
        self.available[field]
    }

    pub fn available_mask(&self) -> &[bool] {
        &self.available
    }

    fn raw(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.k + j]
    }

    /// Distance between two available fields; `None` if either is masked.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        (self.available[i] && self.available[j]).then(|| self.raw(i, j))
    }

    /// Pearson r between two matrices over the strictly-upper-triangle
    /// pairs available in both.
    pub fn compare(&self, other: &DistanceMatrix) -> Result<f64> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch(format!(
                "comparing distance matrices of K={} and K={}",
                self.k, other.k
            )));
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..self.k {
            for j in (i + 1)..self.k {
                if let (Some(a), Some(b)) = (self.get(i, j), other.get(i, j)) {
                    xs.push(a);
                    ys.push(b);
                }
            }
        }
        if xs.len() < 3 {
            return Err(Error::TooFewSharedPairs(xs.len()));
        }
        stats::pearson(&xs, &ys)
    }

    /// TSV export: a provenance comment, a header of field ids, one row per
    /// field with 6-decimal entries ("NA" where a field is unavailable).
    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# provenance: {}", self.provenance)?;
        write!(w, "field_id")?;
        for j in 0..self.k {
            write!(w, "\t{j}")?;
        }
        writeln!(w)?;
        for i in 0..self.k {
            write!(w, "{i}")?;
            for j in 0..self.k {
                match self.get(i, j) {
                    Some(d) => write!(w, "\t{d:.6}")?,
                    None => write!(w, "\tNA")?,
                }
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn save_tsv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        self.write_tsv(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn load_tsv(path: &Path) -> Result<Self> {
        let file =
            std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let reader = BufReader::new(file);
        let bad = |msg: &str| Error::InvalidParameter(format!("{}: {msg}", path.display()));

        let mut provenance = Provenance::ReferenceBased;
        let mut rows: Vec<Vec<Option<f64>>> = Vec::new();
        let mut header_seen = false;
        for line in reader.lines() {
            let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(p) = rest.trim().strip_prefix("provenance:") {
                    provenance = p.trim().parse()?;
                }
                continue;
            }
            if !header_seen {
                header_seen = true;
                continue;
            }
            let cells: Vec<&str> = line.split('\t').collect();
            let row = cells[1..]
                .iter()
                .map(|c| {
                    if *c == "NA" {
                        Ok(None)
                    } else {
                        c.parse::<f64>()
                            .map(Some)
                            .map_err(|_| bad(&format!("bad distance cell `{c}`")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let k = rows.len();
        if k == 0 {
            return Err(bad("no data rows"));
        }
        let mut values = vec![0.0; k * k];
        let mut available = vec![true; k];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(bad(&format!("row {i} has {} cells, expected {k}", row.len())));
            }
            if row.iter().all(|c| c.is_none()) {
                available[i] = false;
            }
            for (j, cell) in row.iter().enumerate() {
                values[i * k + j] = cell.unwrap_or(0.0);
            }
        }
        Self::new(k, values, available, provenance)
    }
}

/// Cosine distance `1 - a.b / (|a| |b|)`, clamped to [0,1] for nonnegative
/// inputs (floating-point round-off can leave a tiny excursion).
pub fn cosine_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "cosine over {} vs {} dims",
            a.len(),
            b.len()
        )));
    }
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Err(Error::InvalidParameter(
            "cosine distance undefined for a zero vector".into(),
        ));
    }
    Ok((1.0 - dot / (na.sqrt() * nb.sqrt())).clamp(0.0, 1.0))
}

/// Distance between two grant/paper field distributions.
pub fn grant_pair_distance(a: &FieldDistribution, b: &FieldDistribution) -> Result<f64> {
    cosine_distance(a.probs(), b.probs())
}
