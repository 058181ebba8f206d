//! In-memory corpus: papers, grants, grant-paper links and the field
//! taxonomy, indexed for the downstream analytics.
//!
//! The store is immutable once built and safe to share across threads.
//! Papers that fail the analysis filter (fewer than one reference or one
//! citer) are kept aside as external records so that reference- and
//! citation-based field vectors can still resolve their labels.

mod filter;
mod ingest;

pub use filter::{CorpusFilter, slice_corpus};
pub use ingest::{IngestOptions, ingest_corpus};

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Level-1 field taxonomy: dense ids `0..K-1` with unique names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldTaxonomy {
    names: Vec<String>,
}

impl FieldTaxonomy {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.len() < 2 {
            return Err(Error::Taxonomy(format!(
                "need at least 2 fields, got {}",
                names.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::Taxonomy(format!("duplicate field name `{name}`")));
            }
        }
        Ok(Self { names })
    }

    pub fn k(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, field: usize) -> Option<&str> {
        self.names.get(field).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// One incoming citation edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Citer {
    pub id: String,
    pub year: Option<i32>,
}

/// A publication in the analysis set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Paper {
    pub id: String,
    pub year: i32,
    pub abstract_text: String,
    /// Normalized label weights, ascending by field id.
    pub field_labels: Vec<(usize, f64)>,
    pub references: Vec<String>,
    pub citers: Vec<Citer>,
    pub n_authors: u32,
    pub n_institutes: u32,
    pub max_author_citations: Option<u64>,
}

impl Paper {
    /// Field with the maximum label weight; ties break to the smallest id.
    pub fn primary_field(&self) -> usize {
        primary_field(&self.field_labels)
    }
}

/// Argmax field over normalized `(field, weight)` labels sorted by field id.
pub fn primary_field(labels: &[(usize, f64)]) -> usize {
    debug_assert!(!labels.is_empty());
    let mut best = labels[0];
    for &(field, weight) in &labels[1..] {
        if weight > best.1 {
            best = (field, weight);
        }
    }
    best.0
}

/// A funded award.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grant {
    pub id: String,
    pub agency: String,
    pub country: String,
    pub start_year: i32,
    pub amount_usd: Option<f64>,
    pub abstract_text: String,
}

/// Field labels and year of a paper outside the analysis set, retained for
/// reference/citer resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalPaper {
    pub year: Option<i32>,
    pub field_labels: Vec<(usize, f64)>,
}

/// Per-file row accounting: `loaded + dropped = rows`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileStats {
    pub rows: u64,
    pub loaded: u64,
    pub dropped: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub record_id: String,
    pub rule: String,
}

/// Load/drop accounting for one ingest run, emitted as `report.json`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub papers: FileStats,
    pub grants: FileStats,
    pub links: FileStats,
    /// Rule name -> occurrence count. Record-level rules count toward the
    /// file `dropped` tallies; keys prefixed `edge.` are dropped edges on
    /// otherwise-loaded records.
    pub counts: BTreeMap<String, u64>,
    pub rejections: Vec<Rejection>,
}

impl ValidationReport {
    pub(crate) fn bump(&mut self, rule: &str) {
        *self.counts.entry(rule.to_string()).or_insert(0) += 1;
    }

    pub(crate) fn reject(&mut self, record_id: &str, rule: &str) {
        self.bump(rule);
        self.rejections.push(Rejection {
            record_id: record_id.to_string(),
            rule: rule.to_string(),
        });
    }
}

/// The query-ready corpus. `papers`, `grants` and `links` preserve input
/// order so that identical inputs serialize byte-identically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusStore {
    pub taxonomy: FieldTaxonomy,
    pub papers: Vec<Paper>,
    pub grants: Vec<Grant>,
    /// (grant_id, paper_id), deduplicated, both ends resolved.
    pub links: Vec<(String, String)>,
    /// Paper records outside the analysis set, keyed by id.
    pub externals: BTreeMap<String, ExternalPaper>,

    #[serde(skip)]
    paper_index: HashMap<String, usize>,
    #[serde(skip)]
    grant_index: HashMap<String, usize>,
    #[serde(skip)]
    grants_of_paper: HashMap<usize, Vec<usize>>,
    #[serde(skip)]
    papers_of_grant: HashMap<usize, Vec<usize>>,
}

impl CorpusStore {
    pub fn new(
        taxonomy: FieldTaxonomy,
        papers: Vec<Paper>,
        grants: Vec<Grant>,
        links: Vec<(String, String)>,
        externals: BTreeMap<String, ExternalPaper>,
    ) -> Self {
        let mut store = Self {
            taxonomy,
            papers,
            grants,
            links,
            externals,
            paper_index: HashMap::new(),
            grant_index: HashMap::new(),
            grants_of_paper: HashMap::new(),
            papers_of_grant: HashMap::new(),
        };
        store.rebuild_indexes();
        store
    }

    /// Rebuild the lookup tables; must be called after deserialization.
    pub fn rebuild_indexes(&mut self) {
        self.paper_index = self
            .papers
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.clone(), i))
            .collect();
        self.grant_index = self
            .grants
            .iter()
            .enumerate()
            .map(|(i, g)| (g.id.clone(), i))
            .collect();
        self.grants_of_paper.clear();
        self.papers_of_grant.clear();
        for (grant_id, paper_id) in &self.links {
            let (Some(&g), Some(&p)) = (
                self.grant_index.get(grant_id),
                self.paper_index.get(paper_id),
            ) else {
                continue;
            };
            self.grants_of_paper.entry(p).or_default().push(g);
            self.papers_of_grant.entry(g).or_default().push(p);
        }
    }

    pub fn k(&self) -> usize {
        self.taxonomy.k()
    }

    pub fn paper(&self, id: &str) -> Option<&Paper> {
        self.paper_index.get(id).map(|&i| &self.papers[i])
    }

    pub fn grant(&self, id: &str) -> Option<&Grant> {
        self.grant_index.get(id).map(|&i| &self.grants[i])
    }

    /// Grants supporting a paper, in link order.
    pub fn grants_of(&self, paper_id: &str) -> Vec<&Grant> {
        let Some(&p) = self.paper_index.get(paper_id) else {
            return Vec::new();
        };
        self.grants_of_paper
            .get(&p)
            .map(|gs| gs.iter().map(|&g| &self.grants[g]).collect())
            .unwrap_or_default()
    }

    /// Papers supported by a grant, in link order.
    pub fn papers_of(&self, grant_id: &str) -> Vec<&Paper> {
        let Some(&g) = self.grant_index.get(grant_id) else {
            return Vec::new();
        };
        self.papers_of_grant
            .get(&g)
            .map(|ps| ps.iter().map(|&p| &self.papers[p]).collect())
            .unwrap_or_default()
    }

    /// Field labels of any known paper id: analysis set first, then the
    /// external records. `None` for wholly unknown ids.
    pub fn resolve_labels(&self, paper_id: &str) -> Option<&[(usize, f64)]> {
        if let Some(paper) = self.paper(paper_id) {
            return Some(&paper.field_labels);
        }
        self.externals
            .get(paper_id)
            .map(|e| e.field_labels.as_slice())
    }

    /// Primary field of any known paper id.
    pub fn resolve_primary_field(&self, paper_id: &str) -> Option<usize> {
        self.resolve_labels(paper_id).and_then(|labels| {
            (!labels.is_empty()).then(|| primary_field(labels))
        })
    }

    pub fn save_json(&self, path: &std::path::Path) -> Result<()> {
        let file = std::fs::File::create(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        serde_json::to_writer(std::io::BufWriter::new(file), self)
            .map_err(|e| Error::InvalidParameter(format!("serializing corpus: {e}")))
    }

    pub fn load_json(path: &std::path::Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut store: CorpusStore = serde_json::from_reader(std::io::BufReader::new(file))
            .map_err(|e| Error::InvalidParameter(format!("parsing corpus: {e}")))?;
        store.rebuild_indexes();
        Ok(store)
    }
}
