//! Flat-file ingest: JSONL papers/grants/links plus a TSV taxonomy.
//!
//! Malformed records are rejected per line and logged in the
//! [`ValidationReport`]; only an unreadable taxonomy or a duplicate id
//! aborts the batch.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use super::{
    Citer, CorpusStore, ExternalPaper, FieldTaxonomy, Grant, Paper, ValidationReport,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct IngestOptions {
    /// Grant start-year window, inclusive on both ends.
    pub window: (i32, i32),
    /// Keep only papers with at least one reference and one citer.
    pub analysis_filter: bool,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            window: (1985, 2009),
            analysis_filter: true,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FieldLabel {
    Weighted(usize, f64),
    Bare(usize),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CiteEntry {
    WithYear(String, Option<i32>),
    Bare(String),
}

#[derive(Deserialize)]
struct PaperRecord {
    id: String,
    year: Option<i32>,
    #[serde(rename = "abstract", default)]
    abstract_text: Option<String>,
    #[serde(default)]
    fields: Vec<FieldLabel>,
    #[serde(default)]
    refs: Vec<String>,
    #[serde(default)]
    cites: Vec<CiteEntry>,
    n_authors: Option<u32>,
    n_institutes: Option<u32>,
    max_author_cites: Option<u64>,
}

#[derive(Deserialize)]
struct GrantRecord {
    id: String,
    #[serde(default)]
    agency: String,
    #[serde(default)]
    country: String,
    year: Option<i32>,
    amount_usd: Option<f64>,
    #[serde(rename = "abstract", default)]
    abstract_text: Option<String>,
}

#[derive(Deserialize)]
struct LinkRecord {
    grant: String,
    paper: String,
}

/// Load the corpus from flat files into a query-ready store.
pub fn ingest_corpus(
    paper_path: &Path,
    grant_path: &Path,
    link_path: &Path,
    taxonomy_path: &Path,
    opts: &IngestOptions,
) -> Result<(CorpusStore, ValidationReport)> {
    let taxonomy = load_taxonomy(taxonomy_path)?;
    let mut report = ValidationReport::default();

    let (papers, externals) = load_papers(paper_path, &taxonomy, opts, &mut report)?;
    let grants = load_grants(grant_path, opts, &mut report)?;
    let links = load_links(link_path, &papers, &grants, &mut report)?;

    let store = CorpusStore::new(taxonomy, papers, grants, links, externals);
    Ok((store, report))
}

/// TSV taxonomy: `field_id<TAB>name`, dense ids 0..K-1.
pub fn load_taxonomy(path: &Path) -> Result<FieldTaxonomy> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut entries: Vec<(usize, String)> = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let (id, name) = line.split_once('\t').ok_or_else(|| {
            Error::Taxonomy(format!("{}:{}: expected field_id<TAB>name", path.display(), lineno + 1))
        })?;
        let id: usize = id.trim().parse().map_err(|_| {
            Error::Taxonomy(format!("{}:{}: bad field id `{id}`", path.display(), lineno + 1))
        })?;
        entries.push((id, name.trim().to_string()));
    }
    entries.sort_by_key(|(id, _)| *id);
    for (expected, (id, _)) in entries.iter().enumerate() {
        if *id != expected {
            return Err(Error::Taxonomy(format!(
                "field ids must be dense 0..K-1; expected {expected}, found {id}"
            )));
        }
    }
    FieldTaxonomy::new(entries.into_iter().map(|(_, name)| name).collect())
}

fn jsonl_lines(path: &Path) -> Result<impl Iterator<Item = std::io::Result<String>>> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(BufReader::new(file).lines())
}

fn load_papers(
    path: &Path,
    taxonomy: &FieldTaxonomy,
    opts: &IngestOptions,
    report: &mut ValidationReport,
) -> Result<(Vec<Paper>, BTreeMap<String, ExternalPaper>)> {
    let mut papers = Vec::new();
    let mut externals = BTreeMap::new();
    let mut seen: HashSet<String> = HashSet::new();

    for line in jsonl_lines(path)? {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        report.papers.rows += 1;
        let record: PaperRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(_) => {
                report.papers.dropped += 1;
                report.reject("?", "paper.parse_error");
                continue;
            }
        };
        if !seen.insert(record.id.clone()) {
            return Err(Error::DuplicateId(record.id));
        }
        match validate_paper(record, taxonomy, report) {
            Ok(paper) => {
                let keep = !opts.analysis_filter
                    || (!paper.references.is_empty() && !paper.citers.is_empty());
                if keep {
                    report.papers.loaded += 1;
                    papers.push(paper);
                } else {
                    report.papers.dropped += 1;
                    report.bump("paper.analysis_filter");
                    externals.insert(
                        paper.id.clone(),
                        ExternalPaper {
                            year: Some(paper.year),
                            field_labels: paper.field_labels,
                        },
                    );
                }
            }
            Err(rule) => {
                report.papers.dropped += 1;
                // the id is known at this point; rejection was logged inside
                let _ = rule;
            }
        }
    }
    Ok((papers, externals))
}

// Returns Err(rule) after logging the rejection.
fn validate_paper(
    record: PaperRecord,
    taxonomy: &FieldTaxonomy,
    report: &mut ValidationReport,
) -> std::result::Result<Paper, String> {
    let id = record.id;
    let fail = |rule: &str, report: &mut ValidationReport| {
        report.reject(&id, rule);
        Err(rule.to_string())
    };

    let Some(year) = record.year else {
        return fail("paper.missing_year", report);
    };
    if record.fields.is_empty() {
        return fail("paper.missing_labels", report);
    }

    // merge duplicate field ids, default bare labels to uniform weight
    let mut weights: BTreeMap<usize, f64> = BTreeMap::new();
    let uniform = 1.0 / record.fields.len() as f64;
    for label in &record.fields {
        let (field, w) = match label {
            FieldLabel::Weighted(f, w) => (*f, *w),
            FieldLabel::Bare(f) => (*f, uniform),
        };
        if field >= taxonomy.k() {
            return fail("paper.unknown_field", report);
        }
        if w < 0.0 || !w.is_finite() {
            return fail("paper.bad_label_weight", report);
        }
        *weights.entry(field).or_insert(0.0) += w;
    }
    let total: f64 = weights.values().sum();
    if total <= 0.0 {
        return fail("paper.bad_label_weight", report);
    }
    let field_labels: Vec<(usize, f64)> =
        weights.into_iter().map(|(f, w)| (f, w / total)).collect();

    let n_authors = record.n_authors.unwrap_or(1);
    if n_authors == 0 {
        return fail("paper.zero_authors", report);
    }

    let mut references = Vec::new();
    let mut ref_seen = HashSet::new();
    for r in record.refs {
        if r == id {
            report.bump("edge.self_reference");
            continue;
        }
        if ref_seen.insert(r.clone()) {
            references.push(r);
        }
    }

    let mut citers = Vec::new();
    let mut citer_seen = HashSet::new();
    for c in record.cites {
        let (cid, cyear) = match c {
            CiteEntry::WithYear(cid, cyear) => (cid, cyear),
            CiteEntry::Bare(cid) => (cid, None),
        };
        if cid == id {
            report.bump("edge.self_citation");
            continue;
        }
        if let Some(cy) = cyear {
            if cy < year {
                report.reject(&id, "edge.citer_year_before_publication");
                continue;
            }
        }
        if citer_seen.insert(cid.clone()) {
            citers.push(Citer {
                id: cid,
                year: cyear,
            });
        }
    }

    Ok(Paper {
        id,
        year,
        abstract_text: record.abstract_text.unwrap_or_default(),
        field_labels,
        references,
        citers,
        n_authors,
        n_institutes: record.n_institutes.unwrap_or(0),
        max_author_citations: record.max_author_cites,
    })
}

fn load_grants(
    path: &Path,
    opts: &IngestOptions,
    report: &mut ValidationReport,
) -> Result<Vec<Grant>> {
    let mut grants = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let (year_min, year_max) = opts.window;

    for line in jsonl_lines(path)? {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        report.grants.rows += 1;
        let record: GrantRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(_) => {
                report.grants.dropped += 1;
                report.reject("?", "grant.parse_error");
                continue;
            }
        };
        if !seen.insert(record.id.clone()) {
            return Err(Error::DuplicateId(record.id));
        }
        let Some(year) = record.year else {
            report.grants.dropped += 1;
            report.reject(&record.id, "grant.missing_year");
            continue;
        };
        if year < year_min || year > year_max {
            report.grants.dropped += 1;
            report.reject(&record.id, "grant.outside_window");
            continue;
        }
        if let Some(a) = record.amount_usd {
            if a < 0.0 || !a.is_finite() {
                report.grants.dropped += 1;
                report.reject(&record.id, "grant.bad_amount");
                continue;
            }
        }
        report.grants.loaded += 1;
        grants.push(Grant {
            id: record.id,
            agency: record.agency,
            country: record.country,
            start_year: year,
            amount_usd: record.amount_usd,
            abstract_text: record.abstract_text.unwrap_or_default(),
        });
    }
    Ok(grants)
}

fn load_links(
    path: &Path,
    papers: &[Paper],
    grants: &[Grant],
    report: &mut ValidationReport,
) -> Result<Vec<(String, String)>> {
    let paper_ids: HashMap<&str, ()> = papers.iter().map(|p| (p.id.as_str(), ())).collect();
    let grant_ids: HashMap<&str, ()> = grants.iter().map(|g| (g.id.as_str(), ())).collect();
    let mut links = Vec::new();
    let mut seen: HashSet<(String, String)> = HashSet::new();

    for line in jsonl_lines(path)? {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        report.links.rows += 1;
        let record: LinkRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(_) => {
                report.links.dropped += 1;
                report.reject("?", "link.parse_error");
                continue;
            }
        };
        if !grant_ids.contains_key(record.grant.as_str()) {
            report.links.dropped += 1;
            report.reject(&record.grant, "link.unresolved_grant");
            continue;
        }
        if !paper_ids.contains_key(record.paper.as_str()) {
            report.links.dropped += 1;
            report.reject(&record.paper, "link.unresolved_paper");
            continue;
        }
        let pair = (record.grant, record.paper);
        if !seen.insert(pair.clone()) {
            report.links.dropped += 1;
            report.bump("link.duplicate");
            continue;
        }
        report.links.loaded += 1;
        links.push(pair);
    }
    Ok(links)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
        let path = dir.join(name);
        let mut f = File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    fn tmpdir(tag: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("idr-ingest-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    const TAXONOMY: &str = "0\tMathematics\n1\tBiology\n2\tEconomics\n";

    fn paper_line(id: &str, refs: &[&str], cites: &[(&str, i32)]) -> String {
        let refs: Vec<String> = refs.iter().map(|r| format!("\"{r}\"")).collect();
        let cites: Vec<String> = cites
            .iter()
            .map(|(c, y)| format!("[\"{c}\",{y}]"))
            .collect();
        format!(
            "{{\"id\":\"{id}\",\"year\":2000,\"abstract\":\"x\",\"fields\":[[0,1.0]],\"refs\":[{}],\"cites\":[{}],\"n_authors\":2,\"n_institutes\":1}}",
            refs.join(","),
            cites.join(",")
        )
    }

    #[test]
    fn analysis_filter_drops_reference_free_papers() {
        let dir = tmpdir("filter");
        let papers = format!(
            "{}\n{}\n",
            paper_line("p1", &[], &[("c1", 2001), ("c2", 2002), ("c3", 2003)]),
            paper_line("p2", &["x1"], &[("c1", 2001)]),
        );
        let pp = write_file(&dir, "papers.jsonl", &papers);
        let gp = write_file(&dir, "grants.jsonl", "");
        let lp = write_file(&dir, "links.jsonl", "");
        let tp = write_file(&dir, "taxonomy.tsv", TAXONOMY);
        let (store, report) =
            ingest_corpus(&pp, &gp, &lp, &tp, &IngestOptions::default()).unwrap();
        assert_eq!(store.papers.len(), 1);
        assert_eq!(store.papers[0].id, "p2");
        assert_eq!(report.papers.rows, 2);
        assert_eq!(report.papers.loaded, 1);
        assert_eq!(report.papers.dropped, 1);
        assert_eq!(report.counts["paper.analysis_filter"], 1);
        // dropped papers stay resolvable
        assert!(store.resolve_labels("p1").is_some());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn empty_link_file_loads_with_zero_links() {
        let dir = tmpdir("nolinks");
        let pp = write_file(&dir, "papers.jsonl", &paper_line("p1", &["r"], &[("c", 2001)]));
        let gp = write_file(
            &dir,
            "grants.jsonl",
            "{\"id\":\"g1\",\"agency\":\"NSF\",\"country\":\"US\",\"year\":1999,\"amount_usd\":1000.0,\"abstract\":\"a\"}\n",
        );
        let lp = write_file(&dir, "links.jsonl", "");
        let tp = write_file(&dir, "taxonomy.tsv", TAXONOMY);
        let (store, report) =
            ingest_corpus(&pp, &gp, &lp, &tp, &IngestOptions::default()).unwrap();
        assert!(store.links.is_empty());
        assert_eq!(report.links.rows, 0);
        assert_eq!(report.links.loaded, 0);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn unresolved_link_is_rejected_with_row() {
        let dir = tmpdir("links");
        let papers = format!(
            "{}\n{}\n{}\n",
            paper_line("p1", &["r"], &[("c", 2001)]),
            paper_line("p2", &["r"], &[("c", 2001)]),
            paper_line("p3", &["r"], &[("c", 2001)]),
        );
        let pp = write_file(&dir, "papers.jsonl", &papers);
        let gp = write_file(
            &dir,
            "grants.jsonl",
            "{\"id\":\"g1\",\"agency\":\"NSF\",\"country\":\"US\",\"year\":1999,\"abstract\":\"a\"}\n",
        );
        let lp = write_file(
            &dir,
            "links.jsonl",
            "{\"grant\":\"g1\",\"paper\":\"p1\"}\n{\"grant\":\"g1\",\"paper\":\"p2\"}\n{\"grant\":\"g1\",\"paper\":\"nope\"}\n",
        );
        let tp = write_file(&dir, "taxonomy.tsv", TAXONOMY);
        let (store, report) =
            ingest_corpus(&pp, &gp, &lp, &tp, &IngestOptions::default()).unwrap();
        assert_eq!(store.links.len(), 2);
        assert_eq!(report.links.loaded, 2);
        assert_eq!(report.links.dropped, 1);
        assert_eq!(
            report
                .rejections
                .iter()
                .filter(|r| r.rule == "link.unresolved_paper")
                .count(),
            1
        );
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn duplicate_paper_id_is_fatal() {
        let dir = tmpdir("dup");
        let papers = format!(
            "{}\n{}\n",
            paper_line("p1", &["r"], &[("c", 2001)]),
            paper_line("p1", &["r"], &[("c", 2001)]),
        );
        let pp = write_file(&dir, "papers.jsonl", &papers);
        let gp = write_file(&dir, "grants.jsonl", "");
        let lp = write_file(&dir, "links.jsonl", "");
        let tp = write_file(&dir, "taxonomy.tsv", TAXONOMY);
        let err = ingest_corpus(&pp, &gp, &lp, &tp, &IngestOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DuplicateId(id) if id == "p1"));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn grants_outside_window_are_dropped_and_counted() {
        let dir = tmpdir("window");
        let pp = write_file(&dir, "papers.jsonl", &paper_line("p1", &["r"], &[("c", 2001)]));
        let gp = write_file(
            &dir,
            "grants.jsonl",
            "{\"id\":\"g1\",\"agency\":\"NSF\",\"country\":\"US\",\"year\":1980,\"abstract\":\"a\"}\n{\"id\":\"g2\",\"agency\":\"NIH\",\"country\":\"US\",\"year\":1995,\"abstract\":\"b\"}\n",
        );
        let lp = write_file(&dir, "links.jsonl", "");
        let tp = write_file(&dir, "taxonomy.tsv", TAXONOMY);
        let (store, report) =
            ingest_corpus(&pp, &gp, &lp, &tp, &IngestOptions::default()).unwrap();
        assert_eq!(store.grants.len(), 1);
        assert_eq!(store.grants[0].id, "g2");
        assert_eq!(report.counts["grant.outside_window"], 1);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn self_edges_and_backward_citations_are_stripped() {
        let dir = tmpdir("edges");
        let papers = "{\"id\":\"p1\",\"year\":2000,\"abstract\":\"\",\"fields\":[0],\"refs\":[\"p1\",\"r1\"],\"cites\":[[\"p1\",2001],[\"c1\",1999],[\"c2\",2005]],\"n_authors\":1}\n";
        let pp = write_file(&dir, "papers.jsonl", papers);
        let gp = write_file(&dir, "grants.jsonl", "");
        let lp = write_file(&dir, "links.jsonl", "");
        let tp = write_file(&dir, "taxonomy.tsv", TAXONOMY);
        let (store, report) =
            ingest_corpus(&pp, &gp, &lp, &tp, &IngestOptions::default()).unwrap();
        let p = store.paper("p1").unwrap();
        assert_eq!(p.references, vec!["r1".to_string()]);
        assert_eq!(p.citers.len(), 1);
        assert_eq!(p.citers[0].id, "c2");
        assert_eq!(report.counts["edge.self_reference"], 1);
        assert_eq!(report.counts["edge.self_citation"], 1);
        assert_eq!(report.counts["edge.citer_year_before_publication"], 1);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn ingest_is_idempotent() {
        let dir = tmpdir("idem");
        let papers = format!(
            "{}\n{}\n",
            paper_line("p1", &["p2"], &[("p2", 2001)]),
            paper_line("p2", &["p1"], &[("p1", 2000)]),
        );
        let pp = write_file(&dir, "papers.jsonl", &papers);
        let gp = write_file(
            &dir,
            "grants.jsonl",
            "{\"id\":\"g1\",\"agency\":\"NSF\",\"country\":\"US\",\"year\":1999,\"abstract\":\"a\"}\n",
        );
        let lp = write_file(&dir, "links.jsonl", "{\"grant\":\"g1\",\"paper\":\"p1\"}\n");
        let tp = write_file(&dir, "taxonomy.tsv", TAXONOMY);
        let opts = IngestOptions::default();
        let (s1, _) = ingest_corpus(&pp, &gp, &lp, &tp, &opts).unwrap();
        let (s2, _) = ingest_corpus(&pp, &gp, &lp, &tp, &opts).unwrap();
        assert_eq!(
            serde_json::to_vec(&s1).unwrap(),
            serde_json::to_vec(&s2).unwrap()
        );
        std::fs::remove_dir_all(&dir).ok();
    }
}
