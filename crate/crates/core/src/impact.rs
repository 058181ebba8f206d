//! Citation impact: 10-year citation counts, field-year normalization,
//! top-5% hit flags, and the in-field/out-field citation decomposition with
//! per-stratum baselines.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusStore, Paper};
use crate::stats;

/// (primary field, publication year) — the normalization stratum.
pub type Stratum = (usize, i32);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImpactRecord {
    pub paper_id: String,
    pub year: i32,
    pub primary_field: usize,
    /// Citations with citing year within `[year, year + 10]`.
    pub c10: u64,
    /// Citers skipped from `c10` for lack of a citing year.
    pub citers_without_year: u64,
    /// `c10` divided by the stratum mean (0 in all-zero strata).
    pub c10_norm: f64,
    /// Set when the stratum mean was zero.
    pub degenerate_stratum: bool,
    /// Top-`top_fraction` of citations within the stratum.
    pub hit: bool,
    /// Stratum too small to realize any hit at the configured fraction.
    pub low_n_stratum: bool,
    /// Citations from papers whose primary field equals this paper's.
    pub in_field: u64,
    pub out_field: u64,
    /// Citers with no resolvable field labels.
    pub excluded_citers: u64,
}

impl ImpactRecord {
    pub fn stratum(&self) -> Stratum {
        (self.primary_field, self.year)
    }
}

/// 10-year citation count, inclusive of year + 10. Citers lacking a year
/// are excluded and tallied separately.
pub fn c10(paper: &Paper) -> (u64, u64) {
    let mut count = 0;
    let mut missing = 0;
    for citer in &paper.citers {
        match citer.year {
            Some(y) if y >= paper.year && y <= paper.year + 10 => count += 1,
            Some(_) => {}
            None => missing += 1,
        }
    }
    (count, missing)
}

/// Classify citers as in-field/out-field by primary field; citers without
/// resolvable labels are excluded and tallied.
pub fn infield_outfield(paper: &Paper, store: &CorpusStore) -> (u64, u64, u64) {
    let own = paper.primary_field();
    let mut in_field = 0;
    let mut out_field = 0;
    let mut excluded = 0;
    for citer in &paper.citers {
        match store.resolve_primary_field(&citer.id) {
            Some(f) if f == own => in_field += 1,
            Some(_) => out_field += 1,
            None => excluded += 1,
        }
    }
    (in_field, out_field, excluded)
}

/// Expected in-field/out-field citations per stratum (the dashed-line
/// baseline): the stratum mean of each component.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StratumBaseline {
    pub mean_in_field: f64,
    pub mean_out_field: f64,
    pub n: usize,
}

/// Full impact pass: per-paper counts, then stratum statistics, then
/// normalization and hit flags.
pub fn compute_impact(store: &CorpusStore, top_fraction: f64) -> Vec<ImpactRecord> {
    let mut records: Vec<ImpactRecord> = store
        .papers
        .iter()
        .map(|paper| {
            let (c10, missing_year) = c10(paper);
            let (in_field, out_field, excluded) = infield_outfield(paper, store);
            ImpactRecord {
                paper_id: paper.id.clone(),
                year: paper.year,
                primary_field: paper.primary_field(),
                c10,
                citers_without_year: missing_year,
                c10_norm: 0.0,
                degenerate_stratum: false,
                hit: false,
                low_n_stratum: false,
                in_field,
                out_field,
                excluded_citers: excluded,
            }
        })
        .collect();
    normalize_c10(&mut records);
    hit_flags(&mut records, top_fraction);
    records
}

fn strata_members(records: &[ImpactRecord]) -> BTreeMap<Stratum, Vec<usize>> {
    let mut map: BTreeMap<Stratum, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        map.entry(r.stratum()).or_default().push(i);
    }
    map
}

/// Fill `c10_norm = c10 / mean(c10 in stratum)`; all-zero strata yield 0
/// with the degeneracy flag set.
pub fn normalize_c10(records: &mut [ImpactRecord]) {
    for (_, members) in strata_members(records) {
        let mean =
            members.iter().map(|&i| records[i].c10 as f64).sum::<f64>() / members.len() as f64;
        for i in members {
            if mean == 0.0 {
                records[i].c10_norm = 0.0;
                records[i].degenerate_stratum = true;
            } else {
                records[i].c10_norm = records[i].c10 as f64 / mean;
            }
        }
    }
}

/// Flag papers strictly above the nearest-rank `(1 - top_fraction)`
/// quantile of `c10` within their stratum. Under ties at the threshold the
/// realized hit share never exceeds the target fraction.
pub fn hit_flags(records: &mut [ImpactRecord], top_fraction: f64) {
    assert!(
        top_fraction > 0.0 && top_fraction < 1.0,
        "top fraction must be in (0,1)"
    );
    for (_, members) in strata_members(records) {
        let values: Vec<f64> = members.iter().map(|&i| records[i].c10 as f64).collect();
        let threshold = stats::nearest_rank(&stats::sorted(&values), 1.0 - top_fraction);
        let low_n = (members.len() as f64) < 1.0 / top_fraction;
        for i in members {
            records[i].hit = (records[i].c10 as f64) > threshold;
            records[i].low_n_stratum = low_n;
        }
    }
}

/// Per-stratum mean in-field/out-field citations.
pub fn stratum_baselines(records: &[ImpactRecord]) -> BTreeMap<Stratum, StratumBaseline> {
    strata_members(records)
        .into_iter()
        .map(|(stratum, members)| {
            let n = members.len();
            let mean_in =
                members.iter().map(|&i| records[i].in_field as f64).sum::<f64>() / n as f64;
            let mean_out =
                members.iter().map(|&i| records[i].out_field as f64).sum::<f64>() / n as f64;
            (
                stratum,
                StratumBaseline {
                    mean_in_field: mean_in,
                    mean_out_field: mean_out,
                    n,
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Citer, ExternalPaper, FieldTaxonomy};
    use std::collections::BTreeMap;

    fn paper_with_citers(id: &str, year: i32, citer_years: &[Option<i32>]) -> Paper {
        Paper {
            id: id.into(),
            year,
            abstract_text: String::new(),
            field_labels: vec![(0, 1.0)],
            references: vec!["r".into()],
            citers: citer_years
                .iter()
                .enumerate()
                .map(|(i, &y)| Citer {
                    id: format!("{id}-c{i}"),
                    year: y,
                })
                .collect(),
            n_authors: 1,
            n_institutes: 0,
            max_author_citations: None,
        }
    }

    #[test]
    fn c10_window_is_inclusive_of_year_plus_ten() {
        let p = paper_with_citers("p", 2000, &[Some(2001), Some(2005), Some(2010)]);
        assert_eq!(c10(&p), (3, 0));
        let p = paper_with_citers("p", 2000, &[Some(2011)]);
        assert_eq!(c10(&p), (0, 0));
        let p = paper_with_citers("p", 2000, &[]);
        assert_eq!(c10(&p), (0, 0));
        let p = paper_with_citers("p", 2000, &[Some(2003), None]);
        assert_eq!(c10(&p), (1, 1));
    }

    fn records_from_counts(counts: &[u64]) -> Vec<ImpactRecord> {
        counts
            .iter()
            .enumerate()
            .map(|(i, &c)| ImpactRecord {
                paper_id: format!("p{i}"),
                year: 2000,
                primary_field: 0,
                c10: c,
                citers_without_year: 0,
                c10_norm: 0.0,
                degenerate_stratum: false,
                hit: false,
                low_n_stratum: false,
                in_field: 0,
                out_field: 0,
                excluded_citers: 0,
            })
            .collect()
    }

    #[test]
    fn normalization_divides_by_stratum_mean() {
        let mut records = records_from_counts(&[2, 4]);
        normalize_c10(&mut records);
        assert!((records[0].c10_norm - 2.0 / 3.0).abs() < 1e-12);
        assert!((records[1].c10_norm - 4.0 / 3.0).abs() < 1e-12);

        let mut single = records_from_counts(&[7]);
        normalize_c10(&mut single);
        assert_eq!(single[0].c10_norm, 1.0);

        let mut zeros = records_from_counts(&[0, 0, 0]);
        normalize_c10(&mut zeros);
        assert!(zeros.iter().all(|r| r.c10_norm == 0.0 && r.degenerate_stratum));
    }

    #[test]
    fn normalized_mean_is_one_per_stratum() {
        let mut records = records_from_counts(&[1, 3, 5, 7, 9, 2]);
        normalize_c10(&mut records);
        let mean: f64 =
            records.iter().map(|r| r.c10_norm).sum::<f64>() / records.len() as f64;
        assert!((mean - 1.0).abs() < 1e-9);
    }

    #[test]
    fn twenty_distinct_values_give_one_hit() {
        let counts: Vec<u64> = (1..=20).collect();
        let mut records = records_from_counts(&counts);
        hit_flags(&mut records, 0.05);
        let hits: Vec<_> = records.iter().filter(|r| r.hit).collect();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].c10, 20);
    }

    #[test]
    fn all_tied_counts_give_zero_hits() {
        let mut records = records_from_counts(&[5; 30]);
        hit_flags(&mut records, 0.05);
        assert!(records.iter().all(|r| !r.hit));
    }

    #[test]
    fn thousand_distinct_values_give_fifty_hits() {
        let counts: Vec<u64> = (1..=1000).collect();
        let mut records = records_from_counts(&counts);
        hit_flags(&mut records, 0.05);
        assert_eq!(records.iter().filter(|r| r.hit).count(), 50);
    }

    #[test]
    fn infield_outfield_classifies_by_primary_field() {
        let mut externals = BTreeMap::new();
        for (id, field) in [
            ("p-c0", 0),
            ("p-c1", 0),
            ("p-c2", 0),
            ("p-c3", 1),
            ("p-c4", 1),
        ] {
            externals.insert(
                id.to_string(),
                ExternalPaper {
                    year: Some(2001),
                    field_labels: vec![(field, 1.0)],
                },
            );
        }
        let store = CorpusStore::new(
            FieldTaxonomy::new(vec!["a".into(), "b".into()]).unwrap(),
            vec![paper_with_citers(
                "p",
                2000,
                &[Some(2001); 5],
            )],
            Vec::new(),
            Vec::new(),
            externals,
        );
        let (inf, outf, excl) = infield_outfield(&store.papers[0], &store);
        assert_eq!((inf, outf, excl), (3, 2, 0));
    }

    #[test]
    fn tied_citer_labels_resolve_deterministically() {
        let mut externals = BTreeMap::new();
        externals.insert(
            "p-c0".to_string(),
            ExternalPaper {
                year: Some(2001),
                // tie between fields 0 and 1 resolves to 0
                field_labels: vec![(0, 0.5), (1, 0.5)],
            },
        );
        let store = CorpusStore::new(
            FieldTaxonomy::new(vec!["a".into(), "b".into()]).unwrap(),
            vec![paper_with_citers("p", 2000, &[Some(2001)])],
            Vec::new(),
            Vec::new(),
            externals,
        );
        let (inf, outf, _) = infield_outfield(&store.papers[0], &store);
        assert_eq!((inf, outf), (1, 0));
    }

    #[test]
    fn baselines_average_components() {
        let mut records = records_from_counts(&[0, 0]);
        records[0].in_field = 4;
        records[0].out_field = 0;
        records[1].in_field = 0;
        records[1].out_field = 4;
        let baselines = stratum_baselines(&records);
        let b = baselines[&(0, 2000)];
        assert_eq!(b.mean_in_field, 2.0);
        assert_eq!(b.mean_out_field, 2.0);
        assert_eq!(b.n, 2);
    }

    #[test]
    fn group_minus_baseline_sums_to_zero_over_stratum() {
        let mut records = records_from_counts(&[1, 2, 3, 4]);
        for (i, r) in records.iter_mut().enumerate() {
            r.in_field = (i * 2) as u64;
            r.out_field = (7 - i) as u64;
        }
        let baselines = stratum_baselines(&records);
        let b = baselines[&(0, 2000)];
        let total_in: f64 = records
            .iter()
            .map(|r| r.in_field as f64 - b.mean_in_field)
            .sum();
        let total_out: f64 = records
            .iter()
            .map(|r| r.out_field as f64 - b.mean_out_field)
            .sum();
        assert!(total_in.abs() < 1e-12);
        assert!(total_out.abs() < 1e-12);
    }
}
