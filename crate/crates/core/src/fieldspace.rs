//! Paper field vectors from references/citations, per-field cumulative
//! knowledge vectors, and the cosine field-distance matrix.

use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusStore, Paper};
use crate::error::{Error, Result};
use crate::space::{DistanceMatrix, FieldDistribution, Provenance, cosine_distance};

/// Which edge set a paper vector is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VectorBasis {
    References,
    Citations,
}

impl VectorBasis {
    pub fn provenance(self) -> Provenance {
        match self {
            VectorBasis::References => Provenance::ReferenceBased,
            VectorBasis::Citations => Provenance::CitationBased,
        }
    }
}

impl std::str::FromStr for VectorBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "references" => Ok(VectorBasis::References),
            "citations" => Ok(VectorBasis::Citations),
            other => Err(Error::InvalidParameter(format!(
                "unknown basis `{other}` (expected references|citations)"
            ))),
        }
    }
}

/// Fraction of a paper's references (or citers) associated with each field.
/// A multi-label neighbor contributes its label weights fractionally;
/// neighbors with no known labels are skipped.
pub fn paper_field_vector(
    paper: &Paper,
    basis: VectorBasis,
    store: &CorpusStore,
) -> Result<FieldDistribution> {
    let mut weights = vec![0.0; store.k()];
    let mut resolved = 0usize;
    let mut add = |id: &str| {
        if let Some(labels) = store.resolve_labels(id) {
            for &(field, w) in labels {
                weights[field] += w;
            }
            resolved += 1;
        }
    };
    match basis {
        VectorBasis::References => paper.references.iter().for_each(|r| add(r)),
        VectorBasis::Citations => paper.citers.iter().for_each(|c| add(&c.id)),
    }
    if resolved == 0 {
        return Err(Error::NoVectorBasis {
            id: paper.id.clone(),
            mode: match basis {
                VectorBasis::References => "reference",
                VectorBasis::Citations => "citation",
            },
        });
    }
    FieldDistribution::from_weights(weights)
}

/// How papers are attributed to fields when accumulating knowledge vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    /// Whole vector to the argmax-weight field.
    #[default]
    Primary,
    /// Split across the paper's labeled fields by label weight.
    Fractional,
}

/// Cumulative per-field vectors `v_i` (sum of member papers' field vectors).
#[derive(Debug, Clone)]
pub struct FieldAggregate {
    pub basis: VectorBasis,
    /// K rows of length K.
    pub vectors: Vec<Vec<f64>>,
    /// Papers contributing to each field (fractional counts under
    /// [`Aggregation::Fractional`]).
    pub n_papers: Vec<f64>,
    /// Papers skipped for lack of a resolvable neighbor.
    pub skipped_papers: usize,
}

impl FieldAggregate {
    pub fn k(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty_field(&self, field: usize) -> bool {
        self.n_papers[field] == 0.0 || self.vectors[field].iter().all(|&x| x == 0.0)
    }
}

/// Accumulate `v_i` over all scorable papers in the store.
pub fn field_aggregates(
    store: &CorpusStore,
    basis: VectorBasis,
    aggregation: Aggregation,
) -> FieldAggregate {
    let k = store.k();
    let mut vectors = vec![vec![0.0; k]; k];
    let mut n_papers = vec![0.0; k];
    let mut skipped = 0usize;
    for paper in &store.papers {
        let Ok(p) = paper_field_vector(paper, basis, store) else {
            skipped += 1;
            continue;
        };
        match aggregation {
            Aggregation::Primary => {
                let home = paper.primary_field();
                for (acc, x) in vectors[home].iter_mut().zip(p.probs()) {
                    *acc += x;
                }
                n_papers[home] += 1.0;
            }
            Aggregation::Fractional => {
                for &(field, w) in &paper.field_labels {
                    for (acc, x) in vectors[field].iter_mut().zip(p.probs()) {
                        *acc += w * x;
                    }
                    n_papers[field] += w;
                }
            }
        }
    }
    FieldAggregate {
        basis,
        vectors,
        n_papers,
        skipped_papers: skipped,
    }
}

/// Pairwise cosine distances between the cumulative field vectors. Fields
/// with no papers are masked unavailable rather than assigned a distance.
pub fn field_distance_matrix(agg: &FieldAggregate) -> Result<DistanceMatrix> {
    let k = agg.k();
    let available: Vec<bool> = (0..k).map(|i| !agg.is_empty_field(i)).collect();
    let n_available = available.iter().filter(|&&a| a).count();
    if n_available < 2 {
        return Err(Error::TooFewFields {
            need: 2,
            found: n_available,
        });
    }
    let mut values = vec![0.0; k * k];
    for i in 0..k {
        if !available[i] {
            continue;
        }
        for j in (i + 1)..k {
            if !available[j] {
                continue;
            }
            let d = cosine_distance(&agg.vectors[i], &agg.vectors[j])?;
            values[i * k + j] = d;
            values[j * k + i] = d;
        }
    }
    DistanceMatrix::new(k, values, available, agg.basis.provenance())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Citer, ExternalPaper, FieldTaxonomy, Paper};
    use std::collections::BTreeMap;

    fn paper_with_edges(
        id: &str,
        labels: Vec<(usize, f64)>,
        refs: Vec<&str>,
        citers: Vec<&str>,
    ) -> Paper {
        Paper {
            id: id.into(),
            year: 2000,
            abstract_text: String::new(),
            field_labels: labels,
            references: refs.into_iter().map(String::from).collect(),
            citers: citers
                .into_iter()
                .map(|c| Citer {
                    id: c.into(),
                    year: Some(2001),
                })
                .collect(),
            n_authors: 1,
            n_institutes: 0,
            max_author_citations: None,
        }
    }

    fn store_with_externals(
        papers: Vec<Paper>,
        externals: Vec<(&str, Vec<(usize, f64)>)>,
    ) -> CorpusStore {
        let ext: BTreeMap<String, ExternalPaper> = externals
            .into_iter()
            .map(|(id, labels)| {
                (
                    id.to_string(),
                    ExternalPaper {
                        year: Some(1995),
                        field_labels: labels,
                    },
                )
            })
            .collect();
        CorpusStore::new(
            FieldTaxonomy::new(vec!["a".into(), "b".into()]).unwrap(),
            papers,
            Vec::new(),
            Vec::new(),
            ext,
        )
    }

    #[test]
    fn reference_fractions() {
        let store = store_with_externals(
            vec![paper_with_edges(
                "p",
                vec![(0, 1.0)],
                vec!["r1", "r2", "r3", "r4"],
                vec![],
            )],
            vec![
                ("r1", vec![(0, 1.0)]),
                ("r2", vec![(0, 1.0)]),
                ("r3", vec![(0, 1.0)]),
                ("r4", vec![(1, 1.0)]),
            ],
        );
        let p = paper_field_vector(&store.papers[0], VectorBasis::References, &store).unwrap();
        assert_eq!(p.probs(), &[0.75, 0.25]);
    }

    #[test]
    fn multi_label_neighbor_contributes_fractionally() {
        let store = store_with_externals(
            vec![paper_with_edges("p", vec![(0, 1.0)], vec!["r1", "r2"], vec![])],
            vec![("r1", vec![(0, 0.5), (1, 0.5)]), ("r2", vec![(0, 1.0)])],
        );
        let p = paper_field_vector(&store.papers[0], VectorBasis::References, &store).unwrap();
        assert_eq!(p.probs(), &[0.75, 0.25]);
    }

    #[test]
    fn single_field_references_give_unit_vector() {
        let store = store_with_externals(
            vec![paper_with_edges("p", vec![(1, 1.0)], vec!["r1", "r2"], vec![])],
            vec![("r1", vec![(0, 1.0)]), ("r2", vec![(0, 1.0)])],
        );
        let p = paper_field_vector(&store.papers[0], VectorBasis::References, &store).unwrap();
        assert_eq!(p.probs(), &[1.0, 0.0]);
    }

    #[test]
    fn unresolvable_neighbors_error() {
        let store = store_with_externals(
            vec![paper_with_edges("p", vec![(0, 1.0)], vec!["ghost"], vec![])],
            vec![],
        );
        let err =
            paper_field_vector(&store.papers[0], VectorBasis::References, &store).unwrap_err();
        assert!(matches!(err, Error::NoVectorBasis { .. }));
    }

    #[test]
    fn aggregates_sum_member_vectors() {
        // two papers in field 0 with p vectors (0.5, 0.5) and (1, 0)
        let store = store_with_externals(
            vec![
                paper_with_edges("p1", vec![(0, 1.0)], vec!["ra", "rb"], vec![]),
                paper_with_edges("p2", vec![(0, 1.0)], vec!["ra"], vec![]),
            ],
            vec![("ra", vec![(0, 1.0)]), ("rb", vec![(1, 1.0)])],
        );
        let agg = field_aggregates(&store, VectorBasis::References, Aggregation::Primary);
        assert_eq!(agg.vectors[0], vec![1.5, 0.5]);
        assert_eq!(agg.n_papers[0], 2.0);
        assert!(agg.is_empty_field(1));
    }

    #[test]
    fn empty_fields_are_masked_and_matrix_needs_two() {
        let store = store_with_externals(
            vec![paper_with_edges("p1", vec![(0, 1.0)], vec!["ra"], vec![])],
            vec![("ra", vec![(0, 1.0)])],
        );
        let agg = field_aggregates(&store, VectorBasis::References, Aggregation::Primary);
        assert!(matches!(
            field_distance_matrix(&agg),
            Err(Error::TooFewFields { found: 1, .. })
        ));
    }

    #[test]
    fn distance_matrix_from_hand_vectors() {
        let agg = FieldAggregate {
            basis: VectorBasis::References,
            vectors: vec![vec![1.0, 1.0], vec![1.0, 0.0]],
            n_papers: vec![1.0, 1.0],
            skipped_papers: 0,
        };
        let m = field_distance_matrix(&agg).unwrap();
        let expected = 1.0 - 1.0 / 2f64.sqrt();
        assert!((m.get(0, 1).unwrap() - expected).abs() < 1e-12);
        assert_eq!(m.get(0, 0), Some(0.0));
    }

    #[test]
    fn cosine_scale_invariance_in_aggregate() {
        let base = FieldAggregate {
            basis: VectorBasis::References,
            vectors: vec![vec![0.3, 0.7], vec![0.9, 0.1]],
            n_papers: vec![1.0, 1.0],
            skipped_papers: 0,
        };
        let d0 = field_distance_matrix(&base).unwrap().get(0, 1).unwrap();
        for c in [0.5, 2.0, 10.0] {
            let scaled = FieldAggregate {
                basis: VectorBasis::References,
                vectors: vec![
                    base.vectors[0].iter().map(|x| c * x).collect(),
                    base.vectors[1].clone(),
                ],
                n_papers: vec![1.0, 1.0],
                skipped_papers: 0,
            };
            let d = field_distance_matrix(&scaled).unwrap().get(0, 1).unwrap();
            assert!((d - d0).abs() < 1e-12, "scale {c}");
        }
    }
}
