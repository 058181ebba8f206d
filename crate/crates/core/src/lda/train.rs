//! Collapsed Gibbs training with per-document label constraints.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use super::{LdaModel, LdaParams, Vocabulary};
use crate::corpus::CorpusStore;
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::text;

/// A training document: raw abstract text plus its observed field labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDoc {
    pub id: String,
    pub text: String,
    pub labels: Vec<usize>,
}

/// Papers eligible for training: at least one field label and an abstract of
/// at least `min_words` whitespace-separated words.
pub fn build_training_set(store: &CorpusStore, min_words: usize) -> Result<Vec<LabeledDoc>> {
    let docs: Vec<LabeledDoc> = store
        .papers
        .iter()
        .filter(|p| !p.field_labels.is_empty() && text::word_count(&p.abstract_text) >= min_words)
        .map(|p| LabeledDoc {
            id: p.id.clone(),
            text: p.abstract_text.clone(),
            labels: p.field_labels.iter().map(|&(f, _)| f).collect(),
        })
        .collect();
    if docs.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    Ok(docs)
}

struct Sampler {
    k: usize,
    v: usize,
    alpha: f64,
    eta: f64,
    tokens: Vec<Vec<usize>>,
    labels: Vec<Vec<usize>>,
    /// Slot into the document's label list, per token.
    z: Vec<Vec<usize>>,
    /// Per document, counts parallel to its label list.
    n_doc: Vec<Vec<u32>>,
    n_topic_word: Vec<Vec<u64>>,
    n_topic: Vec<u64>,
}

impl Sampler {
    fn init(
        tokens: Vec<Vec<usize>>,
        labels: Vec<Vec<usize>>,
        k: usize,
        v: usize,
        alpha: f64,
        eta: f64,
        rng: &mut impl Rng,
    ) -> Self {
        let mut z = Vec::with_capacity(tokens.len());
        let mut n_doc = Vec::with_capacity(tokens.len());
        let mut n_topic_word = vec![vec![0u64; v]; k];
        let mut n_topic = vec![0u64; k];
        for (doc, doc_labels) in tokens.iter().zip(&labels) {
            let mut zd = Vec::with_capacity(doc.len());
            let mut nd = vec![0u32; doc_labels.len()];
            for &w in doc {
                let slot = rng.random_range(0..doc_labels.len());
                zd.push(slot);
                nd[slot] += 1;
                let topic = doc_labels[slot];
                n_topic_word[topic][w] += 1;
                n_topic[topic] += 1;
            }
            z.push(zd);
            n_doc.push(nd);
        }
        Self {
            k,
            v,
            alpha,
            eta,
            tokens,
            labels,
            z,
            n_doc,
            n_topic_word,
            n_topic,
        }
    }

    /// One exact sweep over every token.
    fn sweep(&mut self, rng: &mut impl Rng) {
        let veta = self.v as f64 * self.eta;
        let mut weights: Vec<f64> = Vec::new();
        for d in 0..self.tokens.len() {
            let doc_labels = &self.labels[d];
            if doc_labels.len() == 1 {
                continue; // the constraint pins every assignment
            }
            for i in 0..self.tokens[d].len() {
                let w = self.tokens[d][i];
                let old_slot = self.z[d][i];
                let old_topic = doc_labels[old_slot];
                self.n_doc[d][old_slot] -= 1;
                self.n_topic_word[old_topic][w] -= 1;
                self.n_topic[old_topic] -= 1;

                weights.clear();
                let mut total = 0.0;
                for (slot, &topic) in doc_labels.iter().enumerate() {
                    let weight = (self.n_doc[d][slot] as f64 + self.alpha)
                        * (self.n_topic_word[topic][w] as f64 + self.eta)
                        / (self.n_topic[topic] as f64 + veta);
                    total += weight;
                    weights.push(weight);
                }
                let mut u = rng.random::<f64>() * total;
                let mut new_slot = weights.len() - 1;
                for (slot, &weight) in weights.iter().enumerate() {
                    u -= weight;
                    if u <= 0.0 {
                        new_slot = slot;
                        break;
                    }
                }

                let new_topic = doc_labels[new_slot];
                self.z[d][i] = new_slot;
                self.n_doc[d][new_slot] += 1;
                self.n_topic_word[new_topic][w] += 1;
                self.n_topic[new_topic] += 1;
            }
        }
        debug_assert!(self.counts_consistent());
    }

    /// Sharded sweep: each shard samples against a frozen copy of the
    /// global counts, then the deltas reconcile. Approximate collapsed
    /// Gibbs; not bit-compatible with `sweep`.
    fn sweep_parallel(&mut self, threads: usize, seed: u64, sweep_index: usize) {
        let snapshot_word = self.n_topic_word.clone();
        let snapshot_topic = self.n_topic.clone();
        let veta = self.v as f64 * self.eta;
        let alpha = self.alpha;
        let eta = self.eta;

        let n_docs = self.tokens.len();
        let chunk = n_docs.div_ceil(threads);
        let tokens = &self.tokens;
        let labels = &self.labels;

        struct ShardResult {
            start: usize,
            z: Vec<Vec<usize>>,
            n_doc: Vec<Vec<u32>>,
            deltas: Vec<(usize, usize, i32)>,
        }

        let shards: Vec<(usize, Vec<Vec<usize>>, Vec<Vec<u32>>)> = self
            .z
            .chunks(chunk)
            .zip(self.n_doc.chunks(chunk))
            .enumerate()
            .map(|(s, (z, nd))| (s * chunk, z.to_vec(), nd.to_vec()))
            .collect();

        let results: Vec<ShardResult> = shards
            .into_par_iter()
            .map(|(start, mut z, mut n_doc)| {
                let mut rng = substream(seed, &format!("train-sweep{sweep_index}-doc{start}"));
                let mut deltas = Vec::new();
                let mut weights: Vec<f64> = Vec::new();
                for (local, (zd, nd)) in z.iter_mut().zip(n_doc.iter_mut()).enumerate() {
                    let d = start + local;
                    let doc_labels = &labels[d];
                    if doc_labels.len() == 1 {
                        continue;
                    }
                    for (i, &w) in tokens[d].iter().enumerate() {
                        let old_slot = zd[i];
                        let old_topic = doc_labels[old_slot];
                        nd[old_slot] -= 1;

                        weights.clear();
                        let mut total = 0.0;
                        for (slot, &topic) in doc_labels.iter().enumerate() {
                            // stale global counts; the shard's own removal
                            // is reflected only through n_doc
                            let exclude = u64::from(topic == old_topic);
                            let weight = (nd[slot] as f64 + alpha)
                                * ((snapshot_word[topic][w] - exclude.min(snapshot_word[topic][w]))
                                    as f64
                                    + eta)
                                / ((snapshot_topic[topic] - exclude.min(snapshot_topic[topic]))
                                    as f64
                                    + veta);
                            total += weight;
                            weights.push(weight);
                        }
                        let mut u = rng.random::<f64>() * total;
                        let mut new_slot = weights.len() - 1;
                        for (slot, &weight) in weights.iter().enumerate() {
                            u -= weight;
                            if u <= 0.0 {
                                new_slot = slot;
                                break;
                            }
                        }

                        let new_topic = doc_labels[new_slot];
                        zd[i] = new_slot;
                        nd[new_slot] += 1;
                        if new_topic != old_topic {
                            deltas.push((old_topic, w, -1));
                            deltas.push((new_topic, w, 1));
                        }
                    }
                }
                ShardResult {
                    start,
                    z,
                    n_doc,
                    deltas,
                }
            })
            .collect();

        for shard in results {
            for (local, (zd, nd)) in shard.z.into_iter().zip(shard.n_doc).enumerate() {
                self.z[shard.start + local] = zd;
                self.n_doc[shard.start + local] = nd;
            }
            for (topic, w, delta) in shard.deltas {
                self.n_topic_word[topic][w] = self.n_topic_word[topic][w]
                    .checked_add_signed(delta as i64)
                    .expect("count underflow");
                self.n_topic[topic] = self.n_topic[topic]
                    .checked_add_signed(delta as i64)
                    .expect("count underflow");
            }
        }
        debug_assert!(self.counts_consistent());
    }

    fn counts_consistent(&self) -> bool {
        let mut word = vec![vec![0u64; self.v]; self.k];
        for d in 0..self.tokens.len() {
            let mut per_slot = vec![0u32; self.labels[d].len()];
            for (i, &w) in self.tokens[d].iter().enumerate() {
                per_slot[self.z[d][i]] += 1;
                word[self.labels[d][self.z[d][i]]][w] += 1;
            }
            if per_slot != self.n_doc[d] {
                return false;
            }
        }
        word == self.n_topic_word
            && (0..self.k).all(|t| self.n_topic_word[t].iter().sum::<u64>() == self.n_topic[t])
    }

    fn accumulate_phi(&self, phi_sum: &mut [Vec<f64>]) {
        let veta = self.v as f64 * self.eta;
        for t in 0..self.k {
            let denom = self.n_topic[t] as f64 + veta;
            for w in 0..self.v {
                phi_sum[t][w] += (self.n_topic_word[t][w] as f64 + self.eta) / denom;
            }
        }
    }
}

/// Train a model on labeled documents over `n_fields` topics.
///
/// Documents whose labels are empty or whose text has no in-vocabulary
/// token are skipped (tallied in the model metadata); a label outside the
/// taxonomy is fatal.
pub fn train(docs: &[LabeledDoc], n_fields: usize, params: &LdaParams) -> Result<LdaModel> {
    if n_fields < 2 {
        return Err(Error::InvalidParameter(format!(
            "cannot train over {n_fields} fields"
        )));
    }
    let burn_in = params.resolved_burn_in();
    if params.iterations <= burn_in {
        return Err(Error::InvalidParameter(format!(
            "iterations ({}) must exceed burn-in ({burn_in})",
            params.iterations
        )));
    }
    for doc in docs {
        if let Some(&bad) = doc.labels.iter().find(|&&l| l >= n_fields) {
            return Err(Error::LabelOutsideTaxonomy {
                label: bad,
                k: n_fields,
            });
        }
    }

    let tokenized: Vec<Vec<String>> = docs.iter().map(|d| text::tokenize(&d.text)).collect();
    let vocab = Vocabulary::build(&tokenized, params.min_df);
    if vocab.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }

    let mut tokens = Vec::new();
    let mut labels = Vec::new();
    let mut skipped_unlabeled = 0usize;
    let mut skipped_empty = 0usize;
    for (doc, toks) in docs.iter().zip(&tokenized) {
        let mut doc_labels: Vec<usize> = doc.labels.clone();
        doc_labels.sort_unstable();
        doc_labels.dedup();
        if doc_labels.is_empty() {
            skipped_unlabeled += 1;
            continue;
        }
        let encoded = vocab.encode(toks);
        if encoded.is_empty() {
            skipped_empty += 1;
            continue;
        }
        tokens.push(encoded);
        labels.push(doc_labels);
    }
    if tokens.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }

    let alpha = params.resolved_alpha(n_fields);
    let v = vocab.len();
    let trained_docs = tokens.len();
    let trained_tokens: u64 = tokens.iter().map(|t| t.len() as u64).sum();

    let mut rng = substream(params.seed, "train");
    let mut sampler = Sampler::init(tokens, labels, n_fields, v, alpha, params.eta, &mut rng);

    let mut phi_sum = vec![vec![0.0; v]; n_fields];
    let mut n_samples = 0usize;
    for it in 0..params.iterations {
        if params.threads > 1 {
            sampler.sweep_parallel(params.threads, params.seed, it);
        } else {
            sampler.sweep(&mut rng);
        }
        if it >= burn_in {
            sampler.accumulate_phi(&mut phi_sum);
            n_samples += 1;
        }
    }

    let phi: Vec<Vec<f64>> = phi_sum
        .into_iter()
        .map(|row| row.into_iter().map(|x| x / n_samples as f64).collect())
        .collect();

    let mut metadata = BTreeMap::new();
    if skipped_unlabeled > 0 {
        metadata.insert("skipped_unlabeled_docs".into(), skipped_unlabeled.to_string());
    }
    if skipped_empty > 0 {
        metadata.insert("skipped_empty_docs".into(), skipped_empty.to_string());
    }

    let model = LdaModel {
        k: n_fields,
        vocab,
        alpha,
        eta: params.eta,
        topic_word_counts: sampler.n_topic_word,
        topic_totals: sampler.n_topic,
        phi,
        seed: params.seed,
        iterations: params.iterations,
        burn_in,
        trained_docs,
        trained_tokens,
        metadata,
    };
    model.check_invariants()?;
    Ok(model)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn word(field: usize, i: usize) -> String {
        format!("f{field}w{i:02}")
    }

    /// Docs over disjoint per-field vocabularies; `both_labels` docs carry
    /// both labels with mixed text, anchored by single-label docs.
    pub(crate) fn disjoint_corpus(per_field: usize, both_labels: usize) -> Vec<LabeledDoc> {
        let mut docs = Vec::new();
        for field in 0..2 {
            for d in 0..per_field {
                let text: Vec<String> =
                    (0..30).map(|i| word(field, (d + i) % 10)).collect();
                docs.push(LabeledDoc {
                    id: format!("f{field}d{d}"),
                    text: text.join(" "),
                    labels: vec![field],
                });
            }
        }
        for d in 0..both_labels {
            let mut text = Vec::new();
            for i in 0..15 {
                text.push(word(0, (d + i) % 10));
                text.push(word(1, (d + 2 * i) % 10));
            }
            docs.push(LabeledDoc {
                id: format!("mix{d}"),
                text: text.join(" "),
                labels: vec![0, 1],
            });
        }
        docs
    }

    fn quick_params(seed: u64, iterations: usize) -> LdaParams {
        LdaParams {
            iterations,
            burn_in: Some(iterations / 2),
            seed,
            min_df: 1,
            ..LdaParams::default()
        }
    }

    #[test]
    fn single_label_corpus_counts_are_word_frequencies() {
        let docs = vec![
            LabeledDoc {
                id: "a".into(),
                text: "apple apple banana".into(),
                labels: vec![0],
            },
            LabeledDoc {
                id: "b".into(),
                text: "cherry cherry cherry".into(),
                labels: vec![1],
            },
        ];
        let mut params = quick_params(1, 2);
        params.burn_in = Some(1);
        let model = train(&docs, 2, &params).unwrap();
        let apple = model.vocab.id("appl").unwrap();
        let banana = model.vocab.id("banana").unwrap();
        let cherry = model.vocab.id("cherri").unwrap();
        assert_eq!(model.topic_word_counts[0][apple], 2);
        assert_eq!(model.topic_word_counts[0][banana], 1);
        assert_eq!(model.topic_word_counts[1][cherry], 3);
        assert_eq!(model.topic_totals, vec![3, 3]);
        // single post-burn-in sample: phi equals the smoothed count formula
        for field in 0..2 {
            for w in 0..model.v() {
                assert!(
                    (model.phi[field][w] - model.phi_from_counts(field, w)).abs() < 1e-15
                );
            }
        }
    }

    #[test]
    fn same_seed_gives_bit_identical_models() {
        let docs = disjoint_corpus(10, 10);
        let m1 = train(&docs, 2, &quick_params(42, 20)).unwrap();
        let m2 = train(&docs, 2, &quick_params(42, 20)).unwrap();
        assert_eq!(m1.topic_word_counts, m2.topic_word_counts);
        assert_eq!(m1.phi, m2.phi);
        let m3 = train(&docs, 2, &quick_params(43, 20)).unwrap();
        assert_ne!(m1.topic_word_counts, m3.topic_word_counts);
    }

    #[test]
    fn disjoint_vocabularies_separate() {
        let docs = disjoint_corpus(25, 50);
        let model = train(&docs, 2, &quick_params(7, 200)).unwrap();
        for field in 0..2 {
            let own_mass: f64 = (0..10)
                .map(|i| model.phi[field][model.vocab.id(&word(field, i)).unwrap()])
                .sum();
            assert!(own_mass > 0.95, "field {field} keeps {own_mass} on its vocabulary");
        }
    }

    #[test]
    fn label_outside_taxonomy_is_fatal() {
        let docs = vec![LabeledDoc {
            id: "a".into(),
            text: "alpha beta gamma".into(),
            labels: vec![5],
        }];
        assert!(matches!(
            train(&docs, 2, &quick_params(1, 4)),
            Err(Error::LabelOutsideTaxonomy { label: 5, k: 2 })
        ));
    }

    #[test]
    fn unlabeled_docs_are_skipped_not_fatal() {
        let mut docs = disjoint_corpus(5, 0);
        docs.push(LabeledDoc {
            id: "none".into(),
            text: "f0w00 f0w01".into(),
            labels: vec![],
        });
        let model = train(&docs, 2, &quick_params(1, 4)).unwrap();
        assert_eq!(model.trained_docs, 10);
        assert_eq!(model.metadata["skipped_unlabeled_docs"], "1");
    }

    #[test]
    fn parallel_mode_trains_a_valid_model() {
        let docs = disjoint_corpus(25, 50);
        let mut params = quick_params(7, 100);
        params.threads = 4;
        let model = train(&docs, 2, &params).unwrap();
        model.check_invariants().unwrap();
        for field in 0..2 {
            let own_mass: f64 = (0..10)
                .map(|i| model.phi[field][model.vocab.id(&word(field, i)).unwrap()])
                .sum();
            assert!(own_mass > 0.9, "field {field}: {own_mass}");
        }
    }

    #[test]
    fn training_set_rules() {
        use crate::corpus::{Citer, FieldTaxonomy, Paper};
        let long_abstract = vec!["science"; 100].join(" ");
        let short_abstract = vec!["science"; 99].join(" ");
        let mk = |id: &str, text: &str| Paper {
            id: id.into(),
            year: 2000,
            abstract_text: text.into(),
            field_labels: vec![(0, 1.0)],
            references: vec!["r".into()],
            citers: vec![Citer {
                id: "c".into(),
                year: Some(2001),
            }],
            n_authors: 1,
            n_institutes: 0,
            max_author_citations: None,
        };
        let store = CorpusStore::new(
            FieldTaxonomy::new(vec!["a".into(), "b".into()]).unwrap(),
            vec![mk("long", &long_abstract), mk("short", &short_abstract)],
            Vec::new(),
            Vec::new(),
            Default::default(),
        );
        let docs = build_training_set(&store, 100).unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].id, "long");
    }
}
