//! Label-constrained topic model with one latent topic per taxonomy field.
//!
//! Training runs collapsed Gibbs sampling with each document's topic choices
//! restricted to its observed label set; inference folds unlabeled abstracts
//! in over all fields with the word-field distribution fixed. The
//! word-field matrix `phi` is the posterior mean over post-burn-in sweeps.

mod eval;
mod infer;
mod io;
mod topwords;
mod train;
mod vocab;

pub use eval::{LabelDistanceEval, PrecisionEval, eval_label_distance, eval_multilabel_precision};
pub use infer::{grant_field_vector, infer_theta};
pub use topwords::{RankMode, top_words};
pub use train::{LabeledDoc, build_training_set, train};
pub use vocab::Vocabulary;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::space::{DistanceMatrix, Provenance, cosine_distance};

/// Sampler configuration.
#[derive(Debug, Clone)]
pub struct LdaParams {
    /// Symmetric document-topic prior; `None` means 50/K.
    pub alpha: Option<f64>,
    /// Symmetric topic-word prior.
    pub eta: f64,
    pub iterations: usize,
    /// Sweeps discarded before averaging; `None` means iterations/2.
    pub burn_in: Option<usize>,
    pub seed: u64,
    /// Minimum document frequency for vocabulary inclusion.
    pub min_df: usize,
    /// 1 = exact deterministic sampling; >1 shards documents per sweep
    /// (approximate, not bit-compatible with the exact mode).
    pub threads: usize,
}

impl Default for LdaParams {
    fn default() -> Self {
        Self {
            alpha: None,
            eta: 0.01,
            iterations: 1000,
            burn_in: None,
            seed: 0,
            min_df: 5,
            threads: 1,
        }
    }
}

impl LdaParams {
    pub fn resolved_alpha(&self, k: usize) -> f64 {
        self.alpha.unwrap_or(50.0 / k as f64)
    }

    pub fn resolved_burn_in(&self) -> usize {
        self.burn_in.unwrap_or(self.iterations / 2)
    }
}

/// A trained model: priors, vocabulary, final sampler counts and the
/// posterior-mean word-field distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    pub k: usize,
    pub vocab: Vocabulary,
    pub alpha: f64,
    pub eta: f64,
    /// Final-sweep counts, K x V.
    pub topic_word_counts: Vec<Vec<u64>>,
    /// Final-sweep totals per topic; sums to the trained token count.
    pub topic_totals: Vec<u64>,
    /// Posterior-mean word distribution per field, K x V row-stochastic.
    pub phi: Vec<Vec<f64>>,
    pub seed: u64,
    pub iterations: usize,
    pub burn_in: usize,
    pub trained_docs: usize,
    pub trained_tokens: u64,
    /// Free-form provenance recorded alongside the model.
    pub metadata: BTreeMap<String, String>,
}

impl LdaModel {
    pub fn v(&self) -> usize {
        self.vocab.len()
    }

    /// Single-sweep smoothed estimate from the stored final counts.
    pub fn phi_from_counts(&self, field: usize, word: usize) -> f64 {
        (self.topic_word_counts[field][word] as f64 + self.eta)
            / (self.topic_totals[field] as f64 + self.v() as f64 * self.eta)
    }

    /// Row-sum and count-conservation checks.
    pub fn check_invariants(&self) -> Result<()> {
        for (k, row) in self.phi.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::ModelFormat(format!(
                    "phi row {k} sums to {sum}"
                )));
            }
        }
        let total: u64 = self.topic_totals.iter().sum();
        if total != self.trained_tokens {
            return Err(Error::ModelFormat(format!(
                "topic totals sum to {total}, trained tokens {}",
                self.trained_tokens
            )));
        }
        for (k, row) in self.topic_word_counts.iter().enumerate() {
            if row.iter().sum::<u64>() != self.topic_totals[k] {
                return Err(Error::ModelFormat(format!(
                    "topic {k} word counts disagree with its total"
                )));
            }
        }
        Ok(())
    }

    /// Pairwise cosine distance between the word distributions of fields.
    pub fn field_distance_matrix(&self) -> Result<DistanceMatrix> {
        let k = self.k;
        let mut values = vec![0.0; k * k];
        for i in 0..k {
            for j in (i + 1)..k {
                let d = cosine_distance(&self.phi[i], &self.phi[j])?;
                values[i * k + j] = d;
                values[j * k + i] = d;
            }
        }
        DistanceMatrix::new(k, values, vec![true; k], Provenance::LdaBased)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_model(phi: Vec<Vec<f64>>) -> LdaModel {
        let k = phi.len();
        let v = phi[0].len();
        LdaModel {
            k,
            vocab: Vocabulary::from_tokens((0..v).map(|i| format!("w{i:03}")).collect()),
            alpha: 1.0,
            eta: 0.01,
            topic_word_counts: vec![vec![0; v]; k],
            topic_totals: vec![0; k],
            phi,
            seed: 0,
            iterations: 1,
            burn_in: 0,
            trained_docs: 0,
            trained_tokens: 0,
            metadata: BTreeMap::new(),
        }
    }

    #[test]
    fn lda_distance_identical_rows_are_zero() {
        let m = tiny_model(vec![vec![0.5, 0.5, 0.0], vec![0.5, 0.5, 0.0]]);
        let d = m.field_distance_matrix().unwrap();
        assert!(d.get(0, 1).unwrap() < 1e-12);
    }

    #[test]
    fn lda_distance_disjoint_rows_are_one() {
        let m = tiny_model(vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let d = m.field_distance_matrix().unwrap();
        assert_eq!(d.get(0, 1).unwrap(), 1.0);
    }

    #[test]
    fn lda_distance_hand_value() {
        let m = tiny_model(vec![vec![0.5, 0.5, 0.0], vec![0.5, 0.0, 0.5]]);
        let d = m.field_distance_matrix().unwrap();
        assert!((d.get(0, 1).unwrap() - 0.5).abs() < 1e-12);
    }
}
