//! Generative corpus for topic-recovery tests: documents drawn from the
//! model's own assumptions with the true phi/theta recorded.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{dirichlet, pick_weighted};
use crate::error::{Error, Result};
use crate::lda::LabeledDoc;
use crate::rng::substream;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LdaGenConfig {
    pub k: usize,
    pub v: usize,
    pub n_docs: usize,
    pub doc_length: usize,
    /// Probability of a document carrying 1, 2, ... labels.
    pub label_multiplicity: Vec<f64>,
    /// Theta concentration over a document's labels.
    pub alpha: f64,
    /// Phi concentration over the vocabulary.
    pub eta: f64,
    /// Partition the vocabulary into per-field chunks with no overlap.
    pub disjoint_vocab: bool,
    pub seed: u64,
}

impl Default for LdaGenConfig {
    fn default() -> Self {
        Self {
            k: 10,
            v: 500,
            n_docs: 2000,
            doc_length: 100,
            label_multiplicity: vec![0.5, 0.3, 0.2],
            alpha: 5.0,
            eta: 0.01,
            disjoint_vocab: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LdaGroundTruth {
    pub phi: Vec<Vec<f64>>,
    pub thetas: Vec<Vec<f64>>,
    pub label_sets: Vec<Vec<usize>>,
    pub seed: u64,
}

/// Sample a labeled corpus: `phi_k ~ Dirichlet(eta)`, per-document label
/// sets from the multiplicity distribution, `theta ~ Dirichlet(alpha)` over
/// the labels, tokens from the mixture.
pub fn gen_lda_corpus(config: &LdaGenConfig) -> Result<(Vec<LabeledDoc>, LdaGroundTruth)> {
    if config.doc_length < 1 {
        return Err(Error::InvalidParameter("doc_length must be >= 1".into()));
    }
    if config.k < 2 || config.v < config.k {
        return Err(Error::InvalidParameter(format!(
            "need k >= 2 and v >= k, got k={} v={}",
            config.k, config.v
        )));
    }
    if config.label_multiplicity.is_empty()
        || config.label_multiplicity.iter().any(|&p| p < 0.0)
        || config.label_multiplicity.iter().sum::<f64>() <= 0.0
        || config.label_multiplicity.len() > config.k
    {
        return Err(Error::InvalidParameter(
            "label multiplicity must be nonnegative weights for 1..=k labels".into(),
        ));
    }

    let mut rng = substream(config.seed, "lda-gen");
    let phi: Vec<Vec<f64>> = if config.disjoint_vocab {
        // contiguous vocabulary chunk per field
        let chunk = config.v / config.k;
        (0..config.k)
            .map(|field| {
                let lo = field * chunk;
                let hi = if field == config.k - 1 {
                    config.v
                } else {
                    lo + chunk
                };
                let local = dirichlet(&mut rng, &vec![config.eta; hi - lo]);
                let mut row = vec![0.0; config.v];
                row[lo..hi].copy_from_slice(&local);
                row
            })
            .collect()
    } else {
        (0..config.k)
            .map(|_| dirichlet(&mut rng, &vec![config.eta; config.v]))
            .collect()
    };

    let mut docs = Vec::with_capacity(config.n_docs);
    let mut thetas = Vec::with_capacity(config.n_docs);
    let mut label_sets = Vec::with_capacity(config.n_docs);
    for d in 0..config.n_docs {
        let n_labels = 1 + pick_weighted(&mut rng, &config.label_multiplicity);
        let mut labels = Vec::with_capacity(n_labels);
        while labels.len() < n_labels {
            let f = rng.random_range(0..config.k);
            if !labels.contains(&f) {
                labels.push(f);
            }
        }
        labels.sort_unstable();

        let theta_local = dirichlet(&mut rng, &vec![config.alpha; labels.len()]);
        let mut theta = vec![0.0; config.k];
        for (&field, &p) in labels.iter().zip(&theta_local) {
            theta[field] = p;
        }

        let mut tokens = Vec::with_capacity(config.doc_length);
        for _ in 0..config.doc_length {
            let slot = pick_weighted(&mut rng, &theta_local);
            let word = pick_weighted(&mut rng, &phi[labels[slot]]);
            tokens.push(format!("w{word:04}"));
        }

        docs.push(LabeledDoc {
            id: format!("d{d:05}"),
            text: tokens.join(" "),
            labels: labels.clone(),
        });
        thetas.push(theta);
        label_sets.push(labels);
    }

    Ok((
        docs,
        LdaGroundTruth {
            phi,
            thetas,
            label_sets,
            seed: config.seed,
        },
    ))
}

/// Mean over fields of the total-variation distance between true and
/// learned phi rows (identity matching: topics are label-anchored).
pub fn mean_phi_total_variation(truth: &[Vec<f64>], learned: &LdaModelPhiView) -> f64 {
    let k = truth.len();
    let mut total = 0.0;
    for field in 0..k {
        let mut tv = 0.0;
        for (v, &p_true) in truth[field].iter().enumerate() {
            let p_learned = learned.prob(field, v);
            tv += (p_true - p_learned).abs();
        }
        total += tv / 2.0;
    }
    total / k as f64
}

/// Adapter matching generator word indices to a trained model's vocabulary
/// (tokens the vocabulary filtered out count as zero mass).
pub struct LdaModelPhiView<'a> {
    model: &'a crate::lda::LdaModel,
    word_ids: Vec<Option<usize>>,
}

impl<'a> LdaModelPhiView<'a> {
    pub fn new(model: &'a crate::lda::LdaModel, v: usize) -> Self {
        let word_ids = (0..v)
            .map(|w| model.vocab.id(&format!("w{w:04}")))
            .collect();
        Self { model, word_ids }
    }

    fn prob(&self, field: usize, word: usize) -> f64 {
        match self.word_ids[word] {
            Some(id) => self.model.phi[field][id],
            None => 0.0,
        }
    }
}
