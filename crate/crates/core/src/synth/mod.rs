//! Synthetic corpora with planted ground truth: generative label-constrained
//! text for recovery tests, and citation/grant graphs with controlled field
//! mixing and planted effect slopes for end-to-end directional tests.
//!
//! Generators emit the exact flat-file schemas the corpus module ingests,
//! plus a `groundtruth.json` with the planted parameters.

mod citation_gen;
mod files;
mod lda_gen;

pub use citation_gen::{CitationConfig, CitationGroundTruth, SynthCorpus, gen_citation_corpus};
pub use files::{GrantOut, LinkOut, PaperOut, write_lda_corpus};
pub use lda_gen::{
    LdaGenConfig, LdaGroundTruth, LdaModelPhiView, gen_lda_corpus, mean_phi_total_variation,
};

use rand::Rng;
use rand_distr::{Distribution, Gamma};

// Dirichlet draw via normalized Gamma variates.
pub(crate) fn dirichlet(rng: &mut impl Rng, alphas: &[f64]) -> Vec<f64> {
    let mut draws: Vec<f64> = alphas
        .iter()
        .map(|&a| {
            let gamma = Gamma::new(a, 1.0).expect("positive shape");
            gamma.sample(rng)
        })
        .collect();
    let sum: f64 = draws.iter().sum();
    if sum <= 0.0 || !sum.is_finite() {
        // degenerate underflow for tiny alphas: fall back to uniform
        let u = 1.0 / alphas.len() as f64;
        return vec![u; alphas.len()];
    }
    for d in &mut draws {
        *d /= sum;
    }
    draws
}

// Weighted index pick; weights need not be normalized.
pub(crate) fn pick_weighted(rng: &mut impl Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    debug_assert!(total > 0.0);
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        u -= w;
        if u <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}
