//! Fold-in inference: field posteriors for unlabeled abstracts with the
//! trained word-field distribution held fixed.

use rand::Rng;

use super::LdaModel;
use crate::error::{Error, Result};
use crate::interdisc::{RenormPolicy, renormalize};
use crate::rng::substream;
use crate::space::FieldDistribution;
use crate::text;

/// Posterior-mean field distribution for an abstract: Gibbs sampling over
/// all K fields with `phi` fixed, averaging `(n_k + alpha) / (N + K alpha)`
/// over post-burn-in sweeps (burn-in is half the sweeps).
pub fn infer_theta(
    model: &LdaModel,
    abstract_text: &str,
    iterations: usize,
    seed: u64,
) -> Result<FieldDistribution> {
    if iterations < 2 {
        return Err(Error::InvalidParameter(
            "inference needs at least 2 sweeps".into(),
        ));
    }
    let tokens = model.vocab.encode(&text::tokenize(abstract_text));
    if tokens.is_empty() {
        return Err(Error::UnscorableAbstract);
    }

    let k = model.k;
    let alpha = model.alpha;
    let mut rng = substream(seed, "infer");

    let mut z = vec![0usize; tokens.len()];
    let mut n_field = vec![0u32; k];
    for (i, _) in tokens.iter().enumerate() {
        let f = rng.random_range(0..k);
        z[i] = f;
        n_field[f] += 1;
    }

    let burn_in = iterations / 2;
    let mut theta_sum = vec![0.0; k];
    let mut n_samples = 0usize;
    let mut weights = vec![0.0; k];
    for it in 0..iterations {
        for (i, &w) in tokens.iter().enumerate() {
            let old = z[i];
            n_field[old] -= 1;
            let mut total = 0.0;
            for (f, weight) in weights.iter_mut().enumerate() {
                *weight = (n_field[f] as f64 + alpha) * model.phi[f][w];
                total += *weight;
            }
            let mut u = rng.random::<f64>() * total;
            let mut new = k - 1;
            for (f, &weight) in weights.iter().enumerate() {
                u -= weight;
                if u <= 0.0 {
                    new = f;
                    break;
                }
            }
            z[i] = new;
            n_field[new] += 1;
        }
        if it >= burn_in {
            let denom = tokens.len() as f64 + k as f64 * alpha;
            for (sum, &count) in theta_sum.iter_mut().zip(&n_field) {
                *sum += (count as f64 + alpha) / denom;
            }
            n_samples += 1;
        }
    }

    FieldDistribution::from_weights(
        theta_sum
            .into_iter()
            .map(|x| x / n_samples as f64)
            .collect(),
    )
}

/// Infer a grant's field vector and apply the renormalization policy.
/// Returns the distribution and the argmax-fallback flag.
pub fn grant_field_vector(
    model: &LdaModel,
    abstract_text: &str,
    iterations: usize,
    seed: u64,
    policy: RenormPolicy,
) -> Result<(FieldDistribution, bool)> {
    let theta = infer_theta(model, abstract_text, iterations, seed)?;
    Ok(renormalize(&theta, policy))
}
