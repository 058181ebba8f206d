//! Automated model validation: out-of-sample multi-label precision and the
//! predicted-vs-truth label distance with a shuffled baseline.

use rand::seq::SliceRandom;

use super::{LabeledDoc, LdaModel, infer_theta};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::space::DistanceMatrix;
use crate::stats;

#[derive(Debug, Clone, serde::Serialize)]
pub struct PrecisionEval {
    pub precision: f64,
    /// Expected precision of a uniform random predictor: mean(|labels|)/K.
    pub random_baseline: f64,
    pub n_docs: usize,
    pub n_unscorable: usize,
}

/// Predict each document's top-m fields by inferred theta (m defaults to
/// its label count) and score the fraction that are true labels.
pub fn eval_multilabel_precision(
    model: &LdaModel,
    held_out: &[LabeledDoc],
    top_m: Option<usize>,
    iterations: usize,
    seed: u64,
) -> Result<PrecisionEval> {
    if held_out.is_empty() {
        return Err(Error::EmptyInput("empty held-out set"));
    }
    let mut precisions = Vec::new();
    let mut label_counts = Vec::new();
    let mut unscorable = 0usize;
    for (i, doc) in held_out.iter().enumerate() {
        if doc.labels.is_empty() {
            continue;
        }
        let theta = match infer_theta(model, &doc.text, iterations, seed.wrapping_add(i as u64)) {
            Ok(t) => t,
            Err(Error::UnscorableAbstract) => {
                unscorable += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let m = top_m.unwrap_or(doc.labels.len()).max(1);
        let predicted = top_fields(&theta, m);
        let correct = predicted
            .iter()
            .filter(|f| doc.labels.contains(f))
            .count();
        precisions.push(correct as f64 / m as f64);
        label_counts.push(doc.labels.len() as f64);
    }
    if precisions.is_empty() {
        return Err(Error::EmptyInput("no scorable held-out document"));
    }
    Ok(PrecisionEval {
        precision: stats::mean(&precisions),
        random_baseline: stats::mean(&label_counts) / model.k as f64,
        n_docs: precisions.len(),
        n_unscorable: unscorable,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LabelDistanceEval {
    /// Mean distance between the top-1 predicted field and the nearest
    /// true label.
    pub mean_distance: f64,
    /// Mean of the same statistic with predictions permuted across
    /// documents.
    pub shuffled_baseline: f64,
    /// Permutation p-value for mean_distance < baseline (plus-one rule).
    pub p_value: f64,
    pub n_docs: usize,
    pub n_permutations: usize,
}

/// Distance between each document's top predicted field and its nearest
/// ground-truth label, against a shuffled-prediction baseline.
pub fn eval_label_distance(
    model: &LdaModel,
    held_out: &[LabeledDoc],
    field_distances: &DistanceMatrix,
    iterations: usize,
    seed: u64,
    n_permutations: usize,
) -> Result<LabelDistanceEval> {
    if held_out.is_empty() {
        return Err(Error::EmptyInput("empty held-out set"));
    }
    if n_permutations == 0 {
        return Err(Error::InvalidParameter("need at least 1 permutation".into()));
    }

    let mut predictions = Vec::new();
    let mut label_sets: Vec<&[usize]> = Vec::new();
    for (i, doc) in held_out.iter().enumerate() {
        if doc.labels.is_empty() {
            continue;
        }
        let theta = match infer_theta(model, &doc.text, iterations, seed.wrapping_add(i as u64)) {
            Ok(t) => t,
            Err(Error::UnscorableAbstract) => continue,
            Err(e) => return Err(e),
        };
        predictions.push(theta.argmax());
        label_sets.push(&doc.labels);
    }
    if predictions.len() < 2 {
        return Err(Error::EmptyInput("too few scorable held-out documents"));
    }

    let distance = |predicted: usize, labels: &[usize]| -> Option<f64> {
        labels
            .iter()
            .filter_map(|&t| field_distances.get(predicted, t))
            .min_by(f64::total_cmp)
    };
    let observed_distances: Vec<f64> = predictions
        .iter()
        .zip(&label_sets)
        .filter_map(|(&p, labels)| distance(p, labels))
        .collect();
    if observed_distances.is_empty() {
        return Err(Error::EmptyInput(
            "no prediction resolvable against the distance matrix",
        ));
    }
    let mean_distance = stats::mean(&observed_distances);

    let mut rng = substream(seed, "label-distance-shuffle");
    let mut perm_means = Vec::with_capacity(n_permutations);
    let mut shuffled = predictions.clone();
    for _ in 0..n_permutations {
        shuffled.shuffle(&mut rng);
        let ds: Vec<f64> = shuffled
            .iter()
            .zip(&label_sets)
            .filter_map(|(&p, labels)| distance(p, labels))
            .collect();
        perm_means.push(stats::mean(&ds));
    }
    let shuffled_baseline = stats::mean(&perm_means);
    let at_or_below = perm_means.iter().filter(|&&m| m <= mean_distance).count();
    let p_value = (at_or_below + 1) as f64 / (n_permutations + 1) as f64;

    Ok(LabelDistanceEval {
        mean_distance,
        shuffled_baseline,
        p_value,
        n_docs: predictions.len(),
        n_permutations,
    })
}

fn top_fields(theta: &crate::space::FieldDistribution, m: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..theta.k()).collect();
    order.sort_by(|&a, &b| theta.get(b).total_cmp(&theta.get(a)).then(a.cmp(&b)));
    order.truncate(m);
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lda::train::tests::{disjoint_corpus, word};
    use crate::lda::{LdaParams, train};
    use crate::space::Provenance;

    fn trained() -> LdaModel {
        let docs = disjoint_corpus(25, 20);
        let params = LdaParams {
            iterations: 200,
            burn_in: Some(100),
            seed: 5,
            min_df: 1,
            ..LdaParams::default()
        };
        train(&docs, 2, &params).unwrap()
    }

    fn held_out_docs(n_per_field: usize) -> Vec<LabeledDoc> {
        let mut docs = Vec::new();
        for field in 0..2 {
            for d in 0..n_per_field {
                let text: Vec<String> = (0..20).map(|i| word(field, (d + i) % 10)).collect();
                docs.push(LabeledDoc {
                    id: format!("held-f{field}-{d}"),
                    text: text.join(" "),
                    labels: vec![field],
                });
            }
        }
        docs
    }

    #[test]
    fn separable_model_scores_perfect_precision() {
        let model = trained();
        let held = held_out_docs(5);
        let eval =
            eval_multilabel_precision(&model, &held, None, 200, 99).unwrap();
        assert_eq!(eval.precision, 1.0);
        assert!((eval.random_baseline - 0.5).abs() < 1e-12);
        assert_eq!(eval.n_docs, 10);
    }

    #[test]
    fn random_baseline_reflects_label_multiplicity() {
        let model = trained();
        let mut held = held_out_docs(2);
        held[0].labels = vec![0, 1];
        let eval = eval_multilabel_precision(&model, &held, None, 100, 1).unwrap();
        // mean(|labels|)/K = (2 + 1 + 1 + 1) / 4 / 2
        assert!((eval.random_baseline - 1.25 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_held_out_errors() {
        let model = trained();
        assert!(eval_multilabel_precision(&model, &[], None, 10, 1).is_err());
    }

    #[test]
    fn correct_predictions_give_zero_distance() {
        let model = trained();
        let held = held_out_docs(10);
        let distances = DistanceMatrix::new(
            2,
            vec![0.0, 1.0, 1.0, 0.0],
            vec![true; 2],
            Provenance::LdaBased,
        )
        .unwrap();
        let eval =
            eval_label_distance(&model, &held, &distances, 200, 17, 200).unwrap();
        assert_eq!(eval.mean_distance, 0.0);
        // shuffles misassign about half the predictions at distance 1
        assert!(eval.shuffled_baseline > 0.2);
        assert!(eval.p_value < 0.01, "p = {}", eval.p_value);
    }
}
