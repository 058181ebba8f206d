//! Representative words per field, by raw probability or FREX score.

use super::LdaModel;
use crate::error::{Error, Result};

/// Word ranking mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankMode {
    /// Rank by `phi[field][word]`.
    Probability,
    /// Weighted harmonic mean of the within-field ECDF ranks of frequency
    /// and exclusivity; `weight` leans toward exclusivity.
    Frex { weight: f64 },
}

/// Top `n` words of a field with their ranking scores.
pub fn top_words(
    model: &LdaModel,
    field: usize,
    n: usize,
    mode: RankMode,
) -> Result<Vec<(String, f64)>> {
    if field >= model.k {
        return Err(Error::UnknownField(field));
    }
    let v = model.v();
    let scores: Vec<f64> = match mode {
        RankMode::Probability => model.phi[field].clone(),
        RankMode::Frex { weight } => {
            if !(0.0..1.0).contains(&weight) || weight == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "frex weight {weight} outside (0,1)"
                )));
            }
            // exclusivity: share of the word's total phi mass on this field
            let exclusivity: Vec<f64> = (0..v)
                .map(|w| {
                    let total: f64 = (0..model.k).map(|t| model.phi[t][w]).sum();
                    if total > 0.0 {
                        model.phi[field][w] / total
                    } else {
                        0.0
                    }
                })
                .collect();
            let ecdf_ex = ecdf(&exclusivity);
            let ecdf_freq = ecdf(&model.phi[field]);
            (0..v)
                .map(|w| 1.0 / (weight / ecdf_ex[w] + (1.0 - weight) / ecdf_freq[w]))
                .collect()
        }
    };

    let mut order: Vec<usize> = (0..v).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    Ok(order
        .into_iter()
        .take(n)
        .map(|w| (model.vocab.token(w).to_string(), scores[w]))
        .collect())
}

// empirical CDF value (fraction of entries <= x) per entry
fn ecdf(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (j + 1) as f64 / n as f64;
        for &idx in &order[i..=j] {
            out[idx] = rank;
        }
        i = j + 1;
    }
    out
}
