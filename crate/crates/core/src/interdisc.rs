//! Rao-Stirling interdisciplinarity: the pairwise diversity score, the
//! grant-vector renormalization policies, and quantile binning of scores.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{DistanceMatrix, FieldDistribution};
use crate::stats;

/// What a Rao-Stirling score was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScoreBasis {
    References,
    Citations,
    GrantAbstract,
}

impl std::fmt::Display for ScoreBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ScoreBasis::References => "references",
            ScoreBasis::Citations => "citations",
            ScoreBasis::GrantAbstract => "grant-abstract",
        };
        f.write_str(s)
    }
}

/// A scored subject.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RsScore {
    pub subject_id: String,
    pub basis: ScoreBasis,
    pub value: f64,
}

/// Rao-Stirling diversity: the ordered-pair sum over distinct fields,
/// `RS = sum_{i != j} p_i p_j d_ij = 2 * sum_{i < j} p_i p_j d_ij`.
///
/// With all distances in [0,1] the score is bounded by `1 - sum_i p_i^2`,
/// so it stays in [0,1): a single-field subject scores 0 and the score
/// approaches 1 only for many equally-weighted, maximally distant fields.
pub fn rao_stirling(p: &FieldDistribution, d: &DistanceMatrix) -> Result<f64> {
    if p.k() != d.k() {
        return Err(Error::DimensionMismatch(format!(
            "distribution over {} fields vs {}x{} distance matrix",
            p.k(),
            d.k(),
            d.k()
        )));
    }
    let probs = p.probs();
    let active: Vec<usize> = (0..p.k()).filter(|&i| probs[i] > 0.0).collect();
    for &i in &active {
        if !d.is_available(i) {
            return Err(Error::UnavailableField(i));
        }
    }
    let mut rs = 0.0;
    for (a, &i) in active.iter().enumerate() {
        for &j in &active[a + 1..] {
            rs += probs[i] * probs[j] * d.get(i, j).expect("checked available");
        }
    }
    let rs = 2.0 * rs;
    assert!(rs <= 1.0 + 1e-9, "Rao-Stirling score {rs} exceeds 1");
    Ok(rs.min(1.0))
}

/// How inferred grant field probabilities are reduced to the pertinent
/// fields before scoring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RenormPolicy {
    /// Use the posterior as-is.
    None,
    /// Drop fields below the threshold (default 1/K) and renormalize.
    Threshold(Option<f64>),
    /// Keep the top-n fields by probability and renormalize.
    TopCount(usize),
}

impl std::str::FromStr for RenormPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "none" {
            return Ok(RenormPolicy::None);
        }
        if s == "threshold" {
            return Ok(RenormPolicy::Threshold(None));
        }
        if let Some(t) = s.strip_prefix("threshold:") {
            let t: f64 = t
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad threshold in `{s}`")))?;
            return Ok(RenormPolicy::Threshold(Some(t)));
        }
        if let Some(n) = s.strip_prefix("top:") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad count in `{s}`")))?;
            if n == 0 {
                return Err(Error::InvalidParameter("top:0 keeps no field".into()));
            }
            return Ok(RenormPolicy::TopCount(n));
        }
        Err(Error::InvalidParameter(format!(
            "unknown renorm policy `{s}` (none | threshold[:t] | top:n)"
        )))
    }
}

/// Apply a renormalization policy to an inferred field posterior.
///
/// Returns the reduced distribution and a flag that is set when the policy
/// would have dropped every field and the argmax fallback was used.
pub fn renormalize(theta: &FieldDistribution, policy: RenormPolicy) -> (FieldDistribution, bool) {
    match policy {
        RenormPolicy::None => (theta.clone(), false),
        RenormPolicy::Threshold(tau) => {
            let tau = tau.unwrap_or(1.0 / theta.k() as f64);
            let kept: Vec<f64> = theta
                .probs()
                .iter()
                .map(|&p| if p >= tau { p } else { 0.0 })
                .collect();
            match FieldDistribution::from_weights(kept) {
                Ok(d) => (d, false),
                Err(_) => (FieldDistribution::unit(theta.k(), theta.argmax()), true),
            }
        }
        RenormPolicy::TopCount(n) => {
            let mut order: Vec<usize> = (0..theta.k()).collect();
            // descending by probability, ascending by field id on ties
            order.sort_by(|&a, &b| {
                theta
                    .get(b)
                    .partial_cmp(&theta.get(a))
                    .unwrap()
                    .then(a.cmp(&b))
            });
            let mut kept = vec![0.0; theta.k()];
            for &f in order.iter().take(n) {
                kept[f] = theta.get(f);
            }
            match FieldDistribution::from_weights(kept) {
                Ok(d) => (d, false),
                Err(_) => (FieldDistribution::unit(theta.k(), theta.argmax()), true),
            }
        }
    }
}

/// Nearest-rank quantile bin (1-based) per score; ties share the lower bin.
pub fn idr_quantiles(scores: &[RsScore], cuts: &[f64]) -> Result<Vec<usize>> {
    let values: Vec<f64> = scores.iter().map(|s| s.value).collect();
    stats::quantile_bins(&values, cuts)
}

/// The standard quintile cut fractions.
pub const QUINTILE_CUTS: [f64; 4] = [0.2, 0.4, 0.6, 0.8];
