//! Ordinary least squares with homoskedastic standard errors, R-squared,
//! variance inflation factors, drop-first dummy encoding, ln(x+1)
//! transforms and optional z-score standardization.
//!
//! The solver is a Householder QR with column pivoting, which both keeps the
//! normal equations well conditioned and names the dependent columns when a
//! design is rank deficient.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A data column for regression input.
#[derive(Debug, Clone)]
pub enum Column {
    Numeric(Vec<f64>),
    Categorical(Vec<String>),
}

impl Column {
    fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Categorical(v) => v.len(),
        }
    }
}

/// Named columns of equal length.
#[derive(Debug, Clone, Default)]
pub struct Table {
    columns: BTreeMap<String, Column>,
    n: usize,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, column: Column) -> Result<()> {
        if self.columns.is_empty() {
            self.n = column.len();
        } else if column.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "column has {} rows, table has {}",
                column.len(),
                self.n
            )));
        }
        self.columns.insert(name.into(), column);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn numeric(&self, name: &str) -> Result<&[f64]> {
        match self.columns.get(name) {
            Some(Column::Numeric(v)) => Ok(v),
            Some(Column::Categorical(_)) => Err(Error::InvalidParameter(format!(
                "column `{name}` is categorical, expected numeric"
            ))),
            None => Err(Error::InvalidParameter(format!("no column `{name}`"))),
        }
    }

    fn categorical(&self, name: &str) -> Result<&[String]> {
        match self.columns.get(name) {
            Some(Column::Categorical(v)) => Ok(v),
            Some(Column::Numeric(_)) => Err(Error::InvalidParameter(format!(
                "column `{name}` is numeric, expected categorical"
            ))),
            None => Err(Error::InvalidParameter(format!("no column `{name}`"))),
        }
    }
}

/// Model specification over a [`Table`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegressionSpec {
    pub response: String,
    pub regressors: Vec<String>,
    /// Categorical columns encoded drop-first.
    pub dummies: Vec<String>,
    /// Columns (response included) transformed as ln(x+1) before anything else.
    pub log1p: BTreeSet<String>,
    /// Z-score the continuous regressors.
    pub standardize: bool,
}

impl RegressionSpec {
    pub fn new(response: impl Into<String>, regressors: &[&str]) -> Self {
        Self {
            response: response.into(),
            regressors: regressors.iter().map(|s| s.to_string()).collect(),
            dummies: Vec::new(),
            log1p: BTreeSet::new(),
            standardize: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegressionResult {
    /// Coefficient names: intercept, the regressors, then dummy levels.
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_values: Vec<f64>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub n: usize,
    /// VIF per continuous regressor.
    pub vif: Vec<(String, f64)>,
    /// Dummy group -> encoded levels (reference level dropped).
    pub dummy_groups: Vec<(String, Vec<String>)>,
}

/// Fit the model by pivoted-QR least squares.
pub fn ols(table: &Table, spec: &RegressionSpec) -> Result<RegressionResult> {
    let n = table.n();
    let mut y = table.numeric(&spec.response)?.to_vec();
    if spec.log1p.contains(&spec.response) {
        log1p_in_place(&spec.response, &mut y)?;
    }

    let mut names = vec!["intercept".to_string()];
    let mut columns: Vec<Vec<f64>> = vec![vec![1.0; n]];
    for name in &spec.regressors {
        let mut col = table.numeric(name)?.to_vec();
        if spec.log1p.contains(name) {
            log1p_in_place(name, &mut col)?;
        }
        if spec.standardize {
            standardize_in_place(name, &mut col)?;
        }
        names.push(name.clone());
        columns.push(col);
    }
    let n_continuous = spec.regressors.len();

    let mut dummy_groups = Vec::new();
    for group in &spec.dummies {
        let raw = table.categorical(group)?;
        let mut levels: Vec<&String> = raw.iter().collect::<BTreeSet<_>>().into_iter().collect();
        let _reference = levels.remove(0);
        let mut encoded = Vec::new();
        for level in levels {
            names.push(format!("{group}={level}"));
            encoded.push(level.clone());
            columns.push(raw.iter().map(|v| f64::from(v == level)).collect());
        }
        dummy_groups.push((group.clone(), encoded));
    }

    let p = columns.len();
    if n <= p {
        return Err(Error::InvalidParameter(format!(
            "{n} observations cannot identify {p} coefficients"
        )));
    }

    let fit = lstsq(&columns, &y, &names)?;

    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let yhat: f64 = columns
                .iter()
                .zip(&fit.beta)
                .map(|(col, b)| col[i] * b)
                .sum();
            y[i] - yhat
        })
        .collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let ybar = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - ybar) * (v - ybar)).sum();
    let r_squared = if tss == 0.0 {
        0.0
    } else {
        (1.0 - rss / tss).clamp(0.0, 1.0)
    };
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (n as f64 - 1.0) / (n as f64 - p as f64);

    let sigma2 = rss / (n - p) as f64;
    let std_errors: Vec<f64> = (0..p).map(|j| (sigma2 * fit.xtx_inv_diag[j]).sqrt()).collect();
    let t_values: Vec<f64> = fit
        .beta
        .iter()
        .zip(&std_errors)
        .map(|(b, se)| if *se > 0.0 { b / se } else { f64::NAN })
        .collect();

    // VIF over the continuous regressors, against the full design
    let mut vif_values = Vec::new();
    for j in 0..n_continuous {
        let target = 1 + j;
        let others: Vec<Vec<f64>> = (0..p)
            .filter(|&c| c != target)
            .map(|c| columns[c].clone())
            .collect();
        let other_names: Vec<String> = (0..p)
            .filter(|&c| c != target)
            .map(|c| names[c].clone())
            .collect();
        vif_values.push((
            names[target].clone(),
            vif_of(&others, &columns[target], &other_names)?,
        ));
    }

    Ok(RegressionResult {
        names,
        coefficients: fit.beta,
        std_errors,
        t_values,
        r_squared,
        adj_r_squared,
        n,
        vif: vif_values,
        dummy_groups,
    })
}

/// VIF per numeric design column (each regressed on all the others plus an
/// intercept): `VIF_j = 1 / (1 - R^2_j)`.
pub fn vif(columns: &[Vec<f64>], names: &[String]) -> Result<Vec<f64>> {
    if columns.is_empty() {
        return Err(Error::EmptyInput("vif over no columns"));
    }
    let p = columns.len();
    let mut out = Vec::with_capacity(p);
    for j in 0..p {
        let mut others: Vec<Vec<f64>> = vec![vec![1.0; columns[0].len()]];
        let mut other_names = vec!["intercept".to_string()];
        for c in 0..p {
            if c != j {
                others.push(columns[c].clone());
                other_names.push(names[c].clone());
            }
        }
        out.push(vif_of(&others, &columns[j], &other_names)?);
    }
    Ok(out)
}

fn vif_of(design: &[Vec<f64>], target: &[f64], names: &[String]) -> Result<f64> {
    let fit = lstsq(design, target, names)?;
    let n = target.len();
    let rss: f64 = (0..n)
        .map(|i| {
            let yhat: f64 = design
                .iter()
                .zip(&fit.beta)
                .map(|(col, b)| col[i] * b)
                .sum();
            let r = target[i] - yhat;
            r * r
        })
        .sum();
    let ybar = target.iter().sum::<f64>() / n as f64;
    let tss: f64 = target.iter().map(|v| (v - ybar) * (v - ybar)).sum();
    if tss == 0.0 {
        return Ok(1.0);
    }
    let mut r2 = (1.0 - rss / tss).clamp(0.0, 1.0);
    // round-off guard so orthogonal designs report exactly 1.0
    if r2 < 1e-12 {
        r2 = 0.0;
    }
    if r2 >= 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (1.0 - r2))
}

fn log1p_in_place(name: &str, values: &mut [f64]) -> Result<()> {
    for v in values.iter_mut() {
        if *v <= -1.0 {
            return Err(Error::InvalidParameter(format!(
                "ln(1+x) undefined for {name} value {v}"
            )));
        }
        *v = v.ln_1p();
    }
    Ok(())
}

fn standardize_in_place(name: &str, values: &mut [f64]) -> Result<()> {
    let m = crate::stats::mean(values);
    let s = crate::stats::sample_std(values);
    if s == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "cannot standardize constant column `{name}`"
        )));
    }
    for v in values.iter_mut() {
        *v = (*v - m) / s;
    }
    Ok(())
}

struct LstsqFit {
    beta: Vec<f64>,
    xtx_inv_diag: Vec<f64>,
}

// Householder QR with column pivoting; errors with the names of the columns
// pivoted past the numerical rank.
fn lstsq(columns: &[Vec<f64>], y: &[f64], names: &[String]) -> Result<LstsqFit> {
    let p = columns.len();
    let n = y.len();
    debug_assert!(columns.iter().all(|c| c.len() == n));

    // row-major working copy of the design
    let mut a = vec![0.0; n * p];
    for (j, col) in columns.iter().enumerate() {
        for i in 0..n {
            a[i * p + j] = col[i];
        }
    }
    let mut qty = y.to_vec();
    let mut perm: Vec<usize> = (0..p).collect();

    let initial_max_norm = (0..p)
        .map(|j| (0..n).map(|i| a[i * p + j] * a[i * p + j]).sum::<f64>())
        .fold(0.0_f64, f64::max)
        .sqrt();
    let tol = initial_max_norm * 1e-12;

    let mut rank = p;
    for k in 0..p {
        // pivot: bring the column with the largest remaining norm to k
        let (best, best_norm) = (k..p)
            .map(|j| {
                let norm = (k..n).map(|i| a[i * p + j] * a[i * p + j]).sum::<f64>().sqrt();
                (j, norm)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("k < p");
        if best_norm <= tol {
            rank = k;
            break;
        }
        if best != k {
            for i in 0..n {
                a.swap(i * p + k, i * p + best);
            }
            perm.swap(k, best);
        }

        // Householder reflection living in rows k..n of column k
        let alpha = -a[k * p + k].signum() * best_norm;
        let mut v: Vec<f64> = (k..n).map(|i| a[i * p + k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for j in k..p {
                let dot: f64 = (k..n).map(|i| v[i - k] * a[i * p + j]).sum();
                let scale = 2.0 * dot / vnorm2;
                for i in k..n {
                    a[i * p + j] -= scale * v[i - k];
                }
            }
            let dot: f64 = (k..n).map(|i| v[i - k] * qty[i]).sum();
            let scale = 2.0 * dot / vnorm2;
            for i in k..n {
                qty[i] -= scale * v[i - k];
            }
        }
        a[k * p + k] = alpha;
    }

    if rank < p {
        let dependent: Vec<&str> = perm[rank..].iter().map(|&j| names[j].as_str()).collect();
        return Err(Error::RankDeficient(dependent.join(", ")));
    }

    // back-substitute R beta' = Q^T y (in pivoted order)
    let mut beta_p = vec![0.0; p];
    for k in (0..p).rev() {
        let mut s = qty[k];
        for j in (k + 1)..p {
            s -= a[k * p + j] * beta_p[j];
        }
        beta_p[k] = s / a[k * p + k];
    }

    // R^{-1} (upper triangular), then diag of (X'X)^{-1} = P R^{-1} R^{-T} P^T
    let mut rinv = vec![0.0; p * p];
    for k in (0..p).rev() {
        rinv[k * p + k] = 1.0 / a[k * p + k];
        for j in (k + 1)..p {
            let mut s = 0.0;
            for l in (k + 1)..=j {
                s += a[k * p + l] * rinv[l * p + j];
            }
            rinv[k * p + j] = -s / a[k * p + k];
        }
    }
    let mut beta = vec![0.0; p];
    let mut xtx_inv_diag = vec![0.0; p];
    for k in 0..p {
        beta[perm[k]] = beta_p[k];
        xtx_inv_diag[perm[k]] = (k..p).map(|j| rinv[k * p + j] * rinv[k * p + j]).sum();
    }

    Ok(LstsqFit { beta, xtx_inv_diag })
}
