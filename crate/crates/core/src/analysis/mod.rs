//! Analysis artifacts: binned curves, the paper-vs-grant quintile heatmap,
//! funding-conditioned curves, the four-way grant-combination comparison,
//! yearly trends, and the OLS suite in [`ols`].

pub mod ols;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::CorpusStore;
use crate::error::{Error, Result};
use crate::stats;

/// Binning strategy for curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Binning {
    /// Quantile bins: equal subject counts, tie-stable.
    #[default]
    EqualCount,
    /// Fixed-width bins over the x-range.
    EqualWidth,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bin {
    pub x_min: f64,
    pub x_max: f64,
    pub mean_y: f64,
    pub n: usize,
    pub se: f64,
}

/// Mean-of-y per x-bin with standard errors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BinnedSeries {
    pub bins: Vec<Bin>,
    /// Subjects lacking either metric.
    pub excluded: usize,
}

impl BinnedSeries {
    /// Per-bin means in order, skipping empty bins.
    pub fn means(&self) -> Vec<f64> {
        self.bins
            .iter()
            .filter(|b| b.n > 0)
            .map(|b| b.mean_y)
            .collect()
    }
}

/// Bin subjects on x and average y within bins. Subjects with an undefined
/// metric are excluded and tallied.
pub fn bin_curve(
    points: &[(Option<f64>, Option<f64>)],
    n_bins: usize,
    binning: Binning,
) -> Result<BinnedSeries> {
    if n_bins == 0 {
        return Err(Error::InvalidParameter("zero bins".into()));
    }
    let defined: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|(x, y)| Some(((*x)?, (*y)?)))
        .collect();
    let excluded = points.len() - defined.len();
    if defined.len() < n_bins {
        return Err(Error::InvalidParameter(format!(
            "{} subjects cannot fill {} bins",
            defined.len(),
            n_bins
        )));
    }

    let xs: Vec<f64> = defined.iter().map(|(x, _)| *x).collect();
    let membership: Vec<usize> = match binning {
        Binning::EqualCount => {
            let cuts: Vec<f64> = (1..n_bins).map(|b| b as f64 / n_bins as f64).collect();
            stats::quantile_bins(&xs, &cuts)?
                .into_iter()
                .map(|b| b - 1)
                .collect()
        }
        Binning::EqualWidth => {
            let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let width = (hi - lo) / n_bins as f64;
            xs.iter()
                .map(|&x| {
                    if width == 0.0 {
                        0
                    } else {
                        (((x - lo) / width) as usize).min(n_bins - 1)
                    }
                })
                .collect()
        }
    };

    let mut bins = Vec::with_capacity(n_bins);
    for b in 0..n_bins {
        let ys: Vec<f64> = defined
            .iter()
            .zip(&membership)
            .filter(|(_, &m)| m == b)
            .map(|((_, y), _)| *y)
            .collect();
        let bxs: Vec<f64> = defined
            .iter()
            .zip(&membership)
            .filter(|(_, &m)| m == b)
            .map(|((x, _), _)| *x)
            .collect();
        if ys.is_empty() {
            bins.push(Bin {
                x_min: f64::NAN,
                x_max: f64::NAN,
                mean_y: f64::NAN,
                n: 0,
                se: f64::NAN,
            });
        } else {
            bins.push(Bin {
                x_min: bxs.iter().cloned().fold(f64::INFINITY, f64::min),
                x_max: bxs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                mean_y: stats::mean(&ys),
                n: ys.len(),
                se: stats::standard_error(&ys),
            });
        }
    }
    Ok(BinnedSeries { bins, excluded })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HeatmapCell {
    pub mean_hit: f64,
    pub n: usize,
    pub low_n: bool,
}

/// 5x5 grid of mean hit rates over grant-paper pairs, paper-RS quintile by
/// grant-RS quintile (1-based indices: `cells[paper_q - 1][grant_q - 1]`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuintileHeatmap {
    pub cells: Vec<Vec<HeatmapCell>>,
}

impl QuintileHeatmap {
    /// (paper_q, grant_q) of the maximum-hit-rate populated cell.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (1, 1);
        let mut best_rate = f64::NEG_INFINITY;
        for (pi, row) in self.cells.iter().enumerate() {
            for (gi, cell) in row.iter().enumerate() {
                if cell.n > 0 && cell.mean_hit > best_rate {
                    best_rate = cell.mean_hit;
                    best = (pi + 1, gi + 1);
                }
            }
        }
        best
    }

    pub fn total_n(&self) -> usize {
        self.cells.iter().flatten().map(|c| c.n).sum()
    }
}

/// Build the heatmap from aligned (paper RS, grant RS, hit) triples, one per
/// grant-paper pair.
pub fn quintile_heatmap(
    pairs: &[(f64, f64, bool)],
    min_cell_n: usize,
) -> Result<QuintileHeatmap> {
    if pairs.len() < 25 {
        return Err(Error::InvalidParameter(format!(
            "{} grant-paper pairs cannot fill a 5x5 quintile grid (need >= 25)",
            pairs.len()
        )));
    }
    let paper_rs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let grant_rs: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let pq = stats::quantile_bins(&paper_rs, &crate::interdisc::QUINTILE_CUTS)?;
    let gq = stats::quantile_bins(&grant_rs, &crate::interdisc::QUINTILE_CUTS)?;

    let mut sums = vec![vec![0.0; 5]; 5];
    let mut counts = vec![vec![0usize; 5]; 5];
    for ((pair, &p), &g) in pairs.iter().zip(&pq).zip(&gq) {
        sums[p - 1][g - 1] += f64::from(pair.2);
        counts[p - 1][g - 1] += 1;
    }
    let cells = (0..5)
        .map(|p| {
            (0..5)
                .map(|g| {
                    let n = counts[p][g];
                    HeatmapCell {
                        mean_hit: if n > 0 { sums[p][g] / n as f64 } else { f64::NAN },
                        n,
                        low_n: n < min_cell_n,
                    }
                })
                .collect()
        })
        .collect();
    Ok(QuintileHeatmap { cells })
}

/// Funding-amount slice selectors, inclusive of ties at the cut values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FundingSlice {
    TopDecile,
    MiddleDecile,
    Quintile(usize),
}

impl std::str::FromStr for FundingSlice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top-decile" => Ok(FundingSlice::TopDecile),
            "middle-decile" => Ok(FundingSlice::MiddleDecile),
            other => {
                if let Some(q) = other.strip_prefix("quintile:") {
                    let q: usize = q.parse().map_err(|_| {
                        Error::InvalidParameter(format!("bad quintile in `{other}`"))
                    })?;
                    if !(1..=5).contains(&q) {
                        return Err(Error::InvalidParameter(format!(
                            "quintile {q} out of 1..=5"
                        )));
                    }
                    Ok(FundingSlice::Quintile(q))
                } else {
                    Err(Error::InvalidParameter(format!(
                        "unknown funding slice `{other}` (top-decile | middle-decile | quintile:q)"
                    )))
                }
            }
        }
    }
}

/// Indices of `values` inside the slice. Thresholds are nearest-rank values
/// and both ends include ties, so degenerate all-equal inputs select
/// everything.
pub fn select_slice(values: &[f64], slice: FundingSlice) -> Vec<usize> {
    let (lo_frac, hi_frac) = match slice {
        FundingSlice::TopDecile => (Some(0.9), None),
        FundingSlice::MiddleDecile => (Some(0.45), Some(0.55)),
        FundingSlice::Quintile(q) => {
            let lo = (q - 1) as f64 / 5.0;
            let hi = q as f64 / 5.0;
            (if q > 1 { Some(lo) } else { None }, Some(hi))
        }
    };
    let sorted = stats::sorted(values);
    let n = sorted.len();
    let lo = lo_frac.map(|f| {
        // first value strictly above the cut rank, clamped for tiny inputs
        let rank = (stats::rank_of(f, n) + 1).clamp(1, n);
        sorted[rank - 1]
    });
    let hi = hi_frac.map(|f| stats::nearest_rank(&sorted, f));
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| lo.is_none_or(|l| v >= l) && hi.is_none_or(|h| v <= h))
        .map(|(i, _)| i)
        .collect()
}

/// Per-grant outcomes feeding the funding-conditioned curves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrantOutcome {
    pub grant_id: String,
    pub rs: f64,
    pub amount_usd: Option<f64>,
    pub n_papers: usize,
    /// Mean hit flag over supported papers; `None` when the grant has none.
    pub hit_rate: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FundingCurves {
    pub productivity: BinnedSeries,
    pub hit_rate: BinnedSeries,
    /// Grants without a funding amount.
    pub excluded_no_amount: usize,
    pub n_selected: usize,
}

/// Restrict grants to a funding slice, then bin productivity and hit rate
/// over grant interdisciplinarity.
pub fn funding_conditioned_curves(
    grants: &[GrantOutcome],
    slice: FundingSlice,
    n_bins: usize,
    binning: Binning,
) -> Result<FundingCurves> {
    let funded: Vec<&GrantOutcome> = grants.iter().filter(|g| g.amount_usd.is_some()).collect();
    let excluded_no_amount = grants.len() - funded.len();
    if funded.is_empty() {
        return Err(Error::EmptyInput("no grant carries a funding amount"));
    }
    let amounts: Vec<f64> = funded.iter().map(|g| g.amount_usd.unwrap()).collect();
    let chosen = select_slice(&amounts, slice);
    let selected: Vec<&GrantOutcome> = chosen.iter().map(|&i| funded[i]).collect();

    let productivity: Vec<(Option<f64>, Option<f64>)> = selected
        .iter()
        .map(|g| (Some(g.rs), Some(g.n_papers as f64)))
        .collect();
    let hit: Vec<(Option<f64>, Option<f64>)> =
        selected.iter().map(|g| (Some(g.rs), g.hit_rate)).collect();
    Ok(FundingCurves {
        productivity: bin_curve(&productivity, n_bins, binning)?,
        hit_rate: bin_curve(&hit, n_bins, binning)?,
        excluded_no_amount,
        n_selected: selected.len(),
    })
}

/// A multi-grant paper with its supporting-grant summary metrics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiGrantPaper {
    pub paper_id: String,
    pub paper_rs: f64,
    pub hit: bool,
    pub mean_grant_rs: f64,
    pub mean_grant_distance: f64,
}

/// The four collaborative grant formats, by (grant RS, grant distance)
/// median splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComboCell {
    ProximateDisciplinary,
    DistantDisciplinary,
    ProximateInterdisciplinary,
    DistantInterdisciplinary,
}

impl ComboCell {
    pub const ALL: [ComboCell; 4] = [
        ComboCell::ProximateDisciplinary,
        ComboCell::DistantDisciplinary,
        ComboCell::ProximateInterdisciplinary,
        ComboCell::DistantInterdisciplinary,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ComboCell::ProximateDisciplinary => "proximate-disciplinary",
            ComboCell::DistantDisciplinary => "distant-disciplinary",
            ComboCell::ProximateInterdisciplinary => "proximate-interdisciplinary",
            ComboCell::DistantInterdisciplinary => "distant-interdisciplinary",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComboGroup {
    pub cell: String,
    pub mean_hit: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourwayResult {
    pub groups: Vec<ComboGroup>,
    pub n_considered: usize,
    pub rs_split_degenerate: bool,
    pub distance_split_degenerate: bool,
    /// Fewer than four populated cells.
    pub partial: bool,
}

impl FourwayResult {
    pub fn best_cell(&self) -> Option<&ComboGroup> {
        self.groups
            .iter()
            .filter(|g| g.n > 0)
            .max_by(|a, b| a.mean_hit.total_cmp(&b.mean_hit))
    }
}

/// Slice the top (or bottom) `fraction` of multi-grant papers by paper RS,
/// median-split their grant metrics, and report mean hit rate per cell.
pub fn fourway_grant_combo(
    papers: &[MultiGrantPaper],
    fraction: f64,
    top: bool,
) -> Result<FourwayResult> {
    if papers.is_empty() {
        return Err(Error::EmptyInput("no multi-grant paper to classify"));
    }
    if !(0.0..=1.0).contains(&fraction) || fraction == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "paper-RS split fraction {fraction} outside (0,1]"
        )));
    }
    let rs: Vec<f64> = papers.iter().map(|p| p.paper_rs).collect();
    let chosen: Vec<&MultiGrantPaper> = if fraction >= 1.0 {
        papers.iter().collect()
    } else {
        let sorted = stats::sorted(&rs);
        let n = sorted.len();
        if top {
            let rank = (stats::rank_of(1.0 - fraction, n) + 1).clamp(1, n);
            let lo = sorted[rank - 1];
            papers.iter().filter(|p| p.paper_rs >= lo).collect()
        } else {
            let hi = stats::nearest_rank(&sorted, fraction);
            papers.iter().filter(|p| p.paper_rs <= hi).collect()
        }
    };
    if chosen.is_empty() {
        return Err(Error::EmptyInput("paper-RS slice selected no papers"));
    }

    let grant_rs: Vec<f64> = chosen.iter().map(|p| p.mean_grant_rs).collect();
    let grant_d: Vec<f64> = chosen.iter().map(|p| p.mean_grant_distance).collect();
    let rs_median = stats::median(&grant_rs);
    let d_median = stats::median(&grant_d);
    let rs_split_degenerate =
        grant_rs.iter().all(|&v| v <= rs_median) && grant_rs.iter().all(|&v| v >= rs_median);
    let distance_split_degenerate =
        grant_d.iter().all(|&v| v <= d_median) && grant_d.iter().all(|&v| v >= d_median);

    let mut sums: HashMap<ComboCell, (f64, usize)> = HashMap::new();
    for p in &chosen {
        let disciplinary = p.mean_grant_rs <= rs_median;
        let proximate = p.mean_grant_distance <= d_median;
        let cell = match (disciplinary, proximate) {
            (true, true) => ComboCell::ProximateDisciplinary,
            (true, false) => ComboCell::DistantDisciplinary,
            (false, true) => ComboCell::ProximateInterdisciplinary,
            (false, false) => ComboCell::DistantInterdisciplinary,
        };
        let entry = sums.entry(cell).or_insert((0.0, 0));
        entry.0 += f64::from(p.hit);
        entry.1 += 1;
    }
    let groups: Vec<ComboGroup> = ComboCell::ALL
        .iter()
        .map(|cell| {
            let (sum, n) = sums.get(cell).copied().unwrap_or((0.0, 0));
            ComboGroup {
                cell: cell.label().to_string(),
                mean_hit: if n > 0 { sum / n as f64 } else { f64::NAN },
                n,
            }
        })
        .collect();
    let populated = groups.iter().filter(|g| g.n > 0).count();
    Ok(FourwayResult {
        groups,
        n_considered: chosen.len(),
        rs_split_degenerate,
        distance_split_degenerate,
        partial: populated < 4,
    })
}

/// Yearly trend grouping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrendGroupBy {
    #[default]
    None,
    GrantSupport,
    TeamSize,
    Prominence,
    NFields,
}

impl std::str::FromStr for TrendGroupBy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(TrendGroupBy::None),
            "grant-support" => Ok(TrendGroupBy::GrantSupport),
            "team-size" => Ok(TrendGroupBy::TeamSize),
            "prominence" => Ok(TrendGroupBy::Prominence),
            "n-fields" => Ok(TrendGroupBy::NFields),
            other => Err(Error::InvalidParameter(format!(
                "unknown trend grouping `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrendPoint {
    pub group: String,
    pub year: i32,
    pub mean_rs: f64,
    pub n: usize,
    pub se: f64,
}

/// Mean RS per calendar year and group over papers with a score.
pub fn trend_by_year(
    store: &CorpusStore,
    scores: &HashMap<String, f64>,
    group_by: TrendGroupBy,
) -> Vec<TrendPoint> {
    let prominence_median = match group_by {
        TrendGroupBy::Prominence => {
            let values: Vec<f64> = store
                .papers
                .iter()
                .filter_map(|p| p.max_author_citations.map(|v| v as f64))
                .collect();
            (!values.is_empty()).then(|| stats::median(&values))
        }
        _ => None,
    };

    let mut groups: std::collections::BTreeMap<(String, i32), Vec<f64>> =
        std::collections::BTreeMap::new();
    for paper in &store.papers {
        let Some(&rs) = scores.get(&paper.id) else {
            continue;
        };
        let label = match group_by {
            TrendGroupBy::None => "all".to_string(),
            TrendGroupBy::GrantSupport => {
                if store.grants_of(&paper.id).is_empty() {
                    "unsupported".to_string()
                } else {
                    "supported".to_string()
                }
            }
            TrendGroupBy::TeamSize => match paper.n_authors {
                0..=2 => "team-1-2".to_string(),
                3..=5 => "team-3-5".to_string(),
                _ => "team-6+".to_string(),
            },
            TrendGroupBy::Prominence => match (paper.max_author_citations, prominence_median) {
                (Some(v), Some(m)) if (v as f64) > m => "high-prominence".to_string(),
                (Some(_), Some(_)) => "low-prominence".to_string(),
                _ => "unknown-prominence".to_string(),
            },
            TrendGroupBy::NFields => match paper.field_labels.len() {
                1 => "fields-1".to_string(),
                2 => "fields-2".to_string(),
                _ => "fields-3+".to_string(),
            },
        };
        groups.entry((label, paper.year)).or_default().push(rs);
    }
    groups
        .into_iter()
        .map(|((group, year), values)| TrendPoint {
            group,
            year,
            mean_rs: stats::mean(&values),
            n: values.len(),
            se: stats::standard_error(&values),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(points: &[(f64, f64)]) -> Vec<(Option<f64>, Option<f64>)> {
        points.iter().map(|&(x, y)| (Some(x), Some(y))).collect()
    }

    #[test]
    fn constant_y_gives_flat_series() {
        let pts: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, 7.0)).collect();
        let series = bin_curve(&xy(&pts), 5, Binning::EqualCount).unwrap();
        assert!(series.means().iter().all(|&m| (m - 7.0).abs() < 1e-12));
    }

    #[test]
    fn identity_map_gives_increasing_means() {
        let pts: Vec<(f64, f64)> = (0..100).map(|i| (i as f64, i as f64)).collect();
        let series = bin_curve(&xy(&pts), 5, Binning::EqualCount).unwrap();
        let means = series.means();
        assert_eq!(means.len(), 5);
        assert!(means.windows(2).all(|w| w[0] < w[1]));
        assert!(series.bins.iter().all(|b| b.n == 20));
    }

    #[test]
    fn undefined_metrics_are_excluded_with_tally() {
        let mut pts = xy(&(0..20).map(|i| (i as f64, 1.0)).collect::<Vec<_>>());
        pts.push((Some(3.0), None));
        pts.push((None, Some(1.0)));
        let series = bin_curve(&pts, 4, Binning::EqualCount).unwrap();
        assert_eq!(series.excluded, 2);
        assert_eq!(series.bins.iter().map(|b| b.n).sum::<usize>(), 20);
    }

    #[test]
    fn rank_invariance_under_monotone_transform() {
        let pts: Vec<(f64, f64)> = (0..60)
            .map(|i| (i as f64 * 0.1, (i % 7) as f64))
            .collect();
        let a = bin_curve(&xy(&pts), 6, Binning::EqualCount).unwrap();
        let transformed: Vec<(f64, f64)> =
            pts.iter().map(|&(x, y)| ((x + 1.0).exp(), y)).collect();
        let b = bin_curve(&xy(&transformed), 6, Binning::EqualCount).unwrap();
        for (ba, bb) in a.bins.iter().zip(&b.bins) {
            assert_eq!(ba.n, bb.n);
            assert!((ba.mean_y - bb.mean_y).abs() < 1e-12);
        }
    }

    #[test]
    fn heatmap_counts_and_extremes() {
        let mut pairs = Vec::new();
        for i in 0..100 {
            pairs.push((i as f64, (i * 37 % 100) as f64, true));
        }
        let grid = quintile_heatmap(&pairs, 3).unwrap();
        assert_eq!(grid.total_n(), 100);
        for row in &grid.cells {
            for cell in row {
                if cell.n > 0 {
                    assert_eq!(cell.mean_hit, 1.0);
                }
            }
        }
    }

    #[test]
    fn heatmap_finds_planted_corner() {
        let mut pairs = Vec::new();
        for i in 0..100 {
            let paper_rs = i as f64;
            let grant_rs = (i * 37 % 100) as f64;
            // hits planted at high paper RS, low grant RS only
            let hit = paper_rs >= 80.0 && grant_rs < 20.0;
            pairs.push((paper_rs, grant_rs, hit));
        }
        let grid = quintile_heatmap(&pairs, 1).unwrap();
        assert_eq!(grid.argmax(), (5, 1));
    }

    #[test]
    fn heatmap_needs_25_pairs() {
        let pairs: Vec<(f64, f64, bool)> =
            (0..24).map(|i| (i as f64, i as f64, false)).collect();
        assert!(quintile_heatmap(&pairs, 1).is_err());
    }

    #[test]
    fn slices_select_by_nearest_rank() {
        let values: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(select_slice(&values, FundingSlice::TopDecile).len(), 10);
        assert_eq!(select_slice(&values, FundingSlice::MiddleDecile).len(), 10);
        assert_eq!(select_slice(&values, FundingSlice::Quintile(1)).len(), 20);
        assert_eq!(select_slice(&values, FundingSlice::Quintile(3)).len(), 20);
    }

    #[test]
    fn degenerate_amounts_select_everything() {
        let values = vec![5.0; 40];
        for slice in [
            FundingSlice::TopDecile,
            FundingSlice::MiddleDecile,
            FundingSlice::Quintile(1),
            FundingSlice::Quintile(5),
        ] {
            assert_eq!(select_slice(&values, slice).len(), 40, "{slice:?}");
        }
    }

    fn outcome(id: usize, rs: f64, amount: f64, n_papers: usize, hit: f64) -> GrantOutcome {
        GrantOutcome {
            grant_id: format!("g{id}"),
            rs,
            amount_usd: Some(amount),
            n_papers,
            hit_rate: Some(hit),
        }
    }

    #[test]
    fn funding_curves_run_over_selected_slice() {
        let grants: Vec<GrantOutcome> = (0..100)
            .map(|i| outcome(i, i as f64 / 100.0, 1000.0 + i as f64, 10 - i / 12, 0.1))
            .collect();
        let curves =
            funding_conditioned_curves(&grants, FundingSlice::TopDecile, 2, Binning::EqualCount)
                .unwrap();
        assert_eq!(curves.n_selected, 10);
        assert_eq!(curves.excluded_no_amount, 0);
        assert_eq!(
            curves.productivity.bins.iter().map(|b| b.n).sum::<usize>(),
            10
        );
    }

    fn mg(id: usize, paper_rs: f64, hit: bool, grs: f64, gd: f64) -> MultiGrantPaper {
        MultiGrantPaper {
            paper_id: format!("p{id}"),
            paper_rs,
            hit,
            mean_grant_rs: grs,
            mean_grant_distance: gd,
        }
    }

    #[test]
    fn fourway_ranks_planted_cell_first() {
        let mut papers = Vec::new();
        for i in 0..200 {
            let paper_rs = i as f64 / 200.0;
            let grs = if i % 2 == 0 { 0.1 } else { 0.9 };
            let gd = if (i / 2) % 2 == 0 { 0.1 } else { 0.9 };
            // hits planted in (low grant RS, low distance)
            let hit = grs < 0.5 && gd < 0.5 && i % 4 != 1;
            papers.push(mg(i, paper_rs, hit, grs, gd));
        }
        let result = fourway_grant_combo(&papers, 0.5, true).unwrap();
        assert!(!result.partial);
        assert_eq!(result.best_cell().unwrap().cell, "proximate-disciplinary");
    }

    #[test]
    fn identical_grants_are_proximate() {
        let papers = vec![
            mg(0, 0.9, true, 0.2, 0.0),
            mg(1, 0.8, false, 0.3, 0.0),
            mg(2, 0.7, false, 0.8, 0.0),
            mg(3, 0.6, true, 0.9, 0.0),
        ];
        let result = fourway_grant_combo(&papers, 1.0, true).unwrap();
        assert!(result.distance_split_degenerate);
        let distant_n: usize = result
            .groups
            .iter()
            .filter(|g| g.cell.starts_with("distant"))
            .map(|g| g.n)
            .sum();
        assert_eq!(distant_n, 0);
    }

    #[test]
    fn tied_grant_rs_flags_degenerate_split() {
        let papers: Vec<MultiGrantPaper> = (0..10)
            .map(|i| mg(i, i as f64, false, 0.5, i as f64 / 10.0))
            .collect();
        let result = fourway_grant_combo(&papers, 1.0, true).unwrap();
        assert!(result.rs_split_degenerate);
        assert!(!result.distance_split_degenerate);
    }
}
