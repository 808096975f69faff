//! Empirical distributions of normalized pair distances over lattice point
//! sets, and goodness-of-fit comparison against the theoretical CDF.
//!
//! Two normalizations are used on purpose:
//!
//! * histograms ([`exact_histogram`], [`sampled_histogram`]) count pairs of
//!   *distinct* points, unordered in exact mode;
//! * [`pair_count_in_region`] counts *ordered* pairs including the diagonal,
//!   so that at `λ = 2` it equals `N²`, the bookkeeping of `|T × T|`.
//!
//! Distances are squared norms in `i64`; the only floating-point operation
//! per distinct squared distance is one square root, and bin assignment is
//! tabulated per squared distance, so binning is reproducible bit for bit.

use std::io::{self, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::pointsets::{LatticePointSet, PointCloud, DEFAULT_ENUMERATION_BUDGET};
use crate::report::{fmt_f64, Provenance};
use crate::streams;
use crate::theory::{cdf, pdf, DistributionSpec, Lambda};

/// Default number of uniform bins on `[0, 2]`.
pub const DEFAULT_BINS: usize = 200;

/// Default cap on the number of points for all-pairs passes.
pub const DEFAULT_EXACT_POINT_CAP: usize = 20_000;

/// Default KS threshold for runs with at least a million pairs.
pub const DEFAULT_KS_THRESHOLD: f64 = 0.01;

/// Largest squared-distance lookup table built for binning (entries).
const MAX_TABLE_LEN: u64 = 1 << 25;

/// Number of interleaved row groups in all-pairs passes.
const ROW_GROUPS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HistogramMode {
    Exact,
    Sampled,
}

/// Limits for the all-pairs passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactBudget {
    pub max_points: usize,
    pub enumeration: u128,
}

impl Default for ExactBudget {
    fn default() -> Self {
        Self { max_points: DEFAULT_EXACT_POINT_CAP, enumeration: DEFAULT_ENUMERATION_BUDGET }
    }
}

impl ExactBudget {
    pub fn with_max_points(max_points: usize) -> Self {
        Self { max_points, ..Self::default() }
    }
}

/// Binned counts of normalized pair distances `λ = |x - y| / R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairHistogram {
    n: u32,
    radius: f64,
    bin_edges: Vec<f64>,
    counts: Vec<u64>,
    total_pairs: u64,
    mode: HistogramMode,
    seed: Option<u64>,
}

impl PairHistogram {
    /// Assembles a histogram from raw parts, checking its invariants.
    pub fn from_parts(
        n: u32,
        radius: f64,
        bin_edges: Vec<f64>,
        counts: Vec<u64>,
        mode: HistogramMode,
        seed: Option<u64>,
    ) -> Result<Self> {
        validate_edges(&bin_edges)?;
        if counts.len() + 1 != bin_edges.len() {
            return Err(domain(format!("{} counts do not match {} bin edges", counts.len(), bin_edges.len())));
        }
        if (mode == HistogramMode::Sampled) != seed.is_some() {
            return Err(domain("a seed is recorded exactly for sampled histograms"));
        }
        let total_pairs = counts.iter().sum();
        Ok(Self { n, radius, bin_edges, counts, total_pairs, mode, seed })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total_pairs(&self) -> u64 {
        self.total_pairs
    }

    pub fn mode(&self) -> HistogramMode {
        self.mode
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `count / total_pairs` per bin; all zero for an empty histogram.
    pub fn relative_frequencies(&self) -> Vec<f64> {
        if self.total_pairs == 0 {
            return vec![0.0; self.counts.len()];
        }
        let total = self.total_pairs as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// Empirical CDF at every bin edge: `F(e_k) = (Σ_{j<k} counts_j) / total`.
    pub fn cdf_at_edges(&self) -> Vec<f64> {
        let total = self.total_pairs.max(1) as f64;
        let mut acc = 0u64;
        let mut out = Vec::with_capacity(self.bin_edges.len());
        out.push(0.0);
        for &c in &self.counts {
            acc += c;
            out.push(acc as f64 / total);
        }
        out
    }

    /// One row per bin with the theoretical density at the bin midpoint.
    pub fn rows(&self, theory: &DistributionSpec) -> Vec<HistogramRow> {
        let freq = self.relative_frequencies();
        self.counts
            .iter()
            .zip(freq)
            .enumerate()
            .map(|(k, (&count, relative_frequency))| {
                let (bin_left, bin_right) = (self.bin_edges[k], self.bin_edges[k + 1]);
                let mid = Lambda::new((0.5 * (bin_left + bin_right)).clamp(0.0, 2.0)).expect("midpoint in [0, 2]");
                HistogramRow {
                    bin_left,
                    bin_right,
                    count,
                    relative_frequency,
                    theory_pdf_at_midpoint: pdf(theory, mid),
                }
            })
            .collect()
    }

    /// Writes `bin_left,bin_right,count,relative_frequency,theory_pdf_at_midpoint`
    /// rows preceded by `#` provenance lines.
    pub fn write_csv<W: Write>(&self, out: &mut W, theory: &DistributionSpec, meta: &Provenance) -> io::Result<()> {
        meta.write_comment_header(out)?;
        writeln!(out, "bin_left,bin_right,count,relative_frequency,theory_pdf_at_midpoint")?;
        for row in self.rows(theory) {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(row.bin_left),
                fmt_f64(row.bin_right),
                row.count,
                fmt_f64(row.relative_frequency),
                fmt_f64(row.theory_pdf_at_midpoint)
            )?;
        }
        Ok(())
    }
}

/// A histogram bin as exported to CSV and JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: u64,
    pub relative_frequency: f64,
    pub theory_pdf_at_midpoint: f64,
}

fn validate_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(domain("a histogram needs at least two bin edges"));
    }
    if edges[0] != 0.0 {
        return Err(domain(format!("first bin edge must be 0, got {}", edges[0])));
    }
    let last = edges[edges.len() - 1];
    if (last - 2.0).abs() > 1e-12 {
        return Err(domain(format!("last bin edge must be 2, got {last}")));
    }
    if !edges.windows(2).all(|w| w[0] < w[1]) {
        return Err(domain("bin edges must be strictly increasing"));
    }
    Ok(())
}

/// `bins + 1` uniform edges on `[0, 2]`, with the last edge exactly 2.
pub fn uniform_edges(bins: usize) -> Result<Vec<f64>> {
    if bins == 0 {
        return Err(domain("at least one bin is required"));
    }
    Ok((0..=bins).map(|k| 2.0 * k as f64 / bins as f64).collect())
}

/// Bin index of a normalized distance under left-closed bins; `λ = 2` goes to
/// the last bin.
fn bin_of(edges: &[f64], lambda: f64) -> usize {
    let bins = edges.len() - 1;
    edges.partition_point(|&e| e <= lambda).saturating_sub(1).min(bins - 1)
}

/// Maps a squared integer distance to its bin.
enum Binner<'a> {
    Table(Vec<u32>),
    Direct { edges: &'a [f64], radius: f64 },
}

impl<'a> Binner<'a> {
    fn new(edges: &'a [f64], radius: f64) -> Self {
        let max_d2 = (4.0 * radius * radius).floor() as u64;
        if max_d2 < MAX_TABLE_LEN {
            let table = (0..=max_d2).map(|d2| bin_of(edges, (d2 as f64).sqrt() / radius) as u32).collect();
            Binner::Table(table)
        } else {
            Binner::Direct { edges, radius }
        }
    }

    #[inline]
    fn bin(&self, d2: i64) -> usize {
        match self {
            Binner::Table(t) => match t.get(d2 as usize) {
                Some(&b) => b as usize,
                None => t[t.len() - 1] as usize,
            },
            Binner::Direct { edges, radius } => bin_of(edges, (d2 as f64).sqrt() / radius),
        }
    }
}

fn add_into(mut acc: Vec<u64>, other: Vec<u64>) -> Vec<u64> {
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
    acc
}

fn checked_points(set: &LatticePointSet, budget: &ExactBudget) -> Result<PointCloud> {
    let cloud = set.points_with_budget(budget.enumeration)?;
    if cloud.len() > budget.max_points {
        return Err(Error::Budget {
            what: "all-pairs pass",
            estimated: cloud.len() as u128,
            budget: budget.max_points as u128,
            hint: " points; use sampled mode or raise the point cap",
        });
    }
    Ok(cloud)
}

/// Histogram of all unordered pairs of distinct points.
///
/// ```
/// use paircorr::empirical::{exact_histogram, ExactBudget};
/// use paircorr::pointsets::{Boundary, LatticePointSet, PointKind};
/// // {-1, 0, 1} at R = 1.5: distances 1, 1, 2 → λ = 2/3, 2/3, 4/3.
/// let set = LatticePointSet::new(1, 1.5, PointKind::Integer, Boundary::Closed).unwrap();
/// let h = exact_histogram(&set, 2, &ExactBudget::default()).unwrap();
/// assert_eq!(h.counts(), &[2, 1]);
/// assert_eq!(h.total_pairs(), 3);
/// ```
pub fn exact_histogram(set: &LatticePointSet, bins: usize, budget: &ExactBudget) -> Result<PairHistogram> {
    let cloud = checked_points(set, budget)?;
    exact_histogram_of(&cloud, set.radius(), bins)
}

/// [`exact_histogram`] over an already materialized point list.
pub fn exact_histogram_of(cloud: &PointCloud, radius: f64, bins: usize) -> Result<PairHistogram> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(domain(format!("normalizing radius must be positive, got {radius}")));
    }
    let edges = uniform_edges(bins)?;
    let binner = Binner::new(&edges, radius);
    let len = cloud.len();
    let counts = (0..ROW_GROUPS)
        .into_par_iter()
        .map(|g| {
            let mut local = vec![0u64; bins];
            let mut i = g;
            while i < len {
                for j in i + 1..len {
                    local[binner.bin(cloud.dist_sq(i, j))] += 1;
                }
                i += ROW_GROUPS;
            }
            local
        })
        .reduce(|| vec![0u64; bins], add_into);
    PairHistogram::from_parts(cloud.n(), radius, edges, counts, HistogramMode::Exact, None)
}

/// Histogram of `samples` ordered pairs drawn uniformly with replacement,
/// redrawing the second index when it equals the first.
///
/// The result is a function of `(set, bins, samples, seed)` only.
pub fn sampled_histogram(set: &LatticePointSet, bins: usize, samples: u64, seed: u64) -> Result<PairHistogram> {
    let cloud = set.points()?;
    sampled_histogram_of(&cloud, set.radius(), bins, samples, seed)
}

pub fn sampled_histogram_of(
    cloud: &PointCloud,
    radius: f64,
    bins: usize,
    samples: u64,
    seed: u64,
) -> Result<PairHistogram> {
    if cloud.len() < 2 {
        return Err(domain(format!("sampling pairs needs at least 2 points, got {}", cloud.len())));
    }
    if samples == 0 {
        return Err(domain("at least one sample is required"));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(domain(format!("normalizing radius must be positive, got {radius}")));
    }
    let edges = uniform_edges(bins)?;
    let binner = Binner::new(&edges, radius);
    let len = cloud.len();
    let counts = streams::blocks(samples)
        .map(|(block, draws)| {
            let mut rng = streams::block_rng(seed, block);
            let mut local = vec![0u64; bins];
            for _ in 0..draws {
                let i = rng.random_range(0..len);
                let j = loop {
                    let j = rng.random_range(0..len);
                    if j != i {
                        break j;
                    }
                };
                local[binner.bin(cloud.dist_sq(i, j))] += 1;
            }
            local
        })
        .reduce(|| vec![0u64; bins], add_into);
    PairHistogram::from_parts(cloud.n(), radius, edges, counts, HistogramMode::Sampled, Some(seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatisticKind {
    Ks,
    ChiSquare,
}

/// Outcome of a goodness-of-fit comparison; `pass` iff `statistic ≤ threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    #[serde(rename = "kind")]
    pub statistic_kind: StatisticKind,
    pub statistic: f64,
    pub sample_size: u64,
    pub threshold: f64,
    pub pass: bool,
}

impl GofReport {
    fn new(statistic_kind: StatisticKind, statistic: f64, sample_size: u64, threshold: f64) -> Self {
        Self { statistic_kind, statistic, sample_size, threshold, pass: statistic <= threshold }
    }
}

fn check_comparable(hist: &PairHistogram, spec: &DistributionSpec) -> Result<()> {
    if hist.n != spec.n() {
        return Err(Error::DimensionMismatch { histogram: hist.n, distribution: spec.n() });
    }
    if hist.total_pairs == 0 {
        return Err(domain("cannot compare an empty histogram"));
    }
    Ok(())
}

/// Largest gap between the empirical and theoretical CDFs over the bin edges.
///
/// This is the Kolmogorov–Smirnov distance discretized to the bin grid: it
/// never exceeds the classical statistic over raw distances, and no p-value
/// is attached.
pub fn ks_compare(hist: &PairHistogram, spec: &DistributionSpec, threshold: f64) -> Result<GofReport> {
    check_comparable(hist, spec)?;
    let statistic = hist
        .bin_edges
        .iter()
        .zip(hist.cdf_at_edges())
        .map(|(&e, emp)| (emp - cdf(spec, Lambda::new(e.min(2.0)).expect("edge in [0, 2]"))).abs())
        .fold(0.0, f64::max);
    Ok(GofReport::new(StatisticKind::Ks, statistic, hist.total_pairs, threshold))
}

/// Pearson's `Σ (O - E)² / E` over bins with positive expected count.
pub fn chi_square_compare(hist: &PairHistogram, spec: &DistributionSpec, threshold: f64) -> Result<GofReport> {
    check_comparable(hist, spec)?;
    let total = hist.total_pairs as f64;
    let theory: Vec<f64> =
        hist.bin_edges.iter().map(|&e| cdf(spec, Lambda::new(e.min(2.0)).expect("edge in [0, 2]"))).collect();
    let statistic = hist
        .counts
        .iter()
        .zip(theory.windows(2))
        .filter_map(|(&obs, w)| {
            let expected = total * (w[1] - w[0]);
            (expected > 0.0).then(|| (obs as f64 - expected).powi(2) / expected)
        })
        .sum();
    Ok(GofReport::new(StatisticKind::ChiSquare, statistic, hist.total_pairs, threshold))
}

/// Counts of unordered pairs of distinct points by squared distance:
/// entry `d` is the number of pairs with `|x - y|² = d`.
pub fn distance_spectrum(cloud: &PointCloud) -> Vec<u64> {
    let len = cloud.len();
    let max_d2 = (0..len).into_par_iter().map(|i| cloud.point(i).iter().map(|x| x * x).sum::<i64>()).max().unwrap_or(0);
    // |x - y|² ≤ (|x| + |y|)² ≤ 4 max|x|²
    let size = 4 * max_d2 as usize + 1;
    (0..ROW_GROUPS)
        .into_par_iter()
        .map(|g| {
            let mut local = vec![0u64; size];
            let mut i = g;
            while i < len {
                for j in i + 1..len {
                    local[cloud.dist_sq(i, j) as usize] += 1;
                }
                i += ROW_GROUPS;
            }
            local
        })
        .reduce(|| vec![0u64; size], add_into)
}

/// Ordered pairs `(a, b)` of points of the set, including `a = b`, with
/// `|a - b| ≤ λR`: the lattice count of the region `Ψ(R, λ)`.
pub fn pair_count_in_region(set: &LatticePointSet, lam: Lambda, budget: &ExactBudget) -> Result<u64> {
    Ok(pair_counts_in_region(set, &[lam], budget)?[0])
}

/// [`pair_count_in_region`] for several `λ` from one all-pairs pass.
pub fn pair_counts_in_region(set: &LatticePointSet, lams: &[Lambda], budget: &ExactBudget) -> Result<Vec<u64>> {
    let cloud = checked_points(set, budget)?;
    let n_points = cloud.len() as u64;
    let spectrum = distance_spectrum(&cloud);
    let mut cumulative = spectrum;
    for d in 1..cumulative.len() {
        cumulative[d] += cumulative[d - 1];
    }
    let r = set.radius();
    Ok(lams
        .iter()
        .map(|lam| {
            if lam.value() >= 2.0 {
                return n_points * n_points;
            }
            let limit = (lam.value() * r).powi(2);
            let idx = (limit.floor() as usize).min(cumulative.len() - 1);
            n_points + 2 * cumulative[idx]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointsets::{Boundary, PointKind};

    fn set(n: u32, r: f64, kind: PointKind) -> LatticePointSet {
        LatticePointSet::new(n, r, kind, Boundary::Closed).unwrap()
    }

    #[test]
    fn edges() {
        let e = uniform_edges(4).unwrap();
        assert_eq!(e, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert!(uniform_edges(0).is_err());
        let e = uniform_edges(200).unwrap();
        assert_eq!(*e.last().unwrap(), 2.0);
        assert_eq!(bin_of(&e, 0.0), 0);
        assert_eq!(bin_of(&e, 2.0), 199);
        assert_eq!(bin_of(&e, 1.0), 100);
    }

    #[test]
    fn hand_checked_histogram() {
        let h = exact_histogram(&set(1, 1.5, PointKind::Integer), 2, &ExactBudget::default()).unwrap();
        assert_eq!(h.counts(), &[2, 1]);
        assert_eq!(h.total_pairs(), 3);
        assert_eq!(h.bin_edges(), &[0.0, 1.0, 2.0]);
        assert_eq!(h.mode(), HistogramMode::Exact);
        assert_eq!(h.seed(), None);
    }

    #[test]
    fn exact_pair_totals() {
        let h = exact_histogram(&set(2, 2.0, PointKind::Integer), 50, &ExactBudget::default()).unwrap();
        assert_eq!(h.total_pairs(), 78);
        let single = exact_histogram(&set(2, 0.0, PointKind::Integer), 10, &ExactBudget::default());
        // R = 0 cannot normalize distances.
        assert!(single.is_err());
        let one = exact_histogram(&set(2, 0.9, PointKind::Integer), 10, &ExactBudget::default()).unwrap();
        assert_eq!(one.total_pairs(), 0);
        assert!(one.counts().iter().all(|&c| c == 0));
    }

    #[test]
    fn exact_cap_is_enforced() {
        let err = exact_histogram(&set(2, 20.0, PointKind::Integer), 10, &ExactBudget::with_max_points(100));
        assert!(matches!(err, Err(Error::Budget { estimated: 1257, budget: 100, .. })));
    }

    #[test]
    fn sampled_is_deterministic() {
        let s = set(2, 30.0, PointKind::Primitive);
        let a = sampled_histogram(&s, 40, 100_000, 9).unwrap();
        let b = sampled_histogram(&s, 40, 100_000, 9).unwrap();
        let c = sampled_histogram(&s, 40, 100_000, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.counts(), c.counts());
        assert_eq!(a.total_pairs(), 100_000);
        assert_eq!(a.seed(), Some(9));
    }

    #[test]
    fn sampled_needs_two_points() {
        assert!(sampled_histogram(&set(2, 0.5, PointKind::Integer), 10, 10, 1).is_err());
        assert!(sampled_histogram(&set(2, 5.0, PointKind::Integer), 10, 0, 1).is_err());
    }

    #[test]
    fn ks_errors() {
        let h = exact_histogram(&set(2, 0.9, PointKind::Integer), 10, &ExactBudget::default()).unwrap();
        assert!(ks_compare(&h, &DistributionSpec::new(2).unwrap(), 0.01).is_err());
        let h = exact_histogram(&set(2, 5.0, PointKind::Integer), 10, &ExactBudget::default()).unwrap();
        assert!(matches!(
            ks_compare(&h, &DistributionSpec::new(3).unwrap(), 0.01),
            Err(Error::DimensionMismatch { histogram: 2, distribution: 3 })
        ));
    }

    #[test]
    fn gof_report_json_shape() {
        let r = GofReport::new(StatisticKind::Ks, 0.004, 10, 0.01);
        let v = serde_json::to_value(r).unwrap();
        assert_eq!(v["kind"], "ks");
        assert_eq!(v["pass"], true);
        assert_eq!(v["sample_size"], 10);
        let fail = GofReport::new(StatisticKind::ChiSquare, 2.0, 10, 1.0);
        assert!(!fail.pass);
    }

    #[test]
    fn region_counts_at_extremes() {
        let s = set(2, 6.0, PointKind::Integer);
        let n = s.count().unwrap();
        let counts = pair_counts_in_region(&s, &[Lambda::ZERO, Lambda::MAX], &ExactBudget::default()).unwrap();
        assert_eq!(counts, vec![n, n * n]);
    }

    #[test]
    fn histogram_parts_validation() {
        let e = uniform_edges(2).unwrap();
        assert!(PairHistogram::from_parts(2, 1.0, e.clone(), vec![1], HistogramMode::Exact, None).is_err());
        assert!(PairHistogram::from_parts(2, 1.0, vec![0.0, 1.5], vec![1], HistogramMode::Exact, None).is_err());
        assert!(PairHistogram::from_parts(2, 1.0, vec![0.0, 1.0, 1.0, 2.0], vec![1, 1, 1], HistogramMode::Exact, None)
            .is_err());
        assert!(PairHistogram::from_parts(2, 1.0, e.clone(), vec![1, 2], HistogramMode::Sampled, None).is_err());
        let h = PairHistogram::from_parts(2, 1.0, e, vec![1, 2], HistogramMode::Exact, None).unwrap();
        assert_eq!(h.total_pairs(), 3);
        assert_eq!(h.cdf_at_edges(), vec![0.0, 1.0 / 3.0, 1.0]);
    }

    #[test]
    fn csv_schema() {
        let h = exact_histogram(&set(1, 1.5, PointKind::Integer), 2, &ExactBudget::default()).unwrap();
        let mut buf = Vec::new();
        let meta = Provenance::new("paircorr", "test");
        h.write_csv(&mut buf, &DistributionSpec::new(1).unwrap(), &meta).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "# tool: paircorr");
        assert_eq!(lines[2], "bin_left,bin_right,count,relative_frequency,theory_pdf_at_midpoint");
        let row: Vec<_> = lines[3].split(',').collect();
        assert_eq!(row[2], "2");
        // P_1(0.5) = 0.75
        assert!((row[4].parse::<f64>().unwrap() - 0.75).abs() < 1e-14);
        assert_eq!(lines.len(), 5);
    }
}
