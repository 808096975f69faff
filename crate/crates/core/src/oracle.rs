//! Monte Carlo estimators that check the analytic volumes independently.
//!
//! All estimators are hit-or-miss: a uniform sample in a reference set of
//! known volume `V` hits the target with probability `p`, so the estimate is
//! `p̂ V` with binomial standard error `V √(p̂(1 - p̂)/N)`. This is unbiased with
//! exact error bars but wastes most samples once the dimension grows; it is
//! meant for `2n ≤ 12`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{cap_measure, cap_volume};
use crate::streams;
use crate::theory::{region_volume, DistributionSpec, Lambda};

pub const MIN_SAMPLES: u64 = 10_000;

/// Largest `n` for which the region `Ψ(1, λ) ⊂ R^2n` is sampled.
pub const MAX_REGION_DIMENSION: u32 = 6;

/// The region `Ψ(1, λ) = {(a, b) : |a| ≤ 1, |b| ≤ 1, |a - b| ≤ λ}` in `R^2n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    n: u32,
    lam: Lambda,
}

impl RegionSpec {
    pub fn new(n: u32, lam: Lambda) -> Result<Self> {
        if n == 0 || n > MAX_REGION_DIMENSION {
            return Err(Error::UnsupportedDimension {
                n, reason: "Monte Carlo region sampling supports 1 ≤ n ≤ 6"
            });
        }
        Ok(Self { n, lam })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lam(&self) -> Lambda {
        self.lam
    }

    /// Membership of `(a, b)`; `a` and `b` must both have `n` coordinates.
    pub fn contains(&self, a: &[f64], b: &[f64]) -> bool {
        let na: f64 = a.iter().map(|x| x * x).sum();
        let nb: f64 = b.iter().map(|x| x * x).sum();
        let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        let l = self.lam.value();
        na <= 1.0 && nb <= 1.0 && d <= l * l
    }

    /// The analytic volume this region should have.
    pub fn analytic_volume(&self) -> f64 {
        let spec = DistributionSpec::new(self.n).expect("validated dimension");
        region_volume(&spec, self.lam)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    fn from_hits(hits: u64, samples: u64, seed: u64, reference_volume: f64) -> Self {
        let p = hits as f64 / samples as f64;
        Self {
            value: p * reference_volume,
            std_error: (p * (1.0 - p) / samples as f64).sqrt() * reference_volume,
            samples,
            seed,
        }
    }

    /// `|value - analytic| / std_error`; zero when both the deviation and the
    /// error vanish, infinite when only the error does.
    pub fn sigma_distance(&self, analytic: f64) -> f64 {
        let diff = (self.value - analytic).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }

    pub fn compare(self, analytic_value: f64) -> McReport {
        McReport { sigma_distance: self.sigma_distance(analytic_value), estimate: self, analytic_value }
    }
}

/// An estimate next to the analytic value it checks.
///
/// Serializes flat as `{value, std_error, samples, seed, analytic_value, sigma_distance}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    #[serde(flatten)]
    pub estimate: McEstimate,
    pub analytic_value: f64,
    pub sigma_distance: f64,
}

impl McReport {
    pub fn within_sigma(&self, k: f64) -> bool {
        self.sigma_distance < k
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::OutOfRange {
            what: "samples",
            detail: format!("at least {MIN_SAMPLES} samples are required, got {samples}"),
        });
    }
    Ok(())
}

/// Sum of per-block hit counts; each block draws from its own stream.
fn count_hits<F>(samples: u64, seed: u64, per_sample: F) -> u64
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> bool + Sync,
{
    streams::blocks(samples)
        .map(|(block, draws)| {
            let mut rng = streams::block_rng(seed, block);
            (0..draws).filter(|_| per_sample(&mut rng)).count() as u64
        })
        .sum()
}

#[inline]
fn uniform_sym(rng: &mut impl Rng) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

/// Hit-or-miss estimate of `m(Ψ(1, λ))` over the cube `[-1, 1]^2n`.
pub fn mc_region_volume(region: &RegionSpec, samples: u64, seed: u64) -> Result<McEstimate> {
    check_samples(samples)?;
    let n = region.n as usize;
    let lam_sq = region.lam.value().powi(2);
    let hits = count_hits(samples, seed, |rng| {
        let mut a = [0.0f64; MAX_REGION_DIMENSION as usize];
        let mut b = [0.0f64; MAX_REGION_DIMENSION as usize];
        for x in a[..n].iter_mut().chain(b[..n].iter_mut()) {
            *x = uniform_sym(rng);
        }
        let (mut na, mut nb, mut d) = (0.0, 0.0, 0.0);
        for i in 0..n {
            na += a[i] * a[i];
            nb += b[i] * b[i];
            d += (a[i] - b[i]) * (a[i] - b[i]);
        }
        na <= 1.0 && nb <= 1.0 && d <= lam_sq
    });
    Ok(McEstimate::from_hits(hits, samples, seed, 4f64.powi(region.n as i32)))
}

/// Hit-or-miss estimate of the cap `{x ∈ B_n(1) : x₁ ≥ r/2}` over `[-1, 1]ⁿ`,
/// compared with [`cap_volume`].
pub fn mc_cap_volume(n: u32, r: f64, samples: u64, seed: u64) -> Result<McReport> {
    check_samples(samples)?;
    if n == 0 || n > 2 * MAX_REGION_DIMENSION {
        return Err(Error::UnsupportedDimension { n, reason: "Monte Carlo cap sampling supports 1 ≤ n ≤ 12" });
    }
    let analytic = cap_volume(n, r)?;
    let dims = n as usize;
    let height = 0.5 * r;
    let hits = count_hits(samples, seed, |rng| {
        let first = uniform_sym(rng);
        let mut norm = first * first;
        for _ in 1..dims {
            let x = uniform_sym(rng);
            norm += x * x;
        }
        norm <= 1.0 && first >= height
    });
    Ok(McEstimate::from_hits(hits, samples, seed, 2f64.powi(n as i32)).compare(analytic))
}

/// Fraction of uniformly random directions on `S^(n-1)` within `half_angle`
/// of the pole, compared with [`cap_measure`].
///
/// Directions are normalized standard Gaussian vectors.
pub fn mc_cap_measure(n: u32, half_angle: f64, samples: u64, seed: u64) -> Result<McReport> {
    check_samples(samples)?;
    if n == 0 {
        return Err(Error::UnsupportedDimension { n, reason: "dimension must be at least 1" });
    }
    if half_angle.is_nan() || half_angle <= 0.0 || half_angle > PI {
        return Err(domain(format!("cap half-angle must lie in (0, π], got {half_angle}")));
    }
    let analytic = cap_measure(n, half_angle)?;
    let cos_half = half_angle.cos();
    let whole = half_angle >= PI;
    let dims = n as usize;
    let hits = count_hits(samples, seed, |rng| {
        let first: f64 = rng.sample(StandardNormal);
        let mut norm = first * first;
        for _ in 1..dims {
            let x: f64 = rng.sample(StandardNormal);
            norm += x * x;
        }
        whole || first >= cos_half * norm.sqrt()
    });
    Ok(McEstimate::from_hits(hits, samples, seed, 1.0).compare(analytic))
}

/// [`mc_region_volume`] paired with the analytic volume.
pub fn mc_region_report(region: &RegionSpec, samples: u64, seed: u64) -> Result<McReport> {
    Ok(mc_region_volume(region, samples, seed)?.compare(region.analytic_volume()))
}

/// Estimates for every cell of a grid, evaluated in parallel.
pub fn mc_region_grid(cells: &[RegionSpec], samples: u64, seed: u64) -> Result<Vec<McReport>> {
    cells.par_iter().map(|c| mc_region_report(c, samples, seed)).collect()
}
