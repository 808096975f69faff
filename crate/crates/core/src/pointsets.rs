//! Integer and primitive lattice points inside an n-ball, and empirical
//! checks of the two equidistribution conditions: radial growth
//! `N(rλ) / N(r) → λⁿ` and angular uniformity over spherical caps.
//!
//! Enumeration is lexicographic in the coordinates. Counting does not
//! materialize points: the last coordinate's range is counted in closed form
//! and the leading coordinate is split across rayon workers, with an
//! associative integer reduction so results do not depend on worker count.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::cap_measure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Integer,
    /// Integer points whose coordinates have gcd 1. The origin is excluded.
    Primitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// `|x| < R`
    Open,
    /// `|x| ≤ R`
    #[default]
    Closed,
}

/// Upper bound on `n · (2⌊R⌋ + 1)ⁿ` accepted by enumeration and counting.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 4_000_000_000;

/// The lattice (or primitive lattice) points of `Zⁿ` inside the ball of radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticePointSet {
    n: u32,
    radius: f64,
    kind: PointKind,
    boundary: Boundary,
}

impl LatticePointSet {
    pub fn new(n: u32, radius: f64, kind: PointKind, boundary: Boundary) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedDimension { n, reason: "dimension must be at least 1" });
        }
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(domain(format!("radius must be finite and non-negative, got {radius}")));
        }
        if radius >= 2f64.powi(26) {
            return Err(Error::OutOfRange { what: "radius", detail: format!("{radius} exceeds 2^26") });
        }
        Ok(Self { n, radius, kind, boundary })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn kind(&self) -> PointKind {
        self.kind
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// The same set restricted to a different radius.
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(self.n, radius, self.kind, self.boundary)
    }

    fn radius_sq(&self) -> f64 {
        self.radius * self.radius
    }

    fn inside(&self, norm_sq: i64) -> bool {
        let s = norm_sq as f64;
        match self.boundary {
            Boundary::Open => s < self.radius_sq(),
            Boundary::Closed => s <= self.radius_sq(),
        }
    }

    /// Whether `p` is a member of the set.
    pub fn contains(&self, p: &[i64]) -> bool {
        if p.len() != self.n as usize {
            return false;
        }
        let norm_sq: i64 = p.iter().map(|&x| x * x).sum();
        self.inside(norm_sq) && (self.kind == PointKind::Integer || is_primitive(p))
    }

    /// Largest `k ≥ 0` with `partial + k²` inside the ball, or `None` if even
    /// `k = 0` is outside.
    fn max_coordinate(&self, partial: i64) -> Option<i64> {
        if !self.inside(partial) {
            return None;
        }
        let rem = (self.radius_sq() - partial as f64).max(0.0);
        let mut k = rem.sqrt().floor() as i64;
        while k > 0 && !self.inside(partial + k * k) {
            k -= 1;
        }
        while self.inside(partial + (k + 1) * (k + 1)) {
            k += 1;
        }
        Some(k)
    }

    /// `n · (2⌊R⌋ + 1)ⁿ`, the cost model of a full scan of the bounding cube.
    pub fn work_estimate(&self) -> u128 {
        let side = 2 * self.radius.floor() as u128 + 1;
        side.checked_pow(self.n).and_then(|v| v.checked_mul(u128::from(self.n))).unwrap_or(u128::MAX)
    }

    fn check_budget(&self, budget: u128) -> Result<()> {
        let estimated = self.work_estimate();
        if estimated > budget {
            return Err(Error::Budget { what: "lattice enumeration", estimated, budget, hint: "" });
        }
        Ok(())
    }

    /// Lexicographic stream of the set's points, checked against
    /// [`DEFAULT_ENUMERATION_BUDGET`].
    ///
    /// ```
    /// use paircorr::pointsets::{Boundary, LatticePointSet, PointKind};
    /// let set = LatticePointSet::new(2, 1.0, PointKind::Primitive, Boundary::Closed).unwrap();
    /// let pts: Vec<_> = set.enumerate().unwrap().collect();
    /// assert_eq!(pts, vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
    /// ```
    pub fn enumerate(&self) -> Result<LatticeIter> {
        self.enumerate_with_budget(DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn enumerate_with_budget(&self, budget: u128) -> Result<LatticeIter> {
        self.check_budget(budget)?;
        Ok(LatticeIter::new(*self))
    }

    /// Number of points, without materializing them.
    pub fn count(&self) -> Result<u64> {
        self.count_with_budget(DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn count_with_budget(&self, budget: u128) -> Result<u64> {
        self.check_budget(budget)?;
        let Some(k) = self.max_coordinate(0) else {
            return Ok(0);
        };
        if self.n == 1 {
            return Ok(self.count_last(0, k));
        }
        Ok((-k..=k).into_par_iter().map(|x| self.count_rec(1, x * x, x.unsigned_abs())).sum())
    }

    fn count_rec(&self, depth: u32, partial: i64, g: u64) -> u64 {
        let Some(k) = self.max_coordinate(partial) else {
            return 0;
        };
        if depth + 1 == self.n {
            return self.count_last(g, k);
        }
        (-k..=k).map(|x| self.count_rec(depth + 1, partial + x * x, g.gcd(&x.unsigned_abs()))).sum()
    }

    /// Points `x ∈ [-k, k]` completing a prefix whose coordinates have gcd `g`.
    fn count_last(&self, g: u64, k: i64) -> u64 {
        match self.kind {
            PointKind::Integer => 2 * k as u64 + 1,
            PointKind::Primitive => match g {
                0 => {
                    if k >= 1 {
                        2
                    } else {
                        0
                    }
                }
                1 => 2 * k as u64 + 1,
                _ => 2 * (1..=k as u64).filter(|x| g.gcd(x) == 1).count() as u64,
            },
        }
    }

    /// All points, flattened, in enumeration order.
    pub fn points(&self) -> Result<PointCloud> {
        self.points_with_budget(DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn points_with_budget(&self, budget: u128) -> Result<PointCloud> {
        let mut coords = Vec::new();
        let iter = self.enumerate_with_budget(budget)?;
        for p in iter {
            coords.extend_from_slice(&p);
        }
        Ok(PointCloud { n: self.n, coords })
    }
}

/// Whether the gcd of the absolute coordinates is 1.
pub fn is_primitive(p: &[i64]) -> bool {
    p.iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs())) == 1
}

/// Lexicographic iterator over a [`LatticePointSet`].
#[derive(Debug, Clone)]
pub struct LatticeIter {
    set: LatticePointSet,
    coords: Vec<i64>,
    /// `partial[d]` is the squared norm of `coords[..d]`.
    partial: Vec<i64>,
    limit: Vec<i64>,
    state: IterState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl LatticeIter {
    fn new(set: LatticePointSet) -> Self {
        let n = set.n as usize;
        Self { set, coords: vec![0; n], partial: vec![0; n + 1], limit: vec![0; n], state: IterState::Fresh }
    }

    /// Reset levels `from..` to their smallest coordinates.
    fn descend(&mut self, from: usize) {
        for d in from..self.coords.len() {
            let k = self.set.max_coordinate(self.partial[d]).expect("prefix inside the ball admits a zero coordinate");
            self.limit[d] = k;
            self.coords[d] = -k;
            self.partial[d + 1] = self.partial[d] + k * k;
        }
    }

    fn advance(&mut self) -> bool {
        for d in (0..self.coords.len()).rev() {
            if self.coords[d] < self.limit[d] {
                self.coords[d] += 1;
                let x = self.coords[d];
                self.partial[d + 1] = self.partial[d] + x * x;
                self.descend(d + 1);
                return true;
            }
        }
        false
    }

    fn step(&mut self) -> bool {
        match self.state {
            IterState::Done => false,
            IterState::Fresh => {
                if self.set.max_coordinate(0).is_none() {
                    self.state = IterState::Done;
                    return false;
                }
                self.descend(0);
                self.state = IterState::Running;
                true
            }
            IterState::Running => {
                if self.advance() {
                    true
                } else {
                    self.state = IterState::Done;
                    false
                }
            }
        }
    }
}

impl Iterator for LatticeIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        while self.step() {
            if self.set.kind == PointKind::Integer || is_primitive(&self.coords) {
                return Some(self.coords.clone());
            }
        }
        None
    }
}

/// Points stored contiguously, `n` coordinates each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCloud {
    n: u32,
    coords: Vec<i64>,
}

impl PointCloud {
    pub fn new(n: u32, coords: Vec<i64>) -> Result<Self> {
        if n == 0 || coords.len() % n as usize != 0 {
            return Err(domain(format!("{} coordinates do not form points of dimension {n}", coords.len())));
        }
        Ok(Self { n, coords })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        let n = self.n as usize;
        &self.coords[i * n..(i + 1) * n]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i64]> {
        self.coords.chunks_exact(self.n as usize)
    }

    /// Squared Euclidean distance between points `i` and `j`.
    #[inline]
    pub fn dist_sq(&self, i: usize, j: usize) -> i64 {
        self.point(i).iter().zip(self.point(j)).map(|(a, b)| (a - b) * (a - b)).sum()
    }
}

/// Writes one point per line, coordinates separated by single spaces.
pub fn write_points<'a, W: Write>(mut out: W, points: impl IntoIterator<Item = &'a [i64]>) -> io::Result<()> {
    for p in points {
        let mut first = true;
        for x in p {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{x}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// `N(rλ) / (N(r) λⁿ)`, which tends to 1 for an equidistributed set.
///
/// `N` counts the points of the given kind and boundary convention.
pub fn radial_check(kind: PointKind, boundary: Boundary, n: u32, r: f64, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(domain(format!("dilation factor must be positive, got {lambda}")));
    }
    let base = LatticePointSet::new(n, r, kind, boundary)?;
    let denom = base.count()?;
    if denom == 0 {
        return Err(Error::UndefinedRatio(format!("N({r}) = 0")));
    }
    let numer = base.with_radius(r * lambda)?.count()?;
    Ok(numer as f64 / (denom as f64 * lambda.powi(n as i32)))
}

/// A wedge `W(X, r) = {x : |x| ≤ r, x/|x| ∈ X}` whose direction set `X` is the
/// spherical cap of half-angle `half_angle` around `axis`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WedgeSpec {
    axis: Vec<f64>,
    half_angle: f64,
    radius: f64,
}

impl WedgeSpec {
    pub fn new(axis: Vec<f64>, half_angle: f64, radius: f64) -> Result<Self> {
        if axis.is_empty() {
            return Err(domain("wedge axis must have at least one component"));
        }
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm.is_nan() || (norm - 1.0).abs() > 1e-12 {
            return Err(domain(format!("wedge axis must be a unit vector, |axis| = {norm}")));
        }
        if !(half_angle > 0.0 && half_angle <= PI) {
            return Err(domain(format!("cap half-angle must lie in (0, π], got {half_angle}")));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(domain(format!("wedge radius must be positive, got {radius}")));
        }
        Ok(Self { axis, half_angle, radius })
    }

    /// Wedge around the first coordinate axis.
    pub fn along_first_axis(n: u32, half_angle: f64, radius: f64) -> Result<Self> {
        let mut axis = vec![0.0; n.max(1) as usize];
        axis[0] = 1.0;
        Self::new(axis, half_angle, radius)
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Direction test; the origin belongs to every wedge.
    pub fn contains_direction(&self, p: &[i64]) -> bool {
        if self.half_angle >= PI {
            return true;
        }
        let dot: f64 = p.iter().zip(&self.axis).map(|(&x, a)| x as f64 * a).sum();
        let norm = p.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
        dot >= norm * self.half_angle.cos()
    }
}

/// Points of the set inside the wedge, and inside the wedge's ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeCount {
    pub in_wedge: u64,
    pub in_ball: u64,
}

pub fn wedge_count(set: &LatticePointSet, wedge: &WedgeSpec) -> Result<WedgeCount> {
    if wedge.axis.len() != set.n as usize {
        return Err(domain(format!(
            "wedge axis has {} components but the set has dimension {}",
            wedge.axis.len(),
            set.n
        )));
    }
    if wedge.radius > set.radius {
        return Err(domain(format!("wedge radius {} exceeds the set radius {}", wedge.radius, set.radius)));
    }
    let ball = set.with_radius(wedge.radius)?;
    let mut count = WedgeCount { in_wedge: 0, in_ball: 0 };
    for p in ball.enumerate()? {
        count.in_ball += 1;
        if wedge.contains_direction(&p) {
            count.in_wedge += 1;
        }
    }
    Ok(count)
}

/// `(|T ∩ W(X, r)| / N(r)) / μ(X)`, which tends to 1 for an equidistributed set.
///
/// The cap measure `μ(X)` comes from the regularized incomplete Beta function
/// (see [`cap_measure`]).
pub fn wedge_check(set: &LatticePointSet, wedge: &WedgeSpec) -> Result<f64> {
    let measure = cap_measure(set.n, wedge.half_angle)?;
    let count = wedge_count(set, wedge)?;
    if count.in_ball == 0 {
        return Err(Error::UndefinedRatio(format!("N({}) = 0", wedge.radius)));
    }
    Ok(count.in_wedge as f64 / count.in_ball as f64 / measure)
}

/// `1 / ζ(n)`, the asymptotic density of primitive points among lattice points.
pub fn primitive_density(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::UnsupportedDimension { n, reason: "ζ(n) diverges for n < 2" });
    }
    let s = f64::from(n);
    let cutoff = 1000u32;
    let head: f64 = (1..cutoff).rev().map(|k| f64::from(k).powf(-s)).sum();
    let m = f64::from(cutoff);
    // Euler–Maclaurin tail Σ_{k ≥ m} k^-s.
    let tail = m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s) + s / 12.0 * m.powf(-s - 1.0);
    Ok(1.0 / (head + tail))
}
