//! The limiting distribution of normalized pair distances in an n-ball.
//!
//! For an equidistributed point set, the normalized distance `λ = |x - y| / R`
//! between two points of the set inside `B_n(R)` has, as `R → ∞`, the density
//!
//! ```text
//! P_n(λ) = n λ^(n-1) I_{1-λ²/4}((n+1)/2, 1/2),      0 ≤ λ ≤ 2,
//! ```
//!
//! obtained by differentiating the normalized volume of the region
//! `Ψ(1, λ) = {(a, b) ∈ R^2n : |a| ≤ 1, |b| ≤ 1, |a - b| ≤ λ}`. This module
//! evaluates that volume, the CDF and the density, the closed forms for
//! `n = 2, 3`, the exact rational polynomials for odd `n`, and the location
//! of the mode (which concentrates at `√2` as `n` grows).
//!
//! Every evaluation has two paths. [`EvalMode::Direct`] multiplies `f64`
//! factors; [`EvalMode::LogDomain`] adds logarithms and exponentiates once.
//! The direct path overflows for large `n`, so the log-domain path is
//! mandatory above [`LOG_DOMAIN_THRESHOLD`].

use std::f64::consts::{LN_2, PI};
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{ln_gamma, ln_reg_inc_beta_split, log_beta, reg_inc_beta_split, BetaParams};

/// Dimensions above this require [`EvalMode::LogDomain`].
pub const LOG_DOMAIN_THRESHOLD: u32 = 300;

/// Largest odd dimension for which [`pdf_polynomial_odd`] builds the exact polynomial.
pub const MAX_POLYNOMIAL_DIMENSION: u32 = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    Direct,
    LogDomain,
}

/// Dimension and evaluation policy of the theoretical distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DistributionSpec {
    n: u32,
    eval_mode: EvalMode,
}

impl DistributionSpec {
    /// Picks [`EvalMode::Direct`] up to [`LOG_DOMAIN_THRESHOLD`] and
    /// [`EvalMode::LogDomain`] above it.
    pub fn new(n: u32) -> Result<Self> {
        let mode = if n > LOG_DOMAIN_THRESHOLD { EvalMode::LogDomain } else { EvalMode::Direct };
        Self::with_mode(n, mode)
    }

    pub fn with_mode(n: u32, eval_mode: EvalMode) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedDimension { n, reason: "dimension must be at least 1" });
        }
        if n > LOG_DOMAIN_THRESHOLD && eval_mode == EvalMode::Direct {
            return Err(Error::UnsupportedDimension {
                n,
                reason: "direct evaluation overflows above n = 300; use the log-domain mode",
            });
        }
        Ok(Self { n, eval_mode })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn eval_mode(&self) -> EvalMode {
        self.eval_mode
    }

    fn nf(&self) -> f64 {
        f64::from(self.n)
    }

    /// `((n+1)/2, 1/2)`
    fn cap_params(&self) -> BetaParams {
        BetaParams::new(0.5 * (self.nf() + 1.0), 0.5).expect("positive shape parameters")
    }

    /// `((n+1)/2, (n+1)/2)`
    fn symmetric_params(&self) -> BetaParams {
        let a = 0.5 * (self.nf() + 1.0);
        BetaParams::new(a, a).expect("positive shape parameters")
    }
}

/// A normalized pair distance, `0 ≤ λ ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Lambda(f64);

impl Lambda {
    pub const ZERO: Lambda = Lambda(0.0);
    pub const MAX: Lambda = Lambda(2.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || !(0.0..=2.0).contains(&value) {
            return Err(domain(format!("normalized distance must lie in [0, 2], got {value}")));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `(1 - λ²/4, λ²/4)`, each computed without cancellation.
    fn cap_arguments(self) -> (f64, f64) {
        let y = 0.25 * self.0 * self.0;
        let x = (2.0 - self.0) * (2.0 + self.0) * 0.25;
        (x, y)
    }
}

impl TryFrom<f64> for Lambda {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Lambda::new(value)
    }
}

impl From<Lambda> for f64 {
    fn from(lam: Lambda) -> f64 {
        lam.0
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

/// The two bracketed terms of the region volume, in logarithms:
/// `ln(λⁿ B_{1-λ²/4}((n+1)/2, 1/2))` and `ln(2ⁿ B_{λ²/4}((n+1)/2, (n+1)/2))`.
fn ln_region_terms(spec: &DistributionSpec, lam: Lambda) -> (f64, f64) {
    let (x, y) = lam.cap_arguments();
    let cap = spec.cap_params();
    let sym = spec.symmetric_params();
    let n = spec.nf();
    let ln_lam_pow = if lam.0 == 0.0 { f64::NEG_INFINITY } else { n * lam.0.ln() };
    let first = ln_lam_pow + ln_reg_inc_beta_split(x, y, cap) + log_beta(cap);
    let second = n * LN_2 + ln_reg_inc_beta_split(y, x, sym) + log_beta(sym);
    (first, second)
}

/// `ln` of `2πⁿ / (n Γ(n/2) Γ((n+1)/2) Γ(1/2))`.
fn ln_region_prefactor(spec: &DistributionSpec) -> f64 {
    let n = spec.nf();
    LN_2 + n * PI.ln() - n.ln() - ln_gamma(0.5 * n) - ln_gamma(0.5 * (n + 1.0)) - 0.5 * PI.ln()
}

/// Volume `m(Ψ(1, λ))` of the set of pairs `(a, b)` of points of the unit
/// n-ball at distance at most `λ`.
///
/// Kept as the sum of its two incomplete-Beta terms,
/// `C_n [λⁿ B_{1-λ²/4}((n+1)/2, ½) + 2ⁿ B_{λ²/4}((n+1)/2, (n+1)/2)]`.
/// At `λ = 2` it is the squared volume of the unit n-ball.
///
/// ```
/// use paircorr::theory::{region_volume, DistributionSpec, Lambda};
/// let v = region_volume(&DistributionSpec::new(2).unwrap(), Lambda::MAX);
/// assert!((v - std::f64::consts::PI.powi(2)).abs() < 1e-12);
/// ```
pub fn region_volume(spec: &DistributionSpec, lam: Lambda) -> f64 {
    match spec.eval_mode {
        EvalMode::Direct => {
            let (x, y) = lam.cap_arguments();
            let cap = spec.cap_params();
            let sym = spec.symmetric_params();
            let n = spec.n as i32;
            let first = lam.0.powi(n) * reg_inc_beta_split(x, y, cap) * log_beta(cap).exp();
            let second = 2f64.powi(n) * reg_inc_beta_split(y, x, sym) * log_beta(sym).exp();
            ln_region_prefactor(spec).exp() * (first + second)
        }
        EvalMode::LogDomain => {
            let (first, second) = ln_region_terms(spec, lam);
            (ln_region_prefactor(spec) + log_sum_exp(first, second)).exp()
        }
    }
}

/// `P(λ_pair ≤ λ)`: the region volume normalized by its value at `λ = 2`.
///
/// Computed as `λⁿ I_{1-λ²/4}((n+1)/2, ½) + ρ_n I_{λ²/4}((n+1)/2, (n+1)/2)`
/// with `ρ_n = 2ⁿ B((n+1)/2, (n+1)/2) / B((n+1)/2, ½)`, which is the same pair
/// of terms divided through by `B((n+1)/2, ½)`. Clamped to `[0, 1]`.
pub fn cdf(spec: &DistributionSpec, lam: Lambda) -> f64 {
    let cap = spec.cap_params();
    let sym = spec.symmetric_params();
    let n = spec.nf();
    let ln_ratio = n * LN_2 + log_beta(sym) - log_beta(cap);
    let (x, y) = lam.cap_arguments();
    let value = match spec.eval_mode {
        EvalMode::Direct => {
            lam.0.powi(spec.n as i32) * reg_inc_beta_split(x, y, cap) + ln_ratio.exp() * reg_inc_beta_split(y, x, sym)
        }
        EvalMode::LogDomain => {
            let ln_lam_pow = if lam.0 == 0.0 { f64::NEG_INFINITY } else { n * lam.0.ln() };
            let first = ln_lam_pow + ln_reg_inc_beta_split(x, y, cap);
            let second = ln_ratio + ln_reg_inc_beta_split(y, x, sym);
            log_sum_exp(first, second).exp()
        }
    };
    value.clamp(0.0, 1.0)
}

/// `ln P_n(λ)`; `-∞` where the density vanishes.
pub fn ln_pdf(spec: &DistributionSpec, lam: Lambda) -> f64 {
    let (x, y) = lam.cap_arguments();
    let ln_i = ln_reg_inc_beta_split(x, y, spec.cap_params());
    if spec.n == 1 {
        return ln_i;
    }
    if lam.0 == 0.0 {
        return f64::NEG_INFINITY;
    }
    spec.nf().ln() + (spec.nf() - 1.0) * lam.0.ln() + ln_i
}

/// The pair-distance density `P_n(λ) = n λ^(n-1) I_{1-λ²/4}((n+1)/2, ½)`.
///
/// ```
/// use paircorr::theory::{pdf, DistributionSpec, Lambda};
/// let three = DistributionSpec::new(3).unwrap();
/// let p = pdf(&three, Lambda::new(1.0).unwrap());
/// assert!((p - 0.9375).abs() < 1e-14);
/// ```
pub fn pdf(spec: &DistributionSpec, lam: Lambda) -> f64 {
    match spec.eval_mode {
        EvalMode::Direct => {
            let (x, y) = lam.cap_arguments();
            let i = reg_inc_beta_split(x, y, spec.cap_params());
            spec.nf() * lam.0.powi(spec.n as i32 - 1) * i
        }
        EvalMode::LogDomain => ln_pdf(spec, lam).exp(),
    }
}

/// Elementary closed forms of the density for `n = 2` and `n = 3`:
///
/// ```text
/// P_2(λ) = (4λ/π) arccos(λ/2) - λ² √(4 - λ²) / π
/// P_3(λ) = 3λ² - (9/4)λ³ + (3/16)λ⁵
/// ```
pub fn pdf_closed_form(n: u32, lam: Lambda) -> Result<f64> {
    let l = lam.0;
    match n {
        2 => Ok(4.0 * l / PI * (0.5 * l).acos() - l * l * ((2.0 - l) * (2.0 + l)).sqrt() / PI),
        3 => Ok(l * l * (3.0 - 2.25 * l + 0.1875 * l * l * l)),
        _ => Err(Error::UnsupportedDimension { n, reason: "closed forms exist only for n = 2 and n = 3" }),
    }
}

/// A polynomial in `λ` with exact rational coefficients, lowest power first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coefficients: Vec<BigRational>,
}

impl RationalPolynomial {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// Exact evaluation.
    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.coefficients.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Exact evaluation at `x`, rounded once to `f64`.
    ///
    /// ```
    /// use paircorr::theory::pdf_polynomial_odd;
    /// assert_eq!(pdf_polynomial_odd(3).unwrap().eval_rounded(1.0), 0.9375);
    /// ```
    pub fn eval_rounded(&self, x: f64) -> f64 {
        match BigRational::from_float(x) {
            Some(q) => self.eval_exact(&q).to_f64().unwrap_or(f64::NAN),
            None => f64::NAN,
        }
    }

    /// Horner evaluation with coefficients rounded to `f64`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// The antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> RationalPolynomial {
        let mut out = Vec::with_capacity(self.coefficients.len() + 1);
        out.push(BigRational::zero());
        for (k, c) in self.coefficients.iter().enumerate() {
            out.push(c / BigRational::from_integer(BigInt::from(k + 1)));
        }
        RationalPolynomial::new(out)
    }

    /// `∫ₗₒʰⁱ p(x) dx`, exactly.
    pub fn integrate(&self, lo: &BigRational, hi: &BigRational) -> BigRational {
        let anti = self.antiderivative();
        anti.eval_exact(hi) - anti.eval_exact(lo)
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "λ")?,
                1 => write!(f, "({mag})λ")?,
                _ if mag.is_one() => write!(f, "λ^{k}")?,
                _ => write!(f, "({mag})λ^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact density for odd `n` as a rational polynomial of degree `2n - 1`.
///
/// With `m = (n+1)/2` an integer, substituting `u = √(1-t)` turns
/// `B_{1-λ²/4}(m, ½)` into `2∫_{λ/2}^1 (1-u²)^(m-1) du`, and the binomial
/// expansion of the integrand integrates term by term:
///
/// ```text
/// P_n(λ) = n λ^(n-1) [1 - Σ_k (-1)^k C(m-1,k) (λ/2)^(2k+1) / (2k+1) / S],
/// S      = Σ_k (-1)^k C(m-1,k) / (2k+1).
/// ```
///
/// ```
/// use paircorr::theory::pdf_polynomial_odd;
/// let p3 = pdf_polynomial_odd(3).unwrap();
/// assert_eq!(p3.to_string(), "(3)λ^2 - (9/4)λ^3 + (3/16)λ^5");
/// ```
pub fn pdf_polynomial_odd(n: u32) -> Result<RationalPolynomial> {
    if n % 2 == 0 {
        return Err(Error::UnsupportedDimension { n, reason: "the density is a polynomial only for odd n" });
    }
    if n > MAX_POLYNOMIAL_DIMENSION {
        return Err(Error::OutOfRange {
            what: "dimension",
            detail: format!("exact polynomials are built for n ≤ {MAX_POLYNOMIAL_DIMENSION}, got {n}"),
        });
    }
    let n_big = BigInt::from(n);
    let m = (n as usize).div_ceil(2);
    let rat = |num: BigInt, den: BigInt| BigRational::new(num, den);

    let alternating = |k: usize| -> BigInt {
        let c = binomial(BigInt::from(m - 1), BigInt::from(k));
        if k % 2 == 0 {
            c
        } else {
            -c
        }
    };

    let s = (0..m).fold(BigRational::zero(), |acc, k| acc + rat(alternating(k), BigInt::from(2 * k + 1)));

    let degree = 2 * n as usize - 1;
    let mut coefficients = vec![BigRational::zero(); degree + 1];
    coefficients[n as usize - 1] = BigRational::from_integer(n_big.clone());
    for k in 0..m {
        let den = BigInt::from(2 * k + 1) * (BigInt::one() << (2 * k + 1));
        let term = rat(alternating(k) * &n_big, den) / &s;
        coefficients[n as usize + 2 * k] -= term;
    }
    Ok(RationalPolynomial::new(coefficients))
}

/// Number of grid points used to bracket the mode before refinement.
const MODE_GRID_POINTS: usize = 1000;
const MODE_TOLERANCE: f64 = 1e-8;

/// Location of the maximum of `P_n` on `[0, 2]`.
///
/// A 1000-point grid on `ln P_n` brackets the maximum, then golden-section
/// search narrows the bracket below `1e-8`. Working with `ln P_n` keeps the
/// search finite for large `n` where `P_n` itself under- or overflows away
/// from the peak.
pub fn mode(spec: &DistributionSpec) -> Result<Lambda> {
    if spec.n < 2 {
        return Err(Error::UnsupportedDimension {
            n: spec.n,
            reason: "P_1 is decreasing; the mode is defined for n ≥ 2",
        });
    }
    let objective = |l: f64| ln_pdf(spec, Lambda(l.clamp(0.0, 2.0)));
    let step = 2.0 / (MODE_GRID_POINTS - 1) as f64;
    let grid = |i: usize| (i as f64 * step).min(2.0);
    let best = (0..MODE_GRID_POINTS)
        .map(|i| (i, objective(grid(i))))
        .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
        .0;
    let mut lo = grid(best.saturating_sub(1));
    let mut hi = grid((best + 1).min(MODE_GRID_POINTS - 1));

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = objective(c);
    let mut fd = objective(d);
    while hi - lo > MODE_TOLERANCE {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = objective(d);
        }
    }
    Lambda::new(0.5 * (lo + hi))
}
