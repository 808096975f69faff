//! Log-Gamma, Beta and (regularized) incomplete Beta functions.
//!
//! Everything downstream is built on the regularized incomplete Beta
//! function `I_x(a, b)`: the pair-distance density, the hyperspherical cap
//! volume and the spherical cap measure all reduce to it with half-integer
//! parameters. The routines here are general (no half-integer fast path) and
//! evaluated in `f64`.
//!
//! `I_x(a, b)` uses the modified Lentz evaluation of the classical continued
//! fraction, applied directly when `x < (a + 1) / (a + b + 2)` and through the
//! reflection `I_x(a, b) = 1 - I_{1-x}(b, a)` otherwise. The `_split` variants
//! take `x` and `1 - x` separately so that callers who know the complement
//! exactly (for example `λ²/4` next to `1 - λ²/4`) lose no precision to
//! cancellation.

use crate::error::{domain, Result};

/// Shape parameters `(a, b)` of the Beta function, both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    a: f64,
    b: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(domain(format!("Beta shape parameter a must be positive and finite, got {a}")));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(domain(format!("Beta shape parameter b must be positive and finite, got {b}")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `(b, a)`, the parameters of the reflected function.
    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a }
    }
}

/// `½ ln(2π)`
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ζ(k) - 1` for `k = 2, 3, …, 41`.
const ZETA_MINUS_ONE: [f64; 40] = [
    6.449_340_668_482_264e-1,
    2.020_569_031_595_943e-1,
    8.232_323_371_113_819e-2,
    3.692_775_514_336_993e-2,
    1.734_306_198_444_914e-2,
    8.349_277_381_922_827e-3,
    4.077_356_197_944_34e-3,
    2.008_392_826_082_214e-3,
    9.945_751_278_180_853e-4,
    4.941_886_041_194_645e-4,
    2.460_865_533_080_483e-4,
    1.227_133_475_784_891e-4,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_763e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_962e-7,
    4.769_329_867_878_064e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_111e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504e-8,
    7.450_711_789_835_43e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
    4.656_629_065_033_784e-10,
    2.328_311_833_676_505e-10,
    1.164_155_017_270_052e-10,
    5.820_772_087_902_701e-11,
    2.910_385_044_497_1e-11,
    1.455_192_189_104_198e-11,
    7.275_959_835_057_482e-12,
    3.637_979_547_378_651e-12,
    1.818_989_650_307_066e-12,
    9.094_947_840_263_888e-13,
    4.547_473_783_042_154e-13,
];

/// `B_{2k} / (2k (2k - 1))` for `k = 1..=8`, the Stirling series coefficients.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Γ(2 + x)` for `|x| ≤ 1/2`, from the Taylor series around 2.
fn ln_gamma_near_two(x: f64) -> f64 {
    // ln Γ(2+x) = (1-γ)x + Σ_{k≥2} (-1)^k (ζ(k)-1) x^k / k
    let mut acc = 0.0;
    for (i, &z) in ZETA_MINUS_ONE.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        let sign = if (i + 2) % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc * x + sign * z / k;
    }
    x * ((1.0 - EULER_GAMMA) + x * acc)
}

fn ln_gamma_stirling(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for &c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series * inv
}

/// `ln Γ(z)` without argument checks; `z` must be positive and finite.
pub(crate) fn ln_gamma(z: f64) -> f64 {
    if z < 0.5 {
        ln_gamma(z + 1.0) - z.ln()
    } else if z < 1.5 {
        ln_gamma_near_two(z - 1.0) - (z - 1.0).ln_1p()
    } else if z <= 2.5 {
        ln_gamma_near_two(z - 2.0)
    } else if z < 10.0 {
        let mut w = z;
        let mut prod = 1.0;
        while w > 2.5 {
            w -= 1.0;
            prod *= w;
        }
        ln_gamma_near_two(w - 2.0) + prod.ln()
    } else {
        ln_gamma_stirling(z)
    }
}

/// Natural logarithm of the Gamma function for real `z > 0`.
///
/// Relative error stays below `1e-13` on `[0.5, 1e6]` (absolute error below
/// `1e-16` around the zeros at 1 and 2).
///
/// ```
/// use paircorr::specfun::log_gamma;
/// let half = log_gamma(0.5).unwrap();
/// assert!((half - std::f64::consts::PI.sqrt().ln()).abs() < 1e-15);
/// assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
/// assert!(log_gamma(0.0).is_err());
/// ```
pub fn log_gamma(z: f64) -> Result<f64> {
    if !(z.is_finite() && z > 0.0) {
        return Err(domain(format!("log_gamma requires a positive finite argument, got {z}")));
    }
    Ok(ln_gamma(z))
}

/// `ln B(a, b)`.
pub fn log_beta(p: BetaParams) -> f64 {
    ln_gamma(p.a) + ln_gamma(p.b) - ln_gamma(p.a + p.b)
}

/// The complete Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(p: BetaParams) -> f64 {
    log_beta(p).exp()
}

fn check_unit(x: f64) -> Result<()> {
    if x.is_nan() || !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("incomplete Beta argument must lie in [0, 1], got {x}")));
    }
    Ok(())
}

const CF_TINY: f64 = 1e-300;
const CF_EPS: f64 = f64::EPSILON;
const CF_MAX_ITER: usize = 20_000;

/// Modified Lentz evaluation of the continued fraction for `I_x(a, b)`,
/// returning the fraction value `h` with
/// `I_x(a, b) = x^a (1-x)^b / (a B(a,b)) · h`.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;

        if (del - 1.0).abs() <= CF_EPS {
            break;
        }
    }
    h
}

/// `ln I_x(a, b)` on the side of the crossover where the continued fraction
/// converges quickly. Requires `0 < x < 1`, `y = 1 - x`.
fn ln_direct(x: f64, y: f64, p: BetaParams) -> f64 {
    let (a, b) = (p.a, p.b);
    a * x.ln() + b * y.ln() - log_beta(p) - a.ln() + beta_continued_fraction(x, a, b).ln()
}

fn use_direct(x: f64, p: BetaParams) -> bool {
    x < (p.a + 1.0) / (p.a + p.b + 2.0)
}

/// `I_x(a, b)` given both `x` and `y = 1 - x`.
pub(crate) fn reg_inc_beta_split(x: f64, y: f64, p: BetaParams) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let value = if use_direct(x, p) { ln_direct(x, y, p).exp() } else { 1.0 - ln_direct(y, x, p.swapped()).exp() };
    value.clamp(0.0, 1.0)
}

/// `ln I_x(a, b)` given both `x` and `y = 1 - x`; finite whenever `x > 0`.
pub(crate) fn ln_reg_inc_beta_split(x: f64, y: f64, p: BetaParams) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if y <= 0.0 {
        return 0.0;
    }
    if use_direct(x, p) {
        ln_direct(x, y, p).min(0.0)
    } else {
        (-ln_direct(y, x, p.swapped()).exp()).ln_1p()
    }
}

/// Regularized incomplete Beta function `I_x(a, b) = B_x(a, b) / B(a, b)`.
///
/// ```
/// use paircorr::specfun::{reg_inc_beta, BetaParams};
/// let p = BetaParams::new(2.0, 0.5).unwrap();
/// let direct = reg_inc_beta(0.75, p).unwrap();
/// let reflected = 1.0 - reg_inc_beta(0.25, p.swapped()).unwrap();
/// assert!((direct - reflected).abs() < 1e-14);
/// ```
pub fn reg_inc_beta(x: f64, p: BetaParams) -> Result<f64> {
    check_unit(x)?;
    Ok(reg_inc_beta_split(x, 1.0 - x, p))
}

/// `ln I_x(a, b)`, usable where `I_x` itself underflows.
pub fn ln_reg_inc_beta(x: f64, p: BetaParams) -> Result<f64> {
    check_unit(x)?;
    Ok(ln_reg_inc_beta_split(x, 1.0 - x, p))
}

/// Incomplete Beta function `B_x(a, b) = ∫₀ˣ t^(a-1) (1-t)^(b-1) dt`.
pub fn inc_beta(x: f64, p: BetaParams) -> Result<f64> {
    Ok(reg_inc_beta(x, p)? * beta(p))
}
