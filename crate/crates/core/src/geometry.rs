//! Volumes of n-balls, hyperspherical caps and spherical cap measures.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::specfun::{ln_gamma, reg_inc_beta_split, BetaParams};

/// `ln m(B_n)`, the log-volume of the unit n-ball, `π^(n/2) / Γ(n/2 + 1)`.
pub fn ln_unit_ball_volume(n: u32) -> f64 {
    let n = f64::from(n);
    0.5 * n * PI.ln() - ln_gamma(0.5 * n + 1.0)
}

/// Volume of the unit n-ball.
pub fn unit_ball_volume(n: u32) -> f64 {
    ln_unit_ball_volume(n).exp()
}

/// Volume of the cap `{x ∈ B_n(1) : x₁ ≥ r/2}` of the unit n-ball,
/// `π^(n/2) / (2 Γ(n/2 + 1)) · I_{1 - r²/4}((n+1)/2, 1/2)`, for `r ∈ [0, 2]`.
///
/// `r` is the distance between two unit balls whose intersection is twice
/// this cap.
pub fn cap_volume(n: u32, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("dimension must be at least 1"));
    }
    if r.is_nan() || !(0.0..=2.0).contains(&r) {
        return Err(domain(format!("cap height parameter must lie in [0, 2], got {r}")));
    }
    let y = 0.25 * r * r;
    let p = BetaParams::new(0.5 * (f64::from(n) + 1.0), 0.5)?;
    Ok(0.5 * unit_ball_volume(n) * reg_inc_beta_split(1.0 - y, y, p))
}

/// Normalized surface measure of the spherical cap of directions within
/// `half_angle` of a fixed pole on `S^(n-1)`.
///
/// Equals the fraction of the unit n-ball's volume occupied by the cone of
/// those directions. For `n = 1` the sphere is `{-1, +1}` and the measure is a
/// step function.
///
/// ```
/// use paircorr::geometry::cap_measure;
/// use std::f64::consts::PI;
/// // On S², a cap of half-angle θ has measure (1 - cos θ)/2.
/// assert!((cap_measure(3, PI / 3.0).unwrap() - 0.25).abs() < 1e-14);
/// assert_eq!(cap_measure(2, PI).unwrap(), 1.0);
/// ```
pub fn cap_measure(n: u32, half_angle: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("dimension must be at least 1"));
    }
    if half_angle.is_nan() || half_angle <= 0.0 || half_angle > PI {
        return Err(domain(format!("cap half-angle must lie in (0, π], got {half_angle}")));
    }
    if half_angle >= PI {
        return Ok(1.0);
    }
    if n == 1 {
        return Ok(0.5);
    }
    let (s, c) = half_angle.sin_cos();
    let p = BetaParams::new(0.5 * (f64::from(n) - 1.0), 0.5)?;
    let half = 0.5 * reg_inc_beta_split(s * s, c * c, p);
    Ok(if half_angle <= 0.5 * PI { half } else { 1.0 - half })
}
