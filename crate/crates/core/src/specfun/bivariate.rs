//! Bivariate standard normal cdf and the skew-normal cdf, both built on
//! Owen's T function.

use std::f64::consts::PI;

use super::normal::{norm_cdf, norm_cdf_both};
use super::owen::owen_t;
use crate::error::{domain, Result};

/// Φ₂(0, 0; ρ) = 1/4 + arcsin(ρ)/(2π).
#[inline]
pub fn bvn_origin(rho: f64) -> f64 {
    0.25 + rho.asin() / (2.0 * PI)
}

/// Bivariate normal cdf Φ₂(x₁, x₂; ρ) with unit variances and correlation ρ.
pub fn bvn_cdf(x1: f64, x2: f64, rho: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&rho) {
        return domain(format!("correlation must lie in [-1,1], got {rho}"));
    }
    let half = 0.5 * (norm_cdf(x1) + norm_cdf(x2));
    Ok((half + bvn_excess(x1, x2, rho)).clamp(0.0, 1.0))
}

/// Φ₂(x₁, x₂; ρ) − ½[Φ(x₁) + Φ(x₂)].
///
/// This is the part of the Owen decomposition that carries the dependence:
/// −a(x₁,x₂) − T(x₁, ·) − T(x₂, ·). It is symmetric in its two arguments and
/// invariant under (x₁, x₂) ↦ (−x₁, −x₂), both exactly in floating point,
/// which the rank-correlation integrands rely on. `rho` must lie in [−1, 1].
pub(crate) fn bvn_excess(x1: f64, x2: f64, rho: f64) -> f64 {
    if rho.abs() >= 1.0 {
        // ρ = 1: Φ₂ = Φ(min); ρ = −1: Φ₂ = max(Φ(x₁) + Φ(x₂) − 1, 0).
        // Both tails enter through a min so the sign-flip symmetry is exact.
        let (p1, q1) = norm_cdf_both(x1);
        let (p2, q2) = norm_cdf_both(x2);
        return if rho > 0.0 {
            -0.5 * (p1 - p2).abs().min((q1 - q2).abs())
        } else {
            -0.5 * (p1 + p2).min(q1 + q2)
        };
    }
    if x1 == 0.0 && x2 == 0.0 {
        return bvn_origin(rho) - 0.5;
    }
    let s = ((1.0 - rho) * (1.0 + rho)).sqrt();
    // With one argument at zero the a(·,·) indicator and the T(0, ±∞) = ±1/4
    // term combine to −1/4 whatever the sign of the other argument.
    if x1 == 0.0 {
        return -0.25 - owen_t(x2, -rho / s);
    }
    if x2 == 0.0 {
        return -0.25 - owen_t(x1, -rho / s);
    }
    let a = if x1 * x2 < 0.0 { 0.5 } else { 0.0 };
    let t1 = owen_t(x1, (x2 - rho * x1) / (x1 * s));
    let t2 = owen_t(x2, (x1 - rho * x2) / (x2 * s));
    -a - (t1 + t2)
}

/// Standard skew-normal cdf with skewness α: Φ(x) − 2T(x, α).
pub fn skew_norm_cdf(x: f64, alpha: f64) -> f64 {
    (norm_cdf(x) - 2.0 * owen_t(x, alpha)).clamp(0.0, 1.0)
}
