//! Skewness reparameterizations of the bivariate skew-normal.
//!
//! δ = ϱα / √(1 + αᵀϱα) with ϱ the 2×2 correlation matrix, its inverse,
//! and the transformed pair (α†, ρ†) entering the bivariate-cdf form of
//! the rank correlations.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// δ, α† and ρ† derived from (ρ, α).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedSkew {
    pub delta: [f64; 2],
    pub alpha_dagger: [f64; 2],
    pub rho_dagger: f64,
}

fn check_rho(rho: f64, closed: bool) -> Result<()> {
    let ok = if closed { rho.abs() <= 1.0 } else { rho.abs() < 1.0 };
    if ok {
        Ok(())
    } else {
        domain(format!("correlation out of range: {rho}"))
    }
}

/// δ from α. Valid for |ρ| ≤ 1.
pub fn delta_from_alpha(rho: f64, alpha: [f64; 2]) -> Result<[f64; 2]> {
    check_rho(rho, true)?;
    let [a1, a2] = alpha;
    if !(a1.is_finite() && a2.is_finite()) {
        return domain(format!("skewness must be finite, got {alpha:?}"));
    }
    // grouped so that swapping the components is exact
    let quad = 1.0 + (a1 * a1 + a2 * a2) + 2.0 * rho * (a1 * a2);
    let s = quad.max(1.0 - 1e-300).sqrt();
    Ok([(a1 + rho * a2) / s, (a2 + rho * a1) / s])
}

/// Checks δ₁² + δ₂² − 2ρδ₁δ₂ < 1 − ρ².
pub fn delta_admissible(rho: f64, delta: [f64; 2]) -> bool {
    let [d1, d2] = delta;
    (d1 * d1 + d2 * d2) - 2.0 * rho * (d1 * d2) < (1.0 - rho) * (1.0 + rho)
}

/// α from δ. Needs |ρ| < 1 and an admissible δ.
pub fn alpha_from_delta(rho: f64, delta: [f64; 2]) -> Result<[f64; 2]> {
    check_rho(rho, false)?;
    let [d1, d2] = delta;
    if !(d1.is_finite() && d2.is_finite()) || !delta_admissible(rho, delta) {
        return domain(format!(
            "delta {delta:?} violates d1^2 + d2^2 - 2 rho d1 d2 < 1 - rho^2 at rho = {rho}"
        ));
    }
    let one_minus = (1.0 - rho) * (1.0 + rho);
    let slack = one_minus - (d1 * d1 + d2 * d2) + 2.0 * rho * (d1 * d2);
    let denom = one_minus.sqrt() * slack.sqrt();
    Ok([(d1 - rho * d2) / denom, (d2 - rho * d1) / denom])
}

/// δ, α†ᵢ = δᵢ/√(1 − δᵢ²) and ρ† = (ρ − δ₁δ₂)/√((1 − δ₁²)(1 − δ₂²)).
pub fn derived_skew(rho: f64, alpha: [f64; 2]) -> Result<DerivedSkew> {
    let delta = delta_from_alpha(rho, alpha)?;
    let [d1, d2] = delta;
    let c1 = (1.0 - d1) * (1.0 + d1);
    let c2 = (1.0 - d2) * (1.0 + d2);
    let alpha_dagger = [d1 / c1.sqrt(), d2 / c2.sqrt()];
    let rho_dagger = if rho.abs() == 1.0 {
        rho
    } else {
        ((rho - d1 * d2) / (c1 * c2).sqrt()).clamp(-1.0, 1.0)
    };
    Ok(DerivedSkew { delta, alpha_dagger, rho_dagger })
}

/// Closed forms for α = (a, a): (δ̄, a†, ρ†) with
/// δ̄ = a(1+ρ)/√(1 + 2a²(1+ρ)), a† = a(1+ρ)/√(1 + a²(1−ρ²)) and
/// ρ† = (1+ρ)/(1 + a²(1−ρ²)) − 1.
pub fn equi_skew_derived(rho: f64, a: f64) -> Result<(f64, f64, f64)> {
    check_rho(rho, true)?;
    if !a.is_finite() {
        return domain(format!("skewness must be finite, got {a}"));
    }
    let up = 1.0 + rho;
    let spread = a * a * (1.0 - rho) * up;
    let k = 1.0 + spread;
    let delta_bar = a * up / (1.0 + 2.0 * a * a * up).sqrt();
    let a_dagger = a * up / k.sqrt();
    // (1+ρ)/k − 1 without the cancellation
    let rho_dagger = (rho - spread) / k;
    Ok((delta_bar, a_dagger, rho_dagger))
}

/// Closed forms for α = (a, 0): (δ∘, ρ†, α₂†) with δ∘ = a/√(1+a²),
/// ρ† = ρ/√(1 + a²(1−ρ²)) and α₂† = aρ†. Here α₁† = a.
pub fn single_skew_derived(rho: f64, a: f64) -> Result<(f64, f64, f64)> {
    check_rho(rho, true)?;
    if !a.is_finite() {
        return domain(format!("skewness must be finite, got {a}"));
    }
    let delta_circ = a / (1.0 + a * a).sqrt();
    let rho_dagger = rho / (1.0 + a * a * (1.0 - rho) * (1.0 + rho)).sqrt();
    Ok((delta_circ, rho_dagger, a * rho_dagger))
}
