//! Normal location-scale mixture copulas.
//!
//! With W₁, W₂, W₃ i.i.d. from the mixing law and q its quantile,
//! τ = 4 E Φ₂(β₁g, β₂g; ρ) − 1 with g = (W₂ − W₁)/√(W₁ + W₂), and
//! ρ_S = 12 E Φ₂(β₁h₁, β₂h₂; ρh₃) − 3 with hᵢ = (Wᵢ − W₃)/√(Wᵢ + W₃) and
//! h₃ = W₃/√((W₁ + W₃)(W₂ + W₃)).

use super::{kendall_elliptical, spearman_gaussian, validate_args, Measure, Method, RankResult};
use crate::error::Result;
use crate::mixing::MixingSpec;
use crate::qmc::{integrate, QmcConfig};
use crate::specfun::{bvn_excess, bvn_origin};

/// Kendall's tau of C_mn(ρ, β, F).
///
/// β = 0 or a degenerate mixing law give the elliptical value
/// (2/π) arcsin ρ without integration.
pub fn kendall_mn(rho: f64, beta: [f64; 2], mixing: &MixingSpec, cfg: &QmcConfig) -> Result<RankResult> {
    validate_args(rho, beta, mixing)?;
    if beta == [0.0, 0.0] || mixing.is_degenerate() {
        return Ok(RankResult::exact(Measure::KendallTau, kendall_elliptical(rho)));
    }
    kendall_mn_qmc(rho, beta, mixing, cfg)
}

/// Kendall's tau of C_mn(ρ, β, F) by QMC, with no closed-form shortcut.
pub fn kendall_mn_qmc(rho: f64, beta: [f64; 2], mixing: &MixingSpec, cfg: &QmcConfig) -> Result<RankResult> {
    validate_args(rho, beta, mixing)?;
    let [b1, b2] = beta;
    let est = integrate(2, cfg, |u| {
        let w1 = mixing.quantile_unchecked(u[0]);
        let w2 = mixing.quantile_unchecked(u[1]);
        let g = (w2 - w1) / (w1 + w2).sqrt();
        4.0 * bvn_excess(b1 * g, b2 * g, rho) + 1.0
    })?;
    Ok(RankResult::new(Measure::KendallTau, est, Method::ThmExpectation))
}

/// Spearman's rho of C_mn(ρ, β, F).
///
/// A degenerate mixing law gives (6/π) arcsin(ρ/2) for any β. For β = 0
/// and a general law the integrand reduces to (6/π) arcsin(ρh₃).
pub fn spearman_mn(rho: f64, beta: [f64; 2], mixing: &MixingSpec, cfg: &QmcConfig) -> Result<RankResult> {
    validate_args(rho, beta, mixing)?;
    if mixing.is_degenerate() {
        return Ok(RankResult::exact(Measure::SpearmanRho, spearman_gaussian(rho)));
    }
    if beta == [0.0, 0.0] {
        let est = integrate(3, cfg, |u| {
            let (_, _, h3) = spearman_weights(mixing, u);
            12.0 * bvn_origin(rho * h3) - 3.0
        })?;
        return Ok(RankResult::new(Measure::SpearmanRho, est, Method::ThmExpectation));
    }
    spearman_mn_qmc(rho, beta, mixing, cfg)
}

/// Spearman's rho of C_mn(ρ, β, F) by QMC, with no closed-form shortcut.
/// The integrand is averaged over the exchange W₁ ↔ W₂.
pub fn spearman_mn_qmc(rho: f64, beta: [f64; 2], mixing: &MixingSpec, cfg: &QmcConfig) -> Result<RankResult> {
    validate_args(rho, beta, mixing)?;
    let [b1, b2] = beta;
    let est = integrate(3, cfg, |u| {
        let (h1, h2, h3) = spearman_weights(mixing, u);
        let r = rho * h3;
        let e = bvn_excess(b1 * h1, b2 * h2, r) + bvn_excess(b1 * h2, b2 * h1, r);
        6.0 * e + 3.0
    })?;
    Ok(RankResult::new(Measure::SpearmanRho, est, Method::ThmExpectation))
}

#[inline]
fn spearman_weights(mixing: &MixingSpec, u: &[f64]) -> (f64, f64, f64) {
    let w1 = mixing.quantile_unchecked(u[0]);
    let w2 = mixing.quantile_unchecked(u[1]);
    let w3 = mixing.quantile_unchecked(u[2]);
    let s1 = w1 + w3;
    let s2 = w2 + w3;
    ((w1 - w3) / s1.sqrt(), (w2 - w3) / s2.sqrt(), w3 / (s1 * s2).sqrt())
}
