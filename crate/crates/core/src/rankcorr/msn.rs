//! Skew-normal scale mixture copulas.
//!
//! Two routes are available. The orthant route evaluates
//! τ = 16 E Φ₄(0; P_τ(ρ, δ, V)) − 1 and ρ_S = 96 E Φ₅(0; P_S(ρ, δ, V)) − 3;
//! the outer expectation over the mixing variables and the inner Genz
//! integral are flattened into a single QMC integral of dimension 2 + 3 and
//! 3 + 4. The bivariate route evaluates
//! τ = 4 E Φ₂(α₁†Z, α₂†Z; ρ†) − 1 and
//! ρ_S = 12 E Φ₂(α₁†Z₁, α₂†Z₂; ρ†V₃) − 3 over mixing and half-normal
//! variables.

use std::cell::Cell;
use std::f64::consts::FRAC_1_SQRT_2;

use super::mn::spearman_mn;
use super::skew::derived_skew;
use super::{kendall_elliptical, spearman_gaussian, validate_args, Measure, MsnMethod, RankResult};
use crate::error::{Error, Result};
use crate::mixing::MixingSpec;
use crate::orthant::{build_p_s, build_p_tau, orthant_prob, OrthantPlan};
use crate::qmc::{integrate, QmcConfig, QmcEstimate};
use crate::specfun::{bvn_excess, norm_quantile_unchecked};

/// |Φ⁻¹(·)| of a uniform: Φ⁻¹((1 + u)/2), computed from the upper tail.
#[inline]
fn half_normal(u: f64) -> f64 {
    -norm_quantile_unchecked(0.5 * (1.0 - u))
}

fn pinned(rho: f64, measure: Measure) -> Option<RankResult> {
    (rho.abs() == 1.0).then(|| RankResult::exact(measure, rho))
}

/// Kendall's tau of C_msn(ρ, α, F).
///
/// ρ = ±1 returns ±1 and α = 0 returns (2/π) arcsin ρ, both exactly.
pub fn kendall_msn(
    rho: f64,
    alpha: [f64; 2],
    mixing: &MixingSpec,
    cfg: &QmcConfig,
    method: MsnMethod,
) -> Result<RankResult> {
    validate_args(rho, alpha, mixing)?;
    if let Some(r) = pinned(rho, Measure::KendallTau) {
        return Ok(r);
    }
    if alpha == [0.0, 0.0] {
        return Ok(RankResult::exact(Measure::KendallTau, kendall_elliptical(rho)));
    }
    if mixing.is_degenerate() {
        return skew_normal_route(rho, alpha, Measure::KendallTau, cfg, method);
    }
    let est = match method {
        MsnMethod::CorBivariate => kendall_bivariate(rho, alpha, mixing, cfg)?,
        MsnMethod::ThmExpectation => kendall_orthant(rho, alpha, mixing, cfg)?,
    };
    Ok(RankResult::new(Measure::KendallTau, est, method.into()))
}

/// Spearman's rho of C_msn(ρ, α, F).
///
/// ρ = ±1 returns ±1 exactly. For α = 0 the value is (6/π) E arcsin(ρV₃),
/// which is (6/π) arcsin(ρ/2) under a degenerate mixing law.
pub fn spearman_msn(
    rho: f64,
    alpha: [f64; 2],
    mixing: &MixingSpec,
    cfg: &QmcConfig,
    method: MsnMethod,
) -> Result<RankResult> {
    validate_args(rho, alpha, mixing)?;
    if let Some(r) = pinned(rho, Measure::SpearmanRho) {
        return Ok(r);
    }
    if alpha == [0.0, 0.0] {
        if mixing.is_degenerate() {
            return Ok(RankResult::exact(Measure::SpearmanRho, spearman_gaussian(rho)));
        }
        let r = spearman_mn(rho, [0.0, 0.0], mixing, cfg)?;
        return Ok(RankResult::new(Measure::SpearmanRho, r.estimate, method.into()));
    }
    if mixing.is_degenerate() {
        return skew_normal_route(rho, alpha, Measure::SpearmanRho, cfg, method);
    }
    let est = match method {
        MsnMethod::CorBivariate => spearman_bivariate(rho, alpha, mixing, cfg)?,
        MsnMethod::ThmExpectation => spearman_orthant(rho, alpha, mixing, cfg)?,
    };
    Ok(RankResult::new(Measure::SpearmanRho, est, method.into()))
}

/// Rank correlation of the skew-normal copula (degenerate mixing) from a
/// single orthant probability: τ = 16 Φ₄(0; P_τ(ρ, δ, (c, −c))) − 1 and
/// ρ_S = 96 Φ₅(0; P_S(ρ, δ, (c, c, −c, −c, c²))) − 3 with c = 1/√2.
pub fn skew_normal_rankcorr(rho: f64, alpha: [f64; 2], measure: Measure, cfg: &QmcConfig) -> Result<RankResult> {
    let m = MixingSpec::Degenerate;
    match measure {
        Measure::KendallTau => kendall_msn(rho, alpha, &m, cfg, MsnMethod::ThmExpectation),
        Measure::SpearmanRho => spearman_msn(rho, alpha, &m, cfg, MsnMethod::ThmExpectation),
    }
}

/// Cross-check route for the skew-normal copula through the bivariate
/// normal cdf, with Z = (Y₁ − Y₂)/√2 for Kendall and ρ†/2 in place of
/// ρ†V₃ for Spearman.
pub fn skew_normal_rankcorr_bivariate(
    rho: f64,
    alpha: [f64; 2],
    measure: Measure,
    cfg: &QmcConfig,
) -> Result<RankResult> {
    let m = MixingSpec::Degenerate;
    match measure {
        Measure::KendallTau => kendall_msn(rho, alpha, &m, cfg, MsnMethod::CorBivariate),
        Measure::SpearmanRho => spearman_msn(rho, alpha, &m, cfg, MsnMethod::CorBivariate),
    }
}

fn skew_normal_route(
    rho: f64,
    alpha: [f64; 2],
    measure: Measure,
    cfg: &QmcConfig,
    method: MsnMethod,
) -> Result<RankResult> {
    let d = derived_skew(rho, alpha)?;
    let c = FRAC_1_SQRT_2;
    let est = match (measure, method) {
        (Measure::KendallTau, MsnMethod::ThmExpectation) => {
            orthant_prob(&build_p_tau(rho, d.delta, [c, -c])?, cfg)?.affine(-1.0, 16.0)
        }
        (Measure::SpearmanRho, MsnMethod::ThmExpectation) => {
            orthant_prob(&build_p_s(rho, d.delta, [c, c, -c, -c, 0.5])?, cfg)?.affine(-3.0, 96.0)
        }
        (Measure::KendallTau, MsnMethod::CorBivariate) => {
            let [a1, a2] = d.alpha_dagger;
            let r = d.rho_dagger;
            integrate(2, cfg, |u| {
                let z = c * (half_normal(u[0]) - half_normal(u[1]));
                4.0 * bvn_excess(a1 * z, a2 * z, r) + 1.0
            })?
        }
        (Measure::SpearmanRho, MsnMethod::CorBivariate) => {
            let [a1, a2] = d.alpha_dagger;
            let r = 0.5 * d.rho_dagger;
            integrate(3, cfg, |u| {
                let y3 = half_normal(u[2]);
                let z1 = c * (half_normal(u[0]) - y3);
                let z2 = c * (half_normal(u[1]) - y3);
                6.0 * (bvn_excess(a1 * z1, a2 * z2, r) + bvn_excess(a1 * z2, a2 * z1, r)) + 3.0
            })?
        }
    };
    Ok(RankResult::new(measure, est, method.into()))
}

fn kendall_bivariate(rho: f64, alpha: [f64; 2], mixing: &MixingSpec, cfg: &QmcConfig) -> Result<QmcEstimate> {
    let d = derived_skew(rho, alpha)?;
    let [a1, a2] = d.alpha_dagger;
    let r = d.rho_dagger;
    integrate(4, cfg, |u| {
        let w1 = mixing.quantile_unchecked(u[0]);
        let w2 = mixing.quantile_unchecked(u[1]);
        let s = w1 + w2;
        let z = (w2 / s).sqrt() * half_normal(u[2]) - (w1 / s).sqrt() * half_normal(u[3]);
        4.0 * bvn_excess(a1 * z, a2 * z, r) + 1.0
    })
}

fn spearman_bivariate(rho: f64, alpha: [f64; 2], mixing: &MixingSpec, cfg: &QmcConfig) -> Result<QmcEstimate> {
    let d = derived_skew(rho, alpha)?;
    let [a1, a2] = d.alpha_dagger;
    let r = d.rho_dagger;
    integrate(6, cfg, |u| {
        let w1 = mixing.quantile_unchecked(u[0]);
        let w2 = mixing.quantile_unchecked(u[1]);
        let w3 = mixing.quantile_unchecked(u[2]);
        let y3 = half_normal(u[5]);
        let s1 = w1 + w3;
        let s2 = w2 + w3;
        let z1 = (w1 / s1).sqrt() * half_normal(u[3]) - (w3 / s1).sqrt() * y3;
        let z2 = (w2 / s2).sqrt() * half_normal(u[4]) - (w3 / s2).sqrt() * y3;
        let rv = r * (w3 / (s1 * s2).sqrt());
        // averaged over the exchange (W₁, Y₁) ↔ (W₂, Y₂)
        6.0 * (bvn_excess(a1 * z1, a2 * z2, rv) + bvn_excess(a1 * z2, a2 * z1, rv)) + 3.0
    })
}

/// Runs a flattened orthant integrand, surfacing the first matrix error.
fn orthant_integral<F>(dim: usize, cfg: &QmcConfig, mut build: F) -> Result<QmcEstimate>
where
    F: FnMut(&[f64]) -> Result<(crate::orthant::CorrMatrix, usize)>,
{
    let failure: Cell<Option<Error>> = Cell::new(None);
    let est = integrate(dim, cfg, |u| match build(u) {
        Ok((p, outer)) => OrthantPlan::new(&p).eval(&u[outer..]),
        Err(e) => {
            if let Some(prev) = failure.take() {
                failure.set(Some(prev));
            } else {
                failure.set(Some(e));
            }
            0.0
        }
    })?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(est),
    }
}

fn kendall_orthant(rho: f64, alpha: [f64; 2], mixing: &MixingSpec, cfg: &QmcConfig) -> Result<QmcEstimate> {
    let delta = derived_skew(rho, alpha)?.delta;
    let est = orthant_integral(5, cfg, |u| {
        let w1 = mixing.quantile_unchecked(u[0]);
        let w2 = mixing.quantile_unchecked(u[1]);
        let s = w1 + w2;
        Ok((build_p_tau(rho, delta, [(w2 / s).sqrt(), -(w1 / s).sqrt()])?, 2))
    })?;
    Ok(est.affine(-1.0, 16.0))
}

fn spearman_orthant(rho: f64, alpha: [f64; 2], mixing: &MixingSpec, cfg: &QmcConfig) -> Result<QmcEstimate> {
    let delta = derived_skew(rho, alpha)?.delta;
    let est = orthant_integral(7, cfg, |u| {
        let w1 = mixing.quantile_unchecked(u[0]);
        let w2 = mixing.quantile_unchecked(u[1]);
        let w3 = mixing.quantile_unchecked(u[2]);
        let s1 = w1 + w3;
        let s2 = w2 + w3;
        let v = [(w1 / s1).sqrt(), (w2 / s2).sqrt(), -(w3 / s1).sqrt(), -(w3 / s2).sqrt(), w3 / (s1 * s2).sqrt()];
        Ok((build_p_s(rho, delta, v)?, 3))
    })?;
    Ok(est.affine(-3.0, 96.0))
}
