//! Kendall's tau and Spearman's rho of bivariate normal location-scale
//! mixture (MN) and skew-normal scale mixture (MSN) copulas.
//!
//! Every expectation is evaluated on randomized Sobol nodes. Integrands are
//! written in centered form, E Φ₂(x₁, x₂; r) = ½ + E[Φ₂ − ½(Φ(x₁) + Φ(x₂))],
//! which holds because each argument is symmetric about zero; the centered
//! term is exactly invariant under argument swap and joint sign change, so
//! comparisons on shared nodes reproduce the component-swap and sign-flip
//! symmetries to rounding.

mod mn;
mod msn;
mod skew;

use serde::{Deserialize, Serialize};

pub use mn::{kendall_mn, kendall_mn_qmc, spearman_mn, spearman_mn_qmc};
pub use msn::{kendall_msn, skew_normal_rankcorr, skew_normal_rankcorr_bivariate, spearman_msn};
pub use skew::{
    alpha_from_delta, delta_admissible, delta_from_alpha, derived_skew, equi_skew_derived, single_skew_derived,
    DerivedSkew,
};

use crate::error::{domain, Result};
use crate::mixing::MixingSpec;
use crate::qmc::{QmcConfig, QmcEstimate};

/// Copula family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Normal location-scale mixture, skew parameter β.
    Mn,
    /// Skew-normal scale mixture, skew parameter α.
    Msn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "tau")]
    KendallTau,
    #[serde(rename = "rhos")]
    SpearmanRho,
}

impl Measure {
    pub const BOTH: [Measure; 2] = [Measure::KendallTau, Measure::SpearmanRho];
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    /// Orthant-probability representation for MSN; the direct mixture
    /// expectation for MN.
    ThmExpectation,
    /// Bivariate normal cdf with the transformed pair (α†, ρ†).
    CorBivariate,
}

/// Evaluation route for MSN copulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MsnMethod {
    ThmExpectation,
    #[default]
    CorBivariate,
}

impl From<MsnMethod> for Method {
    fn from(m: MsnMethod) -> Method {
        match m {
            MsnMethod::ThmExpectation => Method::ThmExpectation,
            MsnMethod::CorBivariate => Method::CorBivariate,
        }
    }
}

/// Full parameter set of a bivariate MN or MSN copula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CopulaSpec {
    pub family: Family,
    /// Pseudo-correlation.
    pub rho: f64,
    /// β for MN, α for MSN.
    pub skew: [f64; 2],
    pub mixing: MixingSpec,
}

impl CopulaSpec {
    pub fn new(family: Family, rho: f64, skew: [f64; 2], mixing: MixingSpec) -> Self {
        CopulaSpec { family, rho, skew, mixing }
    }

    pub fn validate(&self) -> Result<()> {
        validate_args(self.rho, self.skew, &self.mixing)
    }

    pub fn with_rho(&self, rho: f64) -> Self {
        CopulaSpec { rho, ..*self }
    }
}

pub(crate) fn validate_args(rho: f64, skew: [f64; 2], mixing: &MixingSpec) -> Result<()> {
    if !(rho.abs() <= 1.0) {
        return domain(format!("pseudo-correlation must lie in [-1,1], got {rho}"));
    }
    if !(skew[0].is_finite() && skew[1].is_finite()) {
        return domain(format!("skewness must be finite, got {skew:?}"));
    }
    mixing.validate()
}

/// A rank correlation with its integration error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankResult {
    pub measure: Measure,
    /// Estimate clamped to [−1, 1].
    pub value: f64,
    /// Unclamped estimate and its standard error.
    pub estimate: QmcEstimate,
    pub method: Method,
}

impl RankResult {
    pub(crate) fn new(measure: Measure, estimate: QmcEstimate, method: Method) -> Self {
        RankResult { measure, value: estimate.value.clamp(-1.0, 1.0), estimate, method }
    }

    pub(crate) fn exact(measure: Measure, value: f64) -> Self {
        Self::new(measure, QmcEstimate::exact(value), Method::ClosedForm)
    }

    pub fn std_error(&self) -> f64 {
        self.estimate.std_error
    }

    /// The unclamped estimate.
    pub fn raw_value(&self) -> f64 {
        self.estimate.value
    }
}

/// Dispatches to the family formulas, using the bivariate-cdf route for MSN.
pub fn rank_correlation(spec: &CopulaSpec, measure: Measure, cfg: &QmcConfig) -> Result<RankResult> {
    rank_correlation_with(spec, measure, cfg, MsnMethod::default())
}

/// As [`rank_correlation`] with an explicit MSN route.
pub fn rank_correlation_with(
    spec: &CopulaSpec,
    measure: Measure,
    cfg: &QmcConfig,
    method: MsnMethod,
) -> Result<RankResult> {
    let CopulaSpec { family, rho, skew, ref mixing } = *spec;
    match (family, measure) {
        (Family::Mn, Measure::KendallTau) => kendall_mn(rho, skew, mixing, cfg),
        (Family::Mn, Measure::SpearmanRho) => spearman_mn(rho, skew, mixing, cfg),
        (Family::Msn, Measure::KendallTau) => kendall_msn(rho, skew, mixing, cfg, method),
        (Family::Msn, Measure::SpearmanRho) => spearman_msn(rho, skew, mixing, cfg, method),
    }
}

/// Two evaluations on the same QMC nodes and their difference.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub first: RankResult,
    pub second: RankResult,
    /// first − second, unclamped.
    pub difference: f64,
    /// Standard error of the difference from paired replicates.
    pub std_error: f64,
}

/// Evaluates two specs with the same configuration, so both integrals see
/// identical nodes. Identities that hold pointwise in the integrand then
/// hold to rounding error.
pub fn compare(a: &CopulaSpec, b: &CopulaSpec, measure: Measure, cfg: &QmcConfig) -> Result<Comparison> {
    let first = rank_correlation(a, measure, cfg)?;
    let second = rank_correlation(b, measure, cfg)?;
    Ok(paired(first, second))
}

pub(crate) fn paired(first: RankResult, second: RankResult) -> Comparison {
    let difference = first.estimate.value - second.estimate.value;
    let ra = &first.estimate.replicate_means;
    let rb = &second.estimate.replicate_means;
    let std_error = if ra.len() == rb.len() && ra.len() >= 2 {
        let diffs: Vec<f64> = ra.iter().zip(rb).map(|(x, y)| x - y).collect();
        QmcEstimate::from_replicates(diffs, 0).std_error
    } else {
        first.estimate.std_error.hypot(second.estimate.std_error)
    };
    Comparison { first, second, difference, std_error }
}

/// Elliptical Kendall's tau (2/π) arcsin ρ.
pub fn kendall_elliptical(rho: f64) -> f64 {
    std::f64::consts::FRAC_2_PI * rho.clamp(-1.0, 1.0).asin()
}

/// Gaussian Spearman's rho (6/π) arcsin(ρ/2).
pub fn spearman_gaussian(rho: f64) -> f64 {
    6.0 / std::f64::consts::PI * (0.5 * rho.clamp(-1.0, 1.0)).asin()
}
