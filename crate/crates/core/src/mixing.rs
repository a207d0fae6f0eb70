//! Mixing distributions on (0, ∞), exposed through their quantile functions.
//!
//! Gamma(α, β) has density β^α x^{α−1} e^{−βx} / Γ(α) and inverse-gamma
//! IG(α, β) is the law of 1/W for W ~ Gamma(α, β), so its cdf is
//! Q(α, β/x). The generalized inverse Gaussian density is provided for
//! reference only.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{gamma_inv_pq, reg_gamma_lower, reg_gamma_upper};

/// A mixing distribution F on (0, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MixingSpec {
    /// Unit point mass.
    Degenerate,
    Gamma { shape: f64, rate: f64 },
    InverseGamma { shape: f64, rate: f64 },
}

/// IG(ν/2, ν/2), the mixing law of the Student and skew-t families.
pub fn ig_from_dof(nu: f64) -> Result<MixingSpec> {
    if !(nu > 0.0 && nu.is_finite()) {
        return domain(format!("degrees of freedom must be positive, got {nu}"));
    }
    Ok(MixingSpec::InverseGamma { shape: 0.5 * nu, rate: 0.5 * nu })
}

impl MixingSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MixingSpec::Degenerate => Ok(()),
            MixingSpec::Gamma { shape, rate } | MixingSpec::InverseGamma { shape, rate } => {
                let ok = |v: f64| v > 0.0 && v.is_finite();
                if ok(shape) && ok(rate) {
                    Ok(())
                } else {
                    domain(format!("mixing shape and rate must be positive and finite, got ({shape}, {rate})"))
                }
            }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, MixingSpec::Degenerate)
    }

    /// Quantile F⁻¹(u) for u in (0, 1).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        self.validate()?;
        if !(u > 0.0 && u < 1.0) {
            return domain(format!("quantile needs u in (0,1), got {u}"));
        }
        let q = self.quantile_unchecked(u);
        if q > 0.0 && q.is_finite() {
            Ok(q)
        } else {
            Err(Error::Domain(format!("mixing quantile at u={u} is not a positive finite number ({q})")))
        }
    }

    /// Quantile for a validated spec and u in (0, 1). 1 − u is taken as
    /// exact, which holds for the dyadic QMC nodes.
    #[inline]
    pub(crate) fn quantile_unchecked(&self, u: f64) -> f64 {
        match *self {
            MixingSpec::Degenerate => 1.0,
            MixingSpec::Gamma { shape, rate } => gamma_inv_pq(shape, u, 1.0 - u) / rate,
            // P(W ≤ w) = Q(α, β/w), so β/w is the Q-quantile of u
            MixingSpec::InverseGamma { shape, rate } => rate / gamma_inv_pq(shape, 1.0 - u, u),
        }
    }

    /// Distribution function F(x).
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if x.is_nan() {
            return domain("cdf argument is NaN");
        }
        if x <= 0.0 {
            return Ok(0.0);
        }
        match *self {
            MixingSpec::Degenerate => Ok(if x >= 1.0 { 1.0 } else { 0.0 }),
            MixingSpec::Gamma { shape, rate } => reg_gamma_lower(shape, rate * x),
            MixingSpec::InverseGamma { shape, rate } => reg_gamma_upper(shape, rate / x),
        }
    }
}

/// Parameters (λ, χ, ψ) of the generalized inverse Gaussian law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GigParams {
    pub lambda: f64,
    pub chi: f64,
    pub psi: f64,
}

impl GigParams {
    /// Checks the admissible parameter region.
    pub fn validate(&self) -> Result<()> {
        let GigParams { lambda, chi, psi } = *self;
        if !(lambda.is_finite() && chi >= 0.0 && psi >= 0.0 && chi.is_finite() && psi.is_finite()) {
            return domain(format!("invalid GIG parameters {self:?}"));
        }
        let ok = if lambda < 0.0 {
            chi > 0.0
        } else if lambda == 0.0 {
            chi > 0.0 && psi > 0.0
        } else {
            psi > 0.0
        };
        if ok {
            Ok(())
        } else {
            domain(format!("GIG parameters outside the admissible region: {self:?}"))
        }
    }
}

/// GIG density
/// (ψ/χ)^{λ/2} / (2 K_λ(√(ψχ))) · x^{λ−1} exp(−(ψx + χ/x)/2)
/// for the interior case χ > 0, ψ > 0. The χ = 0 and ψ = 0 limits are the
/// gamma and inverse-gamma laws and are served by [`MixingSpec`].
pub fn gig_pdf(p: GigParams, x: f64) -> Result<f64> {
    p.validate()?;
    if p.chi == 0.0 || p.psi == 0.0 {
        return domain("boundary GIG parameters: use the gamma or inverse-gamma mixing instead");
    }
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("GIG density needs x > 0, got {x}"));
    }
    let z = (p.psi * p.chi).sqrt();
    // K is evaluated scaled by e^z to keep the exponent in range
    let ln_k = bessel_k_scaled(p.lambda, z).ln() - z;
    let ln_f = 0.5 * p.lambda * (p.psi / p.chi).ln() - (2.0f64).ln() - ln_k + (p.lambda - 1.0) * x.ln()
        - 0.5 * (p.psi * x + p.chi / x);
    Ok(ln_f.exp())
}

/// e^z K_λ(z) for z > 0.
pub(crate) fn bessel_k_scaled(lambda: f64, z: f64) -> f64 {
    let nu = lambda.abs();
    let twice = 2.0 * nu;
    if twice.fract() == 0.0 && twice % 2.0 == 1.0 && nu < 50.0 {
        // half-integer order: upward recurrence from K_{1/2} = K_{-1/2}
        let k_half = (PI / (2.0 * z)).sqrt();
        let (mut km, mut k) = (k_half, k_half);
        let mut order = 0.5;
        while order < nu {
            let next = km + 2.0 * order / z * k;
            km = k;
            k = next;
            order += 1.0;
        }
        return k;
    }
    // K_ν(z) = ∫₀^∞ exp(−z cosh t) cosh(νt) dt; the trapezoid rule converges
    // geometrically for this analytic, doubly-exponentially decaying integrand.
    let h = 0.02;
    let f = |t: f64| (-z * (t.cosh() - 1.0) + nu * t).exp() * 0.5 * (1.0 + (-2.0 * nu * t).exp());
    let mut sum = 0.5 * f(0.0);
    let mut prev = sum;
    let mut i = 1;
    loop {
        let v = f(i as f64 * h);
        sum += v;
        if (v < prev && v <= sum * 1e-18) || i > 2_000_000 {
            break;
        }
        prev = v;
        i += 1;
    }
    sum * h
}
