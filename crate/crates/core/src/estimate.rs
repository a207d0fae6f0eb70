//! Method-of-moments inversion: recover the pseudo-correlation (and an
//! equi-skew level) from target rank correlations.
//!
//! Every evaluation uses the same QMC configuration, so the map ρ ↦ value
//! is a deterministic function and the root finders see no sampling noise.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::mixing::MixingSpec;
use crate::qmc::QmcConfig;
use crate::rankcorr::{rank_correlation, validate_args, CopulaSpec, Family, Measure, RankResult};

const MAX_ITER: usize = 200;

/// Outcome of [`invert_rho`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub rho_hat: f64,
    /// value(rho_hat) − target.
    pub residual: f64,
    pub iterations: usize,
    /// Final sign-change interval containing rho_hat.
    pub bracket: [f64; 2],
    /// Values of the measure at ρ = −1 and ρ = 1.
    pub attainable: [f64; 2],
    /// Integration error of value(rho_hat).
    pub std_error: f64,
}

fn evaluate(spec: &CopulaSpec, rho: f64, measure: Measure, cfg: &QmcConfig) -> Result<RankResult> {
    rank_correlation(&spec.with_rho(rho), measure, cfg)
}

/// (value at ρ = −1, value at ρ = 1). Strict monotonicity in ρ makes these
/// the extremes of the measure.
pub fn attainable_range(
    family: Family,
    skew: [f64; 2],
    mixing: &MixingSpec,
    measure: Measure,
    cfg: &QmcConfig,
) -> Result<[f64; 2]> {
    validate_args(0.0, skew, mixing)?;
    if family == Family::Msn {
        return Ok([-1.0, 1.0]);
    }
    let spec = CopulaSpec::new(family, 0.0, skew, *mixing);
    let lo = evaluate(&spec, -1.0, measure, cfg)?;
    let hi = evaluate(&spec, 1.0, measure, cfg)?;
    Ok([lo.value, hi.value])
}

struct Root {
    x: f64,
    fx: f64,
    iterations: usize,
    bracket: [f64; 2],
}

/// Brent's method on [a, b] with f(a), f(b) of opposite sign. Stops once
/// |f| ≤ ftol.
fn brent<F>(mut f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, ftol: f64) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for it in 0..MAX_ITER {
        if fb.abs() <= ftol {
            return Ok(Root { x: b, fx: fb, iterations: it, bracket: [a.min(b), a.max(b)] });
        }
        // keep the root between b and c
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let xtol = 2.0 * f64::EPSILON * b.abs() + 1e-300;
        let m = 0.5 * (c - b);
        if m.abs() <= xtol {
            // interval collapsed onto a jump larger than ftol
            break;
        }
        if e.abs() >= xtol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (xtol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > xtol { d } else { xtol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::NoConvergence { iterations: MAX_ITER })
}

/// Solves value(ρ) = target on [−1, 1] by Brent's method.
///
/// `tol` bounds |value(rho_hat) − target| and should be at least ten times
/// the integration error of a single evaluation.
pub fn invert_rho(
    target: f64,
    family: Family,
    skew: [f64; 2],
    mixing: &MixingSpec,
    measure: Measure,
    cfg: &QmcConfig,
    tol: f64,
) -> Result<EstimateResult> {
    if !(target.abs() <= 1.0) {
        return domain(format!("target rank correlation must lie in [-1,1], got {target}"));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    validate_args(0.0, skew, mixing)?;
    cfg.validate()?;
    let spec = CopulaSpec::new(family, 0.0, skew, *mixing);
    let lo = evaluate(&spec, -1.0, measure, cfg)?;
    let hi = evaluate(&spec, 1.0, measure, cfg)?;
    let attainable = [lo.value, hi.value];
    if target < lo.value - tol || target > hi.value + tol {
        return Err(Error::OutOfAttainableRange { target, low: lo.value, high: hi.value });
    }
    let done = |rho: f64, r: &RankResult, iterations: usize| EstimateResult {
        rho_hat: rho,
        residual: r.raw_value() - target,
        iterations,
        bracket: [rho, rho],
        attainable,
        std_error: r.std_error(),
    };
    if (lo.raw_value() - target).abs() <= tol {
        return Ok(done(-1.0, &lo, 0));
    }
    if (hi.raw_value() - target).abs() <= tol {
        return Ok(done(1.0, &hi, 0));
    }
    let mut last = None;
    let root = brent(
        |rho| {
            let r = evaluate(&spec, rho, measure, cfg)?;
            let v = r.raw_value() - target;
            last = Some((rho, r));
            Ok(v)
        },
        -1.0,
        1.0,
        lo.raw_value() - target,
        hi.raw_value() - target,
        tol,
    )?;
    let std_error = match &last {
        Some((rho, r)) if *rho == root.x => r.std_error(),
        _ => evaluate(&spec, root.x, measure, cfg)?.std_error(),
    };
    Ok(EstimateResult {
        rho_hat: root.x,
        residual: root.fx,
        iterations: root.iterations,
        bracket: root.bracket,
        attainable,
        std_error,
    })
}

/// Search settings for [`invert_equi_skew_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquiSkewOptions {
    /// Skew levels are searched on [0, skew_max]; (a, a) and (−a, −a)
    /// give the same rank correlations.
    pub skew_max: f64,
    /// Number of probe points on the skew bracket.
    pub grid: usize,
}

impl Default for EquiSkewOptions {
    fn default() -> Self {
        EquiSkewOptions { skew_max: 5.0, grid: 11 }
    }
}

/// One probe of the two-moment residual surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbePoint {
    pub skew: f64,
    /// ρ matching the Kendall target at this skew, if attainable.
    pub rho: Option<f64>,
    /// Spearman residual at (rho, skew).
    pub residual: Option<f64>,
}

/// Outcome of [`invert_equi_skew`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquiSkewResult {
    pub rho_hat: f64,
    /// Equi-skew level a with skew vector (a, a), a ≥ 0.
    pub skew_hat: f64,
    /// (Kendall residual, Spearman residual).
    pub residuals: [f64; 2],
    /// Iterations of the outer solve.
    pub iterations: usize,
    pub probe: Vec<ProbePoint>,
}

/// Joint estimate of ρ and an equi-skew level from a Kendall and a
/// Spearman target, using the default search bracket.
pub fn invert_equi_skew(
    target_tau: f64,
    target_rho_s: f64,
    family: Family,
    mixing: &MixingSpec,
    cfg: &QmcConfig,
    tol: f64,
) -> Result<EquiSkewResult> {
    invert_equi_skew_with(target_tau, target_rho_s, family, mixing, cfg, tol, &EquiSkewOptions::default())
}

/// Joint estimate of (ρ, a) for skew (a, a).
///
/// For each skew level the Kendall equation is solved for ρ; the Spearman
/// residual along that curve is then probed on a grid and its unique sign
/// change refined by Brent's method. No sign change is reported as
/// [`Error::OutOfAttainableRange`]; several sign changes, or a residual
/// below `tol` over the whole bracket, as [`Error::NonIdentified`].
pub fn invert_equi_skew_with(
    target_tau: f64,
    target_rho_s: f64,
    family: Family,
    mixing: &MixingSpec,
    cfg: &QmcConfig,
    tol: f64,
    opts: &EquiSkewOptions,
) -> Result<EquiSkewResult> {
    for t in [target_tau, target_rho_s] {
        if !(t.abs() <= 1.0) {
            return domain(format!("target rank correlation must lie in [-1,1], got {t}"));
        }
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    if !(opts.skew_max > 0.0 && opts.skew_max.is_finite()) || opts.grid < 2 {
        return domain(format!("invalid skew search options {opts:?}"));
    }
    mixing.validate()?;
    let inner_tol = 0.5 * tol;

    // ρ(a) from the Kendall equation, then the Spearman residual
    let profile = |a: f64| -> Result<Option<(f64, f64, f64)>> {
        let inv = match invert_rho(target_tau, family, [a, a], mixing, Measure::KendallTau, cfg, inner_tol) {
            Ok(r) => r,
            Err(Error::OutOfAttainableRange { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let spec = CopulaSpec::new(family, inv.rho_hat, [a, a], *mixing);
        let rs = rank_correlation(&spec, Measure::SpearmanRho, cfg)?;
        Ok(Some((inv.rho_hat, inv.residual, rs.raw_value() - target_rho_s)))
    };

    let mut probe = Vec::with_capacity(opts.grid);
    for i in 0..opts.grid {
        let a = opts.skew_max * i as f64 / (opts.grid - 1) as f64;
        let p = profile(a)?;
        probe.push(ProbePoint { skew: a, rho: p.map(|x| x.0), residual: p.map(|x| x.2) });
    }

    let feasible: Vec<(f64, f64)> = probe.iter().filter_map(|p| p.residual.map(|r| (p.skew, r))).collect();
    if feasible.is_empty() {
        let [low, high] = attainable_range(family, [0.0, 0.0], mixing, Measure::KendallTau, cfg)?;
        return Err(Error::OutOfAttainableRange { target: target_tau, low, high });
    }
    if feasible.iter().all(|&(_, r)| r.abs() <= inner_tol) {
        return Err(Error::NonIdentified(format!(
            "Spearman residual stays within {inner_tol:e} over skew levels [0, {}]",
            opts.skew_max
        )));
    }

    let mut exact = feasible.iter().filter(|&&(_, r)| r == 0.0);
    let mut changes = feasible.windows(2).filter(|w| (w[0].1 < 0.0 && w[1].1 > 0.0) || (w[0].1 > 0.0 && w[1].1 < 0.0));
    let (a_lo, r_lo, a_hi, r_hi) = match (changes.next(), changes.next(), exact.next()) {
        (Some(w), None, None) => (w[0].0, w[0].1, w[1].0, w[1].1),
        (None, None, Some(&(a, _))) => (a, 0.0, a, 0.0),
        (None, None, None) => {
            let (low, high) = feasible
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &(_, r)| (l.min(r), h.max(r)));
            return Err(Error::OutOfAttainableRange {
                target: target_rho_s,
                low: low + target_rho_s,
                high: high + target_rho_s,
            });
        }
        _ => {
            return Err(Error::NonIdentified(
                "Spearman residual changes sign more than once over the skew bracket".into(),
            ))
        }
    };

    let root = if a_lo == a_hi {
        Root { x: a_lo, fx: 0.0, iterations: 0, bracket: [a_lo, a_hi] }
    } else {
        brent(
            |a| match profile(a)? {
                Some((_, _, r)) => Ok(r),
                None => Err(Error::NonIdentified(format!("Kendall target unattainable at skew level {a}"))),
            },
            a_lo,
            a_hi,
            r_lo,
            r_hi,
            inner_tol,
        )?
    };
    let (rho_hat, tau_res, rs_res) = profile(root.x)?.ok_or_else(|| {
        Error::NonIdentified(format!("Kendall target unattainable at skew level {}", root.x))
    })?;
    Ok(EquiSkewResult {
        rho_hat,
        skew_hat: root.x,
        residuals: [tau_res, rs_res],
        iterations: root.iterations,
        probe,
    })
}
