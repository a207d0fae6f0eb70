//! Built-in numerical checks. `quick` covers identities, closed forms and
//! exact symmetries; `full` adds Monte Carlo agreement, dual-route
//! agreement, monotonicity grids and inversion round trips.

use std::f64::consts::PI;

use skewrank::estimate::invert_rho;
use skewrank::mixing::MixingSpec;
use skewrank::qmc::QmcConfig;
use skewrank::rankcorr::{
    kendall_elliptical, rank_correlation, rank_correlation_with, spearman_gaussian, CopulaSpec, Family, Measure,
    MsnMethod,
};
use skewrank::sampler::oracle_check_both;
use skewrank::specfun::{bvn_cdf, norm_cdf, owen_t, skew_norm_cdf};
use skewrank::Result;

use crate::args::{Fault, Level};

/// Kernels the checks are computed with; swapped out to test the harness.
#[derive(Debug, Clone, Copy)]
pub struct Kernels {
    pub owen_t: fn(f64, f64) -> f64,
}

impl Default for Kernels {
    fn default() -> Self {
        Kernels { owen_t }
    }
}

fn negated_owen_t(h: f64, a: f64) -> f64 {
    -owen_t(h, a)
}

impl Kernels {
    pub fn with_fault(fault: Option<Fault>) -> Self {
        match fault {
            None => Kernels::default(),
            Some(Fault::NegateOwenT) => Kernels { owen_t: negated_owen_t },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub tolerance: f64,
    /// Observed deviation; NaN when the check could not be computed.
    pub deviation: f64,
    pub error: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.deviation <= self.tolerance
    }
}

fn check(name: &str, tolerance: f64, deviation: Result<f64>) -> Check {
    match deviation {
        Ok(d) => Check { name: name.into(), tolerance, deviation: d, error: None },
        Err(e) => Check { name: name.into(), tolerance, deviation: f64::NAN, error: Some(e.to_string()) },
    }
}

fn max_abs(it: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that a broken kernel cannot pass
    it.into_iter().fold(0.0, |m: f64, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

const IG2: MixingSpec = MixingSpec::InverseGamma { shape: 2.0, rate: 2.0 };
const GAMMA2: MixingSpec = MixingSpec::Gamma { shape: 2.0, rate: 1.0 };

fn small_cfg() -> QmcConfig {
    QmcConfig::new(1 << 10, 8, 7).expect("valid config")
}

fn value(spec: &CopulaSpec, m: Measure, cfg: &QmcConfig) -> Result<f64> {
    Ok(rank_correlation(spec, m, cfg)?.raw_value())
}

pub fn run(level: Level, k: Kernels) -> Vec<Check> {
    let mut out = quick(k);
    if level == Level::Full {
        out.extend(full());
    }
    out
}

fn quick(k: Kernels) -> Vec<Check> {
    let t = k.owen_t;
    let mut v = Vec::new();
    v.push(check(
        "owen-t: T(0,a) = atan(a)/(2 pi)",
        1e-15,
        Ok(max_abs([0.25, 1.0, 4.0].map(|a| t(0.0, a) - a.atan() / (2.0 * PI)))),
    ));
    v.push(check(
        "owen-t: T(h,1) = Phi(h)(1-Phi(h))/2",
        1e-15,
        Ok(max_abs([-2.0, -0.5, 0.3, 1.7].map(|h| t(h, 1.0) - 0.5 * norm_cdf(h) * norm_cdf(-h)))),
    ));
    v.push(check(
        "owen-t: T(h,a) + T(ah,1/a) reflection",
        1e-14,
        Ok(max_abs([(0.5, 2.0), (1.2, 0.3), (-0.7, 5.0)].map(|(h, a): (f64, f64)| {
            let (p, q) = (norm_cdf(h), norm_cdf(a * h));
            t(h, a) + t(a * h, 1.0 / a) - (0.5 * p + 0.5 * q - p * q)
        }))),
    ));
    v.push(check("bvn: diagonal identity Phi2(x,x;r) = Phi(x) - 2T(x, sqrt((1-r)/(1+r)))", 1e-13, {
        let mut devs = Vec::new();
        let mut res = Ok(());
        for x in [-1.5, 0.0, 0.8] {
            for r in [-0.6, 0.2, 0.9] {
                match bvn_cdf(x, x, r) {
                    Ok(p) => devs.push(p - (norm_cdf(x) - 2.0 * t(x, ((1.0 - r) / (1.0 + r)).sqrt()))),
                    Err(e) => res = Err(e),
                }
            }
        }
        res.map(|_| max_abs(devs))
    }));
    v.push(check(
        "skew-normal cdf: F(x;a) = Phi(x) - 2T(x,a)",
        1e-13,
        Ok(max_abs([(-1.0, 2.0), (0.5, -3.0), (2.0, 0.7)].map(|(x, a)| skew_norm_cdf(x, a) - (norm_cdf(x) - 2.0 * t(x, a))))),
    ));
    let cfg = small_cfg();
    let grid = [-0.99, -0.5, 0.0, 0.3, 0.9];
    v.push(check("kendall: elliptical closed form", 1e-14, {
        let mut devs = Vec::new();
        for mix in [MixingSpec::Degenerate, IG2, GAMMA2] {
            for r in grid {
                devs.push(value(&CopulaSpec::new(Family::Mn, r, [0.0, 0.0], mix), Measure::KendallTau, &cfg).map(|x| {
                    x - 2.0 / PI * r.asin()
                }));
            }
        }
        devs.into_iter().collect::<Result<Vec<_>>>().map(max_abs)
    }));
    v.push(check("spearman: gaussian closed form", 1e-14, {
        grid.iter()
            .map(|&r| {
                value(&CopulaSpec::new(Family::Mn, r, [0.0, 0.0], MixingSpec::Degenerate), Measure::SpearmanRho, &cfg)
                    .map(|x| x - 6.0 / PI * (r / 2.0).asin())
            })
            .collect::<Result<Vec<_>>>()
            .map(max_abs)
    }));
    for family in [Family::Mn, Family::Msn] {
        for m in Measure::BOTH {
            let base = CopulaSpec::new(family, 0.4, [1.0, 2.0], IG2);
            let dev = (|| {
                let a = value(&base, m, &cfg)?;
                let swapped = value(&CopulaSpec { skew: [2.0, 1.0], ..base }, m, &cfg)?;
                let flipped = value(&CopulaSpec { skew: [-1.0, -2.0], ..base }, m, &cfg)?;
                Ok(max_abs([a - swapped, a - flipped]))
            })();
            v.push(check(&format!("{family:?} {m:?}: swap and sign-flip symmetry").to_lowercase(), 1e-12, dev));
        }
    }
    v.push(check("msn: endpoints are exactly -1 and 1", 0.0, {
        let s = CopulaSpec::new(Family::Msn, 1.0, [2.0, 1.0], IG2);
        Measure::BOTH
            .iter()
            .map(|&m| Ok(max_abs([value(&s, m, &cfg)? - 1.0, value(&s.with_rho(-1.0), m, &cfg)? + 1.0])))
            .collect::<Result<Vec<_>>>()
            .map(max_abs)
    }));
    v.push(check("single-skew: zero at rho = 0", 1e-12, {
        let mut devs = Vec::new();
        for family in [Family::Mn, Family::Msn] {
            for m in Measure::BOTH {
                devs.push(value(&CopulaSpec::new(family, 0.0, [1.5, 0.0], IG2), m, &cfg));
            }
        }
        devs.into_iter().collect::<Result<Vec<_>>>().map(max_abs)
    }));
    v.push(check("mixing: cdf(quantile(u)) = u", 1e-12, {
        let mut devs = Vec::new();
        for mix in [IG2, GAMMA2, MixingSpec::InverseGamma { shape: 0.5, rate: 0.5 }] {
            for u in [1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-6] {
                devs.push(mix.quantile(u).and_then(|q| mix.cdf(q)).map(|c| c - u));
            }
        }
        devs.into_iter().collect::<Result<Vec<_>>>().map(max_abs)
    }));
    v
}

fn full() -> Vec<Check> {
    let cfg = QmcConfig::default();
    let mut v = Vec::new();
    for (name, spec) in [
        ("gh skew-t", CopulaSpec::new(Family::Mn, 0.3, [1.0, 2.0], IG2)),
        ("ac skew-t", CopulaSpec::new(Family::Msn, 0.5, [2.0, 1.0], IG2)),
        ("skew-normal", CopulaSpec::new(Family::Msn, -0.4, [3.0, 0.0], MixingSpec::Degenerate)),
    ] {
        let mc = oracle_check_both(&spec, 50_000, 10, 11);
        for (i, m) in Measure::BOTH.into_iter().enumerate() {
            // deviation in units of the combined standard error
            let dev = mc.as_ref().map_err(Clone::clone).and_then(|mc| {
                let a = rank_correlation(&spec, m, &cfg)?;
                Ok((a.raw_value() - mc[i].value).abs() / mc[i].se.hypot(a.std_error()))
            });
            v.push(check(&format!("{name} {m:?}: analytic vs Monte Carlo (sigmas)"), 3.0, dev));
        }
    }
    for mix in [IG2, MixingSpec::Degenerate] {
        for m in Measure::BOTH {
            let spec = CopulaSpec::new(Family::Msn, 0.4, [2.0, -1.0], mix);
            let dev = (|| {
                let a = rank_correlation_with(&spec, m, &cfg, MsnMethod::ThmExpectation)?;
                let b = rank_correlation_with(&spec, m, &cfg, MsnMethod::CorBivariate)?;
                Ok((a.raw_value() - b.raw_value()).abs() / (a.std_error() + b.std_error()).max(1e-300))
            })();
            v.push(check(&format!("msn {mix:?} {m:?}: orthant vs bivariate route (sigmas)"), 3.0, dev));
        }
    }
    let small = small_cfg();
    for (family, skew) in [(Family::Mn, [1.0, 2.0]), (Family::Mn, [1.0, -1.0]), (Family::Msn, [2.0, 1.0])] {
        for m in Measure::BOTH {
            // largest decrease between neighbouring grid points
            let dev = (0..=20)
                .map(|i| value(&CopulaSpec::new(family, -1.0 + 0.1 * i as f64, skew, IG2), m, &small))
                .collect::<Result<Vec<_>>>()
                .map(|vals| vals.windows(2).map(|w| w[0] - w[1]).fold(f64::NEG_INFINITY, f64::max));
            v.push(check(&format!("{family:?} {skew:?} {m:?}: increasing in rho (largest backward step)").to_lowercase(), 0.0, dev));
        }
    }
    for (family, skew) in [(Family::Mn, [1.0, 0.5]), (Family::Msn, [2.0, -1.0])] {
        for m in Measure::BOTH {
            let dev = [-0.8, -0.2, 0.5, 0.9]
                .iter()
                .map(|&rho| {
                    let fwd = rank_correlation(&CopulaSpec::new(family, rho, skew, IG2), m, &small)?;
                    let inv = invert_rho(fwd.raw_value(), family, skew, &IG2, m, &small, 1e-10)?;
                    Ok((inv.rho_hat - rho).abs() / 1e-3f64.max(5.0 * fwd.std_error()))
                })
                .collect::<Result<Vec<_>>>()
                .map(max_abs);
            v.push(check(&format!("{family:?} {m:?}: inversion round trip (relative to tolerance)").to_lowercase(), 1.0, dev));
        }
    }
    v.push(check("elliptical: kendall equals (2/pi) asin", 1e-15, {
        Ok(max_abs([-0.7, 0.1, 0.95].map(|r: f64| kendall_elliptical(r) - 2.0 / PI * r.asin())))
    }));
    v.push(check("gaussian spearman within 0.0181 of rho", 0.0181, {
        Ok(max_abs((0..=100).map(|i| {
            let r = -1.0 + 0.02 * i as f64;
            spearman_gaussian(r) - r
        })))
    }));
    v
}

/// One line per check and a summary line.
pub fn report(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        s.push_str(&format!("{status}  {:<72} deviation={:.3e} tolerance={:.3e}", c.name, c.deviation, c.tolerance));
        if let Some(e) = &c.error {
            s.push_str(&format!(" error: {e}"));
        }
        s.push('\n');
    }
    let passed = checks.iter().filter(|c| c.passed()).count();
    s.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
    s
}
