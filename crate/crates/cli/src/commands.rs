use std::io::Write;
use std::path::Path;

use serde::Serialize;
use skewrank::estimate::{invert_rho, EstimateResult};
use skewrank::mixing::MixingSpec;
use skewrank::qmc::QmcConfig;
use skewrank::rankcorr::{rank_correlation_with, CopulaSpec, Family, Measure, Method, MsnMethod};
use skewrank::sampler::{empirical_kendall, empirical_spearman, sample_copula, RngState, Sample};

use crate::args::{CurveArgs, EstimateArgs, EvalArgs, InvertArgs, SampleArgs};
use crate::figures::{self, Figure};
use crate::{args, CliError};

/// Minimum number of observations accepted by `estimate`.
pub const MIN_ROWS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRecord {
    pub measure: Measure,
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
    pub spec_echo: CopulaSpec,
}

/// Family, skew and mixing of a spec whose ρ is solved for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeEcho {
    pub family: Family,
    pub skew: [f64; 2],
    pub mixing: MixingSpec,
}

impl From<&CopulaSpec> for ShapeEcho {
    fn from(s: &CopulaSpec) -> Self {
        ShapeEcho { family: s.family, skew: s.skew, mixing: s.mixing }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvertRecord {
    pub measure: Measure,
    pub target: f64,
    #[serde(flatten)]
    pub result: EstimateResult,
    pub spec_echo: ShapeEcho,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRecord {
    pub n: usize,
    pub tau_empirical: f64,
    pub rhos_empirical: f64,
    pub tau: EstimateResult,
    pub rhos: EstimateResult,
    /// |ρ̂ from τ − ρ̂ from ρ_S|.
    pub discrepancy: f64,
    pub spec_echo: ShapeEcho,
}

/// One row of a curve table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub rho: f64,
    pub tau: f64,
    pub tau_se: f64,
    pub rhos: f64,
    pub rhos_se: f64,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("records serialize")
}

pub fn eval(a: &EvalArgs) -> Result<String, CliError> {
    let spec = a.spec.resolve()?;
    let cfg = a.qmc.config()?;
    let records = a
        .measure
        .measures()
        .into_iter()
        .map(|m| {
            let r = rank_correlation_with(&spec, m, &cfg, a.qmc.msn_method())?;
            Ok(EvalRecord { measure: m, value: r.value, std_error: r.std_error(), method: r.method, spec_echo: spec })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(if records.len() == 1 { to_json(&records[0]) } else { to_json(&records) })
}

/// Both measures at each ρ of the grid, in grid order.
pub fn curve_rows(spec: &CopulaSpec, grid: &[f64], cfg: &QmcConfig, method: MsnMethod) -> Result<Vec<CurveRow>, CliError> {
    grid.iter()
        .map(|&rho| {
            let s = spec.with_rho(rho);
            let t = rank_correlation_with(&s, Measure::KendallTau, cfg, method)?;
            let r = rank_correlation_with(&s, Measure::SpearmanRho, cfg, method)?;
            Ok(CurveRow { rho, tau: t.value, tau_se: t.std_error(), rhos: r.value, rhos_se: r.std_error() })
        })
        .collect()
}

pub fn write_curve_csv<W: Write>(rows: &[CurveRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "rho,tau,tau_se,rhos,rhos_se")?;
    for r in rows {
        writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", r.rho, r.tau, r.tau_se, r.rhos, r.rhos_se)?;
    }
    w.flush()
}

#[derive(Debug, Serialize)]
struct FigureFile {
    panel: String,
    curve: String,
    path: String,
    spec_echo: ShapeEcho,
}

#[derive(Debug, Serialize)]
struct FigureManifest {
    figure: u8,
    title: &'static str,
    files: Vec<FigureFile>,
}

/// Writes a single curve to `--out` or returns it, or writes a figure's
/// curves to `--out-dir` and returns a JSON manifest.
pub fn curve(a: &CurveArgs) -> Result<String, CliError> {
    let grid = args::parse_grid(&a.rho_grid)?;
    let cfg = a.qmc.config()?;
    if let Some(n) = a.figure {
        let fig = figures::figure(n).ok_or_else(|| CliError::input(format!("no preset for figure {n}; use 1-8")))?;
        let dir = a.out_dir.as_deref().ok_or_else(|| CliError::input("--figure needs --out-dir"))?;
        return write_figure(&fig, &grid, &cfg, a.qmc.msn_method(), dir);
    }
    let spec = a.spec.resolve_without_rho()?;
    let rows = curve_rows(&spec, &grid, &cfg, a.qmc.msn_method())?;
    match &a.out {
        Some(path) => {
            let f = std::fs::File::create(path)
                .map_err(|e| CliError::input(format!("cannot create {}: {e}", path.display())))?;
            write_curve_csv(&rows, std::io::BufWriter::new(f))?;
            Ok(String::new())
        }
        None => {
            let mut buf = Vec::new();
            write_curve_csv(&rows, &mut buf)?;
            Ok(String::from_utf8(buf).expect("ascii output"))
        }
    }
}

fn write_figure(fig: &Figure, grid: &[f64], cfg: &QmcConfig, method: MsnMethod, dir: &Path) -> Result<String, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for panel in &fig.panels {
        for c in &panel.curves {
            let spec = c.doc.resolve(Some(0.0))?;
            let rows = curve_rows(&spec, grid, cfg, method)?;
            let path = dir.join(figures::file_name(fig, panel, c));
            let f = std::fs::File::create(&path)
                .map_err(|e| CliError::input(format!("cannot create {}: {e}", path.display())))?;
            write_curve_csv(&rows, std::io::BufWriter::new(f))?;
            files.push(FigureFile {
                panel: panel.name.clone(),
                curve: c.name.clone(),
                path: path.display().to_string(),
                spec_echo: ShapeEcho::from(&spec),
            });
        }
    }
    Ok(to_json(&FigureManifest { figure: fig.number, title: fig.title, files }))
}

pub fn invert(a: &InvertArgs) -> Result<String, CliError> {
    if !(-1.0..=1.0).contains(&a.target) {
        return Err(CliError::input(format!("target must lie in [-1, 1], got {}", a.target)));
    }
    let spec = a.spec.resolve_without_rho()?;
    let cfg = a.qmc.config()?;
    let measure = Measure::from(a.measure);
    let result = invert_rho(a.target, spec.family, spec.skew, &spec.mixing, measure, &cfg, a.tol)?;
    Ok(to_json(&InvertRecord { measure, target: a.target, result, spec_echo: ShapeEcho::from(&spec) }))
}

pub fn estimate(a: &EstimateArgs) -> Result<String, CliError> {
    let spec = a.spec.resolve_without_rho()?;
    let cfg = a.qmc.config()?;
    let data = Sample::from_csv_path(&a.data)?;
    if data.n() < MIN_ROWS {
        return Err(CliError::input(format!("need at least {MIN_ROWS} observations, got {}", data.n())));
    }
    let tau_hat = empirical_kendall(&data)?;
    let rhos_hat = empirical_spearman(&data)?;
    let solve = |target, m| invert_rho(target, spec.family, spec.skew, &spec.mixing, m, &cfg, a.tol);
    let tau = solve(tau_hat, Measure::KendallTau)?;
    let rhos = solve(rhos_hat, Measure::SpearmanRho)?;
    Ok(to_json(&EstimateRecord {
        n: data.n(),
        tau_empirical: tau_hat,
        rhos_empirical: rhos_hat,
        discrepancy: (tau.rho_hat - rhos.rho_hat).abs(),
        tau,
        rhos,
        spec_echo: ShapeEcho::from(&spec),
    }))
}

pub fn sample(a: &SampleArgs) -> Result<String, CliError> {
    let spec = a.spec.resolve()?;
    let mut rng = RngState::new(a.seed);
    let s = sample_copula(&spec, a.n, &mut rng)?;
    let mut buf = Vec::with_capacity(48 * s.n());
    writeln!(buf, "x1,x2")?;
    for p in &s.x {
        writeln!(buf, "{:.16e},{:.16e}", p[0], p[1])?;
    }
    match &a.out {
        Some(path) => {
            std::fs::write(path, buf).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(String::from_utf8(buf).expect("ascii output")),
    }
}
