use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skewrank::mixing::MixingSpec;
use skewrank::qmc::QmcConfig;
use skewrank::rankcorr::{CopulaSpec, Measure, MsnMethod};

use crate::doc::{parse_mixing, parse_pair, CopulaSpecDocument, FamilyName};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "skewrank", version, about = "Rank correlations of skew-elliptical copulas")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Kendall's tau and/or Spearman's rho at one parameter set.
    Eval(EvalArgs),
    /// Tabulate both measures over a grid of pseudo-correlations.
    Curve(CurveArgs),
    /// Find the pseudo-correlation matching a rank correlation.
    Invert(InvertArgs),
    /// Estimate the pseudo-correlation from two-column data.
    Estimate(EstimateArgs),
    /// Draw a sample from the copula's generating distribution.
    Sample(SampleArgs),
    /// Run built-in numerical checks.
    Selftest(SelftestArgs),
}

/// Copula parameters, from a JSON document and/or inline flags. Inline
/// flags override the document's fields.
#[derive(Debug, Clone, Default, Args)]
pub struct SpecArgs {
    /// JSON spec document.
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Skewness pair "s1,s2" (β for MN families, α for MSN families).
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub skew: Option<[f64; 2]>,
    /// Degrees of freedom for skew-t and student-t families.
    #[arg(long)]
    pub nu: Option<f64>,
    /// Mixing distribution: degenerate, gamma:SHAPE,RATE,
    /// inverse-gamma:SHAPE,RATE, or a JSON object.
    #[arg(long, value_parser = parse_mixing)]
    pub mixing: Option<MixingSpec>,
}

impl SpecArgs {
    pub fn document(&self) -> Result<CopulaSpecDocument, CliError> {
        let mut doc = match &self.spec {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
                Some(CopulaSpecDocument::from_json(&text)?)
            }
            None => None,
        };
        if let Some(family) = self.family {
            match doc.as_mut() {
                Some(d) => d.family = family,
                None => doc = Some(CopulaSpecDocument { family, rho: None, skew: None, nu: None, mixing: None }),
            }
        }
        let mut doc = doc.ok_or_else(|| CliError::input("no copula given: use --spec FILE or --family"))?;
        if self.rho.is_some() {
            doc.rho = self.rho;
        }
        if self.skew.is_some() {
            doc.skew = self.skew;
        }
        if self.nu.is_some() {
            doc.nu = self.nu;
        }
        if self.mixing.is_some() {
            doc.mixing = self.mixing;
        }
        Ok(doc)
    }

    /// The canonical spec; ρ is required.
    pub fn resolve(&self) -> Result<CopulaSpec, CliError> {
        self.document()?.resolve(None)
    }

    /// The canonical spec for commands that solve for ρ; any ρ given is
    /// ignored.
    pub fn resolve_without_rho(&self) -> Result<CopulaSpec, CliError> {
        let mut doc = self.document()?;
        doc.rho = None;
        doc.resolve(Some(0.0))
    }
}

#[derive(Debug, Clone, Args)]
pub struct QmcArgs {
    /// QMC nodes per replicate (a power of two).
    #[arg(long, default_value_t = QmcConfig::default().points)]
    pub points: usize,
    /// Independently shifted QMC replicates.
    #[arg(long, default_value_t = QmcConfig::default().replicates)]
    pub replicates: usize,
    #[arg(long, default_value_t = QmcConfig::default().seed)]
    pub seed: u64,
    /// Evaluation route for msn families; ignored for mn families.
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
}

impl QmcArgs {
    pub fn config(&self) -> Result<QmcConfig, CliError> {
        Ok(QmcConfig::new(self.points, self.replicates, self.seed)?)
    }

    pub fn msn_method(&self) -> MsnMethod {
        match self.method {
            MethodArg::Auto => MsnMethod::default(),
            MethodArg::ThmExpectation => MsnMethod::ThmExpectation,
            MethodArg::CorBivariate => MsnMethod::CorBivariate,
        }
    }
}

impl Default for QmcArgs {
    fn default() -> Self {
        let c = QmcConfig::default();
        QmcArgs { points: c.points, replicates: c.replicates, seed: c.seed, method: MethodArg::Auto }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    ThmExpectation,
    CorBivariate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Tau,
    Rhos,
    Both,
}

impl MeasureArg {
    pub fn measures(self) -> Vec<Measure> {
        match self {
            MeasureArg::Tau => vec![Measure::KendallTau],
            MeasureArg::Rhos => vec![Measure::SpearmanRho],
            MeasureArg::Both => Measure::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SingleMeasure {
    Tau,
    Rhos,
}

impl From<SingleMeasure> for Measure {
    fn from(m: SingleMeasure) -> Measure {
        match m {
            SingleMeasure::Tau => Measure::KendallTau,
            SingleMeasure::Rhos => Measure::SpearmanRho,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum, default_value_t = MeasureArg::Both)]
    pub measure: MeasureArg,
    #[command(flatten)]
    pub qmc: QmcArgs,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Pseudo-correlation grid "lo:hi:step" within [-1, 1].
    #[arg(long, default_value = "-1:1:0.05", allow_hyphen_values = true)]
    pub rho_grid: String,
    /// Output CSV file (stdout if omitted).
    #[arg(long, conflicts_with = "figure")]
    pub out: Option<PathBuf>,
    /// Write every curve of a preset figure (1-8) instead of one curve.
    #[arg(long, requires = "out_dir")]
    pub figure: Option<u8>,
    /// Directory for --figure output.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub qmc: QmcArgs,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Target rank correlation.
    #[arg(long, allow_hyphen_values = true)]
    pub target: f64,
    #[arg(long, value_enum, default_value_t = SingleMeasure::Tau)]
    pub measure: SingleMeasure,
    /// Root-finding tolerance on the measure.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub qmc: QmcArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Two-column numeric CSV, header optional.
    #[arg(long, value_name = "FILE")]
    pub data: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub qmc: QmcArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Number of draws.
    #[arg(long, short = 'n')]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output CSV file (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, value_enum, default_value_t = Level::Quick)]
    pub level: Level,
    /// Deliberately break a kernel to check that the harness notices.
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    NegateOwenT,
}

/// Parses "lo:hi:step" into grid points, the last one snapped to hi.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::input(format!("grid must be lo:hi:step, got '{s}'")));
    }
    let mut v = [0.0f64; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.trim().parse().map_err(|_| CliError::input(format!("not a number in grid: '{p}'")))?;
    }
    let [lo, hi, step] = v;
    if !(step > 0.0) || !step.is_finite() {
        return Err(CliError::input(format!("grid step must be positive, got {step}")));
    }
    if !(-1.0 <= lo && lo <= hi && hi <= 1.0) {
        return Err(CliError::input(format!("grid must satisfy -1 <= lo <= hi <= 1, got {lo}:{hi}")));
    }
    let span = (hi - lo) / step;
    if span > 1e6 {
        return Err(CliError::input("grid has more than a million points"));
    }
    let n = (span + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| (lo + i as f64 * step).clamp(-1.0, 1.0)).collect();
    let last = grid[n];
    if (hi - last).abs() <= 1e-9 * step {
        grid[n] = hi;
    }
    Ok(grid)
}
