//! The JSON copula document and its expansion to a canonical spec.

use serde::{Deserialize, Serialize};
use skewrank::mixing::{ig_from_dof, MixingSpec};
use skewrank::rankcorr::{CopulaSpec, Family};

use crate::CliError;

/// Family names accepted in documents and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Mn,
    Msn,
    GhSkewT,
    AcSkewT,
    SkewNormal,
    Gaussian,
    StudentT,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CopulaSpecDocument {
    pub family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skew: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixing: Option<MixingSpec>,
}

impl CopulaSpecDocument {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input(format!("invalid spec document: {e}")))
    }

    /// Canonical (family, skew, mixing) with ρ taken from the document, or
    /// `rho_default` when the document has none.
    pub fn resolve(&self, rho_default: Option<f64>) -> Result<CopulaSpec, CliError> {
        let name = self.family;
        let t_family = matches!(name, FamilyName::GhSkewT | FamilyName::AcSkewT | FamilyName::StudentT);
        if t_family && self.nu.is_none() {
            return Err(CliError::input(format!("family {} needs nu", name.label())));
        }
        if !t_family && self.nu.is_some() {
            return Err(CliError::input(format!("nu is only valid for skew-t and student-t families, not {}", name.label())));
        }
        let raw = matches!(name, FamilyName::Mn | FamilyName::Msn);
        if raw && self.mixing.is_none() {
            return Err(CliError::input(format!("family {} needs a mixing distribution", name.label())));
        }
        if !raw && self.mixing.is_some() {
            return Err(CliError::input(format!("family {} fixes its mixing distribution", name.label())));
        }
        let skew = self.skew.unwrap_or([0.0, 0.0]);
        if matches!(name, FamilyName::Gaussian | FamilyName::StudentT) && skew != [0.0, 0.0] {
            return Err(CliError::input(format!("family {} has no skewness", name.label())));
        }
        let t_mixing = || ig_from_dof(self.nu.unwrap_or(f64::NAN)).map_err(CliError::from);
        let (family, mixing) = match name {
            FamilyName::Mn => (Family::Mn, self.mixing.unwrap()),
            FamilyName::Msn => (Family::Msn, self.mixing.unwrap()),
            FamilyName::GhSkewT | FamilyName::StudentT => (Family::Mn, t_mixing()?),
            FamilyName::AcSkewT => (Family::Msn, t_mixing()?),
            FamilyName::SkewNormal => (Family::Msn, MixingSpec::Degenerate),
            FamilyName::Gaussian => (Family::Mn, MixingSpec::Degenerate),
        };
        let rho = match self.rho.or(rho_default) {
            Some(r) => r,
            None => return Err(CliError::input("rho is required")),
        };
        let spec = CopulaSpec::new(family, rho, skew, mixing);
        spec.validate().map_err(|e| CliError::input(e.to_string()))?;
        Ok(spec)
    }
}

impl FamilyName {
    pub fn label(self) -> &'static str {
        match self {
            FamilyName::Mn => "mn",
            FamilyName::Msn => "msn",
            FamilyName::GhSkewT => "gh-skew-t",
            FamilyName::AcSkewT => "ac-skew-t",
            FamilyName::SkewNormal => "skew-normal",
            FamilyName::Gaussian => "gaussian",
            FamilyName::StudentT => "student-t",
        }
    }
}

/// Parses `degenerate`, `gamma:SHAPE,RATE`, `inverse-gamma:SHAPE,RATE`, or
/// a JSON mixing object.
pub fn parse_mixing(s: &str) -> Result<MixingSpec, String> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| format!("invalid mixing JSON: {e}"));
    }
    if s == "degenerate" {
        return Ok(MixingSpec::Degenerate);
    }
    let (kind, params) = s.split_once(':').ok_or_else(|| format!("unrecognised mixing '{s}'"))?;
    let [shape, rate] = parse_pair(params)?;
    match kind {
        "gamma" => Ok(MixingSpec::Gamma { shape, rate }),
        "inverse-gamma" | "ig" => Ok(MixingSpec::InverseGamma { shape, rate }),
        _ => Err(format!("unrecognised mixing kind '{kind}'")),
    }
}

/// Parses `a,b` into two numbers.
pub fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected two comma-separated numbers, got '{s}'"));
    }
    let a = parts[0].parse::<f64>().map_err(|_| format!("not a number: '{}'", parts[0]))?;
    let b = parts[1].parse::<f64>().map_err(|_| format!("not a number: '{}'", parts[1]))?;
    Ok([a, b])
}
