//! Parameter presets for the published rank-correlation figures.

use crate::doc::{CopulaSpecDocument, FamilyName};

#[derive(Debug, Clone, PartialEq)]
pub struct CurveDef {
    pub name: String,
    pub skew: [f64; 2],
    /// Copula without ρ; the curve sweeps it.
    pub doc: CopulaSpecDocument,
}

/// Curves drawn together, sharing the mixing distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub name: String,
    pub curves: Vec<CurveDef>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub number: u8,
    pub title: &'static str,
    pub panels: Vec<Panel>,
}

/// Skew pairs for the general-skew figures: the first coordinate held at 1
/// (MN) or 2 (MSN) while the second varies.
pub const GH_GENERAL: [[f64; 2]; 5] = [[0.0, 0.0], [1.0, -1.0], [1.0, 0.0], [1.0, 1.0], [1.0, 2.0]];
pub const MSN_GENERAL: [[f64; 2]; 4] = [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [2.0, 3.0]];
pub const GH_LEVELS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
pub const MSN_LEVELS: [f64; 4] = [0.0, 1.0, 2.0, 5.0];

fn skew_name(s: [f64; 2]) -> String {
    format!("skew{}_{}", s[0], s[1])
}

fn curve(family: FamilyName, nu: Option<f64>, skew: [f64; 2]) -> CurveDef {
    CurveDef {
        name: skew_name(skew),
        skew,
        doc: CopulaSpecDocument { family, rho: None, skew: Some(skew), nu, mixing: None },
    }
}

fn panels(family: FamilyName, nus: &[f64], skews: &[[f64; 2]]) -> Vec<Panel> {
    nus.iter()
        .map(|&nu| Panel {
            name: format!("nu{nu}"),
            curves: skews.iter().map(|&s| curve(family, Some(nu), s)).collect(),
        })
        .collect()
}

/// The preset for figure `n` (1-8), if there is one.
pub fn figure(n: u8) -> Option<Figure> {
    let equi = |levels: &[f64]| levels.iter().map(|&b| [b, b]).collect::<Vec<_>>();
    let single = |levels: &[f64]| levels.iter().map(|&b| [b, 0.0]).collect::<Vec<_>>();
    let (title, panels) = match n {
        1 => {
            let mut curves = vec![CurveDef {
                name: "gaussian".into(),
                skew: [0.0, 0.0],
                doc: CopulaSpecDocument { family: FamilyName::Gaussian, rho: None, skew: None, nu: None, mixing: None },
            }];
            for nu in [1.0, 4.0] {
                curves.push(CurveDef {
                    name: format!("t{nu}"),
                    skew: [0.0, 0.0],
                    doc: CopulaSpecDocument { family: FamilyName::StudentT, rho: None, skew: None, nu: Some(nu), mixing: None },
                });
            }
            ("elliptical copulas", vec![Panel { name: "elliptical".into(), curves }])
        }
        2 => ("GH skew-t copula", panels(FamilyName::GhSkewT, &[4.0, 10.0], &GH_GENERAL)),
        3 => ("GH skew-t copula, equi-skew", panels(FamilyName::GhSkewT, &[4.0, 10.0], &equi(&GH_LEVELS))),
        4 => ("GH skew-t copula, single-skew", panels(FamilyName::GhSkewT, &[4.0, 10.0], &single(&GH_LEVELS))),
        5 => ("AC skew-t copula", panels(FamilyName::AcSkewT, &[1.0, 10.0], &MSN_GENERAL)),
        6 => {
            let curves = MSN_GENERAL.iter().map(|&s| curve(FamilyName::SkewNormal, None, s)).collect();
            ("skew-normal copula", vec![Panel { name: "sn".into(), curves }])
        }
        7 => ("AC skew-t copula, equi-skew", panels(FamilyName::AcSkewT, &[1.0, 10.0], &equi(&MSN_LEVELS))),
        8 => ("AC skew-t copula, single-skew", panels(FamilyName::AcSkewT, &[1.0, 10.0], &single(&MSN_LEVELS))),
        _ => return None,
    };
    Some(Figure { number: n, title, panels })
}

/// File name for one curve of a figure.
pub fn file_name(fig: &Figure, panel: &Panel, curve: &CurveDef) -> String {
    format!("fig{}_{}_{}.csv", fig.number, panel.name, curve.name)
}
