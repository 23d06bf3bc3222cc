//! The manifold file: one JSON document bundling whatever is known about a
//! small-dual manifold `X` and its hyperplane section.

use std::path::Path;

use qhsd_core::betti::BettiTable;
use qhsd_core::catalog::{AnyRing, PresentationJson, RingSpace, TermJson};
use qhsd_core::smalldual::{make_profile, CurveClassData, SmallDualProfile};
use qhsd_core::subcrit::{AffineChartModel, AffineChartModelJson};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeJson {
    pub generators: Vec<qhsd_core::smalldual::CurveGenerator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_min: Option<i64>,
}

/// `element^-1` must agree with `expected` up to `T^cap`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseCheck {
    pub element: String,
    pub cap: i64,
    pub expected: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldFile {
    pub name: String,
    pub n: i64,
    pub k: i64,
    pub b2_is_1: bool,
    /// Minimal Chern numbers of `X` and `Sigma`, required when `b2_is_1` is
    /// false.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_x: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_sigma: Option<i64>,
    /// Betti numbers of `X`, indexed by real degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<BettiTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section_betti: Option<BettiTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring_space: Option<RingSpace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<PresentationJson>,
    /// Overrides the default expectation that `omega` is invertible exactly
    /// when `k > 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_omega_invertible: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inverse_checks: Vec<InverseCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<AffineChartModelJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

/// A parsed manifold file with its sections validated.
#[derive(Clone, Debug)]
pub struct Manifold {
    pub file: ManifoldFile,
    pub ring: Option<AnyRing>,
    pub chart: Option<AffineChartModel>,
}

impl ManifoldFile {
    /// Profile from `(n, k)`, with explicit Chern data applied on top.
    pub fn profile(&self) -> Result<SmallDualProfile, CliError> {
        let mut p = make_profile(self.n, self.k, self.b2_is_1).map_err(|e| CliError::Input(e.to_string()))?;
        p.c_x = self.c_x.or(p.c_x);
        p.c_sigma = self.c_sigma.or(p.c_sigma);
        p.maslov_sphere = p.c_sigma.map(|c| 2 * c);
        Ok(p)
    }

    pub fn cone_data(&self) -> Option<CurveClassData> {
        self.cone.as_ref().map(|c| CurveClassData { generators: c.generators.clone() })
    }

    /// Canonical text: pretty JSON in field order with a trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifold file serializes");
        s.push('\n');
        s
    }
}

pub fn parse_manifold(text: &str) -> Result<Manifold, CliError> {
    let file: ManifoldFile = serde_json::from_str(text)
        .map_err(|e| CliError::Schema(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if let (Some(b), Some(n)) = (&file.betti, file.betti.as_ref().and_then(|b| b.complex_dim())) {
        if n as i64 != file.n {
            return Err(CliError::Schema(format!(
                "betti: table has top degree {} but n = {}",
                b.ranks().len() - 1,
                file.n
            )));
        }
    }
    let ring = file
        .ring
        .as_ref()
        .map(|r| r.to_ring())
        .transpose()
        .map_err(|e| CliError::Schema(format!("ring: {e}")))?;
    let chart = match &file.chart {
        None => None,
        Some(c) => {
            let model = c.to_model().map_err(|e| CliError::Schema(format!("chart: {e}")))?;
            model.validate(16, 0).map_err(|e| CliError::Schema(format!("chart: {e}")))?;
            Some(model)
        }
    };
    Ok(Manifold { file, ring, chart })
}

pub fn load_manifold(path: &Path) -> Result<Manifold, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_manifold(&text).map_err(|e| match e {
        CliError::Schema(m) => CliError::Schema(format!("{}: {m}", path.display())),
        other => other,
    })
}
