//! Generators for the quantum cohomology rings of the worked examples and
//! file-loadable custom presentations.

mod grassmannian;
mod io;
mod partition;
mod small;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded_qh::{AxiomReport, QhError};
use crate::smalldual::{make_profile, SmallDualProfile};

pub use grassmannian::{
    build_grassmannian, build_grassmannian_bounded, quantum_schubert_product, rim_hook_reduce, schubert_name,
    DEFAULT_SIZE_BOUND,
};
pub use io::{
    element_from_json, element_to_json, load_presentation, parse_presentation, presentation_to_json, presentation_to_string, save_presentation, AnyRing,
    BasisJson, CoefficientsJson, JsonCoefficient, PresentationJson, ProductJson, TermJson,
};
pub use partition::{lr_coefficient, partitions_of, Partition};
pub use small::{build_cpn, build_p1xp1_monotone, build_p1xp1_paper};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("ring axioms violated:\n{0}")]
    AxiomViolation(AxiomReport),
    #[error("basis rank {rank} exceeds the size bound {bound}")]
    SizeBound { rank: u128, bound: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("rim-hook reduction left a negative coefficient: {0}")]
    NegativeCoefficient(String),
    #[error(transparent)]
    Presentation(#[from] QhError),
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Which space a catalog ring is the quantum cohomology of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingSpace {
    /// The ambient manifold `X`; `deg q = 2 C_X`.
    Ambient,
    /// The hyperplane section `Sigma`; `deg q = 2 C_Sigma`.
    Section,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub aliases: Vec<String>,
    pub ring: AnyRing,
    pub space: RingSpace,
    pub profile: Option<SmallDualProfile>,
    pub notes: String,
}

impl CatalogEntry {
    /// `2C` from the profile for the space this ring belongs to.
    pub fn expected_q_degree(&self) -> Option<i64> {
        let p = self.profile.as_ref()?;
        let c = match self.space {
            RingSpace::Ambient => p.c_x,
            RingSpace::Section => p.c_sigma,
        }?;
        Some(2 * c)
    }
}

/// Identifiers accepted by [`catalog_entry`], in listing order.
pub fn catalog_ids() -> Vec<String> {
    let mut ids: Vec<String> = (1..=6).map(|n| format!("cp{n}")).collect();
    ids.extend((4..=6).map(|n| format!("gr2_{n}")));
    ids.push("p1xp1_paper".into());
    ids.push("p1xp1_monotone".into());
    ids
}

fn parse_gr(id: &str) -> Option<(usize, usize)> {
    let rest = id.strip_prefix("gr")?;
    let (k, n) = rest.split_once('_')?;
    Some((k.parse().ok()?, n.parse().ok()?))
}

/// Builds a catalog entry by identifier: `cp<n>`, `gr<k>_<n>` (also the
/// alias `Gr(5,2)` for 2-planes in `C^5`), `p1xp1_paper`, `p1xp1_monotone`.
pub fn catalog_entry(id: &str) -> Result<CatalogEntry, CatalogError> {
    let id = match id {
        "Gr(5,2)" => "gr2_5",
        other => other,
    };
    if let Some(n) = id.strip_prefix("cp").and_then(|s| s.parse::<usize>().ok()) {
        if n == 0 {
            return Err(CatalogError::InvalidParameters("CP^0 has no quantum deformation".into()));
        }
        let n_i = n as i64;
        return Ok(CatalogEntry {
            id: id.into(),
            aliases: vec![format!("CP^{n}")],
            ring: build_cpn(n).into(),
            space: RingSpace::Ambient,
            profile: make_profile(n_i, n_i, true).ok(),
            notes: format!("CP^{n} as a hypersurface in CP^{}; its dual variety is a point, defect {n}.", n + 1),
        });
    }
    if let Some((k, n)) = parse_gr(id) {
        let ring = build_grassmannian(k, n)?;
        let dim = (k * (n - k)) as i64;
        // Gr(2, odd) has defect 2; other Grassmannians here have defect 0
        // and no small-dual profile.
        let profile = (k == 2 && n % 2 == 1).then(|| make_profile(dim, 2, true).ok()).flatten();
        let aliases = if k == 2 { vec![format!("Gr({n},2)")] } else { Vec::new() };
        return Ok(CatalogEntry {
            id: id.into(),
            aliases,
            ring: ring.into(),
            space: RingSpace::Ambient,
            profile,
            notes: format!("{k}-planes in C^{n}, Schubert basis, quantum products by rim-hook reduction."),
        });
    }
    match id {
        "p1xp1_paper" => Ok(CatalogEntry {
            id: id.into(),
            aliases: Vec::new(),
            ring: build_p1xp1_paper().into(),
            space: RingSpace::Section,
            profile: Some(make_profile(3, 1, false).expect("valid").with_chern(1, 2)),
            notes: "CP1xCP1 as a hyperplane section of a CP2-bundle over CP1, with [omega] = 2 alpha + beta; \
                    Novikov coefficients."
                .into(),
        }),
        "p1xp1_monotone" => Ok(CatalogEntry {
            id: id.into(),
            aliases: vec!["p1xp1_veronese".into()],
            ring: build_p1xp1_monotone().into(),
            space: RingSpace::Section,
            // X' is the quadratic Veronese image of CP^3: defect 0, c_1 = 2h.
            profile: Some(make_profile(3, 0, true).expect("valid").with_chern(4, 2)),
            notes: "Monotone CP1xCP1 as a hyperplane section of the Veronese CP^3 (defect 0); \
                    alpha + beta is a zero divisor."
                .into(),
        }),
        _ => Err(CatalogError::UnknownEntry(id.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds_and_matches_its_grading() {
        for id in catalog_ids() {
            let e = catalog_entry(&id).unwrap();
            if let Some(q) = e.expected_q_degree() {
                assert_eq!(e.ring.grading().q_degree(), q, "{id}");
            }
        }
        assert_eq!(catalog_entry("Gr(5,2)").unwrap().id, "gr2_5");
        assert!(catalog_entry("nope").is_err());
    }
}
