use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::{integer_det, ElementDegree, QhElement, QuantumCoefficient, RingPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AxiomKind {
    Associativity,
    Commutativity,
    UnitLaw,
    Homogeneity,
    Deformation,
    Frobenius,
    PairingSymmetry,
    PairingUnimodular,
    PairingDegree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub kind: AxiomKind,
    pub detail: String,
}

/// Outcome of [`RingPresentation::check_ring_axioms`]; empty when the
/// presentation is a valid graded Frobenius deformation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: AxiomKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: AxiomKind, detail: String) {
        self.violations.push(AxiomViolation { kind, detail });
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "no violations");
        }
        for v in &self.violations {
            writeln!(f, "{:?}: {}", v.kind, v.detail)?;
        }
        Ok(())
    }
}

fn same<R: QuantumCoefficient>(a: &QhElement<R>, b: &QhElement<R>) -> bool {
    a.coords().iter().zip(b.coords()).all(|(x, y)| x.agrees(y))
}

impl<R: QuantumCoefficient> RingPresentation<R> {
    /// Checks the pairing, unit law, commutativity, homogeneity, the
    /// deformation property, and associativity and the Frobenius property on
    /// all basis triples.
    pub fn check_ring_axioms(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        let n = self.rank();
        let names: Vec<&str> = self.basis().iter().map(|b| b.name.as_str()).collect();
        let top = 2 * self.dimension() as i64;

        let g = self.pairing();
        for i in 0..n {
            for j in 0..n {
                if g[i][j] != g[j][i] && i < j {
                    report.push(AxiomKind::PairingSymmetry, format!("<{}, {}>", names[i], names[j]));
                }
                if g[i][j] != 0 && self.basis()[i].degree + self.basis()[j].degree != top {
                    report.push(
                        AxiomKind::PairingDegree,
                        format!("<{}, {}> = {} but degrees do not sum to {top}", names[i], names[j], g[i][j]),
                    );
                }
            }
        }
        let det = integer_det(g);
        if det.abs() != BigInt::from(1) {
            report.push(AxiomKind::PairingUnimodular, format!("pairing determinant {det}"));
        }

        let unit = self.unit_index();
        for j in 0..n {
            let e = QhElement::basis(n, j);
            if !same(self.structure_constant(unit, j), &e) || !same(self.structure_constant(j, unit), &e) {
                report.push(AxiomKind::UnitLaw, format!("1 * {} != {}", names[j], names[j]));
            }
        }

        for i in 0..n {
            for j in i..n {
                let p = self.structure_constant(i, j);
                if !same(p, self.structure_constant(j, i)) {
                    report.push(AxiomKind::Commutativity, format!("{} * {}", names[i], names[j]));
                }
                let expected = self.basis()[i].degree + self.basis()[j].degree;
                match self.degree_of(p) {
                    ElementDegree::Zero => {}
                    ElementDegree::Homogeneous(d) if d == expected => {}
                    other => report.push(
                        AxiomKind::Homogeneity,
                        format!("{} * {} has degree {other}, expected {expected}", names[i], names[j]),
                    ),
                }
                if let Some(cup) = self.declared_cup() {
                    let classical: Vec<BigInt> = p.coords().iter().map(|c| c.constant_term()).collect();
                    if classical != cup[i][j] {
                        report.push(
                            AxiomKind::Deformation,
                            format!("classical part of {} * {} differs from the cup product", names[i], names[j]),
                        );
                    }
                }
            }
        }

        let triples: Vec<AxiomViolation> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut local = Vec::new();
                for j in 0..n {
                    let ij = self.structure_constant(i, j);
                    for k in 0..n {
                        let ek = QhElement::basis(n, k);
                        let jk = self.structure_constant(j, k);
                        let left = self.product_unchecked(ij, &ek);
                        let right = self.product_unchecked(&QhElement::basis(n, i), jk);
                        if !same(&left, &right) {
                            local.push(AxiomViolation {
                                kind: AxiomKind::Associativity,
                                detail: format!("({0} * {1}) * {2} != {0} * ({1} * {2})", names[i], names[j], names[k]),
                            });
                        }
                        let lhs = self.pair(ij, &ek);
                        let rhs = self.pair(&QhElement::basis(n, i), jk);
                        if !lhs.agrees(&rhs) {
                            local.push(AxiomViolation {
                                kind: AxiomKind::Frobenius,
                                detail: format!(
                                    "<{0} * {1}, {2}> = {3} but <{0}, {1} * {2}> = {4}",
                                    names[i], names[j], names[k], lhs, rhs
                                ),
                            });
                        }
                    }
                }
                local
            })
            .collect();
        report.violations.extend(triples);
        report
    }
}
