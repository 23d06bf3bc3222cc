//! Graded quantum cohomology rings presented as finite free modules over
//! `Z[q, q^-1]` or the Novikov ring.

mod axioms;
mod invert;
mod presentation;

use thiserror::Error;

use crate::exact_rings::{NovikovError, TExp};

pub use axioms::{AxiomKind, AxiomReport, AxiomViolation};
pub use invert::QuantumCoefficient;
pub use presentation::{
    extract_degree_component, BasisElement, ElementDegree, PresentationData, QhElement, RingPresentation,
};
pub(crate) use presentation::integer_det;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QhError {
    #[error("basis class {name} has odd degree {degree}; only even degrees are supported")]
    OddDegree { name: String, degree: i64 },
    #[error("malformed presentation: {0}")]
    Shape(String),
    #[error("product should be homogeneous of degree {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: String },
    #[error("element is not homogeneous")]
    MixedDegree,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("truncation cap too small to decide: determinant vanishes up to T^{precision}")]
    TruncationTooSmall { precision: TExp },
    #[error("unknown class {0}")]
    UnknownClass(String),
}

impl From<NovikovError> for QhError {
    fn from(e: NovikovError) -> Self {
        match e {
            NovikovError::TruncationTooSmall { precision } => QhError::TruncationTooSmall { precision },
            NovikovError::NotInvertibleLeadingTerm { .. } => QhError::NotInvertible,
        }
    }
}

impl<R: QuantumCoefficient> RingPresentation<R> {
    /// Whether `a` is a unit for the quantum product.
    ///
    /// Over `Z[q, q^-1]` this tests `det(mul_matrix(a)) = ±q^r`. Over the
    /// Novikov ring the lowest `T`-layer of the determinant must be such a
    /// unit.
    pub fn is_invertible(&self, a: &QhElement<R>) -> Result<bool, QhError> {
        if self.degree_of(a) == ElementDegree::Mixed {
            return Err(QhError::MixedDegree);
        }
        R::det_is_unit(&R::determinant(&self.mul_matrix(a)))
    }

    /// The quantum inverse of `a`. Over the Novikov ring the result is
    /// correct on every `T`-exponent up to `cap`.
    pub fn invert(&self, a: &QhElement<R>, cap: TExp) -> Result<QhElement<R>, QhError> {
        if !self.is_invertible(a)? {
            return Err(QhError::NotInvertible);
        }
        let m = self.mul_matrix(a);
        let x = R::solve_for_basis(&m, self.unit_index(), cap)?;
        Ok(QhElement::from_coords(x))
    }
}
