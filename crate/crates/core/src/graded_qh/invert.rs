use super::QhError;
use crate::exact_rings::{Coefficient, LaurentPoly, NovikovElem, TExp};
use crate::linalg::{det_bareiss, solve_unit_det, Matrix};

/// Rank up to which the Laurent inverse is read off the adjugate.
const ADJUGATE_MAX_RANK: usize = 12;

/// Per-ring determinant, unit test and linear solve used for quantum
/// inversion.
pub trait QuantumCoefficient: Coefficient {
    fn determinant(m: &Matrix<Self>) -> Self;

    fn det_is_unit(det: &Self) -> Result<bool, QhError>;

    /// Solves `m x = e_index` for a matrix whose determinant is a unit.
    fn solve_for_basis(m: &Matrix<Self>, index: usize, cap: TExp) -> Result<Vec<Self>, QhError>;

    /// Equality up to the precision both sides carry.
    fn agrees(&self, other: &Self) -> bool;
}

impl QuantumCoefficient for LaurentPoly {
    fn determinant(m: &Matrix<Self>) -> Self {
        det_bareiss(m)
    }

    fn det_is_unit(det: &Self) -> Result<bool, QhError> {
        Ok(det.is_unit())
    }

    fn solve_for_basis(m: &Matrix<Self>, index: usize, _cap: TExp) -> Result<Vec<Self>, QhError> {
        let n = m.rows();
        if n <= ADJUGATE_MAX_RANK {
            let inv = det_bareiss(m).unit_inverse().ok_or(QhError::NotInvertible)?;
            let adj = m.adjugate();
            return Ok((0..n).map(|i| &adj[(i, index)] * &inv).collect());
        }
        let mut rhs = vec![LaurentPoly::zero(); n];
        rhs[index] = LaurentPoly::one();
        solve_unit_det(m, &rhs).ok_or(QhError::NotInvertible)
    }

    fn agrees(&self, other: &Self) -> bool {
        self == other
    }
}

impl QuantumCoefficient for NovikovElem {
    fn determinant(m: &Matrix<Self>) -> Self {
        m.det_berkowitz()
    }

    fn det_is_unit(det: &Self) -> Result<bool, QhError> {
        match det.leading_layer() {
            Some((_, layer)) => Ok(layer.is_unit()),
            None => match det.precision() {
                Some(p) => Err(QhError::TruncationTooSmall { precision: p }),
                None => Ok(false),
            },
        }
    }

    fn solve_for_basis(m: &Matrix<Self>, index: usize, cap: TExp) -> Result<Vec<Self>, QhError> {
        let n = m.rows();
        let det = m.det_berkowitz();
        let adj = m.adjugate();
        let y: Vec<NovikovElem> = (0..n).map(|i| adj[(i, index)].clone()).collect();
        // Entries of negative valuation in m would let terms above the cap
        // leak back below it, so keep correspondingly more of x.
        let m_val = (0..n)
            .flat_map(|i| m.row(i).iter().filter_map(NovikovElem::valuation).collect::<Vec<_>>())
            .min()
            .unwrap_or_default();
        let zero = TExp::from_integer(0);
        let target = cap + if m_val < zero { -m_val } else { zero };
        let y_val = y.iter().filter_map(NovikovElem::valuation).min().unwrap_or_default();
        let det_inv = det.geometric_inverse(target - y_val)?;
        Ok(y.iter().map(|yi| (yi * &det_inv).truncate(target)).collect())
    }

    fn agrees(&self, other: &Self) -> bool {
        match (self.precision(), other.precision()) {
            (None, None) => self == other,
            (Some(p), None) | (None, Some(p)) => self.agrees_up_to(other, p),
            (Some(p), Some(r)) => self.agrees_up_to(other, p.min(r)),
        }
    }
}
