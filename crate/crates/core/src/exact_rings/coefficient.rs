use std::fmt::{Debug, Display};

use num_bigint::BigInt;

use super::{LaurentPoly, NovikovElem, TExp};

/// Which coefficient ring a presentation is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientRing {
    /// `Z[q, q^-1]`.
    Laurent,
    /// The truncated Novikov ring in `q` and `T`.
    Novikov,
}

/// Commutative ring operations shared by the coefficient rings.
pub trait Coefficient: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    const RING: CoefficientRing;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(c: BigInt) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Distinct `q`-exponents occurring in the element.
    fn q_exponents(&self) -> Vec<i64>;
    /// Coefficient of `q^0` (and `T^0`).
    fn constant_term(&self) -> BigInt;
    /// Coefficient of `q^i`, as an integer; `None` when the `q^i` part is not
    /// a pure integer (carries `T`-dependence).
    fn q_coefficient(&self, i: i64) -> Option<BigInt>;
}

impl Coefficient for LaurentPoly {
    const RING: CoefficientRing = CoefficientRing::Laurent;

    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn from_int(c: BigInt) -> Self {
        LaurentPoly::constant(c)
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn q_exponents(&self) -> Vec<i64> {
        self.terms().map(|(e, _)| e).collect()
    }
    fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }
    fn q_coefficient(&self, i: i64) -> Option<BigInt> {
        Some(self.coeff(i))
    }
}

impl Coefficient for NovikovElem {
    const RING: CoefficientRing = CoefficientRing::Novikov;

    fn zero() -> Self {
        NovikovElem::zero()
    }
    fn one() -> Self {
        NovikovElem::one()
    }
    fn from_int(c: BigInt) -> Self {
        NovikovElem::monomial(c, 0, TExp::from_integer(0))
    }
    fn is_zero(&self) -> bool {
        NovikovElem::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn q_exponents(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.terms().map(|(q, _, _)| q).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
    fn constant_term(&self) -> BigInt {
        self.coeff(0, TExp::from_integer(0))
    }
    fn q_coefficient(&self, i: i64) -> Option<BigInt> {
        let mut out = None;
        for (q, t, c) in self.terms() {
            if q != i {
                continue;
            }
            if t != TExp::from_integer(0) {
                return None;
            }
            out = Some(c.clone());
        }
        Some(out.unwrap_or_default())
    }
}
