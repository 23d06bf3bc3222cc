//! Univariate Laurent polynomials `Z[q, q^-1]` with arbitrary precision
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A Laurent polynomial in `q` with integer coefficients.
///
/// Terms are kept in a sorted map from exponent to coefficient; zero
/// coefficients are never stored, so structural equality is ring equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// The variable `q` itself.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial<C: Into<BigInt>>(coeff: C, exp: i64) -> Self {
        let coeff = coeff.into();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging
    /// repeated exponents.
    pub fn from_terms<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in pairs {
            out.add_term(e, c.into());
        }
        out
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Units of `Z[q, q^-1]` are exactly `±q^r`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    /// Inverse of a unit `±q^r`, `None` otherwise.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(Self::monomial(c.clone(), -e))
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * factor)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division in the Laurent ring. Returns `None` when `divisor` does
    /// not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (d_top, d_lead) = divisor.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
        let d_low = divisor.min_exp()?;
        // Any quotient x satisfies low(self) = low(divisor) + low(x).
        let quotient_floor = self.min_exp()? - d_low;
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        while let Some((r_top, r_lead)) = rem.terms.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            let qe = r_top - d_top;
            if qe < quotient_floor {
                return None;
            }
            let (qc, r) = r_lead.div_rem(&d_lead);
            if !r.is_zero() {
                return None;
            }
            quotient.add_term(qe, qc.clone());
            let step = divisor.shift(qe).scale(&qc);
            rem = &rem - &step;
        }
        Some(quotient)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(LaurentPoly, Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

pub(crate) fn fmt_monomial(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coeff: &BigInt,
    vars: &str,
) -> fmt::Result {
    let neg = coeff.is_negative();
    let abs = coeff.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if vars.is_empty() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{vars}")
    } else {
        write!(f, "{abs}{vars}")
    }
}

pub(crate) fn fmt_power(var: &str, exp: &str, is_one: bool) -> String {
    if is_one {
        var.to_string()
    } else {
        format!("{var}^{exp}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending powers, the usual way to write polynomials.
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let vars = match e {
                0 => String::new(),
                _ => fmt_power("q", &e.to_string(), *e == 1),
            };
            fmt_monomial(f, i == 0, c, &vars)?;
        }
        Ok(())
    }
}

/// Product in `Z[q, q^-1]`.
pub fn laurent_mul(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    a * b
}

/// Whether `a` is a unit of `Z[q, q^-1]`, i.e. `±q^r`.
pub fn laurent_is_unit(a: &LaurentPoly) -> bool {
    a.is_unit()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(pairs.iter().copied())
    }

    #[test]
    fn unit_pair_multiplies_to_one() {
        assert!((LaurentPoly::q() * LaurentPoly::monomial(1, -1)).is_one());
    }

    #[test]
    fn difference_of_squares() {
        let a = lp(&[(0, 1), (1, 1)]);
        let b = lp(&[(0, 1), (1, -1)]);
        assert_eq!(a * b, lp(&[(0, 1), (2, -1)]));
    }

    #[test]
    fn schoolbook_product() {
        // (2q - 3)(q^2 + q): convolution of [-3, 2] and [0, 1, 1].
        let a = [-3i64, 2];
        let b = [0i64, 1, 1];
        let mut conv = [0i64; 4];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                conv[i + j] += x * y;
            }
        }
        assert_eq!(conv, [0, -3, -1, 2]);
        let expected = LaurentPoly::from_terms(conv.iter().enumerate().map(|(e, c)| (e as i64, *c)));
        assert_eq!(lp(&[(1, 2), (0, -3)]) * lp(&[(2, 1), (1, 1)]), expected);
        assert_eq!(expected.to_string(), "2q^3 - q^2 - 3q");
    }

    #[test]
    fn units() {
        assert!(laurent_is_unit(&LaurentPoly::monomial(1, 3)));
        assert!(laurent_is_unit(&LaurentPoly::monomial(-1, -2)));
        assert!(!laurent_is_unit(&lp(&[(0, 1), (1, 1)])));
        assert!(!laurent_is_unit(&LaurentPoly::monomial(2, 0)));
        assert!(!laurent_is_unit(&LaurentPoly::zero()));
    }

    #[test]
    fn exact_division() {
        let a = lp(&[(-1, 1), (0, 1)]);
        let b = lp(&[(2, 3), (4, -1), (0, 7)]);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a));
        assert_eq!(lp(&[(0, 1), (1, 1)]).div_exact(&lp(&[(0, 1), (1, -1)])), None);
        assert_eq!(lp(&[(0, 3)]).div_exact(&lp(&[(0, 2)])), None);
    }

    #[test]
    fn display_negative_exponents() {
        assert_eq!(lp(&[(-2, -1)]).to_string(), "-q^-2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }
}
