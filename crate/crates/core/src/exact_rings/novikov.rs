//! Truncated Novikov series in two variables: `q` with integer exponents and
//! `T` with rational exponents.
//!
//! An element is a finite sum `sum c q^i T^s`. Elements produced by finite
//! ring operations on polynomials are *exact*. Once a series has been cut at
//! some `T`-exponent it carries a precision: every term with `T`-exponent at
//! or below the precision is correct, everything above it is unknown and not
//! stored. Products and sums propagate precision so that no unknown term can
//! leak below a reported precision.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

use super::laurent::{fmt_monomial, fmt_power, LaurentPoly};

/// Rational exponent of `T`.
pub type TExp = Rational64;

/// Default `T`-exponent cap for truncated series.
pub const DEFAULT_CAP: i64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NovikovError {
    #[error("lowest T-layer {layer} is not a monomial unit")]
    NotInvertibleLeadingTerm { layer: String },
    #[error("element vanishes up to its precision T^{precision}; cannot decide invertibility")]
    TruncationTooSmall { precision: TExp },
}

/// An element of the Novikov ring, canonically ordered by `(tExp, qExp)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NovikovElem {
    terms: BTreeMap<(TExp, i64), BigInt>,
    precision: Option<TExp>,
}

impl NovikovElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, TExp::zero())
    }

    pub fn monomial<C: Into<BigInt>>(coeff: C, q_exp: i64, t_exp: TExp) -> Self {
        let mut out = Self::zero();
        out.add_term(t_exp, q_exp, coeff.into());
        out
    }

    /// `T^s` for an integer `s`.
    pub fn t_pow(s: i64) -> Self {
        Self::monomial(1, 0, TExp::from_integer(s))
    }

    /// Builds an exact element from `(qExp, tExp, coeff)` triples.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, TExp, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (q, t, c) in terms {
            out.add_term(t, q, c.into());
        }
        out
    }

    /// Embeds a Laurent polynomial in `q` as the `T^0` layer.
    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (e, c) in p.terms() {
            out.add_term(TExp::zero(), e, c.clone());
        }
        out
    }

    fn add_term(&mut self, t: TExp, q: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let key = (t, q);
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&(TExp::zero(), 0)).is_some_and(|c| c.is_one())
    }

    /// True once any term has been dropped by truncation.
    pub fn is_truncated(&self) -> bool {
        self.precision.is_some()
    }

    /// `T`-exponent up to which the stored terms are known to be correct;
    /// `None` for exact elements.
    pub fn precision(&self) -> Option<TExp> {
        self.precision
    }

    /// Terms as `(qExp, tExp, coeff)`, in canonical `(tExp, qExp)` order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, TExp, &BigInt)> + '_ {
        self.terms.iter().map(|((t, q), c)| (*q, *t, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, q_exp: i64, t_exp: TExp) -> BigInt {
        self.terms.get(&(t_exp, q_exp)).cloned().unwrap_or_default()
    }

    /// Smallest `T`-exponent present.
    pub fn valuation(&self) -> Option<TExp> {
        self.terms.keys().next().map(|(t, _)| *t)
    }

    pub fn max_t_exp(&self) -> Option<TExp> {
        self.terms.keys().next_back().map(|(t, _)| *t)
    }

    /// The Laurent polynomial in `q` multiplying `T^t`.
    pub fn layer(&self, t: TExp) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms
                .range((t, i64::MIN)..=(t, i64::MAX))
                .map(|((_, q), c)| (*q, c.clone())),
        )
    }

    /// The lowest nonzero `T`-layer and its exponent.
    pub fn leading_layer(&self) -> Option<(TExp, LaurentPoly)> {
        let t = self.valuation()?;
        Some((t, self.layer(t)))
    }

    /// Drops every term above `cap`; the result is marked truncated when
    /// anything was dropped or the input was already less precise.
    pub fn truncate(&self, cap: TExp) -> Self {
        let mut terms = self.terms.clone();
        let before = terms.len();
        terms.retain(|(t, _), _| *t <= cap);
        let dropped = terms.len() != before;
        let precision = match self.precision {
            Some(p) => Some(p.min(cap)),
            None if dropped => Some(cap),
            None => None,
        };
        Self { terms, precision }
    }

    fn with_precision(mut self, precision: Option<TExp>) -> Self {
        if let Some(p) = precision {
            self.terms.retain(|(t, _), _| *t <= p);
        }
        self.precision = precision;
        self
    }

    /// `T^s` shift.
    pub fn shift_t(&self, s: TExp) -> Self {
        Self {
            terms: self.terms.iter().map(|((t, q), c)| ((t + s, *q), c.clone())).collect(),
            precision: self.precision.map(|p| p + s),
        }
    }

    /// Substitutes `T = 1`. Only meaningful for exact elements.
    pub fn specialize_t_to_one(&self) -> Option<LaurentPoly> {
        if self.is_truncated() {
            return None;
        }
        Some(LaurentPoly::from_terms(self.terms.iter().map(|((_, q), c)| (*q, c.clone()))))
    }

    /// Product truncated at `cap`.
    pub fn mul_capped(&self, other: &Self, cap: TExp) -> Self {
        (self * other).truncate(cap)
    }

    /// Compares two elements on every `T`-exponent up to `cap`.
    pub fn agrees_up_to(&self, other: &Self, cap: TExp) -> bool {
        let lhs = self.terms.range(..=(cap, i64::MAX));
        let rhs = other.terms.range(..=(cap, i64::MAX));
        lhs.eq(rhs)
    }

    /// Inverse by a Neumann series around the lowest `T`-layer.
    ///
    /// The lowest layer must be a monomial unit `±q^r T^s`. The result is
    /// correct for every `T`-exponent up to `cap`, and enough extra terms are
    /// kept that `self * inverse` agrees with `1` up to `cap` as well.
    pub fn geometric_inverse(&self, cap: TExp) -> Result<Self, NovikovError> {
        let (s, layer) = match self.leading_layer() {
            Some(l) => l,
            None => {
                return Err(match self.precision {
                    Some(p) => NovikovError::TruncationTooSmall { precision: p },
                    None => NovikovError::NotInvertibleLeadingTerm { layer: "0".into() },
                })
            }
        };
        let lead_inv = layer
            .unit_inverse()
            .ok_or_else(|| NovikovError::NotInvertibleLeadingTerm { layer: layer.to_string() })?;
        let lead_inv = Self::from_laurent(&lead_inv).shift_t(-s);
        // self = lead * (1 + tail), tail has strictly positive T-valuation.
        let normalized = &lead_inv * self;
        let tail = &normalized - &Self::one();
        // Precision wanted for the final answer and for self * inverse.
        let want = cap + if s < TExp::zero() { -s } else { TExp::zero() };
        let series_cap = want + s;
        let mut sum = Self::one();
        if let Some(delta) = tail.valuation() {
            debug_assert!(delta > TExp::zero());
            let neg_tail = -&tail;
            let mut power = Self::one();
            let mut reach = TExp::zero();
            while reach <= series_cap {
                power = power.mul_capped(&neg_tail, series_cap);
                if power.is_zero() {
                    break;
                }
                sum = &sum + &power;
                reach += delta;
            }
            // The Neumann series of a nonzero tail never terminates.
            let p = sum.precision.map_or(series_cap, |p| p.min(series_cap));
            sum = sum.with_precision(Some(p));
        }
        Ok((&sum * &lead_inv).truncate(want))
    }
}

fn combine_precision(a: &NovikovElem, b: &NovikovElem) -> Option<TExp> {
    // Terms above a's precision are unknown; they shift by at least b's
    // valuation when multiplied into the product.
    let from = |x: &NovikovElem, y: &NovikovElem| -> Option<TExp> {
        let p = x.precision?;
        Some(match y.valuation() {
            Some(v) => p + v,
            None => p,
        })
    };
    match (from(a, b), from(b, a)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

fn min_precision(a: Option<TExp>, b: Option<TExp>) -> Option<TExp> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

impl Add for &NovikovElem {
    type Output = NovikovElem;
    fn add(self, rhs: &NovikovElem) -> NovikovElem {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.0, k.1, c.clone());
        }
        out.with_precision(min_precision(self.precision, rhs.precision))
    }
}

impl Sub for &NovikovElem {
    type Output = NovikovElem;
    fn sub(self, rhs: &NovikovElem) -> NovikovElem {
        self + &(-rhs)
    }
}

impl Mul for &NovikovElem {
    type Output = NovikovElem;
    fn mul(self, rhs: &NovikovElem) -> NovikovElem {
        let precision = combine_precision(self, rhs);
        let mut out = NovikovElem::zero();
        for ((ta, qa), ca) in &self.terms {
            for ((tb, qb), cb) in &rhs.terms {
                let t = ta + tb;
                if precision.is_some_and(|p| t > p) {
                    continue;
                }
                out.add_term(t, qa + qb, ca * cb);
            }
        }
        out.precision = precision;
        out
    }
}

impl Neg for &NovikovElem {
    type Output = NovikovElem;
    fn neg(self) -> NovikovElem {
        NovikovElem {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
            precision: self.precision,
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
forward_owned!(NovikovElem, Add add, Sub sub, Mul mul);

impl Neg for NovikovElem {
    type Output = NovikovElem;
    fn neg(self) -> NovikovElem {
        -&self
    }
}

fn fmt_exp(e: &TExp) -> String {
    if e.is_integer() {
        e.to_integer().to_string()
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

impl fmt::Display for NovikovElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")?;
        }
        for (i, ((t, q), c)) in self.terms.iter().enumerate() {
            let mut vars = String::new();
            if *q != 0 {
                vars.push_str(&fmt_power("q", &q.to_string(), *q == 1));
            }
            if !t.is_zero() {
                vars.push_str(&fmt_power("T", &fmt_exp(t), t.is_one()));
            }
            fmt_monomial(f, i == 0, c, &vars)?;
        }
        if let Some(p) = self.precision {
            write!(f, " + o(T^{})", fmt_exp(&p))?;
        }
        Ok(())
    }
}

/// Product truncated at `cap`.
pub fn novikov_mul(a: &NovikovElem, b: &NovikovElem, cap: TExp) -> NovikovElem {
    a.mul_capped(b, cap)
}

/// Inverse of `a` up to `T`-exponent `cap`.
pub fn novikov_geometric_inverse(a: &NovikovElem, cap: TExp) -> Result<NovikovElem, NovikovError> {
    a.geometric_inverse(cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: i64) -> TExp {
        TExp::from_integer(n)
    }

    fn geometric(upto: i64) -> NovikovElem {
        NovikovElem::from_terms((0..=upto).map(|j| (0, t(j), 1)))
    }

    #[test]
    fn t_times_t() {
        let x = novikov_mul(&NovikovElem::t_pow(1), &NovikovElem::t_pow(1), t(16));
        assert_eq!(x, NovikovElem::t_pow(2));
        assert!(!x.is_truncated());
    }

    #[test]
    fn one_minus_t_times_geometric_sum() {
        let one_minus_t = &NovikovElem::one() - &NovikovElem::t_pow(1);
        let exact = &one_minus_t * &geometric(16);
        // Oracle: telescoping sum leaves 1 - T^17.
        assert_eq!(exact, &NovikovElem::one() - &NovikovElem::t_pow(17));
        let capped = novikov_mul(&one_minus_t, &geometric(16), t(16));
        assert!(capped.agrees_up_to(&NovikovElem::one(), t(16)));
        assert!(capped.is_truncated());
        assert_eq!(capped.len(), 1);
    }

    #[test]
    fn unit_pair() {
        let a = NovikovElem::monomial(1, 1, t(2));
        let b = NovikovElem::monomial(1, -1, t(-2));
        assert!(novikov_mul(&a, &b, t(16)).is_one());
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let one_minus_t = &NovikovElem::one() - &NovikovElem::t_pow(1);
        let inv = novikov_geometric_inverse(&one_minus_t, t(16)).unwrap();
        assert!(inv.agrees_up_to(&geometric(16), t(16)));
        assert_eq!(inv.max_t_exp(), Some(t(16)));
    }

    #[test]
    fn inverse_of_monomial_is_exact() {
        let a = NovikovElem::monomial(1, 1, t(2));
        let inv = novikov_geometric_inverse(&a, t(16)).unwrap();
        assert_eq!(inv.terms().collect::<Vec<_>>().len(), 1);
        assert_eq!(inv.coeff(-1, t(-2)), BigInt::from(1));
    }

    #[test]
    fn inverse_of_square() {
        let one_minus_t = &NovikovElem::one() - &NovikovElem::t_pow(1);
        let sq = &one_minus_t * &one_minus_t;
        let inv = novikov_geometric_inverse(&sq, t(16)).unwrap();
        // Oracle: Cauchy product of two geometric series.
        let g = geometric(16);
        let conv = (&g * &g).truncate(t(16));
        assert!(inv.agrees_up_to(&conv, t(16)));
        for j in 0..=16 {
            assert_eq!(inv.coeff(0, t(j)), BigInt::from(j + 1));
        }
    }

    #[test]
    fn non_unit_leading_layer_is_rejected() {
        let a = &NovikovElem::one() + &NovikovElem::monomial(1, 1, t(0));
        assert!(matches!(
            novikov_geometric_inverse(&a, t(16)),
            Err(NovikovError::NotInvertibleLeadingTerm { .. })
        ));
        let b = NovikovElem::monomial(2, 0, t(1));
        assert!(novikov_geometric_inverse(&b, t(16)).is_err());
    }

    #[test]
    fn precision_tracks_negative_valuations() {
        // T^17 is dropped; multiplying by T^-2 must not fake a T^15 term.
        let g = geometric(30).truncate(t(16));
        let shifted = &g * &NovikovElem::t_pow(-2);
        assert_eq!(shifted.precision(), Some(t(14)));
        assert_eq!(shifted.max_t_exp(), Some(t(14)));
    }

    #[test]
    fn rational_exponents() {
        let half = TExp::new(1, 2);
        let a = NovikovElem::monomial(3, 0, half);
        let b = &a * &a;
        assert_eq!(b.coeff(0, t(1)), BigInt::from(9));
        assert_eq!(a.to_string(), "3T^(1/2)");
    }
}
