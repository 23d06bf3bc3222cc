//! Degree conventions for the coefficient rings.

use serde::{Deserialize, Serialize};

/// Grading of the coefficient ring: `deg q = 2C` for a positive integer `C`.
///
/// The extended ring `Z[t, t^-1]` sits over `Z[q, q^-1]` through `q = t^C`
/// and has `deg t = 2`. The Novikov variable `T` records symplectic area and
/// carries degree zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradingSpec {
    min_chern: i64,
}

impl GradingSpec {
    pub const T_DEGREE: i64 = 2;

    /// Grading with `deg q = 2 * min_chern`. Returns `None` unless
    /// `min_chern >= 1`.
    pub fn new(min_chern: i64) -> Option<Self> {
        (min_chern >= 1).then_some(Self { min_chern })
    }

    /// Grading from an even positive `deg q`.
    pub fn from_q_degree(q_degree: i64) -> Option<Self> {
        if q_degree > 0 && q_degree % 2 == 0 {
            Self::new(q_degree / 2)
        } else {
            None
        }
    }

    pub fn min_chern(&self) -> i64 {
        self.min_chern
    }

    pub fn q_degree(&self) -> i64 {
        2 * self.min_chern
    }

    /// Degree of the monomial `q^q_exp T^t` (independent of `t`).
    pub fn monomial_degree(&self, q_exp: i64) -> i64 {
        q_exp * self.q_degree()
    }

    /// Exponent of `t` corresponding to `q^q_exp` under `q = t^C`.
    pub fn t_exponent(&self, q_exp: i64) -> i64 {
        q_exp * self.min_chern
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_degree_is_twice_min_chern() {
        let g = GradingSpec::new(2).unwrap();
        assert_eq!(g.q_degree(), 4);
        assert_eq!(g.t_exponent(3) * GradingSpec::T_DEGREE, g.monomial_degree(3));
        assert!(GradingSpec::new(0).is_none());
        assert!(GradingSpec::from_q_degree(5).is_none());
        assert_eq!(GradingSpec::from_q_degree(10).unwrap().min_chern(), 5);
    }
}
