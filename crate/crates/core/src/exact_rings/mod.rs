//! Exact coefficient arithmetic: the Laurent ring `Z[q, q^-1]`, its
//! extension by `q = t^C`, and the truncated Novikov ring in `q` and `T`.

mod coefficient;
mod grading;
mod laurent;
mod novikov;

pub use coefficient::{Coefficient, CoefficientRing};
pub use grading::GradingSpec;
pub use laurent::{laurent_is_unit, laurent_mul, LaurentPoly};
pub use novikov::{
    novikov_geometric_inverse, novikov_mul, NovikovElem, NovikovError, TExp, DEFAULT_CAP,
};
