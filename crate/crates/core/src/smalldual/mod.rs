//! Numerical invariants of manifolds with small dual and the section-class
//! enumerator for the Seidel element of a Lefschetz pencil.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default lower bound on the exceptional multiplicity `d`.
pub const DEFAULT_D_MIN: i64 = -10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmallDualError {
    #[error("n = {n} and k = {k} must have the same parity when k > 0")]
    ParityViolation { n: i64, k: i64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("generator {0} has h = 0; the enumeration would not terminate")]
    UnboundedCone(String),
}

/// Dimension and defect of `X` with the invariants they determine.
///
/// Derived Chern data are `None` when `b2_is_1` is false or `n + k` is odd;
/// catalog entries may then supply them explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallDualProfile {
    pub n: i64,
    pub k: i64,
    pub b2_is_1: bool,
    /// Minimal Chern number of `X`.
    pub c_x: Option<i64>,
    /// Minimal Chern number of the hyperplane section.
    pub c_sigma: Option<i64>,
    /// `c_1(X) = coefficient * h`.
    pub ein_c1_coefficient: Option<i64>,
    /// Upper bound on Morse indices of `X \ Sigma`.
    pub subcritical_index_bound: i64,
    /// Minimal Maslov number of the vanishing Lagrangian sphere, `2 C_Sigma`.
    pub maslov_sphere: Option<i64>,
}

impl SmallDualProfile {
    /// Replaces the Chern data, for cases where `b_2 > 1`.
    pub fn with_chern(mut self, c_x: i64, c_sigma: i64) -> Self {
        self.c_x = Some(c_x);
        self.c_sigma = Some(c_sigma);
        self.maslov_sphere = Some(2 * c_sigma);
        self
    }

    /// `deg q = 2 C_Sigma = n + k` in the quantum cohomology of the section.
    pub fn q_degree_sigma(&self) -> Option<i64> {
        self.c_sigma.map(|c| 2 * c)
    }
}

/// `def(Sigma) = max(def(X) - 1, 0)`.
pub fn hyperplane_defect(def_x: i64) -> i64 {
    (def_x - 1).max(0)
}

pub fn make_profile(n: i64, k: i64, b2_is_1: bool) -> Result<SmallDualProfile, SmallDualError> {
    if n < 1 || k < 0 {
        return Err(SmallDualError::InvalidInput(format!("need n >= 1 and k >= 0, got n = {n}, k = {k}")));
    }
    if k > n {
        return Err(SmallDualError::InvalidInput(format!("defect {k} exceeds dimension {n}")));
    }
    if k > 0 && (n - k) % 2 != 0 {
        return Err(SmallDualError::ParityViolation { n, k });
    }
    let even = (n + k) % 2 == 0;
    let derived = b2_is_1 && even;
    Ok(SmallDualProfile {
        n,
        k,
        b2_is_1,
        c_x: derived.then_some((n + k + 2) / 2),
        c_sigma: derived.then_some((n + k) / 2),
        ein_c1_coefficient: derived.then_some((n + k) / 2 + 1),
        subcritical_index_bound: n - k,
        maslov_sphere: derived.then_some(n + k),
    })
}

/// Lower bound `def(X) >= n - dim Y` for `X` swept by linear spaces through
/// a subvariety of dimension `dim Y`.
pub fn segre_defect_lower(n: i64, dim_y: i64) -> i64 {
    (n - dim_y).max(0)
}

/// True when `2 C_Sigma` does not divide `n`.
pub fn divisibility_obstruction(n: i64, c_sigma: i64) -> bool {
    n % (2 * c_sigma) != 0
}

/// A generator of the cone of curve classes, with its degree against the
/// hyperplane class and its first Chern number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveGenerator {
    pub name: String,
    pub h: i64,
    pub c1: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClassData {
    pub generators: Vec<CurveGenerator>,
}

impl CurveClassData {
    pub fn new(gens: &[(&str, i64, i64)]) -> Self {
        Self {
            generators: gens
                .iter()
                .map(|&(name, h, c1)| CurveGenerator { name: name.into(), h, c1 })
                .collect(),
        }
    }
}

/// A section class `j(A) + dF` in the blow-up along the base locus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionClass {
    /// Multiplicity of each cone generator in `A`.
    pub multiplicities: Vec<i64>,
    pub d: i64,
    pub h_value: i64,
    pub c1_value: i64,
    pub vertical_chern: i64,
    pub omega_area: i64,
    pub q_exp: i64,
    pub t_exp: i64,
}

impl SectionClass {
    pub fn is_fiber_term(&self) -> bool {
        self.d == 1 && self.multiplicities.iter().all(|&m| m == 0)
    }

    /// Human-readable form such as `s_X + 0F`.
    pub fn describe(&self, cone: &CurveClassData) -> String {
        let parts: Vec<String> = self
            .multiplicities
            .iter()
            .zip(&cone.generators)
            .filter(|(m, _)| **m != 0)
            .map(|(m, g)| if *m == 1 { g.name.clone() } else { format!("{m}{}", g.name) })
            .collect();
        let a = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        format!("A = {a}, d = {}", self.d)
    }
}

/// A class meeting the numerical constraints whose `q`-exponent is not an
/// integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RejectedClass {
    pub multiplicities: Vec<i64>,
    pub d: i64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeidelEnumeration {
    pub classes: Vec<SectionClass>,
    pub rejected: Vec<RejectedClass>,
    /// Set when the nef criterion made the search unnecessary.
    pub short_circuit: bool,
}

impl SeidelEnumeration {
    pub fn fiber_term_only(&self) -> bool {
        self.classes.len() == 1 && self.classes[0].is_fiber_term()
    }
}

/// `c_1^v = c_1(A) + d - 2`, with whether it lies in `2 - 2n <= 2 c_1^v <= 0`.
pub fn blowup_vertical_chern(c1_a: i64, d: i64, n: i64) -> (i64, bool) {
    let cv = c1_a + d - 2;
    (cv, 2 - 2 * n <= 2 * cv && cv <= 0)
}

fn section_class(mult: Vec<i64>, d: i64, h: i64, c1: i64, c_sigma: i64, n: i64) -> Result<SectionClass, RejectedClass> {
    if (c1 - h) % c_sigma != 0 {
        return Err(RejectedClass {
            multiplicities: mult,
            d,
            reason: format!("q-exponent ({c1} - {h}) / {c_sigma} is not an integer"),
        });
    }
    Ok(SectionClass {
        multiplicities: mult,
        d,
        h_value: h,
        c1_value: c1,
        vertical_chern: blowup_vertical_chern(c1, d, n).0,
        omega_area: 2 - d,
        q_exp: (c1 - h) / c_sigma,
        t_exp: 2 - d,
    })
}

/// All nonnegative combinations of generators with total `h` equal to
/// `target`.
fn compositions(cone: &CurveClassData, target: i64) -> Vec<Vec<i64>> {
    fn rec(gens: &[CurveGenerator], i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == gens.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut m = 0;
        while m * gens[i].h <= left {
            cur.push(m);
            rec(gens, i + 1, left - m * gens[i].h, cur, out);
            cur.pop();
            m += 1;
        }
    }
    let mut out = Vec::new();
    rec(&cone.generators, 0, target, &mut Vec::new(), &mut out);
    out
}

/// Candidate section classes contributing to the Seidel element: the fiber
/// class `F` together with every `j(A) + dF`, `d_min <= d <= 0`, such that
/// `h(A) = 1 - d` and `3 - d - n <= c_1(A) <= 2 - d`.
pub fn enumerate_seidel_contributions(
    profile: &SmallDualProfile,
    cone: &CurveClassData,
    d_min: i64,
) -> Result<SeidelEnumeration, SmallDualError> {
    if d_min > 1 {
        return Err(SmallDualError::InvalidInput(format!("d_min = {d_min} must be at most 1")));
    }
    let c_sigma = profile
        .c_sigma
        .ok_or_else(|| SmallDualError::InvalidInput("profile has no minimal Chern number for the section".into()))?;
    if let Some(g) = cone.generators.iter().find(|g| g.h <= 0) {
        return Err(SmallDualError::UnboundedCone(g.name.clone()));
    }
    let n = profile.n;
    let zero = vec![0; cone.generators.len()];
    let fiber = section_class(zero, 1, 0, 0, c_sigma, n).expect("fiber term has q-exponent 0");
    let nef = cone.generators.iter().map(|g| g.c1 - g.h).min().is_some_and(|m| m >= 2);
    if nef || d_min > 0 {
        return Ok(SeidelEnumeration { classes: vec![fiber], rejected: Vec::new(), short_circuit: nef });
    }
    let per_d: Vec<(Vec<SectionClass>, Vec<RejectedClass>)> = (d_min..=0)
        .into_par_iter()
        .map(|d| {
            let mut ok = Vec::new();
            let mut bad = Vec::new();
            for mult in compositions(cone, 1 - d) {
                let c1: i64 = mult.iter().zip(&cone.generators).map(|(m, g)| m * g.c1).sum();
                if c1 < 3 - d - n || c1 > 2 - d {
                    continue;
                }
                match section_class(mult, d, 1 - d, c1, c_sigma, n) {
                    Ok(c) => ok.push(c),
                    Err(r) => bad.push(r),
                }
            }
            (ok, bad)
        })
        .collect();
    let mut classes = vec![fiber];
    let mut rejected = Vec::new();
    // Highest d first: F, then d = 0, -1, ...
    for (ok, bad) in per_d.into_iter().rev() {
        classes.extend(ok);
        rejected.extend(bad);
    }
    Ok(SeidelEnumeration { classes, rejected, short_circuit: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defect_chain() {
        let mut d = 4;
        let mut chain = vec![d];
        while d > 0 {
            d = hyperplane_defect(d);
            chain.push(d);
        }
        assert_eq!(chain, [4, 3, 2, 1, 0]);
        assert_eq!(hyperplane_defect(0), 0);
    }

    #[test]
    fn grassmannian_profile() {
        let p = make_profile(6, 2, true).unwrap();
        assert_eq!(p.c_x, Some(5));
        assert_eq!(p.c_sigma, Some(4));
        assert_eq!(p.ein_c1_coefficient, Some(5));
        assert_eq!(p.subcritical_index_bound, 4);
        assert_eq!(p.maslov_sphere, Some(8));
        let s = make_profile(10, 4, true).unwrap();
        assert_eq!((s.c_x, s.c_sigma), (Some(8), Some(7)));
        assert_eq!(make_profile(5, 2, true), Err(SmallDualError::ParityViolation { n: 5, k: 2 }));
    }

    #[test]
    fn defect_bounds_and_divisibility() {
        assert_eq!(segre_defect_lower(4, 2), 2);
        assert_eq!(segre_defect_lower(3, 3), 0);
        assert_eq!(segre_defect_lower(2, 5), 0);
        assert!(divisibility_obstruction(6, 4));
        assert!(!divisibility_obstruction(8, 2));
        assert!(divisibility_obstruction(3, 2));
    }

    #[test]
    fn vertical_chern_window() {
        assert_eq!(blowup_vertical_chern(0, 1, 3), (-1, true));
        assert_eq!(blowup_vertical_chern(1, 0, 3), (-1, true));
        // c_1(A) = (n+k+2)/2 (1-d) with d < 1 lands outside the window.
        let (n, k, d) = (6, 2, -1);
        let (cv, inside) = blowup_vertical_chern((n + k + 2) / 2 * (1 - d), d, n);
        assert!(cv > 0 && !inside);
    }

    #[test]
    fn segre_has_only_fiber_term() {
        let p = make_profile(5, 1, false).unwrap().with_chern(1, 1);
        let cone = CurveClassData::new(&[("l1", 1, 4), ("l2", 1, 3)]);
        let e = enumerate_seidel_contributions(&p, &cone, DEFAULT_D_MIN).unwrap();
        assert!(e.fiber_term_only());
        assert!(e.short_circuit);
    }

    #[test]
    fn bundle_contributions() {
        let p = make_profile(3, 1, false).unwrap().with_chern(1, 2);
        for cone in [
            CurveClassData::new(&[("s_X", 1, 1), ("f_X", 1, 2)]),
            CurveClassData::new(&[("s_X", 1, 1), ("f_X", 1, 3)]),
        ] {
            let e = enumerate_seidel_contributions(&p, &cone, 0).unwrap();
            assert_eq!(e.classes.len(), 2, "{e:?}");
            assert!(e.classes[0].is_fiber_term());
            let s = &e.classes[1];
            assert_eq!((s.multiplicities.as_slice(), s.d), (&[1, 0][..], 0));
            assert_eq!(s.vertical_chern, -1);
            assert_eq!((s.q_exp, s.t_exp), (0, 2));
        }
    }

    #[test]
    fn bundle_candidates_below_zero_are_multiples_of_s() {
        // The numerical constraints alone admit (r+1) s_X - rF for every
        // r >= 0; only a geometric argument removes r >= 1.
        let p = make_profile(3, 1, false).unwrap().with_chern(1, 2);
        let cone = CurveClassData::new(&[("s_X", 1, 1), ("f_X", 1, 2)]);
        let e = enumerate_seidel_contributions(&p, &cone, -4).unwrap();
        let got: Vec<(Vec<i64>, i64)> = e.classes.iter().map(|c| (c.multiplicities.clone(), c.d)).collect();
        let mut expected = vec![(vec![0, 0], 1)];
        expected.extend((0..=4).map(|r| (vec![r + 1, 0], -r)));
        assert_eq!(got, expected);
        assert!(e.classes.iter().all(|c| c.vertical_chern == -1 && c.q_exp == 0));
        // s_X + f_X - F style classes fail the integrality of the q-exponent.
        assert_eq!(e.rejected.len(), 5);
    }

    #[test]
    fn enumeration_constraints_hold() {
        let p = make_profile(4, 2, true).unwrap();
        let cone = CurveClassData::new(&[("a", 1, 0), ("b", 2, 1), ("c", 1, 2)]);
        let e = enumerate_seidel_contributions(&p, &cone, -6).unwrap();
        assert_eq!(e.classes.iter().filter(|c| c.d == 1).count(), 1);
        for c in &e.classes[1..] {
            assert_eq!(c.h_value, 1 - c.d);
            assert!(3 - c.d - p.n <= c.c1_value && c.c1_value <= 2 - c.d);
        }
    }

    #[test]
    fn zero_generator_is_rejected() {
        let p = make_profile(4, 2, true).unwrap();
        let cone = CurveClassData::new(&[("z", 0, 1)]);
        assert!(matches!(
            enumerate_seidel_contributions(&p, &cone, -3),
            Err(SmallDualError::UnboundedCone(_))
        ));
    }
}
