use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::SubcritError;

/// A complex rational number `re + i im`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexRational {
    pub re: Rational64,
    pub im: Rational64,
}

impl ComplexRational {
    pub fn real(re: i64) -> Self {
        Self { re: Rational64::from_integer(re), im: Rational64::from_integer(0) }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

/// One term `c * u_1^e_1 ... u_m^e_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: ComplexRational,
    pub exp: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    /// `[re, im]`, each an integer or `"p/q"` string.
    coeff: [String; 2],
    exp: Vec<u32>,
}

/// A polynomial map `C^m -> C^N` parametrizing an affine chart of a smooth
/// projective variety, with the declared dimension and defect of the variety.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineChartModel {
    pub name: String,
    pub n: usize,
    pub k: usize,
    /// Critical points with `|u| > domain_bound` are discarded.
    pub domain_bound: f64,
    m: usize,
    components: Vec<Vec<Term>>,
    compiled: Vec<Vec<(Complex64, Vec<u32>)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineChartModelJson {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub domain_bound: f64,
    components: Vec<Vec<TermJson>>,
}

fn parse_rational(s: &str) -> Result<Rational64, SubcritError> {
    Rational64::from_str(s.trim()).map_err(|_| SubcritError::InvalidModel(format!("not a rational number: {s:?}")))
}

fn fmt_rational(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl AffineChartModel {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        k: usize,
        m: usize,
        domain_bound: f64,
        components: Vec<Vec<Term>>,
    ) -> Result<Self, SubcritError> {
        if m == 0 || components.is_empty() {
            return Err(SubcritError::InvalidModel("need m >= 1 and at least one component".into()));
        }
        if m > components.len() {
            return Err(SubcritError::InvalidModel(format!("m = {m} exceeds the ambient dimension {}", components.len())));
        }
        if !(domain_bound > 0.0) {
            return Err(SubcritError::InvalidModel("domain bound must be positive".into()));
        }
        for comp in &components {
            if let Some(t) = comp.iter().find(|t| t.exp.len() != m) {
                return Err(SubcritError::InvalidModel(format!("term exponent {:?} does not have {m} entries", t.exp)));
            }
        }
        let compiled = components
            .iter()
            .map(|c| c.iter().map(|t| (t.coeff.to_complex(), t.exp.clone())).collect())
            .collect();
        Ok(Self { name: name.into(), n, k, domain_bound, m, components, compiled })
    }

    /// Builds a model from integer-coefficient terms `(coeff, exponents)`.
    pub fn from_integer_terms(
        name: &str,
        n: usize,
        k: usize,
        m: usize,
        domain_bound: f64,
        components: &[&[(i64, &[u32])]],
    ) -> Result<Self, SubcritError> {
        let comps = components
            .iter()
            .map(|c| c.iter().map(|(coeff, exp)| Term { coeff: ComplexRational::real(*coeff), exp: exp.to_vec() }).collect())
            .collect();
        Self::new(name, n, k, m, domain_bound, comps)
    }

    /// Parameter dimension `m`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Ambient dimension `N`.
    pub fn ambient_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<Term>] {
        &self.components
    }

    /// `z(u)`.
    pub fn eval(&self, u: &[Complex64]) -> Vec<Complex64> {
        self.compiled.iter().map(|c| c.iter().map(|(a, e)| a * monomial(u, e)).sum()).collect()
    }

    /// Holomorphic Jacobian `J[i][a] = dz_i / du_a`, an `N x m` matrix.
    pub fn jacobian(&self, u: &[Complex64]) -> DMatrix<Complex64> {
        let mut j = DMatrix::zeros(self.ambient_dim(), self.m);
        for (i, comp) in self.compiled.iter().enumerate() {
            for (c, e) in comp {
                for a in 0..self.m {
                    if e[a] == 0 {
                        continue;
                    }
                    let mut d = e.clone();
                    d[a] -= 1;
                    j[(i, a)] += c * f64::from(e[a]) * monomial(u, &d);
                }
            }
        }
        j
    }

    /// Second derivatives `d^2 z_i / du_a du_b`, one `m x m` matrix per
    /// component.
    pub fn second_derivatives(&self, u: &[Complex64]) -> Vec<DMatrix<Complex64>> {
        self.compiled
            .iter()
            .map(|comp| {
                let mut h = DMatrix::zeros(self.m, self.m);
                for (c, e) in comp {
                    for a in 0..self.m {
                        for b in 0..self.m {
                            let mut d = e.clone();
                            let fa = f64::from(d[a]);
                            if d[a] == 0 {
                                continue;
                            }
                            d[a] -= 1;
                            let fb = f64::from(d[b]);
                            if d[b] == 0 {
                                continue;
                            }
                            d[b] -= 1;
                            h[(a, b)] += c * fa * fb * monomial(u, &d);
                        }
                    }
                }
                h
            })
            .collect()
    }

    /// Checks that the Jacobian has full rank at random points of the chart
    /// domain; the smallest singular value must exceed `1e-8`.
    pub fn validate(&self, samples: usize, seed: u64) -> Result<(), SubcritError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let u: Vec<Complex64> = (0..self.m)
                .map(|_| {
                    let r = self.domain_bound / (self.m as f64).sqrt();
                    Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r))
                })
                .collect();
            let j = super::real_jacobian(&self.jacobian(&u));
            let sv = j.singular_values();
            let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
            if smin <= 1e-8 {
                return Err(SubcritError::JacobianRankDeficient { at: u.iter().map(|c| [c.re, c.im]).collect() });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> AffineChartModelJson {
        AffineChartModelJson {
            name: self.name.clone(),
            n: self.n,
            k: self.k,
            m: self.m,
            domain_bound: self.domain_bound,
            components: self
                .components
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|t| TermJson { coeff: [fmt_rational(t.coeff.re), fmt_rational(t.coeff.im)], exp: t.exp.clone() })
                        .collect()
                })
                .collect(),
        }
    }
}

impl AffineChartModelJson {
    pub fn to_model(&self) -> Result<AffineChartModel, SubcritError> {
        let components = self
            .components
            .iter()
            .map(|c| {
                c.iter()
                    .map(|t| {
                        Ok(Term {
                            coeff: ComplexRational { re: parse_rational(&t.coeff[0])?, im: parse_rational(&t.coeff[1])? },
                            exp: t.exp.clone(),
                        })
                    })
                    .collect::<Result<Vec<_>, SubcritError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        AffineChartModel::new(self.name.clone(), self.n, self.k, self.m, self.domain_bound, components)
    }
}

fn monomial(u: &[Complex64], e: &[u32]) -> Complex64 {
    u.iter().zip(e).fold(Complex64::new(1.0, 0.0), |acc, (x, &p)| if p == 0 { acc } else { acc * x.powu(p) })
}

/// The line `z = (u, 0)` in `C^2`.
pub fn affine_line() -> AffineChartModel {
    AffineChartModel::from_integer_terms("affine line in C^2", 1, 1, 1, 50.0, &[&[(1, &[1])], &[]])
        .expect("valid model")
}

/// The chart `Z_00 = 1` of the Segre embedding `CP^1 x CP^2 -> CP^5`:
/// `(t1, t2, s) -> (t1, t2, s, s t1, s t2)`.
pub fn segre_p1xp2_chart() -> AffineChartModel {
    AffineChartModel::from_integer_terms(
        "Segre CP1xCP2 chart",
        3,
        1,
        3,
        20.0,
        &[
            &[(1, &[1, 0, 0])],
            &[(1, &[0, 1, 0])],
            &[(1, &[0, 0, 1])],
            &[(1, &[1, 0, 1])],
            &[(1, &[0, 1, 1])],
        ],
    )
    .expect("valid model")
}

/// The parabola `u -> (u, u^2)`, a defect-zero curve control.
pub fn parabola() -> AffineChartModel {
    AffineChartModel::from_integer_terms("parabola z2 = z1^2", 1, 0, 1, 20.0, &[&[(1, &[1])], &[(1, &[2])]])
        .expect("valid model")
}
