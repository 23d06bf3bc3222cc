use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::QhError;
use crate::exact_rings::{Coefficient, GradingSpec, LaurentPoly};
use crate::linalg::Matrix;

/// A named basis class of even cohomological degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Self { name: name.into(), degree }
    }
}

/// Degree of an element of a graded quantum cohomology ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementDegree {
    Zero,
    Homogeneous(i64),
    Mixed,
}

impl ElementDegree {
    pub fn value(self) -> Option<i64> {
        match self {
            ElementDegree::Homogeneous(d) => Some(d),
            _ => None,
        }
    }
}

impl fmt::Display for ElementDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementDegree::Zero => write!(f, "zero"),
            ElementDegree::Homogeneous(d) => write!(f, "{d}"),
            ElementDegree::Mixed => write!(f, "mixed"),
        }
    }
}

/// Coordinates of a class in the module basis of a presentation.
#[derive(Clone, Debug, PartialEq)]
pub struct QhElement<R> {
    coords: Vec<R>,
}

impl<R: Coefficient> QhElement<R> {
    pub fn zero(rank: usize) -> Self {
        Self { coords: vec![R::zero(); rank] }
    }

    pub fn from_coords(coords: Vec<R>) -> Self {
        Self { coords }
    }

    /// The `i`-th basis vector.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut out = Self::zero(rank);
        out.coords[i] = R::one();
        out
    }

    pub fn coords(&self) -> &[R] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &R {
        &self.coords[i]
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Coefficient::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.plus(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.minus(b)).collect() }
    }

    pub fn scale(&self, c: &R) -> Self {
        Self { coords: self.coords.iter().map(|a| a.times(c)).collect() }
    }

    pub fn map<S: Coefficient>(&self, f: impl Fn(&R) -> S) -> QhElement<S> {
        QhElement { coords: self.coords.iter().map(f).collect() }
    }
}

impl QhElement<LaurentPoly> {
    /// The cohomology coordinates multiplying `q^i`.
    pub fn degree_component(&self, i: i64) -> Vec<BigInt> {
        self.coords.iter().map(|c| c.coeff(i)).collect()
    }
}

/// Coordinates of the `q^i` part of `a`; the notation `(a)_i`.
pub fn extract_degree_component(a: &QhElement<LaurentPoly>, i: i64) -> Vec<BigInt> {
    a.degree_component(i)
}

/// A quantum cohomology ring presented as a free module over a coefficient
/// ring, with its Poincaré pairing and structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct RingPresentation<R> {
    name: String,
    basis: Vec<BasisElement>,
    grading: GradingSpec,
    dimension: usize,
    unit_index: usize,
    pairing: Vec<Vec<i64>>,
    products: Vec<Vec<QhElement<R>>>,
    cup: Option<Vec<Vec<Vec<BigInt>>>>,
    classes: BTreeMap<String, QhElement<R>>,
}

/// Raw data for building a presentation.
#[derive(Clone, Debug)]
pub struct PresentationData<R> {
    pub name: String,
    pub basis: Vec<BasisElement>,
    pub grading: GradingSpec,
    /// Complex dimension `n`; basis degrees lie in `[0, 2n]`.
    pub dimension: usize,
    pub pairing: Vec<Vec<i64>>,
    /// `products[i][j]` are the coordinates of `e_i * e_j`.
    pub products: Vec<Vec<QhElement<R>>>,
    /// Declared classical cup product, when known.
    pub cup: Option<Vec<Vec<Vec<BigInt>>>>,
    pub classes: BTreeMap<String, QhElement<R>>,
}

impl<R: Coefficient> RingPresentation<R> {
    /// Validates the shape of the data. Algebraic axioms are checked
    /// separately by [`RingPresentation::check_ring_axioms`].
    pub fn new(data: PresentationData<R>) -> Result<Self, QhError> {
        let rank = data.basis.len();
        if rank == 0 {
            return Err(QhError::Shape("empty basis".into()));
        }
        for b in &data.basis {
            if b.degree % 2 != 0 {
                return Err(QhError::OddDegree { name: b.name.clone(), degree: b.degree });
            }
            if b.degree < 0 || b.degree > 2 * data.dimension as i64 {
                return Err(QhError::Shape(format!(
                    "basis class {} has degree {} outside [0, {}]",
                    b.name,
                    b.degree,
                    2 * data.dimension
                )));
            }
        }
        let mut names: Vec<&str> = data.basis.iter().map(|b| b.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(QhError::Shape("duplicate basis names".into()));
        }
        let units: Vec<usize> =
            data.basis.iter().enumerate().filter(|(_, b)| b.degree == 0).map(|(i, _)| i).collect();
        let unit_index = match units.as_slice() {
            [i] => *i,
            [] => return Err(QhError::Shape("no basis class of degree 0".into())),
            _ => return Err(QhError::Shape("more than one basis class of degree 0".into())),
        };
        if data.pairing.len() != rank || data.pairing.iter().any(|r| r.len() != rank) {
            return Err(QhError::Shape(format!("pairing must be {rank}x{rank}")));
        }
        if data.products.len() != rank
            || data.products.iter().any(|r| r.len() != rank || r.iter().any(|e| e.rank() != rank))
        {
            return Err(QhError::Shape(format!("structure constants must be {rank}x{rank}x{rank}")));
        }
        if let Some(cup) = &data.cup {
            if cup.len() != rank || cup.iter().any(|r| r.len() != rank || r.iter().any(|e| e.len() != rank)) {
                return Err(QhError::Shape(format!("cup table must be {rank}x{rank}x{rank}")));
            }
        }
        for (name, c) in &data.classes {
            if c.rank() != rank {
                return Err(QhError::Shape(format!("class {name} has wrong rank")));
            }
        }
        Ok(Self {
            name: data.name,
            basis: data.basis,
            grading: data.grading,
            dimension: data.dimension,
            unit_index,
            pairing: data.pairing,
            products: data.products,
            cup: data.cup,
            classes: data.classes,
        })
    }

    pub fn into_data(self) -> PresentationData<R> {
        PresentationData {
            name: self.name,
            basis: self.basis,
            grading: self.grading,
            dimension: self.dimension,
            pairing: self.pairing,
            products: self.products,
            cup: self.cup,
            classes: self.classes,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn grading(&self) -> GradingSpec {
        self.grading
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn unit_index(&self) -> usize {
        self.unit_index
    }

    pub fn pairing(&self) -> &[Vec<i64>] {
        &self.pairing
    }

    pub fn declared_cup(&self) -> Option<&Vec<Vec<Vec<BigInt>>>> {
        self.cup.as_ref()
    }

    pub fn classes(&self) -> &BTreeMap<String, QhElement<R>> {
        &self.classes
    }

    pub fn structure_constant(&self, i: usize, j: usize) -> &QhElement<R> {
        &self.products[i][j]
    }

    pub fn set_class(&mut self, name: impl Into<String>, value: QhElement<R>) {
        self.classes.insert(name.into(), value);
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn one(&self) -> QhElement<R> {
        QhElement::basis(self.rank(), self.unit_index)
    }

    pub fn basis_element(&self, name: &str) -> Option<QhElement<R>> {
        self.index_of(name).map(|i| QhElement::basis(self.rank(), i))
    }

    /// A named distinguished class, or a basis class by name.
    pub fn class(&self, name: &str) -> Result<QhElement<R>, QhError> {
        self.classes
            .get(name)
            .cloned()
            .or_else(|| self.basis_element(name))
            .ok_or_else(|| QhError::UnknownClass(name.to_string()))
    }

    /// Builds an element from integer coordinates given by basis name.
    pub fn element_from_ints(&self, coeffs: &[(&str, i64)]) -> Result<QhElement<R>, QhError> {
        let mut out: QhElement<R> = QhElement::zero(self.rank());
        for (name, c) in coeffs {
            let i = self.index_of(name).ok_or_else(|| QhError::UnknownClass(name.to_string()))?;
            out.coords[i] = out.coords[i].plus(&R::from_int(BigInt::from(*c)));
        }
        Ok(out)
    }

    /// Degree of `a` in the grading where `deg q = 2C` and `T` has degree 0.
    pub fn degree_of(&self, a: &QhElement<R>) -> ElementDegree {
        let mut deg = None;
        for (i, c) in a.coords.iter().enumerate() {
            for e in c.q_exponents() {
                let d = self.basis[i].degree + self.grading.monomial_degree(e);
                match deg {
                    None => deg = Some(d),
                    Some(prev) if prev != d => return ElementDegree::Mixed,
                    _ => {}
                }
            }
        }
        deg.map_or(ElementDegree::Zero, ElementDegree::Homogeneous)
    }

    /// Bilinear extension of the structure constants, without any degree
    /// bookkeeping.
    pub fn product_unchecked(&self, a: &QhElement<R>, b: &QhElement<R>) -> QhElement<R> {
        let n = self.rank();
        let mut out: QhElement<R> = QhElement::zero(n);
        for (i, ai) in a.coords.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coords.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai.times(bj);
                for (k, s) in self.products[i][j].coords.iter().enumerate() {
                    if !s.is_zero() {
                        out.coords[k] = out.coords[k].plus(&c.times(s));
                    }
                }
            }
        }
        out
    }

    /// The quantum product `a * b`.
    ///
    /// When both factors are homogeneous the product must be homogeneous of
    /// the summed degree; a presentation whose constants break this yields
    /// [`QhError::DegreeMismatch`].
    pub fn quantum_mul(&self, a: &QhElement<R>, b: &QhElement<R>) -> Result<QhElement<R>, QhError> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        let out = self.product_unchecked(a, b);
        if let (ElementDegree::Homogeneous(da), ElementDegree::Homogeneous(db)) =
            (self.degree_of(a), self.degree_of(b))
        {
            match self.degree_of(&out) {
                ElementDegree::Zero => {}
                ElementDegree::Homogeneous(d) if d == da + db => {}
                other => {
                    return Err(QhError::DegreeMismatch {
                        expected: da + db,
                        found: other.to_string(),
                    })
                }
            }
        }
        Ok(out)
    }

    /// Classical cup product: the `q^0 T^0` part of the structure constants
    /// (or the declared cup table), extended bilinearly.
    pub fn cup_mul(&self, a: &QhElement<R>, b: &QhElement<R>) -> QhElement<R> {
        let n = self.rank();
        let mut out: QhElement<R> = QhElement::zero(n);
        for (i, ai) in a.coords.iter().enumerate() {
            for (j, bj) in b.coords.iter().enumerate() {
                if ai.is_zero() || bj.is_zero() {
                    continue;
                }
                let c = ai.times(bj);
                for k in 0..n {
                    let s = self.classical_constant(i, j, k);
                    if !s.is_zero() {
                        out.coords[k] = out.coords[k].plus(&c.times(&R::from_int(s)));
                    }
                }
            }
        }
        out
    }

    fn classical_constant(&self, i: usize, j: usize, k: usize) -> BigInt {
        match &self.cup {
            Some(cup) => cup[i][j][k].clone(),
            None => self.products[i][j].coords[k].constant_term(),
        }
    }

    /// Matrix of `x -> a * x` in the module basis: column `j` holds `a * e_j`.
    pub fn mul_matrix(&self, a: &QhElement<R>) -> Matrix<R> {
        let n = self.rank();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let col = self.product_unchecked(a, &QhElement::basis(n, j));
            for i in 0..n {
                m[(i, j)] = col.coords[i].clone();
            }
        }
        m
    }

    /// `<a, b>`, the Poincaré pairing extended bilinearly over the
    /// coefficients.
    pub fn pair(&self, a: &QhElement<R>, b: &QhElement<R>) -> R {
        let mut acc = R::zero();
        for (i, ai) in a.coords.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coords.iter().enumerate() {
                let g = self.pairing[i][j];
                if g != 0 && !bj.is_zero() {
                    acc = acc.plus(&ai.times(bj).times(&R::from_int(BigInt::from(g))));
                }
            }
        }
        acc
    }

    /// Number of basis classes in each even degree `0, 2, ..., 2n`.
    pub fn graded_ranks(&self) -> Vec<usize> {
        let mut out = vec![0; self.dimension + 1];
        for b in &self.basis {
            out[(b.degree / 2) as usize] += 1;
        }
        out
    }

    fn check_rank(&self, a: &QhElement<R>) -> Result<(), QhError> {
        if a.rank() != self.rank() {
            return Err(QhError::Shape(format!(
                "element has {} coordinates, ring has rank {}",
                a.rank(),
                self.rank()
            )));
        }
        Ok(())
    }

    /// Human-readable form such as `2alpha + (q)beta`.
    pub fn format_element(&self, a: &QhElement<R>) -> String {
        let mut parts = Vec::new();
        for (i, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = &self.basis[i].name;
            let coeff = c.to_string();
            let is_unit_class = i == self.unit_index;
            let part = match (coeff.as_str(), is_unit_class) {
                (_, true) => format!("({coeff})"),
                ("1", false) => name.clone(),
                _ => format!("({coeff}){name}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Maps the coefficients of every structure constant and class.
    pub fn map_coefficients<S: Coefficient>(
        &self,
        name: impl Into<String>,
        f: impl Fn(&R) -> S,
    ) -> RingPresentation<S> {
        RingPresentation {
            name: name.into(),
            basis: self.basis.clone(),
            grading: self.grading,
            dimension: self.dimension,
            unit_index: self.unit_index,
            pairing: self.pairing.clone(),
            products: self
                .products
                .iter()
                .map(|row| row.iter().map(|e| e.map(&f)).collect())
                .collect(),
            cup: self.cup.clone(),
            classes: self.classes.iter().map(|(k, v)| (k.clone(), v.map(&f))).collect(),
        }
    }
}

/// Integer determinant by fraction-free elimination.
pub(crate) fn integer_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}
