//! Dense matrices over the coefficient rings.
//!
//! Determinants and adjugates over an arbitrary commutative coefficient ring
//! use the division-free Berkowitz algorithm. Over `Z[q, q^-1]` the
//! determinant and linear solves also have a fraction-free Bareiss route,
//! which needs exact division.

use std::fmt;

use crate::exact_rings::{Coefficient, LaurentPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Coefficient> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = &out[(i, j)];
                    out[(i, j)] = cur.plus(&a.times(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(R::zero(), |acc, (a, b)| acc.plus(&a.times(b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.times(c)).collect(),
        }
    }

    pub fn map<S: Coefficient>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Coefficients `[1, c_1, ..., c_n]` of `det(x I - A) = sum c_i x^(n-i)`,
    /// computed without division (Berkowitz).
    pub fn char_poly(&self) -> Vec<R> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![R::one()];
        for r in 0..n {
            // Leading r x r block M, new row R = a[r][0..r], new column C = a[0..r][r].
            let a_rr = self[(r, r)].clone();
            // Toeplitz first column: 1, -a_rr, -R C, -R M C, ..., -R M^(r-1) C.
            let mut toeplitz = Vec::with_capacity(r + 2);
            toeplitz.push(R::one());
            toeplitz.push(a_rr.negated());
            let mut mc: Vec<R> = (0..r).map(|i| self[(i, r)].clone()).collect();
            for k in 0..r {
                let rc = (0..r).fold(R::zero(), |acc, j| acc.plus(&self[(r, j)].times(&mc[j])));
                toeplitz.push(rc.negated());
                if k + 1 < r {
                    mc = (0..r)
                        .map(|i| (0..r).fold(R::zero(), |acc, j| acc.plus(&self[(i, j)].times(&mc[j]))))
                        .collect();
                }
            }
            let mut next = vec![R::zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = R::zero();
                for (j, c) in coeffs.iter().enumerate() {
                    if i >= j {
                        acc = acc.plus(&toeplitz[i - j].times(c));
                    }
                }
                *slot = acc;
            }
            coeffs = next;
        }
        coeffs
    }

    /// Division-free determinant.
    pub fn det_berkowitz(&self) -> R {
        let n = self.rows;
        let c = self.char_poly();
        if n % 2 == 0 {
            c[n].clone()
        } else {
            c[n].negated()
        }
    }

    /// Adjugate via Cayley–Hamilton:
    /// `adj A = (-1)^(n-1) (A^(n-1) + c_1 A^(n-2) + ... + c_(n-1) I)`.
    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        if n == 0 {
            return Self::zeros(0, 0);
        }
        let c = self.char_poly();
        let mut acc = Self::identity(n);
        for ci in c.iter().take(n).skip(1) {
            acc = self.mul(&acc).add(&Self::identity(n).scale(ci));
        }
        if n % 2 == 0 {
            acc.scale(&R::one().negated())
        } else {
            acc
        }
    }
}

impl<R> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.cols + j]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.cols + j]
    }
}

impl<R: fmt::Display> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Multiplies every entry by `q^s` so that all exponents are nonnegative,
/// returning the cleared matrix and `s`.
fn clear_to_polynomial(m: &Matrix<LaurentPoly>) -> (Matrix<LaurentPoly>, i64) {
    let low = m.data.iter().filter_map(LaurentPoly::min_exp).min().unwrap_or(0);
    let s = (-low).max(0);
    (m.map(|p| p.shift(s)), s)
}

/// Fraction-free Gaussian elimination on `m` (in place), with row pivoting.
/// Returns the sign of the row permutation, or `None` if `m` is singular.
fn bareiss_eliminate(m: &mut Matrix<LaurentPoly>, pivot_cols: usize) -> Option<bool> {
    let n = m.rows;
    let mut negate = false;
    let mut prev = LaurentPoly::one();
    for k in 0..pivot_cols.min(n) {
        let pivot_row = (k..n).find(|&i| !m[(i, k)].is_zero())?;
        if pivot_row != k {
            for j in 0..m.cols {
                m.data.swap(k * m.cols + j, pivot_row * m.cols + j);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..m.cols {
                let num = &(&m[(k, k)] * &m[(i, j)]) - &(&m[(i, k)] * &m[(k, j)]);
                m[(i, j)] = num
                    .div_exact(&prev)
                    .expect("Bareiss step must divide exactly");
            }
            m[(i, k)] = LaurentPoly::zero();
        }
        prev = m[(k, k)].clone();
    }
    Some(negate)
}

/// Determinant over `Z[q, q^-1]` by clearing to `Z[q]` and running
/// fraction-free Bareiss elimination.
pub fn det_bareiss(m: &Matrix<LaurentPoly>) -> LaurentPoly {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return LaurentPoly::one();
    }
    let (mut cleared, s) = clear_to_polynomial(m);
    match bareiss_eliminate(&mut cleared, n) {
        None => LaurentPoly::zero(),
        Some(negate) => {
            let d = cleared[(n - 1, n - 1)].shift(-(n as i64) * s);
            if negate {
                -d
            } else {
                d
            }
        }
    }
}

/// Solves `m x = b` over `Z[q, q^-1]` when `det m` is a unit, by
/// fraction-free elimination of the augmented system followed by
/// fraction-free back substitution. Returns `None` if `det m` is not a unit.
pub fn solve_unit_det(m: &Matrix<LaurentPoly>, b: &[LaurentPoly]) -> Option<Vec<LaurentPoly>> {
    assert!(m.is_square() && m.rows == b.len(), "dimension mismatch");
    let n = m.rows;
    if n == 0 {
        return Some(Vec::new());
    }
    let (cleared, s) = clear_to_polynomial(m);
    let mut aug = Matrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = cleared[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let negate = bareiss_eliminate(&mut aug, n)?;
    let det_cleared = aug[(n - 1, n - 1)].clone();
    let det_signed = if negate { -&det_cleared } else { det_cleared.clone() };
    let det = det_signed.shift(-(n as i64) * s);
    det.unit_inverse()?;
    // After elimination, row i reads U_ii x_i + sum_{j>i} U_ij x_j = c_i with
    // U_(n-1)(n-1) = det (up to sign). Solve for y = det_cleared * x.
    let mut y = vec![LaurentPoly::zero(); n];
    for i in (0..n).rev() {
        let mut acc = &det_cleared * &aug[(i, n)];
        for j in i + 1..n {
            acc = &acc - &(&aug[(i, j)] * &y[j]);
        }
        y[i] = acc.div_exact(&aug[(i, i)])?;
    }
    // x_cleared = y / det_cleared; then undo the q^s scaling of m.
    let inv = det_cleared.unit_inverse()?;
    Some(y.iter().map(|yi| (yi * &inv).shift(s)).collect())
}
