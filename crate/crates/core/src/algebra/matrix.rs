use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_finite_c, Real};

/// Column vector of complex amplitudes.
pub type Vector<T> = Vec<Complex<T>>;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self { dim, data: vec![Complex::new(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn diag(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged or non-finite input.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        let m = Self { dim, data };
        if !m.is_finite() {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(m)
    }

    /// Row-major construction from a flat slice; panics on a length mismatch.
    pub fn from_row_major(dim: usize, data: Vec<Complex<T>>) -> Self {
        assert!(dim >= 1 && data.len() == dim * dim, "row-major data has wrong length");
        Self { dim, data }
    }

    /// |a><b|
    pub fn outer(a: &[Complex<T>], b: &[Complex<T>]) -> Self {
        assert_eq!(a.len(), b.len(), "outer product of vectors with different lengths");
        let dim = a.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = a[i] * b[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex<T>>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|&z| is_finite_c(z))
    }

    /// Matrix product with a dimension check.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vector<T> {
        assert_eq!(v.len(), self.dim, "matrix-vector dimension mismatch");
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    /// <bra| self |ket>
    pub fn sandwich(&self, bra: &[Complex<T>], ket: &[Complex<T>]) -> Complex<T> {
        inner(bra, &self.mul_vec(ket))
    }

    /// Kronecker product `self ⊗ other`, with `self` the slow index.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// `max_ij |self_ij - other_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }

    /// Deviation from the identity in the max-entry norm.
    pub fn identity_defect(&self) -> T {
        self.max_abs_diff(&Self::identity(self.dim))
    }

    /// Induced 1-norm (max column sum).
    pub fn norm_one(&self) -> T {
        let n = self.dim;
        (0..n).map(|j| (0..n).fold(T::zero(), |acc, i| acc + self[(i, j)].norm())).fold(T::zero(), T::max)
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    /// Entry-wise `self + s * other` (axpy).
    pub fn add_scaled(&self, other: &Self, s: Complex<T>) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b * s).collect() }
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

/// Panics on dimension mismatch; use [`ComplexMatrix::try_mul`] for a checked product.
impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        self.add_scaled(rhs, Complex::new(T::one(), T::zero()))
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        self.add_scaled(rhs, Complex::new(-T::one(), T::zero()))
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

/// Checked matrix product.
pub fn mat_mul<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.try_mul(b)
}

pub fn adjoint<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.adjoint()
}

pub fn trace<T: Real>(a: &ComplexMatrix<T>) -> Complex<T> {
    a.trace()
}

/// `<a|b> = sum_i conj(a_i) b_i`.
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    assert_eq!(a.len(), b.len(), "inner product of vectors with different lengths");
    a.iter().zip(b).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

pub fn norm2<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

pub fn scale_vec<T: Real>(v: &[Complex<T>], s: Complex<T>) -> Vector<T> {
    v.iter().map(|&z| z * s).collect()
}

/// Standard single-qubit operators.
pub mod gates {
    use super::*;

    pub fn pauli_x<T: Real>() -> ComplexMatrix<T> {
        let (o, l) = (T::zero(), T::one());
        ComplexMatrix::from_row_major(
            2,
            vec![Complex::new(o, o), Complex::new(l, o), Complex::new(l, o), Complex::new(o, o)],
        )
    }

    pub fn pauli_y<T: Real>() -> ComplexMatrix<T> {
        let (o, l) = (T::zero(), T::one());
        ComplexMatrix::from_row_major(
            2,
            vec![Complex::new(o, o), Complex::new(o, -l), Complex::new(o, l), Complex::new(o, o)],
        )
    }

    pub fn pauli_z<T: Real>() -> ComplexMatrix<T> {
        let (o, l) = (T::zero(), T::one());
        ComplexMatrix::diag(&[Complex::new(l, o), Complex::new(-l, o)])
    }

    /// H = (1/√2) [[1, 1], [1, -1]]
    pub fn hadamard<T: Real>() -> ComplexMatrix<T> {
        let s = T::FRAC_1_SQRT_2();
        let o = T::zero();
        ComplexMatrix::from_row_major(
            2,
            vec![Complex::new(s, o), Complex::new(s, o), Complex::new(s, o), Complex::new(-s, o)],
        )
    }

    /// |k><k| in dimension `dim`.
    pub fn projector<T: Real>(dim: usize, k: usize) -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::zeros(dim);
        m[(k, k)] = Complex::new(T::one(), T::zero());
        m
    }
}
