use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative tolerance on `|M - M*|` accepted by [`SymMatrix::new`].
pub const SELF_ADJOINT_TOL: f64 = 1e-13;

/// Dense square matrix, row-major. Used for intermediate products that are
/// not self-adjoint by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_row_major(dim: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Malformed(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let n = self.dim;
        debug_assert_eq!(n, rhs.dim);
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, &r) in orow.iter_mut().zip(rrow) {
                    *o += a * r;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_map(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_map(rhs, |a, b| a - b)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x.scale(k)).collect(),
        }
    }

    fn zip_map(&self, rhs: &Self, f: impl Fn(T, T) -> T) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus of `M - M*`.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self[(i, j)] - self[(j, i)].conj()).modulus();
                worst = worst.max(d);
            }
        }
        worst
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.dim + j]
    }
}

/// A dense self-adjoint matrix.
///
/// Entries agree with their conjugate transpose to within
/// `1e-13 · max(1, ‖M‖_F)`; every constructor either checks that or
/// produces it by taking the Hermitian part.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    inner: Matrix<T>,
}

impl<T: Scalar> SymMatrix<T> {
    /// Validates self-adjointness and keeps the entries as given.
    pub fn new(m: Matrix<T>) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::Malformed("dimension must be at least 1".into()));
        }
        if let Some(bad) = m.as_slice().iter().find(|x| !x.is_finite()) {
            return Err(Error::Malformed(format!("non-finite entry {bad:?}")));
        }
        let allowed = SELF_ADJOINT_TOL * m.frobenius_norm().max(1.0);
        let max_asymmetry = m.max_asymmetry();
        if max_asymmetry > allowed {
            return Err(Error::NotSelfAdjoint {
                max_asymmetry,
                allowed,
            });
        }
        Ok(Self { inner: m })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Malformed("rows must form a square matrix".into()));
        }
        Self::new(Matrix::from_row_major(dim, rows.concat())?)
    }

    /// `(M + M*) / 2`, with the diagonal made exactly real.
    pub fn hermitian_part(m: &Matrix<T>) -> Self {
        let n = m.dim();
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            out[(i, i)] = T::from_re(m[(i, i)].re());
            for j in (i + 1)..n {
                let v = (m[(i, j)] + m[(j, i)].conj()).scale(0.5);
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        Self { inner: out }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: Matrix::identity(dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: Matrix::zeros(dim),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Matrix::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = T::from_re(v);
        }
        Self { inner: m }
    }

    pub fn scalar(v: f64) -> Self {
        Self::diagonal(&[v])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn field(&self) -> crate::scalar::Field {
        T::FIELD
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.inner[(i, j)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    pub fn diag_re(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re()).collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            inner: self.inner.add(&rhs.inner),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            inner: self.inner.sub(&rhs.inner),
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            inner: self.inner.scaled(k),
        }
    }

    /// `self + k·I`.
    pub fn shifted(&self, k: f64) -> Self {
        let mut m = self.inner.clone();
        for i in 0..self.dim() {
            m[(i, i)] += T::from_re(k);
        }
        Self { inner: m }
    }

    /// `X · self · X*`, re-symmetrized.
    pub fn congruent_by(&self, x: &Matrix<T>) -> Self {
        Self::hermitian_part(&x.matmul(&self.inner).matmul(&x.adjoint()))
    }

    /// `S · self · S` for self-adjoint `S`, re-symmetrized.
    pub fn sandwiched(&self, s: &SymMatrix<T>) -> Self {
        Self::hermitian_part(&s.inner.matmul(&self.inner).matmul(&s.inner))
    }

    pub fn matmul(&self, rhs: &SymMatrix<T>) -> Matrix<T> {
        self.inner.matmul(&rhs.inner)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.inner
            .as_slice()
            .iter()
            .zip(other.inner.as_slice())
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max)
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}
