//! Cyclic Jacobi eigensolver for real symmetric and complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real rotation that annihilates it.
//! Sweeps run over all `(p, q)` pairs in row order until the off-diagonal
//! Frobenius norm falls below `1e-13 · ‖M‖_F`.

use crate::error::{Error, Result};
use crate::matcore::matrix::{Matrix, SymMatrix};
use crate::scalar::Scalar;

pub const MAX_SWEEPS: usize = 64;
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Spectral decomposition `M = U · diag(λ) · U*`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<T> {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns, one per eigenvalue.
    pub eigenvectors: Matrix<T>,
}

impl<T: Scalar> EigenPair<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// `U · diag(values) · U*` for externally supplied spectral values.
    pub fn recompose(&self, values: &[f64]) -> SymMatrix<T> {
        let n = self.dim();
        debug_assert_eq!(values.len(), n);
        let u = &self.eigenvectors;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = T::zero();
                for (k, &v) in values.iter().enumerate() {
                    if v != 0.0 {
                        acc += (u[(i, k)] * u[(j, k)].conj()).scale(v);
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        SymMatrix::hermitian_part(&out)
    }

    /// `U · diag(f(λ)) · U*` without domain checks.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymMatrix<T> {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.recompose(&values)
    }

    /// `max |(U*U - I)_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let u = &self.eigenvectors;
        let g = u.adjoint().matmul(u);
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((g[(i, j)] - target).modulus());
            }
        }
        worst
    }
}

fn off_diagonal_norm<T: Scalar>(a: &Matrix<T>) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a self-adjoint matrix.
///
/// Deterministic for identical input bits: eigenvalues ascending, and each
/// eigenvector column scaled so its largest-modulus component (first one on
/// ties) is real and positive.
pub fn sym_eig<T: Scalar>(m: &SymMatrix<T>) -> Result<EigenPair<T>> {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    let mut v = Matrix::<T>::identity(n);

    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let done = off_diagonal_norm(&a) <= threshold;
        // one sweep past the threshold: convergence is quadratic, so this
        // takes the eigenvector error from ~threshold/gap down to rounding
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        if done {
            converged = true;
            break;
        }
    }
    if !converged {
        let off_norm = off_diagonal_norm(&a);
        if off_norm > threshold {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off_norm,
            });
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = Matrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        let mut pivot = 0;
        let mut best = -1.0;
        for r in 0..n {
            let mag = v[(r, src)].modulus();
            if mag > best {
                best = mag;
                pivot = r;
            }
        }
        let fix = v[(pivot, src)].phase().conj();
        for r in 0..n {
            eigenvectors[(r, col)] = v[(r, src)] * fix;
        }
        // the pivot component is exactly real after the phase fix
        let p = eigenvectors[(pivot, col)];
        eigenvectors[(pivot, col)] = T::from_re(p.re());
    }

    Ok(EigenPair {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate<T: Scalar>(a: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.modulus();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re();
    let aqq = a[(q, q)].re();
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sgn = if theta < 0.0 { -1.0 } else { 1.0 };
        sgn / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // unitary block [[g00, g01], [g10, g11]] = diag(1, w) · [[c, s], [-s, c]]
    let w = apq.phase().conj();
    let g00 = T::from_re(c);
    let g01 = T::from_re(s);
    let g10 = w.scale(-s);
    let g11 = w.scale(c);

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g00 + akq * g10;
        a[(k, q)] = akp * g01 + akq * g11;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
        a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
    }
    a[(p, q)] = T::zero();
    a[(q, p)] = T::zero();
    a[(p, p)] = T::from_re(a[(p, p)].re());
    a[(q, q)] = T::from_re(a[(q, q)].re());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g00 + vkq * g10;
        v[(k, q)] = vkp * g01 + vkq * g11;
    }
}
