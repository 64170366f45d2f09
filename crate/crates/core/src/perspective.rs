//! Noncommutative perspective `P_{f△h}(A, B) = h(B)^{1/2} f(h(B)^{-1/2} A h(B)^{-1/2}) h(B)^{1/2}`.
//!
//! Every entropy, mean and bound operator in the crate is one call into
//! [`PreparedPerspective::eval`]. Preparing once per `(A, B, h)` shares the
//! inner decomposition across all generators evaluated on the same pair.

use crate::error::{Error, Result};
use crate::matcore::funcalc::eval_on_spectrum;
use crate::matcore::{require_positive, sym_eig, EigenPair, SpectralFn, SymMatrix};
use crate::scalar::Scalar;

/// The pair `(f, h)` defining a perspective; `h` must be positive on the
/// spectrum of the second argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerspectiveSpec<F, H> {
    pub f: F,
    pub h: H,
}

/// `h(B)^{1/2}` and the decomposition of the inner matrix
/// `h(B)^{-1/2} A h(B)^{-1/2}`, ready for any outer function `f`.
#[derive(Debug, Clone)]
pub struct PreparedPerspective<T> {
    outer: SymMatrix<T>,
    inner: EigenPair<T>,
}

impl<T: Scalar> PreparedPerspective<T> {
    pub fn new<H: SpectralFn + ?Sized>(h: &H, a: &SymMatrix<T>, b: &SymMatrix<T>) -> Result<Self> {
        a.check_same_dim(b)?;
        let eig_b = require_positive(b, "perspective base B")?;
        let hb = eval_on_spectrum(h, &eig_b.eigenvalues, "perspective base B")?;
        if let Some(&bad) = hb.iter().find(|&&v| v <= 0.0) {
            return Err(Error::Domain {
                what: "perspective weight h(B)".into(),
                function: h.name(),
                eigenvalue: bad,
            });
        }
        let half: Vec<f64> = hb.iter().map(|v| v.sqrt()).collect();
        let neg_half: Vec<f64> = half.iter().map(|v| 1.0 / v).collect();
        let outer = eig_b.recompose(&half);
        let inner_m = a.sandwiched(&eig_b.recompose(&neg_half));
        Ok(Self {
            outer,
            inner: sym_eig(&inner_m)?,
        })
    }

    /// Spectrum of the inner matrix (ascending).
    pub fn inner_eigenvalues(&self) -> &[f64] {
        &self.inner.eigenvalues
    }

    pub fn inner(&self) -> &EigenPair<T> {
        &self.inner
    }

    /// `h(B)^{1/2}`.
    pub fn outer(&self) -> &SymMatrix<T> {
        &self.outer
    }

    pub fn eval<F: SpectralFn + ?Sized>(&self, f: &F) -> Result<SymMatrix<T>> {
        let values = eval_on_spectrum(f, &self.inner.eigenvalues, "perspective inner matrix")?;
        Ok(self.eval_values(&values))
    }

    /// Perspective for an outer function already evaluated on the inner spectrum.
    pub fn eval_values(&self, values: &[f64]) -> SymMatrix<T> {
        self.inner.recompose(values).sandwiched(&self.outer)
    }
}

pub fn perspective<T, F, H>(spec: &PerspectiveSpec<F, H>, a: &SymMatrix<T>, b: &SymMatrix<T>) -> Result<SymMatrix<T>>
where
    T: Scalar,
    F: SpectralFn,
    H: SpectralFn,
{
    PreparedPerspective::new(&spec.h, a, b)?.eval(&spec.f)
}

/// `B^{e/2} X B^{e/2}` for strictly positive `B`.
pub fn congruence<T: Scalar>(x: &SymMatrix<T>, b: &SymMatrix<T>, exponent: f64) -> Result<SymMatrix<T>> {
    x.check_same_dim(b)?;
    let eig = require_positive(b, "congruence factor B")?;
    let half = exponent / 2.0;
    let factor = eig.map(|l| if half == 0.0 { 1.0 } else { l.powf(half) });
    Ok(x.sandwiched(&factor))
}
