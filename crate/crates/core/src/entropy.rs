//! Operator `(α, β)`-geometric means, relative operator entropies and the
//! weighted harmonic/geometric/arithmetic means.
//!
//! With `C = A^{-β/2} B A^{-β/2}`:
//!
//! | operator | generator `g` in `A^{β/2} g(C) A^{β/2}` |
//! |----------|------------------------------------------|
//! | `A #_{(α,β)} B` | `x^α` |
//! | `S_{α,β}(A\|B)` | `x^α ln x` |
//! | `S_α(A\|B)` | same, `β = 1` |
//! | `S(A\|B)` | `ln x`, `β = 1` |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::ScalarFn;
use crate::matcore::{mat_inv_pd, mat_pow, require_positive, Elementary, SymMatrix};
use crate::perspective::{congruence, PreparedPerspective};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyParams {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl EntropyParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            lambda: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidParameter("alpha and beta must be finite".into()));
        }
        if let Some(l) = self.lambda {
            check_lambda(l)?;
        }
        Ok(())
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("lambda = {lambda} is outside [0, 1]")))
    }
}

/// The perspective of `(B, A)` with weight `h(t) = t^β`, prepared once and
/// shared by every operator evaluated on the same `(A, B, β)`.
#[derive(Debug, Clone)]
pub struct EntropyContext<T> {
    prepared: PreparedPerspective<T>,
    beta: f64,
}

impl<T: Scalar> EntropyContext<T> {
    pub fn new(a: &SymMatrix<T>, b: &SymMatrix<T>, beta: f64) -> Result<Self> {
        require_positive(b, "B")?;
        let prepared = PreparedPerspective::new(&Elementary::Pow(beta), b, a)?;
        Ok(Self { prepared, beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Spectrum of `C = A^{-β/2} B A^{-β/2}`.
    pub fn inner_spectrum(&self) -> &[f64] {
        self.prepared.inner_eigenvalues()
    }

    pub fn prepared(&self) -> &PreparedPerspective<T> {
        &self.prepared
    }

    /// `A^{β/2} g(C) A^{β/2}`.
    pub fn term(&self, g: &ScalarFn) -> Result<SymMatrix<T>> {
        self.prepared.eval(g)
    }

    pub fn geo_mean(&self, alpha: f64) -> Result<SymMatrix<T>> {
        self.term(&ScalarFn::Power { alpha })
    }

    pub fn rel_entropy(&self, alpha: f64) -> Result<SymMatrix<T>> {
        self.term(&ScalarFn::Entropy { alpha })
    }
}

/// `A #_{(α,β)} B = A^{β/2} (A^{-β/2} B A^{-β/2})^α A^{β/2}`, evaluated
/// literally from matrix powers and congruences.
pub fn geo_mean<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>, alpha: f64, beta: f64) -> Result<SymMatrix<T>> {
    a.check_same_dim(b)?;
    require_positive(a, "A")?;
    require_positive(b, "B")?;
    let c = congruence(b, a, -beta)?;
    congruence(&mat_pow(&c, alpha)?, a, beta)
}

/// `S(A|B) = A^{1/2} log(A^{-1/2} B A^{-1/2}) A^{1/2}`.
pub fn rel_entropy<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>) -> Result<SymMatrix<T>> {
    rel_entropy_alpha_beta(a, b, 0.0, 1.0)
}

/// `S_α(A|B)`, the case `β = 1`.
pub fn rel_entropy_alpha<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>, alpha: f64) -> Result<SymMatrix<T>> {
    rel_entropy_alpha_beta(a, b, alpha, 1.0)
}

/// `S_{α,β}(A|B) = A^{β/2} [C^α log C] A^{β/2}`.
pub fn rel_entropy_alpha_beta<T: Scalar>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    alpha: f64,
    beta: f64,
) -> Result<SymMatrix<T>> {
    EntropyContext::new(a, b, beta)?.rel_entropy(alpha)
}

/// Weighted harmonic, geometric and arithmetic means of `A` and `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Means<T> {
    pub harmonic: SymMatrix<T>,
    pub geometric: SymMatrix<T>,
    pub arithmetic: SymMatrix<T>,
}

/// `((1−λ)A⁻¹ + λB⁻¹)⁻¹`, `A #_λ B`, `(1−λ)A + λB`.
pub fn weighted_means<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>, lambda: f64) -> Result<Means<T>> {
    check_lambda(lambda)?;
    a.check_same_dim(b)?;
    let inv_a = mat_inv_pd(a)?;
    let inv_b = mat_inv_pd(b)?;
    let harmonic = mat_inv_pd(&inv_a.scaled(1.0 - lambda).add(&inv_b.scaled(lambda)))?;
    let geometric = geo_mean(a, b, lambda, 1.0)?;
    let arithmetic = a.scaled(1.0 - lambda).add(&b.scaled(lambda));
    Ok(Means {
        harmonic,
        geometric,
        arithmetic,
    })
}
