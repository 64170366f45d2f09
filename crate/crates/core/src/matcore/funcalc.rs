//! Functional calculus `f(M) = U f(Λ) U*`.

use crate::error::{Error, Result};
use crate::matcore::eigen::{sym_eig, EigenPair};
use crate::matcore::matrix::SymMatrix;
use crate::scalar::Scalar;

/// Where a spectral function may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Real,
    NonNegative,
    Positive,
}

impl Domain {
    pub fn contains(self, x: f64) -> bool {
        match self {
            Domain::Real => x.is_finite(),
            Domain::NonNegative => x >= 0.0,
            Domain::Positive => x > 0.0,
        }
    }
}

/// A real function applied to self-adjoint matrices through their spectrum.
pub trait SpectralFn {
    fn eval(&self, x: f64) -> f64;
    fn domain(&self) -> Domain;
    fn name(&self) -> String;
}

impl<F: SpectralFn + ?Sized> SpectralFn for &F {
    fn eval(&self, x: f64) -> f64 {
        (**self).eval(x)
    }
    fn domain(&self) -> Domain {
        (**self).domain()
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

/// Elementary functions used as building blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Identity,
    Square,
    Sqrt,
    Log,
    Exp,
    Inv,
    /// `x^p`; negative or fractional `p` needs `x > 0`.
    Pow(f64),
}

impl SpectralFn for Elementary {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            Elementary::Identity => x,
            Elementary::Square => x * x,
            Elementary::Sqrt => x.sqrt(),
            Elementary::Log => x.ln(),
            Elementary::Exp => x.exp(),
            Elementary::Inv => 1.0 / x,
            Elementary::Pow(p) => {
                if p == 0.0 {
                    1.0
                } else if p == 1.0 {
                    x
                } else {
                    x.powf(p)
                }
            }
        }
    }

    fn domain(&self) -> Domain {
        match *self {
            Elementary::Identity | Elementary::Square | Elementary::Exp => Domain::Real,
            Elementary::Sqrt => Domain::NonNegative,
            Elementary::Log | Elementary::Inv => Domain::Positive,
            Elementary::Pow(p) => {
                if p == 0.0 || p == 1.0 || p == 2.0 {
                    Domain::Real
                } else if p > 0.0 {
                    Domain::NonNegative
                } else {
                    Domain::Positive
                }
            }
        }
    }

    fn name(&self) -> String {
        match *self {
            Elementary::Identity => "x".into(),
            Elementary::Square => "x^2".into(),
            Elementary::Sqrt => "sqrt".into(),
            Elementary::Log => "log".into(),
            Elementary::Exp => "exp".into(),
            Elementary::Inv => "1/x".into(),
            Elementary::Pow(p) => format!("x^{p}"),
        }
    }
}

/// Evaluates `f` on a spectrum, rejecting eigenvalues outside its domain
/// and non-finite results.
pub fn eval_on_spectrum<F: SpectralFn + ?Sized>(
    f: &F,
    eigenvalues: &[f64],
    what: &str,
) -> Result<Vec<f64>> {
    let domain = f.domain();
    eigenvalues
        .iter()
        .map(|&l| {
            if !domain.contains(l) {
                return Err(Error::Domain {
                    what: what.to_string(),
                    function: f.name(),
                    eigenvalue: l,
                });
            }
            let y = f.eval(l);
            if !y.is_finite() {
                return Err(Error::NonFinite {
                    function: f.name(),
                    x: l,
                });
            }
            Ok(y)
        })
        .collect()
}

/// `f(M)` from an existing decomposition.
pub fn apply_fn_eig<T: Scalar, F: SpectralFn + ?Sized>(
    eig: &EigenPair<T>,
    f: &F,
) -> Result<SymMatrix<T>> {
    let values = eval_on_spectrum(f, &eig.eigenvalues, "apply_fn")?;
    Ok(eig.recompose(&values))
}

/// `f(M) = U f(Λ) U*`.
pub fn apply_fn<T: Scalar, F: SpectralFn + ?Sized>(m: &SymMatrix<T>, f: &F) -> Result<SymMatrix<T>> {
    apply_fn_eig(&sym_eig(m)?, f)
}

/// `M^p` for strictly positive `M` (or any `M` when `p` is 0, 1 or 2).
pub fn mat_pow<T: Scalar>(m: &SymMatrix<T>, p: f64) -> Result<SymMatrix<T>> {
    apply_fn(m, &Elementary::Pow(p))
}

/// Inverse via the spectrum; requires strict positivity.
pub fn mat_inv_pd<T: Scalar>(m: &SymMatrix<T>) -> Result<SymMatrix<T>> {
    apply_fn(m, &Elementary::Inv)
}

/// Fails with a domain error unless the minimum eigenvalue is positive.
pub fn require_positive<T: Scalar>(m: &SymMatrix<T>, what: &str) -> Result<EigenPair<T>> {
    let eig = sym_eig(m)?;
    let lo = eig.min_eigenvalue();
    if lo <= 0.0 {
        return Err(Error::Domain {
            what: what.to_string(),
            function: "strict positivity".into(),
            eigenvalue: lo,
        });
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_of_identity_is_zero() {
        let z = apply_fn(&SymMatrix::<f64>::identity(3), &Elementary::Log).unwrap();
        assert_eq!(z, SymMatrix::zeros(3));
    }

    #[test]
    fn sqrt_of_diagonal_is_elementwise() {
        let r = apply_fn(&SymMatrix::<f64>::diagonal(&[4.0, 9.0]), &Elementary::Sqrt).unwrap();
        assert_eq!(r, SymMatrix::diagonal(&[2.0, 3.0]));
    }

    #[test]
    fn sqrt_of_two_by_two() {
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let r = apply_fn(&m, &Elementary::Sqrt).unwrap();
        let s3 = 3f64.sqrt();
        let expect = SymMatrix::from_rows(&[
            vec![(s3 + 1.0) / 2.0, (s3 - 1.0) / 2.0],
            vec![(s3 - 1.0) / 2.0, (s3 + 1.0) / 2.0],
        ])
        .unwrap();
        assert!(r.max_abs_diff(&expect) < 1e-14);
        assert!((r.get(0, 0) - 1.36603).abs() < 1e-5);
    }

    #[test]
    fn log_of_singular_reports_eigenvalue() {
        let m = SymMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        match apply_fn(&m, &Elementary::Log) {
            Err(Error::Domain { eigenvalue, .. }) => assert!(eigenvalue.abs() < 1e-15),
            other => panic!("expected domain error, got {other:?}"),
        }
        let neg = SymMatrix::<f64>::diagonal(&[2.0, -1.0]);
        match apply_fn(&neg, &Elementary::Inv) {
            Err(Error::Domain { eigenvalue, .. }) => assert_eq!(eigenvalue, -1.0),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn overflow_is_reported_as_non_finite() {
        let m = SymMatrix::<f64>::diagonal(&[1000.0]);
        assert!(matches!(
            apply_fn(&m, &Elementary::Exp),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn require_positive_rejects_psd_boundary() {
        assert!(require_positive(&SymMatrix::<f64>::diagonal(&[0.0, 1.0]), "B").is_err());
        assert!(require_positive(&SymMatrix::<f64>::diagonal(&[1e-300, 1.0]), "B").is_ok());
    }
}
