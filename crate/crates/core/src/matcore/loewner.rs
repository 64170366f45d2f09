use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matcore::eigen::sym_eig;
use crate::matcore::matrix::SymMatrix;
use crate::scalar::Scalar;

/// Relative tolerance used when none is given.
pub const DEFAULT_LOEWNER_TOL: f64 = 1e-8;

/// Outcome of comparing `A ≤ B`; `margin` is `λ_min(B − A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Ordering {
    Holds { margin: f64 },
    Fails { margin: f64 },
}

impl Ordering {
    pub fn holds(&self) -> bool {
        matches!(self, Ordering::Holds { .. })
    }

    pub fn margin(&self) -> f64 {
        match *self {
            Ordering::Holds { margin } | Ordering::Fails { margin } => margin,
        }
    }
}

/// Scale used to make Loewner tolerances relative: `max(1, ‖A‖_F, ‖B‖_F)`.
pub fn loewner_scale<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>) -> f64 {
    1f64.max(a.frobenius_norm()).max(b.frobenius_norm())
}

/// `A ≤ B` in the Loewner order: `B − A` positive semidefinite up to
/// `tol · max(1, ‖A‖_F, ‖B‖_F)`.
pub fn loewner_leq<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>, tol: f64) -> Result<Ordering> {
    a.check_same_dim(b)?;
    let margin = sym_eig(&b.sub(a))?.min_eigenvalue();
    let allowed = -tol * loewner_scale(a, b);
    Ok(if margin >= allowed {
        Ordering::Holds { margin }
    } else {
        Ordering::Fails { margin }
    })
}
