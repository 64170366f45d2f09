use serde::{Deserialize, Serialize};

use crate::entropy::{geo_mean, EntropyContext};
use crate::error::{Error, Result};
use crate::functions::ScalarFn;
use crate::matcore::{apply_fn, mat_inv_pd, mat_pow, Matrix, SymMatrix};
use crate::perspective::congruence;
use crate::scalar::Scalar;

/// The bound operators. Labels follow the usual numbering, which has no `IV`.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundKind {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II")]
    II,
    #[serde(rename = "III")]
    III,
    #[serde(rename = "V")]
    V,
    #[serde(rename = "I'")]
    IPrime,
    #[serde(rename = "II'")]
    IIPrime,
    #[serde(rename = "III'")]
    IIIPrime,
    #[serde(rename = "V'")]
    VPrime,
    /// `x^α − x^{α−1}`
    #[serde(rename = "lower_shift")]
    LowerShift,
    /// `x^{α+1} − x^α`
    #[serde(rename = "upper_shift")]
    UpperShift,
    /// `1 − 1/x`
    #[serde(rename = "base_lower")]
    BaseLower,
}

impl BoundKind {
    pub const ALL: [BoundKind; 11] = [
        BoundKind::I,
        BoundKind::II,
        BoundKind::III,
        BoundKind::V,
        BoundKind::IPrime,
        BoundKind::IIPrime,
        BoundKind::IIIPrime,
        BoundKind::VPrime,
        BoundKind::LowerShift,
        BoundKind::UpperShift,
        BoundKind::BaseLower,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::I => "I",
            BoundKind::II => "II",
            BoundKind::III => "III",
            BoundKind::V => "V",
            BoundKind::IPrime => "I'",
            BoundKind::IIPrime => "II'",
            BoundKind::IIIPrime => "III'",
            BoundKind::VPrime => "V'",
            BoundKind::LowerShift => "lower_shift",
            BoundKind::UpperShift => "upper_shift",
            BoundKind::BaseLower => "base_lower",
        }
    }

    pub fn uses_delta(self) -> bool {
        matches!(
            self,
            BoundKind::IPrime | BoundKind::IIPrime | BoundKind::IIIPrime | BoundKind::VPrime
        )
    }

    /// Unprimed counterpart of a primed kind.
    pub fn unprimed(self) -> BoundKind {
        match self {
            BoundKind::IPrime => BoundKind::I,
            BoundKind::IIPrime => BoundKind::II,
            BoundKind::IIIPrime => BoundKind::III,
            BoundKind::VPrime => BoundKind::V,
            k => k,
        }
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown bound kind `{s}`")))
    }
}

fn check_delta(kind: BoundKind, delta: f64) -> Result<()> {
    if kind.uses_delta() && !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be positive")));
    }
    Ok(())
}

/// Scalar generator of `kind`; the bound operator is its perspective with
/// weight `t^β`.
pub fn scalar_generator(kind: BoundKind, alpha: f64, delta: f64) -> ScalarFn {
    ScalarFn::Bound {
        bound: kind,
        alpha,
        delta,
    }
}

/// Bound operator computed as a perspective `A^{β/2} g(C) A^{β/2}`.
pub fn bound<T: Scalar>(
    kind: BoundKind,
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    alpha: f64,
    beta: f64,
    delta: f64,
) -> Result<SymMatrix<T>> {
    check_delta(kind, delta)?;
    EntropyContext::new(a, b, beta)?.term(&scalar_generator(kind, alpha, delta))
}

/// Bound operators written out in terms of geometric means, inverses and
/// congruences, without going through the shared perspective.
pub struct ExplicitBounds<'a, T> {
    a: &'a SymMatrix<T>,
    b: &'a SymMatrix<T>,
    alpha: f64,
    beta: f64,
    a_beta: SymMatrix<T>,
    a_neg_beta: SymMatrix<T>,
}

impl<'a, T: Scalar> ExplicitBounds<'a, T> {
    pub fn new(a: &'a SymMatrix<T>, b: &'a SymMatrix<T>, alpha: f64, beta: f64) -> Result<Self> {
        a.check_same_dim(b)?;
        Ok(Self {
            a,
            b,
            alpha,
            beta,
            a_beta: mat_pow(a, beta)?,
            a_neg_beta: mat_pow(a, -beta)?,
        })
    }

    /// `A #_{(α + shift, β)} B`.
    pub fn mean(&self, shift: f64) -> Result<SymMatrix<T>> {
        geo_mean(self.a, self.b, self.alpha + shift, self.beta)
    }

    /// `[A^β M⁻¹ A^β] · A^{-β} · (A #_{(α,β)} B)`; equals
    /// `A^{β/2} [N⁻¹ C^α] A^{β/2}` whenever `M = A^{β/2} N A^{β/2}` with `N`
    /// a function of `C`.
    fn resolvent_times_mean(&self, m: &SymMatrix<T>, mean: &SymMatrix<T>) -> Result<SymMatrix<T>> {
        let left = congruence(&mat_inv_pd(m)?, self.a, 2.0 * self.beta)?;
        let prod: Matrix<T> = left.matmul(&self.a_neg_beta).matmul(mean.as_matrix());
        Ok(SymMatrix::hermitian_part(&prod))
    }

    pub fn bound(&self, kind: BoundKind, delta: f64) -> Result<SymMatrix<T>> {
        check_delta(kind, delta)?;
        let ln_d = delta.ln();
        let sd = delta.sqrt();
        Ok(match kind {
            BoundKind::I => {
                let g = self.mean(0.0)?;
                let r = self.resolvent_times_mean(&self.a_beta.add(self.b), &g)?;
                g.scaled(2.0).sub(&r.scaled(4.0))
            }
            BoundKind::II => {
                let g = self.mean(0.0)?;
                let half = geo_mean(self.a, self.b, 0.5, self.beta)?;
                let r = self.resolvent_times_mean(&half.add(&self.a_beta), &g)?;
                g.scaled(4.0).sub(&r.scaled(8.0))
            }
            BoundKind::III => self.mean(0.5)?.sub(&self.mean(-0.5)?),
            BoundKind::V => self.mean(1.0)?.sub(&self.mean(-1.0)?).scaled(0.5),
            BoundKind::IPrime => {
                let g = self.mean(0.0)?;
                let r = self.resolvent_times_mean(&self.b.add(&self.a_beta.scaled(delta)), &g)?;
                g.scaled(ln_d + 2.0).sub(&r.scaled(4.0 * delta))
            }
            BoundKind::IIPrime => {
                let g = self.mean(0.0)?;
                let half = geo_mean(self.a, self.b, 0.5, self.beta)?;
                let r = self.resolvent_times_mean(&half.add(&self.a_beta.scaled(sd)), &g)?;
                g.scaled(ln_d + 4.0).sub(&r.scaled(8.0 * sd))
            }
            BoundKind::IIIPrime => self
                .mean(0.5)?
                .scaled(1.0 / sd)
                .sub(&self.mean(-0.5)?.scaled(sd))
                .add(&self.mean(0.0)?.scaled(ln_d)),
            BoundKind::VPrime => self
                .mean(1.0)?
                .scaled(1.0 / delta)
                .sub(&self.mean(-1.0)?.scaled(delta))
                .scaled(0.5)
                .add(&self.mean(0.0)?.scaled(ln_d)),
            BoundKind::LowerShift => self.mean(0.0)?.sub(&self.mean(-1.0)?),
            BoundKind::UpperShift => self.mean(1.0)?.sub(&self.mean(0.0)?),
            BoundKind::BaseLower => {
                let abia = congruence(&mat_inv_pd(self.b)?, self.a, 2.0 * self.beta)?;
                self.a_beta.sub(&abia)
            }
        })
    }

    /// `A^{β/2} [C^α log C] A^{β/2}` with `C` formed by congruence.
    pub fn entropy(&self) -> Result<SymMatrix<T>> {
        let c = congruence(self.b, self.a, -self.beta)?;
        let inner = apply_fn(&c, &ScalarFn::Entropy { alpha: self.alpha })?;
        congruence(&inner, self.a, self.beta)
    }
}

/// Convenience wrapper over [`ExplicitBounds`].
pub fn explicit_bound<T: Scalar>(
    kind: BoundKind,
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    alpha: f64,
    beta: f64,
    delta: f64,
) -> Result<SymMatrix<T>> {
    ExplicitBounds::new(a, b, alpha, beta)?.bound(kind, delta)
}
