//! Scalar generator functions on `(0, ∞)`.
//!
//! Every operator in the crate is a perspective `A^{β/2} g(C) A^{β/2}` of one
//! of these generators, with `C = A^{-β/2} B A^{-β/2}`.

use serde::{Deserialize, Serialize};

use crate::bounds::BoundKind;
use crate::matcore::{Domain, SpectralFn};

/// A named, parameterized real function on `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarFn {
    /// Generator of a bound operator.
    Bound { bound: BoundKind, alpha: f64, delta: f64 },
    /// `x^α ln x`.
    Entropy { alpha: f64 },
    /// `x^α`.
    Power { alpha: f64 },
    /// `((1 − λ) + λ/x)^{-1}`.
    Harmonic { lambda: f64 },
    /// `x^λ`.
    Geometric { lambda: f64 },
    /// `(1 − λ) + λx`.
    Arithmetic { lambda: f64 },
}

#[inline]
fn pow(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p == 1.0 {
        x
    } else {
        x.powf(p)
    }
}

/// Evaluates the generator of `kind` at `x`.
pub fn bound_generator(kind: BoundKind, alpha: f64, delta: f64, x: f64) -> f64 {
    let xa = pow(x, alpha);
    let sx = x.sqrt();
    match kind {
        BoundKind::I => 2.0 * (1.0 - 2.0 / (x + 1.0)) * xa,
        BoundKind::II => 4.0 * xa - 8.0 * xa / (sx + 1.0),
        BoundKind::III => xa * (x - 1.0) / sx,
        BoundKind::V => 0.5 * (pow(x, alpha + 1.0) - pow(x, alpha - 1.0)),
        BoundKind::IPrime => (delta.ln() + 2.0 * (1.0 - 2.0 * delta / (x + delta))) * xa,
        BoundKind::IIPrime => {
            let sd = delta.sqrt();
            (delta.ln() + 4.0 - 8.0 * sd / (sx + sd)) * xa
        }
        BoundKind::IIIPrime => {
            let sd = delta.sqrt();
            pow(x, alpha + 0.5) / sd - sd * pow(x, alpha - 0.5) + xa * delta.ln()
        }
        BoundKind::VPrime => {
            pow(x, alpha + 1.0) / (2.0 * delta) - 0.5 * delta * pow(x, alpha - 1.0)
                + xa * delta.ln()
        }
        BoundKind::LowerShift => xa - pow(x, alpha - 1.0),
        BoundKind::UpperShift => pow(x, alpha + 1.0) - xa,
        BoundKind::BaseLower => 1.0 - 1.0 / x,
    }
}

impl ScalarFn {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ScalarFn::Bound { bound, alpha, delta } => bound_generator(bound, alpha, delta, x),
            ScalarFn::Entropy { alpha } => pow(x, alpha) * x.ln(),
            ScalarFn::Power { alpha } => pow(x, alpha),
            ScalarFn::Harmonic { lambda } => 1.0 / ((1.0 - lambda) + lambda / x),
            ScalarFn::Geometric { lambda } => pow(x, lambda),
            ScalarFn::Arithmetic { lambda } => (1.0 - lambda) + lambda * x,
        }
    }
}

impl SpectralFn for ScalarFn {
    fn eval(&self, x: f64) -> f64 {
        ScalarFn::eval(self, x)
    }

    fn domain(&self) -> Domain {
        Domain::Positive
    }

    fn name(&self) -> String {
        match *self {
            ScalarFn::Bound { bound, alpha, delta } => {
                if bound.uses_delta() {
                    format!("{}[alpha={alpha}, delta={delta}]", bound.name())
                } else {
                    format!("{}[alpha={alpha}]", bound.name())
                }
            }
            ScalarFn::Entropy { alpha } => format!("x^{alpha} ln x"),
            ScalarFn::Power { alpha } => format!("x^{alpha}"),
            ScalarFn::Harmonic { lambda } => format!("harmonic[lambda={lambda}]"),
            ScalarFn::Geometric { lambda } => format!("geometric[lambda={lambda}]"),
            ScalarFn::Arithmetic { lambda } => format!("arithmetic[lambda={lambda}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bound_vanishes_at_one_except_primed() {
        for kind in [BoundKind::I, BoundKind::II, BoundKind::III, BoundKind::V] {
            for alpha in [0.0, 0.5, 2.0] {
                assert_eq!(bound_generator(kind, alpha, 1.0, 1.0), 0.0, "{kind:?}");
            }
        }
    }

    #[test]
    fn scalar_values_at_four() {
        let g = |k| bound_generator(k, 0.0, 1.0, 4.0);
        assert!((g(BoundKind::I) - 1.2).abs() < 1e-15);
        assert!((g(BoundKind::II) - 4.0 / 3.0).abs() < 1e-15);
        assert!((g(BoundKind::III) - 1.5).abs() < 1e-15);
        assert!((g(BoundKind::V) - 1.875).abs() < 1e-15);
        assert!((ScalarFn::Entropy { alpha: 0.0 }.eval(4.0) - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn means_at_endpoints() {
        for x in [0.3, 1.0, 7.0] {
            assert_eq!(ScalarFn::Harmonic { lambda: 0.0 }.eval(x), 1.0);
            assert_eq!(ScalarFn::Geometric { lambda: 0.0 }.eval(x), 1.0);
            assert_eq!(ScalarFn::Arithmetic { lambda: 0.0 }.eval(x), 1.0);
            assert!((ScalarFn::Harmonic { lambda: 1.0 }.eval(x) - x).abs() < 1e-15);
            assert_eq!(ScalarFn::Geometric { lambda: 1.0 }.eval(x), x);
            assert_eq!(ScalarFn::Arithmetic { lambda: 1.0 }.eval(x), x);
        }
    }
}
