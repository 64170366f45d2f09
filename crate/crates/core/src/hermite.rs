//! Refined Hermite–Hadamard chain for the convex family `f(t) = x^α / t − 1`.
//!
//! On `[1, x]` (when `x ≥ 1`) or `[x, 1]` (when `x ≤ 1`):
//!
//! ```text
//! f(mid) ≤ sup_λ l(λ) ≤ avg ∫ f ≤ inf_λ L(λ) ≤ (f(a) + f(b)) / 2
//! ```
//!
//! with both extrema attained at `λ* = 1/(√x+1)` (resp. `√x/(√x+1)`). After
//! multiplying through by `x − 1` these five terms become the scalar
//! generators of `I ≤ II ≤ S ≤ III ≤ V`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this distance from 1 the record is the continuous limit (all zeros).
pub const UNIT_CUTOFF: f64 = 1e-12;

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("x = {x} must be positive")))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("lambda = {lambda} is outside [0, 1]")))
    }
}

/// The convex integrand `x^α / t − 1`.
pub fn integrand(alpha: f64, x: f64, t: f64) -> f64 {
    x.powf(alpha) / t - 1.0
}

/// `l(λ)`, the lower refinement.
pub fn hh_lower(alpha: f64, x: f64, lambda: f64) -> Result<f64> {
    check_x(x)?;
    check_lambda(lambda)?;
    let xa = x.powf(alpha);
    Ok(if x >= 1.0 {
        xa * 2.0 * lambda / (lambda * (x - 1.0) + 2.0)
            + xa * (2.0 - 2.0 * lambda) / (lambda * (x - 1.0) + (x + 1.0))
            - 1.0
    } else {
        xa * 2.0 * lambda / (lambda * (1.0 - x) + 2.0 * x)
            + xa * 2.0 * (1.0 - lambda) / (lambda * (1.0 - x) + (x + 1.0))
            - 1.0
    })
}

/// `L(λ)`, the upper refinement.
pub fn hh_upper(alpha: f64, x: f64, lambda: f64) -> Result<f64> {
    check_x(x)?;
    check_lambda(lambda)?;
    let xa = x.powf(alpha);
    let xa1 = x.powf(alpha - 1.0);
    Ok(if x >= 1.0 {
        0.5 * (xa / (lambda * (x - 1.0) + 1.0) + lambda * xa + (1.0 - lambda) * xa1) - 1.0
    } else {
        0.5 * (xa / (lambda * (1.0 - x) + x) + lambda * xa1 + (1.0 - lambda) * xa) - 1.0
    })
}

/// The maximizer of `l` and minimizer of `L` on `[0, 1]`.
pub fn extremizer(x: f64) -> f64 {
    let s = x.sqrt();
    if x >= 1.0 {
        1.0 / (s + 1.0)
    } else {
        s / (s + 1.0)
    }
}

/// Closed form of `sup l = 4x^α/(√x+1)² − 1`.
pub fn sup_lower_closed(alpha: f64, x: f64) -> f64 {
    let s = x.sqrt() + 1.0;
    4.0 * x.powf(alpha) / (s * s) - 1.0
}

/// Closed form of `inf L = x^α/√x − 1`.
pub fn inf_upper_closed(alpha: f64, x: f64) -> f64 {
    x.powf(alpha) / x.sqrt() - 1.0
}

/// `[x^α ln x − (x − 1)] / (x − 1)`, the mean of `f` over the interval.
pub fn integral_avg_closed(alpha: f64, x: f64) -> f64 {
    (x.powf(alpha) * x.ln() - (x - 1.0)) / (x - 1.0)
}

/// The five terms of the refined chain at `(α, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HHRecord {
    pub x: f64,
    pub alpha: f64,
    pub midpoint: f64,
    pub sup_l: f64,
    pub integral_avg: f64,
    #[serde(rename = "inf_L")]
    pub inf_upper: f64,
    pub endpoint_avg: f64,
    pub lambda_star: f64,
}

impl HHRecord {
    pub fn terms(&self) -> [f64; 5] {
        [
            self.midpoint,
            self.sup_l,
            self.integral_avg,
            self.inf_upper,
            self.endpoint_avg,
        ]
    }

    /// Smallest gap between consecutive terms (negative means out of order).
    pub fn min_gap(&self) -> f64 {
        self.terms()
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn hh_record(alpha: f64, x: f64) -> Result<HHRecord> {
    check_x(x)?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must be >= 0")));
    }
    if (x - 1.0).abs() < UNIT_CUTOFF {
        return Ok(HHRecord {
            x,
            alpha,
            midpoint: 0.0,
            sup_l: 0.0,
            integral_avg: 0.0,
            inf_upper: 0.0,
            endpoint_avg: 0.0,
            lambda_star: 0.5,
        });
    }
    let xa = x.powf(alpha);
    Ok(HHRecord {
        x,
        alpha,
        midpoint: 2.0 * xa / (x + 1.0) - 1.0,
        sup_l: sup_lower_closed(alpha, x),
        integral_avg: integral_avg_closed(alpha, x),
        inf_upper: inf_upper_closed(alpha, x),
        endpoint_avg: 0.5 * (xa + x.powf(alpha - 1.0)) - 1.0,
        lambda_star: extremizer(x),
    })
}

/// Outcome of checking the extremum claims on a uniform `λ` grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridVerdict {
    pub n: usize,
    pub max_l: f64,
    pub min_upper: f64,
    pub l_at_star: f64,
    pub upper_at_star: f64,
    /// `sup l` refined by golden-section search from the best grid point.
    pub refined_sup_l: f64,
    /// `inf L`, refined likewise.
    pub refined_inf_upper: f64,
    pub integral_avg: f64,
    pub pass: bool,
}

/// Slack allowed by [`grid_verify`] on each comparison.
pub const GRID_TOL: f64 = 1e-10;

/// Checks `max_grid l ≤ l(λ*) + 1e-10`, `min_grid L ≥ L(λ*) − 1e-10`,
/// `l(λᵢ) ≤ avg ∫ f ≤ L(λᵢ)` at every grid point, and that the extrema found
/// numerically (grid bracket, then golden-section search) are within 1e-10
/// of the closed forms.
pub fn grid_verify(alpha: f64, x: f64, n: usize) -> Result<GridVerdict> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("grid size {n} must be at least 3")));
    }
    let rec = hh_record(alpha, x)?;
    let star = extremizer(x);
    let l_at_star = hh_lower(alpha, x, star)?;
    let upper_at_star = hh_upper(alpha, x, star)?;
    let step = 1.0 / (n - 1) as f64;
    let mut max_l = (f64::NEG_INFINITY, 0);
    let mut min_upper = (f64::INFINITY, 0);
    let mut pointwise = true;
    for i in 0..n {
        let lambda = i as f64 * step;
        let l = hh_lower(alpha, x, lambda)?;
        let u = hh_upper(alpha, x, lambda)?;
        if l > max_l.0 {
            max_l = (l, i);
        }
        if u < min_upper.0 {
            min_upper = (u, i);
        }
        if l > rec.integral_avg + GRID_TOL || u < rec.integral_avg - GRID_TOL {
            pointwise = false;
        }
    }
    let bracket = |i: usize| ((i as f64 - 1.0) * step).max(0.0)..=((i as f64 + 1.0) * step).min(1.0);
    let refined_sup_l = -golden_min(|t| -hh_lower(alpha, x, t).unwrap_or(f64::NAN), bracket(max_l.1));
    let refined_inf_upper = golden_min(|t| hh_upper(alpha, x, t).unwrap_or(f64::NAN), bracket(min_upper.1));

    let unit = (x - 1.0).abs() < UNIT_CUTOFF;
    let closed_ok = unit
        || ((refined_sup_l - sup_lower_closed(alpha, x)).abs() <= GRID_TOL
            && (refined_inf_upper - inf_upper_closed(alpha, x)).abs() <= GRID_TOL
            && (l_at_star - sup_lower_closed(alpha, x)).abs() <= GRID_TOL
            && (upper_at_star - inf_upper_closed(alpha, x)).abs() <= GRID_TOL);
    let pass = pointwise
        && closed_ok
        && max_l.0 <= l_at_star + GRID_TOL
        && min_upper.0 >= upper_at_star - GRID_TOL;
    Ok(GridVerdict {
        n,
        max_l: max_l.0,
        min_upper: min_upper.0,
        l_at_star,
        upper_at_star,
        refined_sup_l,
        refined_inf_upper,
        integral_avg: rec.integral_avg,
        pass,
    })
}

/// Minimum of a unimodal `f` on `range` by golden-section search.
pub fn golden_min(f: impl Fn(f64) -> f64, range: std::ops::RangeInclusive<f64>) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (*range.start(), *range.end());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= 1e-14 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    [f(a), f(b), fc, fd].into_iter().fold(f64::INFINITY, f64::min)
}

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_at_endpoints_is_midpoint_value() {
        for (alpha, x) in [(0.0, 4.0f64), (1.5, 0.3), (2.0, 7.0)] {
            let mid = 2.0 * x.powf(alpha) / (x + 1.0) - 1.0;
            assert!((hh_lower(alpha, x, 0.0).unwrap() - mid).abs() < 1e-14);
            assert!((hh_lower(alpha, x, 1.0).unwrap() - mid).abs() < 1e-14);
        }
    }

    #[test]
    fn upper_at_endpoints_is_endpoint_average() {
        for (alpha, x) in [(0.0, 4.0f64), (1.5, 0.3), (2.0, 7.0)] {
            let avg = 0.5 * (x.powf(alpha) + x.powf(alpha - 1.0)) - 1.0;
            assert!((hh_upper(alpha, x, 0.0).unwrap() - avg).abs() < 1e-14);
            assert!((hh_upper(alpha, x, 1.0).unwrap() - avg).abs() < 1e-14);
        }
    }

    #[test]
    fn substitution_at_one_third() {
        assert!((hh_lower(0.0, 4.0, 1.0 / 3.0).unwrap() + 5.0 / 9.0).abs() < 1e-15);
        assert!((hh_upper(0.0, 4.0, 1.0 / 3.0).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn lambda_outside_unit_interval() {
        assert!(hh_lower(0.0, 2.0, 1.1).is_err());
        assert!(hh_upper(0.0, 2.0, -0.1).is_err());
        assert!(hh_lower(0.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn extremizer_examples() {
        assert_eq!(extremizer(1.0), 0.5);
        assert!((extremizer(4.0) - 1.0 / 3.0).abs() < 1e-16);
        assert!((extremizer(0.25) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn extremizer_attains_closed_forms() {
        for alpha in [0.0, 0.5, 1.0, 2.5] {
            for x in [0.05, 0.3, 0.9, 1.1, 4.0, 30.0] {
                let s = extremizer(x);
                let l = hh_lower(alpha, x, s).unwrap();
                let u = hh_upper(alpha, x, s).unwrap();
                let scale = x.powf(alpha).max(1.0);
                assert!((l - sup_lower_closed(alpha, x)).abs() < 1e-14 * scale, "{alpha} {x}");
                assert!((u - inf_upper_closed(alpha, x)).abs() < 1e-14 * scale, "{alpha} {x}");
            }
        }
    }

    #[test]
    fn record_reference_point() {
        let r = hh_record(0.0, 4.0).unwrap();
        let expect = [-0.6, -5.0 / 9.0, (4f64.ln() - 3.0) / 3.0, -0.5, -0.375];
        for (got, want) in r.terms().iter().zip(expect) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((r.integral_avg + 0.537902).abs() < 1e-6);
        assert!((r.lambda_star - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn record_at_e() {
        let e = std::f64::consts::E;
        let r = hh_record(1.0, e).unwrap();
        assert!((r.midpoint - 0.462117).abs() < 1e-6);
        assert!((r.inf_upper - (e.sqrt() - 1.0)).abs() < 1e-15);
        assert!((r.inf_upper - 0.648721).abs() < 1e-6);
    }

    #[test]
    fn record_limit_at_one() {
        let r = hh_record(2.0, 1.0).unwrap();
        assert_eq!(r.terms(), [0.0; 5]);
        assert_eq!(r.lambda_star, 0.5);
        assert!(hh_record(-1.0, 2.0).is_err());
    }

    #[test]
    fn grid_examples() {
        assert!(grid_verify(0.0, 4.0, 1001).unwrap().pass);
        assert!(grid_verify(2.0, 0.3, 1001).unwrap().pass);
        assert!(grid_verify(1.0, 2.0, 3).unwrap().pass);
        assert!(grid_verify(1.0, 2.0, 2).is_err());
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let v = simpson(|t| t * t * t - 2.0 * t, 0.0, 2.0, 4);
        assert!((v - 0.0).abs() < 1e-14);
        let v = simpson(|t| t * t, 1.0, 4.0, 2);
        assert!((v - 21.0).abs() < 1e-13);
    }
}
