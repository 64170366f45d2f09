//! Scalar closed forms for commuting inputs.
//!
//! When `A` and `B` share an eigenframe, every operator in the crate is that
//! frame applied to a diagonal of scalar values computed from the paired
//! eigenvalues `(a, b)`. The forms below are written in terms of `a` and `b`
//! and the weighted mean `G(p) = a^{β(1−p)} b^p`, independently of the
//! generator registry, so they check the matrix path rather than restate it.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundKind, ChainParams, ExplicitBounds, Term, TermEvaluator, Suite};
use crate::entropy::weighted_means;
use crate::error::{Error, Result};
use crate::gen::{random_commuting_pair, Direction, GenConfig};
use crate::matcore::SymMatrix;
use crate::scalar::{Field, Scalar};

/// Contract on the reported deviation.
pub const ORACLE_TOL: f64 = 1e-10;

/// Scalar value of a term, with the sum of absolute values of its summands.
///
/// The second number bounds the rounding error of any evaluation order up to
/// a small multiple of machine epsilon, so deviations are measured against it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarValue {
    pub value: f64,
    pub magnitude: f64,
}

fn sum(parts: &[f64]) -> ScalarValue {
    ScalarValue {
        value: parts.iter().sum(),
        magnitude: parts.iter().map(|p| p.abs()).sum(),
    }
}

/// `G(p) = a^{β(1−p)} b^p`.
fn g(a: f64, b: f64, beta: f64, alpha: f64, shift: f64) -> f64 {
    let p = alpha + shift;
    a.powf(beta * (1.0 - p)) * b.powf(p)
}

/// Closed form of `term` on the eigenvalue pair `(a, b)`.
///
/// Mean terms use `β = 1` regardless of `p.beta`.
pub fn scalar_term(term: Term, a: f64, b: f64, p: &ChainParams) -> ScalarValue {
    let (alpha, beta, delta) = (p.alpha, p.beta, p.delta);
    let gm = |shift| g(a, b, beta, alpha, shift);
    let ab = a.powf(beta);
    // G at p = ½ itself, not shifted by α
    let half = a.powf(0.5 * beta) * b.sqrt();
    let ld = delta.ln();
    let sd = delta.sqrt();
    match term {
        Term::Bound(kind) => match kind {
            BoundKind::I => sum(&[2.0 * gm(0.0), -4.0 * ab / (ab + b) * gm(0.0)]),
            BoundKind::II => sum(&[4.0 * gm(0.0), -8.0 * ab / (half + ab) * gm(0.0)]),
            BoundKind::III => sum(&[gm(0.5), -gm(-0.5)]),
            BoundKind::V => sum(&[0.5 * gm(1.0), -0.5 * gm(-1.0)]),
            BoundKind::IPrime => sum(&[(ld + 2.0) * gm(0.0), -4.0 * delta * ab / (b + delta * ab) * gm(0.0)]),
            BoundKind::IIPrime => sum(&[(ld + 4.0) * gm(0.0), -8.0 * sd * ab / (half + sd * ab) * gm(0.0)]),
            BoundKind::IIIPrime => sum(&[gm(0.5) / sd, -sd * gm(-0.5), ld * gm(0.0)]),
            BoundKind::VPrime => sum(&[gm(1.0) / (2.0 * delta), -0.5 * delta * gm(-1.0), ld * gm(0.0)]),
            BoundKind::LowerShift => sum(&[gm(0.0), -gm(-1.0)]),
            BoundKind::UpperShift => sum(&[gm(1.0), -gm(0.0)]),
            BoundKind::BaseLower => sum(&[ab, -ab * ab / b]),
        },
        Term::Entropy => sum(&[gm(0.0) * b.ln(), -beta * gm(0.0) * a.ln()]),
        Term::Harmonic => {
            let v = a * b / ((1.0 - p.lambda) * b + p.lambda * a);
            ScalarValue {
                value: v,
                magnitude: v.abs(),
            }
        }
        Term::Geometric => {
            let v = a.powf(1.0 - p.lambda) * b.powf(p.lambda);
            ScalarValue {
                value: v,
                magnitude: v.abs(),
            }
        }
        Term::Arithmetic => sum(&[(1.0 - p.lambda) * a, p.lambda * b]),
    }
}

/// Every term the suites use.
pub fn all_terms() -> Vec<Term> {
    let mut terms: Vec<Term> = BoundKind::ALL.iter().map(|&k| Term::Bound(k)).collect();
    terms.extend([Term::Entropy, Term::Harmonic, Term::Geometric, Term::Arithmetic]);
    terms
}

/// Largest entrywise deviation of `m` from `Q diag(values) Q*`, divided by
/// `max(1, largest summand magnitude)`.
pub fn deviation<T: Scalar>(m: &SymMatrix<T>, pair_frame: &crate::matcore::Matrix<T>, values: &[ScalarValue]) -> f64 {
    let diag: Vec<f64> = values.iter().map(|v| v.value).collect();
    let expect = crate::gen::frame_recompose(pair_frame, &diag);
    let scale = values.iter().map(|v| v.magnitude).fold(1.0, f64::max);
    m.max_abs_diff(&expect) / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub trials: u64,
    /// Fixed dimension, or `None` to cycle through 1..=8.
    pub dim: Option<usize>,
    pub field: Field,
    pub spectrum_lo: f64,
    pub spectrum_hi: f64,
    pub seed: u64,
    /// Rotate the shared frame away from the standard basis.
    pub rotate: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            trials: 50,
            dim: None,
            field: Field::Real,
            spectrum_lo: 0.1,
            spectrum_hi: 10.0,
            seed: 0,
            rotate: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDeviation {
    pub term: String,
    /// Perspective route against the closed form.
    pub perspective: f64,
    /// Explicit geometric-mean route against the closed form, where one exists.
    pub explicit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub config: OracleConfig,
    pub evaluations: u64,
    pub max_deviation: f64,
    pub terms: Vec<TermDeviation>,
    pub pass: bool,
}

const ALPHAS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
const BETAS: [f64; 3] = [0.5, 1.0, 2.0];
const DELTAS: [f64; 5] = [1.0 / 3.0, 2.0 / 3.0, 1.0, 1.5, 3.0];

/// Evaluates every term on commuting pairs through the matrix paths and the
/// closed forms, over the full `(α, β, δ)` grid per trial.
pub fn oracle_compare(cfg: &OracleConfig) -> Result<OracleReport> {
    if let Some(d) = cfg.dim {
        if !(1..=32).contains(&d) {
            return Err(Error::InvalidParameter(format!("dim = {d} must be in 1..=32")));
        }
    }
    match cfg.field {
        Field::Real => run::<f64>(cfg),
        Field::Complex => run::<num_complex::Complex64>(cfg),
    }
}

fn run<T: Scalar>(cfg: &OracleConfig) -> Result<OracleReport> {
    let terms = all_terms();
    let mut worst_persp = vec![0.0f64; terms.len()];
    let mut worst_expl = vec![None::<f64>; terms.len()];
    let mut evaluations = 0u64;
    // the means suite fixes the weight, so a single β-free evaluator serves it
    let means_suite = Suite::by_name("prop-means")?;
    let power_suite = Suite::by_name("thm-main1")?;

    for trial in 0..cfg.trials {
        let dim = cfg.dim.unwrap_or(1 + (trial % 8) as usize);
        let gen = GenConfig {
            dim,
            field: cfg.field,
            spectrum_lo: cfg.spectrum_lo,
            spectrum_hi: cfg.spectrum_hi,
            master_seed: cfg.seed,
        };
        let beta = BETAS[(trial % 3) as usize];
        let pair = random_commuting_pair::<T>(&gen, trial, beta, 1.0, Direction::Free, cfg.rotate)?;
        let lambda = (trial % 11) as f64 / 10.0;

        for &alpha in &ALPHAS {
            for &delta in &DELTAS {
                let params = ChainParams {
                    alpha,
                    beta,
                    delta,
                    lambda,
                };
                let mut persp = TermEvaluator::new(&power_suite, &pair.a, &pair.b, params)?;
                let mut means = TermEvaluator::new(&means_suite, &pair.a, &pair.b, params)?;
                let explicit = ExplicitBounds::new(&pair.a, &pair.b, alpha, beta)?;
                let wm = weighted_means(&pair.a, &pair.b, lambda)?;

                for (idx, &term) in terms.iter().enumerate() {
                    let values: Vec<ScalarValue> = pair
                        .a_spec
                        .iter()
                        .zip(&pair.b_spec)
                        .map(|(&a, &b)| scalar_term(term, a, b, &params))
                        .collect();
                    let (m, e) = match term {
                        Term::Bound(kind) => (persp.get(term)?.clone(), Some(explicit.bound(kind, delta)?)),
                        Term::Entropy => (persp.get(term)?.clone(), Some(explicit.entropy()?)),
                        Term::Harmonic => (means.get(term)?.clone(), Some(wm.harmonic.clone())),
                        Term::Geometric => (means.get(term)?.clone(), Some(wm.geometric.clone())),
                        Term::Arithmetic => (means.get(term)?.clone(), Some(wm.arithmetic.clone())),
                    };
                    let d = deviation(&m, &pair.frame, &values);
                    worst_persp[idx] = worst_persp[idx].max(d);
                    if let Some(e) = e {
                        let d = deviation(&e, &pair.frame, &values);
                        worst_expl[idx] = Some(worst_expl[idx].unwrap_or(0.0).max(d));
                    }
                    evaluations += 1;
                }
            }
        }
    }

    let max_deviation = worst_persp
        .iter()
        .chain(worst_expl.iter().flatten())
        .fold(0.0f64, |m, &d| m.max(d));
    Ok(OracleReport {
        config: *cfg,
        evaluations,
        max_deviation,
        terms: terms
            .iter()
            .zip(worst_persp.iter().zip(&worst_expl))
            .map(|(t, (&p, &e))| TermDeviation {
                term: t.name().to_string(),
                perspective: p,
                explicit: e,
            })
            .collect(),
        pass: max_deviation <= ORACLE_TOL,
    })
}

/// The scalar term table at `(a, b)`, in chain order.
pub fn term_table(a: f64, b: f64, params: &ChainParams) -> Vec<(String, f64)> {
    all_terms()
        .into_iter()
        .map(|t| (t.name().to_string(), scalar_term(t, a, b, params).value))
        .collect()
}
