//! Inequality suites as data, and the single checker that runs them.
//!
//! A suite is a hypothesis on `(A, B)` plus one or more chains of terms;
//! every adjacent pair in a chain is one Loewner link `lhs ≤ rhs`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bounds::kind::BoundKind;
use crate::entropy::EntropyContext;
use crate::error::{Error, Result};
use crate::functions::ScalarFn;
use crate::matcore::io::MatrixFile;
use crate::matcore::{loewner_leq, loewner_scale, mat_pow, require_positive, SymMatrix};
use crate::scalar::Scalar;

/// One operator appearing in a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Bound(BoundKind),
    /// `S_{α,β}(A|B)`
    Entropy,
    Harmonic,
    Geometric,
    Arithmetic,
}

impl Term {
    pub fn name(self) -> &'static str {
        match self {
            Term::Bound(k) => k.name(),
            Term::Entropy => "S",
            Term::Harmonic => "harmonic",
            Term::Geometric => "geometric",
            Term::Arithmetic => "arithmetic",
        }
    }

    /// Scalar generator of this term for the given parameters.
    pub fn generator(self, p: &ChainParams) -> ScalarFn {
        match self {
            Term::Bound(bound) => ScalarFn::Bound {
                bound,
                alpha: p.alpha,
                delta: p.delta,
            },
            Term::Entropy => ScalarFn::Entropy { alpha: p.alpha },
            Term::Harmonic => ScalarFn::Harmonic { lambda: p.lambda },
            Term::Geometric => ScalarFn::Geometric { lambda: p.lambda },
            Term::Arithmetic => ScalarFn::Arithmetic { lambda: p.lambda },
        }
    }
}

/// Spectral relation between `A^β` and `B` required by a suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Strict positivity of `A` and `B` only.
    Positive,
    /// `δ A^β ≤ B` (`δ = 1` for suites without `δ`).
    ScaledPowerBelow,
    /// `B ≤ δ A^β`.
    ScaledPowerAbove,
}

/// Constraint on `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaUse {
    Unused,
    AtLeastOne,
    AtMostOne,
    /// `δ ≥ 1` selects the stated chains, `δ < 1` the reversed ones.
    EitherSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// `h(t) = t^β`, with `α ≥ 0`, `β > 0` enforced.
    PowerBeta,
    /// `h(t) = t`, parameterized by `λ ∈ [0, 1]`.
    Means,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub name: &'static str,
    pub hypothesis: Hypothesis,
    pub delta: DeltaUse,
    pub weight: Weight,
    pub chains: Vec<Vec<Term>>,
}

pub const SUITE_NAMES: [&str; 11] = [
    "thm-main1",
    "thm-main2",
    "prop-bounds",
    "cor-entropy-le",
    "cor-entropy-ge",
    "thm-primed-le",
    "thm-primed-ge",
    "prop-tighten",
    "cor-delta-le",
    "cor-delta-ge",
    "prop-means",
];

use BoundKind as K;
use Term::Bound as B;

impl Suite {
    pub fn by_name(name: &str) -> Result<Suite> {
        let s = |hypothesis, delta, weight, chains| Suite {
            name: SUITE_NAMES.iter().find(|n| **n == name).copied().unwrap_or("?"),
            hypothesis,
            delta,
            weight,
            chains,
        };
        use DeltaUse::*;
        use Hypothesis::*;
        use Weight::*;
        Ok(match name {
            "thm-main1" => s(
                ScaledPowerBelow,
                Unused,
                PowerBeta,
                vec![vec![B(K::I), B(K::II), Term::Entropy, B(K::III), B(K::V)]],
            ),
            "thm-main2" => s(
                ScaledPowerAbove,
                Unused,
                PowerBeta,
                vec![vec![B(K::V), B(K::III), Term::Entropy, B(K::II), B(K::I)]],
            ),
            "prop-bounds" => s(
                Positive,
                Unused,
                PowerBeta,
                vec![
                    vec![B(K::LowerShift), B(K::I), B(K::UpperShift)],
                    vec![B(K::LowerShift), B(K::V), B(K::UpperShift)],
                    vec![B(K::BaseLower), B(K::LowerShift)],
                ],
            ),
            "cor-entropy-le" => s(
                ScaledPowerBelow,
                Unused,
                PowerBeta,
                vec![vec![
                    B(K::LowerShift),
                    B(K::I),
                    B(K::II),
                    Term::Entropy,
                    B(K::III),
                    B(K::V),
                    B(K::UpperShift),
                ]],
            ),
            "cor-entropy-ge" => s(
                ScaledPowerAbove,
                Unused,
                PowerBeta,
                vec![vec![
                    B(K::LowerShift),
                    B(K::V),
                    B(K::III),
                    Term::Entropy,
                    B(K::II),
                    B(K::I),
                    B(K::UpperShift),
                ]],
            ),
            "thm-primed-le" => s(
                ScaledPowerBelow,
                AtLeastOne,
                PowerBeta,
                vec![vec![
                    B(K::IPrime),
                    B(K::IIPrime),
                    Term::Entropy,
                    B(K::IIIPrime),
                    B(K::VPrime),
                ]],
            ),
            "thm-primed-ge" => s(
                ScaledPowerAbove,
                AtMostOne,
                PowerBeta,
                vec![vec![
                    B(K::VPrime),
                    B(K::IIIPrime),
                    Term::Entropy,
                    B(K::IIPrime),
                    B(K::IPrime),
                ]],
            ),
            "prop-tighten" => s(
                ScaledPowerBelow,
                EitherSide,
                PowerBeta,
                vec![vec![B(K::II), B(K::IIPrime)], vec![B(K::IIIPrime), B(K::III)]],
            ),
            "cor-delta-le" => s(
                ScaledPowerBelow,
                AtLeastOne,
                PowerBeta,
                vec![
                    vec![
                        B(K::LowerShift),
                        B(K::I),
                        B(K::II),
                        B(K::IIPrime),
                        Term::Entropy,
                        B(K::IIIPrime),
                        B(K::VPrime),
                        B(K::V),
                        B(K::UpperShift),
                    ],
                    vec![B(K::I), B(K::IPrime), B(K::IIPrime)],
                ],
            ),
            "cor-delta-ge" => s(
                ScaledPowerAbove,
                AtMostOne,
                PowerBeta,
                vec![
                    vec![
                        B(K::LowerShift),
                        B(K::V),
                        B(K::VPrime),
                        B(K::IIIPrime),
                        Term::Entropy,
                        B(K::IIPrime),
                        B(K::II),
                        B(K::I),
                        B(K::UpperShift),
                    ],
                    vec![B(K::IIPrime), B(K::IPrime), B(K::I)],
                ],
            ),
            "prop-means" => s(
                Positive,
                Unused,
                Means,
                vec![vec![Term::Harmonic, Term::Geometric, Term::Arithmetic]],
            ),
            other => return Err(Error::UnknownSuite(other.to_string())),
        })
    }

    pub fn uses_delta(&self) -> bool {
        self.delta != DeltaUse::Unused
    }

    /// Orientation of the hypothesis, for generators: `true` when `B` must
    /// dominate `δA^β`, `false` when dominated, `None` when unconstrained.
    pub fn dominating(&self, delta: f64) -> Option<bool> {
        self.resolve(delta).0.map(|h| h == Hypothesis::ScaledPowerBelow)
    }

    /// `δ` used by the hypothesis (1 when the suite has no `δ`).
    pub fn hypothesis_delta(&self, delta: f64) -> f64 {
        if self.uses_delta() {
            delta
        } else {
            1.0
        }
    }

    /// Hypothesis and chains in effect for `δ`.
    fn resolve(&self, delta: f64) -> (Option<Hypothesis>, Vec<Vec<Term>>) {
        let hyp = match self.hypothesis {
            Hypothesis::Positive => None,
            h => Some(h),
        };
        if self.delta == DeltaUse::EitherSide && delta < 1.0 {
            let reversed = self
                .chains
                .iter()
                .map(|c| c.iter().rev().copied().collect())
                .collect();
            let flipped = hyp.map(|h| match h {
                Hypothesis::ScaledPowerBelow => Hypothesis::ScaledPowerAbove,
                Hypothesis::ScaledPowerAbove => Hypothesis::ScaledPowerBelow,
                Hypothesis::Positive => Hypothesis::Positive,
            });
            (flipped, reversed)
        } else {
            (hyp, self.chains.clone())
        }
    }

    /// Parameters as they appear in reports: unused ones are `None`.
    pub fn report_params(&self, p: &ChainParams) -> ReportParams {
        let power = self.weight == Weight::PowerBeta;
        ReportParams {
            alpha: power.then_some(p.alpha),
            beta: power.then_some(p.beta),
            delta: self.uses_delta().then_some(p.delta),
            lambda: (!power).then_some(p.lambda),
        }
    }

    pub(crate) fn check_params(&self, p: &ChainParams) -> std::result::Result<(), String> {
        match self.weight {
            Weight::PowerBeta => {
                if !(p.alpha >= 0.0 && p.alpha.is_finite()) {
                    return Err(format!("alpha = {} must be >= 0", p.alpha));
                }
                if !(p.beta > 0.0 && p.beta.is_finite()) {
                    return Err(format!("beta = {} must be > 0", p.beta));
                }
            }
            Weight::Means => {
                if !(0.0..=1.0).contains(&p.lambda) {
                    return Err(format!("lambda = {} must lie in [0, 1]", p.lambda));
                }
            }
        }
        if self.uses_delta() && !(p.delta > 0.0 && p.delta.is_finite()) {
            return Err(format!("delta = {} must be > 0", p.delta));
        }
        match self.delta {
            DeltaUse::AtLeastOne if p.delta < 1.0 => Err(format!("delta = {} must be >= 1", p.delta)),
            DeltaUse::AtMostOne if p.delta > 1.0 => Err(format!("delta = {} must be <= 1", p.delta)),
            _ => Ok(()),
        }
    }
}

/// Parameters of one chain evaluation. Suites read only what they use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub lambda: f64,
}

impl Default for ChainParams {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            beta: 1.0,
            delta: 1.0,
            lambda: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub lambda: Option<f64>,
}

/// One Loewner link `lhs ≤ rhs` with `margin = λ_min(rhs − lhs)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub lhs: String,
    pub rhs: String,
    pub margin: f64,
    /// `max(1, ‖lhs‖_F, ‖rhs‖_F)`.
    #[serde(skip)]
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    PreconditionFailed,
}

/// Inputs embedded in a report so a failing trial can be replayed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialMatrices {
    pub a: MatrixFile,
    pub b: MatrixFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub suite: String,
    pub trial_seed: u64,
    pub params: ReportParams,
    pub links: Vec<Link>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<TrialMatrices>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.trial_seed = seed;
        self
    }

    /// Smallest `margin / scale` over all links.
    pub fn worst_relative_margin(&self) -> f64 {
        self.links
            .iter()
            .map(|l| l.margin / l.scale)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates chain terms for one `(A, B, params)`, each at most once.
pub struct TermEvaluator<T> {
    ctx: EntropyContext<T>,
    params: ChainParams,
    cache: BTreeMap<Term, SymMatrix<T>>,
}

impl<T: Scalar> TermEvaluator<T> {
    pub fn new(suite: &Suite, a: &SymMatrix<T>, b: &SymMatrix<T>, params: ChainParams) -> Result<Self> {
        let beta = match suite.weight {
            Weight::PowerBeta => params.beta,
            Weight::Means => 1.0,
        };
        Ok(Self {
            ctx: EntropyContext::new(a, b, beta)?,
            params,
            cache: BTreeMap::new(),
        })
    }

    pub fn context(&self) -> &EntropyContext<T> {
        &self.ctx
    }

    pub fn get(&mut self, term: Term) -> Result<&SymMatrix<T>> {
        if !self.cache.contains_key(&term) {
            let m = self.ctx.term(&term.generator(&self.params))?;
            self.cache.insert(term, m);
        }
        Ok(&self.cache[&term])
    }
}

/// Checks the hypothesis of `suite` on `(A, B)`; `Ok(None)` when it holds.
pub fn check_hypothesis<T: Scalar>(
    suite: &Suite,
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    params: &ChainParams,
    tol: f64,
) -> Result<Option<String>> {
    if let Err(msg) = suite.check_params(params) {
        return Ok(Some(msg));
    }
    a.check_same_dim(b)?;
    for (m, name) in [(a, "A"), (b, "B")] {
        if let Err(e) = require_positive(m, name) {
            return match e {
                Error::Domain { .. } => Ok(Some(format!("{name} is not strictly positive: {e}"))),
                other => Err(other),
            };
        }
    }
    let (hyp, _) = suite.resolve(params.delta);
    let Some(hyp) = hyp else {
        return Ok(None);
    };
    let d = suite.hypothesis_delta(params.delta);
    let scaled_pow = mat_pow(a, params.beta)?.scaled(d);
    let (lo, hi, text) = match hyp {
        Hypothesis::ScaledPowerBelow => (&scaled_pow, b, "delta*A^beta <= B"),
        Hypothesis::ScaledPowerAbove => (b, &scaled_pow, "B <= delta*A^beta"),
        Hypothesis::Positive => unreachable!(),
    };
    let verdict = loewner_leq(lo, hi, tol)?;
    Ok(if verdict.holds() {
        None
    } else {
        Some(format!(
            "hypothesis {text} violated (margin {:e}, delta {d})",
            verdict.margin()
        ))
    })
}

/// Runs every link of `suite` on `(A, B)`.
///
/// A violated hypothesis (or parameter constraint) yields a
/// [`Verdict::PreconditionFailed`] report with no links; numerical errors
/// while evaluating terms are returned as `Err`.
pub fn chain_check<T: Scalar>(
    suite: &Suite,
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    params: &ChainParams,
    tol: f64,
) -> Result<ChainReport> {
    let mut report = ChainReport {
        suite: suite.name.to_string(),
        trial_seed: 0,
        params: suite.report_params(params),
        links: Vec::new(),
        verdict: Verdict::Pass,
        detail: None,
        matrices: None,
    };
    let embed = |r: &mut ChainReport| {
        r.matrices = Some(TrialMatrices {
            a: MatrixFile::from(a),
            b: MatrixFile::from(b),
        })
    };
    if let Some(reason) = check_hypothesis(suite, a, b, params, tol)? {
        report.verdict = Verdict::PreconditionFailed;
        report.detail = Some(reason);
        embed(&mut report);
        return Ok(report);
    }

    let (_, chains) = suite.resolve(params.delta);
    let mut eval = TermEvaluator::new(suite, a, b, *params)?;
    for chain in &chains {
        for pair in chain.windows(2) {
            let lhs = eval.get(pair[0])?.clone();
            let rhs = eval.get(pair[1])?;
            let ord = loewner_leq(&lhs, rhs, tol)?;
            if !ord.holds() {
                report.verdict = Verdict::Fail;
            }
            report.links.push(Link {
                lhs: pair[0].name().to_string(),
                rhs: pair[1].name().to_string(),
                margin: ord.margin(),
                scale: loewner_scale(&lhs, rhs),
            });
        }
    }
    if report.verdict == Verdict::Fail {
        embed(&mut report);
    }
    Ok(report)
}
