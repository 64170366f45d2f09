//! Suite runs: many generated trials through `chain_check`, aggregated into
//! one report.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{chain_check, ChainParams, ChainReport, DeltaUse, Suite, Verdict, Weight};
use crate::error::{Error, Result};
use crate::gen::{is_boundary_trial, random_partner, random_spd, trial_rng, trial_seed, Direction, GenConfig, Stream};
use crate::matcore::DEFAULT_LOEWNER_TOL;
use crate::scalar::{Field, Scalar};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const ALPHA_GRID: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
pub const BETA_GRID: [f64; 3] = [0.5, 1.0, 2.0];
pub const DELTA_GRID_LE: [f64; 3] = [1.0, 1.5, 3.0];
pub const DELTA_GRID_GE: [f64; 3] = [1.0, 2.0 / 3.0, 1.0 / 3.0];
pub const MAX_SWEEP_DIM: usize = 8;

/// Configuration of one `verify` run. Parameters left as `None` are swept
/// per trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub suite: String,
    pub trials: u64,
    pub tol: f64,
    /// Fixed dimension, or `None` to draw from 1..=8 per trial.
    pub dim: Option<usize>,
    pub field: Field,
    pub seed: u64,
    pub spectrum_lo: f64,
    pub spectrum_hi: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub lambda: Option<f64>,
    /// Worker threads; not part of the report since results never depend on it.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            trials: 100,
            tol: DEFAULT_LOEWNER_TOL,
            dim: None,
            field: Field::Real,
            seed: 0,
            spectrum_lo: 0.1,
            spectrum_hi: 10.0,
            alpha: None,
            beta: None,
            delta: None,
            lambda: None,
            threads: None,
        }
    }

    fn gen_config(&self, dim: usize) -> GenConfig {
        GenConfig {
            dim,
            field: self.field,
            spectrum_lo: self.spectrum_lo,
            spectrum_hi: self.spectrum_hi,
            master_seed: self.seed,
        }
    }

    pub fn validate(&self) -> Result<Suite> {
        let suite = Suite::by_name(&self.suite)?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("tol = {} must be positive", self.tol)));
        }
        self.gen_config(self.dim.unwrap_or(1)).validate()?;
        // explicitly given parameters must suit the suite; swept ones do by construction
        let explicit = ChainParams {
            alpha: self.alpha.unwrap_or(0.0),
            beta: self.beta.unwrap_or(1.0),
            delta: self.delta.unwrap_or(1.0),
            lambda: self.lambda.unwrap_or(0.5),
        };
        if let Err(msg) = suite.check_params(&explicit) {
            return Err(Error::InvalidParameter(format!("suite {}: {msg}", suite.name)));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("threads must be at least 1".into()));
        }
        Ok(suite)
    }
}

/// `δ` values swept for a suite when none is given.
pub fn delta_grid(suite: &Suite) -> &'static [f64] {
    match suite.delta {
        DeltaUse::Unused => &[1.0],
        DeltaUse::AtLeastOne => &DELTA_GRID_LE,
        DeltaUse::AtMostOne => &DELTA_GRID_GE,
        DeltaUse::EitherSide => &[1.0, 1.5, 3.0, 2.0 / 3.0, 1.0 / 3.0],
    }
}

/// Dimension and parameters of trial `t`, from its own parameter stream.
pub fn trial_setup(cfg: &RunConfig, suite: &Suite, trial: u64) -> (usize, ChainParams) {
    let mut rng = trial_rng(trial_seed(cfg.seed, trial), Stream::Params);
    let mut pick = |grid: &[f64]| grid[rng.random_range(0..grid.len())];
    let alpha = pick(&ALPHA_GRID);
    let beta = pick(&BETA_GRID);
    let delta = pick(delta_grid(suite));
    let dim = rng.random_range(1..=MAX_SWEEP_DIM);
    let params = ChainParams {
        alpha: cfg.alpha.unwrap_or(alpha),
        beta: cfg.beta.unwrap_or(beta),
        delta: cfg.delta.unwrap_or(delta),
        lambda: cfg.lambda.unwrap_or((trial % 11) as f64 / 10.0),
    };
    (cfg.dim.unwrap_or(dim), params)
}

/// Orientation of the partner matrix for a suite at `δ`.
pub fn direction(suite: &Suite, delta: f64) -> Direction {
    match suite.dominating(delta) {
        Some(true) => Direction::Dominating,
        Some(false) => Direction::Dominated,
        None => Direction::Free,
    }
}

/// Generates trial `t` and runs the suite on it.
pub fn run_trial(cfg: &RunConfig, suite: &Suite, trial: u64) -> ChainReport {
    let result = match cfg.field {
        Field::Real => run_trial_as::<f64>(cfg, suite, trial),
        Field::Complex => run_trial_as::<num_complex::Complex64>(cfg, suite, trial),
    };
    let seed = trial_seed(cfg.seed, trial);
    match result {
        Ok(r) => r.with_seed(seed),
        Err((params, verdict, err)) => ChainReport {
            suite: suite.name.to_string(),
            trial_seed: seed,
            params: suite.report_params(&params),
            links: Vec::new(),
            verdict,
            detail: Some(err.to_string()),
            matrices: None,
        },
    }
}

type TrialError = (ChainParams, Verdict, Error);

fn run_trial_as<T: Scalar>(cfg: &RunConfig, suite: &Suite, trial: u64) -> Result<ChainReport, TrialError> {
    let (dim, params) = trial_setup(cfg, suite, trial);
    let gen = cfg.gen_config(dim);
    let dir = direction(suite, params.delta);
    let (beta, delta) = match suite.weight {
        Weight::PowerBeta => (params.beta, suite.hypothesis_delta(params.delta)),
        Weight::Means => (1.0, 1.0),
    };
    // a generator that cannot meet its own construction is a bug: the trial
    // is reported as a precondition failure and the run fails
    let a = random_spd::<T>(&gen, trial).map_err(|e| (params, Verdict::PreconditionFailed, e))?;
    let b = random_partner(&a, beta, delta, dir, &gen, trial).map_err(|e| (params, Verdict::PreconditionFailed, e))?;
    chain_check(suite, &a, &b, &params, cfg.tol).map_err(|e| (params, Verdict::Fail, e))
}

/// Worst margin seen on one link across all trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkSummary {
    pub lhs: String,
    pub rhs: String,
    /// Smallest `min eig(rhs − lhs)`.
    pub worst_margin: f64,
    /// Smallest margin divided by the Loewner scale of its trial.
    pub worst_relative: f64,
    /// Trial index attaining `worst_relative`.
    pub worst_trial: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub precondition_failed: u64,
    pub boundary_trials: u64,
    pub links: Vec<LinkSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub tool_version: String,
    pub config: RunConfig,
    pub summary: Summary,
    pub trials: Vec<ChainReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.precondition_failed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Plain-text table of the summary.
    pub fn render_table(&self) -> String {
        let s = &self.summary;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {}  field {}  seed {}  tol {:e}",
            self.config.suite, self.config.field, self.config.seed, self.config.tol
        );
        if s.trials == 0 {
            let _ = writeln!(out, "0 trials: nothing to check");
            return out;
        }
        let _ = writeln!(
            out,
            "trials {}  passed {}  failed {}  precondition_failed {}  boundary {}",
            s.trials, s.passed, s.failed, s.precondition_failed, s.boundary_trials
        );
        let _ = writeln!(out, "{:<14} {:<14} {:>14} {:>14} {:>7}", "lhs", "rhs", "worst margin", "relative", "trial");
        for l in &s.links {
            let _ = writeln!(
                out,
                "{:<14} {:<14} {:>14.6e} {:>14.6e} {:>7}",
                l.lhs, l.rhs, l.worst_margin, l.worst_relative, l.worst_trial
            );
        }
        for (i, t) in self.trials.iter().enumerate() {
            if !t.passed() {
                let _ = writeln!(
                    out,
                    "trial {i}: {:?}{}",
                    t.verdict,
                    t.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
                );
            }
        }
        let _ = writeln!(out, "{}", if self.all_passed() { "PASS" } else { "FAIL" });
        out
    }
}

fn summarize(trials: &[ChainReport]) -> Summary {
    let mut links: Vec<LinkSummary> = Vec::new();
    let mut summary = Summary {
        trials: trials.len() as u64,
        passed: 0,
        failed: 0,
        precondition_failed: 0,
        boundary_trials: (0..trials.len() as u64).filter(|&t| is_boundary_trial(t)).count() as u64,
        links: Vec::new(),
    };
    for (t, r) in trials.iter().enumerate() {
        match r.verdict {
            Verdict::Pass => summary.passed += 1,
            Verdict::Fail => summary.failed += 1,
            Verdict::PreconditionFailed => summary.precondition_failed += 1,
        }
        for (k, link) in r.links.iter().enumerate() {
            let rel = link.margin / link.scale;
            match links.get_mut(k) {
                Some(s) => {
                    s.worst_margin = s.worst_margin.min(link.margin);
                    if rel < s.worst_relative {
                        s.worst_relative = rel;
                        s.worst_trial = t as u64;
                    }
                }
                None => links.push(LinkSummary {
                    lhs: link.lhs.clone(),
                    rhs: link.rhs.clone(),
                    worst_margin: link.margin,
                    worst_relative: rel,
                    worst_trial: t as u64,
                }),
            }
        }
    }
    summary.links = links;
    summary
}

/// Runs `cfg.trials` trials, in parallel when `threads` allows, and collects
/// them in trial order.
pub fn run_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let suite = cfg.validate()?;
    let work = || -> Vec<ChainReport> {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, &suite, t))
            .collect()
    };
    let trials = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(SuiteReport {
        tool_version: TOOL_VERSION.to_string(),
        config: cfg.clone(),
        summary: summarize(&trials),
        trials,
    })
}
