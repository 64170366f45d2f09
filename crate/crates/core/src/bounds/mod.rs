//! Bound operators sandwiching `S_{α,β}(A|B)` and the inequality suites
//! built from them.

pub mod chain;
pub mod kind;

pub use chain::{
    chain_check, check_hypothesis, ChainParams, ChainReport, DeltaUse, Hypothesis, Link, ReportParams, Suite,
    Term, TermEvaluator, TrialMatrices, Verdict, Weight, SUITE_NAMES,
};
pub use kind::{bound, explicit_bound, scalar_generator, BoundKind, ExplicitBounds};
