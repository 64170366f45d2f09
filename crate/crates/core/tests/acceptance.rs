//! Acceptance criteria: one PASS/FAIL line per criterion, nonzero exit if
//! any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use opentropy::bounds::{
    bound, chain_check, explicit_bound, scalar_generator, BoundKind, ChainParams, Suite, TermEvaluator,
};
use opentropy::entropy::weighted_means;
use opentropy::gen::{
    random_commuting_pair, random_frame, random_partner, random_partner_with, random_spd, trial_rng,
    trial_seed, Direction, GenConfig, Stream,
};
use opentropy::hermite::{
    grid_verify, hh_record, integral_avg_closed, integrand, simpson, sup_lower_closed, inf_upper_closed,
};
use opentropy::matcore::{jordan_bound, jordan_check, loewner_leq, loewner_scale, Elementary, SymMatrix, DEFAULT_LOEWNER_TOL};
use opentropy::oracle::scalar_term;
use opentropy::perspective::{perspective, PerspectiveSpec};
use opentropy::runner::{run_suite, RunConfig, ALPHA_GRID, BETA_GRID};
use opentropy::{Field, Scalar};

const TRIALS: u64 = 500;
const SEED: u64 = 20240611;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn gen_config(dim: usize, field: Field, trial_salt: u64) -> GenConfig {
    GenConfig {
        dim,
        field,
        spectrum_lo: 0.1,
        spectrum_hi: 10.0,
        master_seed: SEED ^ trial_salt,
    }
}

/// 1. `f ≤ g` on the spectrum implies `P_{f△h} ≤ P_{g△h}`, with the bound
/// generators `r ≤ q ≤ k` on `[1, ∞)` and `h = t^β`.
fn perspective_monotonicity() -> Outcome {
    let start = Instant::now();
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    let mut links = 0;
    for field in [Field::Real, Field::Complex] {
        for t in 0..TRIALS {
            let mut rng = trial_rng(trial_seed(SEED, t), Stream::Params);
            let dim = 1 + (t % 8) as usize;
            let alpha = ALPHA_GRID[rng.random_range(0..4)];
            let beta = BETA_GRID[rng.random_range(0..3)];
            let cfg = gen_config(dim, field, 1);
            let res = match field {
                Field::Real => monotone_links::<f64>(&cfg, t, alpha, beta),
                Field::Complex => monotone_links::<Complex64>(&cfg, t, alpha, beta),
            };
            match res {
                Ok(rels) => {
                    for rel in rels {
                        links += 1;
                        worst = worst.min(rel);
                        if rel < -DEFAULT_LOEWNER_TOL {
                            failures += 1;
                        }
                    }
                }
                Err(e) => {
                    failures += 1;
                    eprintln!("  trial {t} ({field}): {e}");
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures == 0 && secs < 30.0,
        format!("{links} links, {failures} failures, worst relative margin {worst:.2e}, {secs:.1} s"),
    )
}

fn monotone_links<T: Scalar>(cfg: &GenConfig, t: u64, alpha: f64, beta: f64) -> opentropy::Result<Vec<f64>> {
    let a = random_spd::<T>(cfg, t)?;
    let b = random_partner(&a, beta, 1.0, Direction::Dominating, cfg, t)?;
    let eval = |kind: Option<BoundKind>| -> opentropy::Result<SymMatrix<T>> {
        let h = Elementary::Pow(beta);
        match kind {
            Some(k) => perspective(&PerspectiveSpec { f: scalar_generator(k, alpha, 1.0), h }, &b, &a),
            None => perspective(
                &PerspectiveSpec {
                    f: opentropy::functions::ScalarFn::Entropy { alpha },
                    h,
                },
                &b,
                &a,
            ),
        }
    };
    let r = eval(Some(BoundKind::I))?;
    let q = eval(None)?;
    let k = eval(Some(BoundKind::V))?;
    let mut out = Vec::new();
    for (lo, hi) in [(&r, &q), (&q, &k)] {
        let ord = loewner_leq(lo, hi, DEFAULT_LOEWNER_TOL)?;
        out.push(ord.margin() / loewner_scale(lo, hi));
    }
    Ok(out)
}

/// Runs `suite` for both fields; returns (trials, failures, boundary count,
/// worst relative margin, worst boundary |margin|/scale).
fn run_both_fields(suite: &str, tweak: impl Fn(&mut RunConfig)) -> (u64, u64, u64, f64, f64) {
    let mut totals = (0, 0, 0, f64::INFINITY, 0.0f64);
    for field in [Field::Real, Field::Complex] {
        let mut cfg = RunConfig {
            trials: TRIALS,
            field,
            seed: SEED,
            ..RunConfig::new(suite)
        };
        tweak(&mut cfg);
        let report = match run_suite(&cfg) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("  {suite} ({field}): {e}");
                totals.1 += cfg.trials;
                continue;
            }
        };
        totals.0 += report.summary.trials;
        totals.1 += report.summary.failed + report.summary.precondition_failed;
        totals.2 += report.summary.boundary_trials;
        for (t, trial) in report.trials.iter().enumerate() {
            totals.3 = totals.3.min(trial.worst_relative_margin());
            if opentropy::gen::is_boundary_trial(t as u64) {
                for link in &trial.links {
                    totals.4 = totals.4.max(link.margin.abs() / link.scale);
                }
            }
        }
    }
    totals
}

/// Largest `‖term‖_F / scale` over every term of `suite`, on complex
/// boundary instances `B = A^β`.
fn boundary_terms_vanish(suite_name: &str) -> opentropy::Result<f64> {
    let suite = Suite::by_name(suite_name)?;
    let mut worst = 0.0f64;
    for t in (0..TRIALS).filter(|t| opentropy::gen::is_boundary_trial(*t)) {
        let dim = 1 + (t % 8) as usize;
        let beta = BETA_GRID[(t % 3) as usize];
        let alpha = ALPHA_GRID[(t % 4) as usize];
        let cfg = gen_config(dim, Field::Complex, 2);
        let a = random_spd::<Complex64>(&cfg, t)?;
        let b = random_partner_with(&a, beta, 1.0, Direction::Dominating, &cfg, t, true)?;
        let params = ChainParams {
            alpha,
            beta,
            delta: 1.0,
            lambda: 0.5,
        };
        let mut eval = TermEvaluator::new(&suite, &a, &b, params)?;
        let scale = a.frobenius_norm().max(b.frobenius_norm()).max(1.0);
        for chain in &suite.chains {
            for &term in chain {
                worst = worst.max(eval.get(term)?.frobenius_norm() / scale);
            }
        }
    }
    Ok(worst)
}

/// 2. `I ≤ II ≤ S ≤ III ≤ V` under `A^β ≤ B`, reversed under `A^β ≥ B`.
fn main_sandwich() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for suite in ["thm-main1", "thm-main2"] {
        let (n, fails, boundary, worst, worst_boundary) = run_both_fields(suite, |_| {});
        let zero_terms = boundary_terms_vanish(suite).unwrap_or(f64::INFINITY);
        let frac = boundary as f64 / n.max(1) as f64;
        ok &= fails == 0 && frac >= 0.05 && worst_boundary <= 1e-9 && zero_terms <= 1e-9;
        parts.push(format!(
            "{suite}: {fails}/{n} failing, boundary {:.0}% (|m|/scale {worst_boundary:.1e}, |term|/scale {zero_terms:.1e}), worst {worst:.1e}",
            frac * 100.0
        ));
    }
    outcome(ok, parts.join("; "))
}

/// 3. The seven-term entropy chains, plus per-eigenvalue agreement with the
/// scalar chain on commuting instances.
fn entropy_corollaries() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (suite, direction) in [("cor-entropy-le", Direction::Dominating), ("cor-entropy-ge", Direction::Dominated)] {
        let (n, fails, _, worst, _) = run_both_fields(suite, |c| {
            c.alpha = Some(0.0);
            c.beta = Some(1.0);
        });
        let commuting = commuting_link_agreement(suite, direction);
        let (dev, links) = commuting.unwrap_or((f64::INFINITY, 0));
        ok &= fails == 0 && dev <= 1e-10 && links > 0;
        parts.push(format!(
            "{suite}: {fails}/{n} failing, worst {worst:.1e}, commuting links {links} max rel dev {dev:.1e}"
        ));
    }
    outcome(ok, parts.join("; "))
}

fn commuting_link_agreement(suite_name: &str, direction: Direction) -> opentropy::Result<(f64, usize)> {
    let suite = Suite::by_name(suite_name)?;
    let params = ChainParams {
        alpha: 0.0,
        beta: 1.0,
        delta: 1.0,
        lambda: 0.5,
    };
    let mut worst = 0.0f64;
    let mut links = 0;
    for t in 0..200u64 {
        let cfg = gen_config(1 + (t % 8) as usize, Field::Real, 3);
        let pair = random_commuting_pair::<f64>(&cfg, t, 1.0, 1.0, direction, t % 2 == 0)?;
        let report = chain_check(&suite, &pair.a, &pair.b, &params, DEFAULT_LOEWNER_TOL)?;
        if !report.passed() {
            return Ok((f64::INFINITY, links));
        }
        let chain = &suite.chains[0];
        for (k, pair_terms) in chain.windows(2).enumerate() {
            let (mut expect, mut mag) = (f64::INFINITY, 1.0f64);
            for (&a, &b) in pair.a_spec.iter().zip(&pair.b_spec) {
                let lo = scalar_term(pair_terms[0], a, b, &params);
                let hi = scalar_term(pair_terms[1], a, b, &params);
                expect = expect.min(hi.value - lo.value);
                mag = mag.max(lo.magnitude + hi.magnitude);
            }
            worst = worst.max((report.links[k].margin - expect).abs() / mag);
            links += 1;
        }
    }
    Ok((worst, links))
}

/// 4. The `δ` refinements, and the `δ = 1` collapse of primed to unprimed.
fn delta_refinements() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for suite in ["thm-primed-le", "thm-primed-ge", "prop-tighten", "cor-delta-le", "cor-delta-ge"] {
        let (n, fails, _, worst, _) = run_both_fields(suite, |_| {});
        ok &= fails == 0;
        parts.push(format!("{suite} {fails}/{n} ({worst:.1e})"));
    }
    let collapse = primed_collapse().unwrap_or(f64::INFINITY);
    ok &= collapse <= 1e-10;
    parts.push(format!("delta=1 primed vs unprimed {collapse:.1e}"));
    outcome(ok, parts.join(", "))
}

fn primed_collapse() -> opentropy::Result<f64> {
    let mut worst = 0.0f64;
    for t in 0..200u64 {
        let cfg = gen_config(1 + (t % 8) as usize, Field::Complex, 4);
        let a = random_spd::<Complex64>(&cfg, t)?;
        let b = random_partner(&a, 1.0, 1.0, Direction::Free, &cfg, t)?;
        let alpha = ALPHA_GRID[(t % 4) as usize];
        let beta = BETA_GRID[(t % 3) as usize];
        for (p, u) in [
            (BoundKind::IPrime, BoundKind::I),
            (BoundKind::IIPrime, BoundKind::II),
            (BoundKind::IIIPrime, BoundKind::III),
            (BoundKind::VPrime, BoundKind::V),
        ] {
            let mp = bound(p, &a, &b, alpha, beta, 1.0)?;
            let mu = bound(u, &a, &b, alpha, beta, 1.0)?;
            let scale = mp.frobenius_norm().max(mu.frobenius_norm()).max(1.0);
            worst = worst.max(mp.max_abs_diff(&mu) / scale);
        }
    }
    Ok(worst)
}

/// 5. Harmonic ≤ geometric ≤ arithmetic over an 11-point `λ` grid.
fn weighted_means_chain() -> Outcome {
    let mut fails = 0;
    let mut n = 0;
    let mut worst = f64::INFINITY;
    for i in 0..=10 {
        let lambda = i as f64 / 10.0;
        let (trials, f, _, w, _) = run_both_fields("prop-means", |c| c.lambda = Some(lambda));
        n += trials;
        fails += f;
        worst = worst.min(w);
    }
    let mut scalar_dev = 0.0f64;
    let mut scalar_order = true;
    let mut rng = trial_rng(SEED, Stream::Params);
    for _ in 0..1000 {
        let a: f64 = (rng.random::<f64>() * 6.0 - 3.0).exp();
        let b: f64 = (rng.random::<f64>() * 6.0 - 3.0).exp();
        let m = match weighted_means(&SymMatrix::<f64>::scalar(a), &SymMatrix::scalar(b), 0.5) {
            Ok(m) => m,
            Err(_) => {
                scalar_order = false;
                continue;
            }
        };
        let (h, g, ar) = (m.harmonic.get(0, 0), m.geometric.get(0, 0), m.arithmetic.get(0, 0));
        let (eh, eg, ea) = (2.0 * a * b / (a + b), (a * b).sqrt(), (a + b) / 2.0);
        for (got, want) in [(h, eh), (g, eg), (ar, ea)] {
            scalar_dev = scalar_dev.max((got - want).abs() / want);
        }
        scalar_order &= eh <= eg * (1.0 + 1e-15) && eg <= ea * (1.0 + 1e-15);
    }
    outcome(
        fails == 0 && scalar_dev <= 1e-12 && scalar_order,
        format!("{fails}/{n} failing (11 lambdas x {TRIALS} trials x 2 fields), worst {worst:.1e}; scalar lambda=1/2 rel dev {scalar_dev:.1e}"),
    )
}

/// 6. The refined Hermite–Hadamard chain.
fn hermite_hadamard() -> Outcome {
    let mut rng = trial_rng(SEED, Stream::Base);
    let mut order_fail = 0;
    let mut grid_fail = 0;
    let mut quad_worst = 0.0f64;
    let (mut below, mut above) = (0, 0);
    for i in 0..1000 {
        let alpha = 3.0 * rng.random::<f64>();
        // log-uniform, alternating branches
        let u: f64 = rng.random();
        let x = if i % 2 == 0 { (u * 10f64.ln()).exp() } else { (-u * 10f64.ln()).exp() };
        if (x - 1.0).abs() < 1e-9 {
            continue;
        }
        if x < 1.0 {
            below += 1
        } else {
            above += 1
        }
        match hh_record(alpha, x) {
            Ok(r) if r.min_gap() >= -1e-12 => {}
            _ => order_fail += 1,
        }
        match grid_verify(alpha, x, 1001) {
            Ok(g) if g.pass => {}
            _ => grid_fail += 1,
        }
        let (lo, hi) = if x >= 1.0 { (1.0, x) } else { (x, 1.0) };
        let avg = simpson(|t| integrand(alpha, x, t), lo, hi, 4096) / (hi - lo);
        let closed = integral_avg_closed(alpha, x);
        quad_worst = quad_worst.max((avg - closed).abs() / closed.abs());
    }
    let reference = hh_record(0.0, 4.0).map(|r| r.terms());
    let expect = [-0.6, -5.0 / 9.0, -0.537902, -0.5, -0.375];
    let ref_dev = reference
        .map(|t| t.iter().zip(expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .unwrap_or(f64::INFINITY);
    let closed_dev = (sup_lower_closed(0.0, 4.0) + 5.0 / 9.0).abs() + (inf_upper_closed(0.0, 4.0) + 0.5).abs();
    outcome(
        order_fail == 0 && grid_fail == 0 && quad_worst <= 1e-9 && ref_dev <= 1e-6 && closed_dev <= 1e-15,
        format!(
            "{} points ({below} with x<1, {above} with x>1): {order_fail} order, {grid_fail} grid failures; quadrature rel err {quad_worst:.1e}; alpha=0,x=4 dev {ref_dev:.1e}",
            below + above
        ),
    )
}

/// 7. `A²∘(A∘B) = A∘(A²∘B)` on real symmetric pairs.
fn jordan_identity() -> Outcome {
    let mut worst = 0.0f64;
    let mut fails = 0;
    for t in 0..1000u64 {
        let dim = 1 + (t % 8) as usize;
        let mut rng = trial_rng(trial_seed(SEED, t), Stream::Base);
        let mut sym = || -> SymMatrix<f64> {
            let values: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 10.0 - 5.0).collect();
            let q = random_frame::<f64>(dim, &mut rng);
            opentropy::gen::frame_recompose(&q, &values)
        };
        let (a, b) = (sym(), sym());
        match jordan_check(&a, &b) {
            Ok(r) => {
                let bound = jordan_bound(&a, &b);
                worst = worst.max(r / bound * 1e-10);
                if r > bound {
                    fails += 1;
                }
            }
            Err(_) => fails += 1,
        }
    }
    outcome(
        fails == 0,
        format!("1000 pairs, {fails} over bound, worst residual / (1+|A|^2|B|) {worst:.1e}"),
    )
}

/// 8. Perspective route against explicit geometric-mean formulas.
fn dual_route() -> Outcome {
    let mut worst = 0.0f64;
    let mut errors = 0;
    let deltas = [1.0 / 3.0, 2.0 / 3.0, 1.0, 1.5, 3.0];
    for kind in BoundKind::ALL {
        for t in 0..200u64 {
            let alpha = ALPHA_GRID[(t % 4) as usize];
            let beta = BETA_GRID[(t / 4 % 3) as usize];
            let delta = deltas[(t % 5) as usize];
            let field = if t % 2 == 0 { Field::Real } else { Field::Complex };
            let cfg = gen_config(1 + (t % 8) as usize, field, 5);
            let dev = match field {
                Field::Real => route_gap::<f64>(&cfg, t, kind, alpha, beta, delta),
                Field::Complex => route_gap::<Complex64>(&cfg, t, kind, alpha, beta, delta),
            };
            match dev {
                Ok(d) => worst = worst.max(d),
                Err(_) => errors += 1,
            }
        }
    }
    outcome(
        errors == 0 && worst <= 1e-9,
        format!("11 kinds x 200 trials, {errors} errors, max |P - E| / scale {worst:.1e}"),
    )
}

fn route_gap<T: Scalar>(
    cfg: &GenConfig,
    t: u64,
    kind: BoundKind,
    alpha: f64,
    beta: f64,
    delta: f64,
) -> opentropy::Result<f64> {
    let a = random_spd::<T>(cfg, t)?;
    let b = random_partner(&a, 1.0, 1.0, Direction::Free, cfg, t)?;
    let p = bound(kind, &a, &b, alpha, beta, delta)?;
    let e = explicit_bound(kind, &a, &b, alpha, beta, delta)?;
    let scale = p.frobenius_norm().max(e.frobenius_norm()).max(1.0);
    Ok(p.max_abs_diff(&e) / scale)
}

/// 9. Identical flags give byte-identical reports, whatever the thread count.
fn determinism() -> Outcome {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return outcome(false, format!("tempdir: {e}")),
    };
    let bin = env!("CARGO_BIN_EXE_opentropy");
    let mut reports = Vec::new();
    for (i, threads) in ["1", "1", "4", "8"].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let status = Command::new(bin)
            .args(["verify", "--suite", "cor-delta-le", "--trials", "200", "--field", "complex"])
            .args(["--seed", "99", "--threads", threads, "--out"])
            .arg(&path)
            .output();
        match status {
            Ok(o) if o.status.success() => {}
            other => return outcome(false, format!("run {i} failed: {other:?}")),
        }
        reports.push(std::fs::read(&path).unwrap_or_default());
    }
    let identical = reports.windows(2).all(|w| w[0] == w[1]) && !reports[0].is_empty();
    outcome(
        identical,
        format!("4 runs (threads 1, 1, 4, 8), {} bytes each, identical: {identical}", reports[0].len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("perspective monotonicity", perspective_monotonicity),
        ("main sandwich and its reverse", main_sandwich),
        ("seven-term entropy chains", entropy_corollaries),
        ("delta refinements", delta_refinements),
        ("weighted means", weighted_means_chain),
        ("refined Hermite-Hadamard", hermite_hadamard),
        ("Jordan identity", jordan_identity),
        ("dual-route bound equality", dual_route),
        ("report determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
