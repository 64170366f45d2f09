use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use opentropy::bounds::{bound, BoundKind, ChainParams};
use opentropy::entropy::{geo_mean, rel_entropy, rel_entropy_alpha, rel_entropy_alpha_beta, weighted_means};
use opentropy::hermite::{grid_verify, hh_record};
use opentropy::matcore::io::{read_matrix, to_json, AnyMatrix};
use opentropy::matcore::{Elementary, SymMatrix, DEFAULT_LOEWNER_TOL};
use opentropy::oracle::{oracle_compare, term_table, OracleConfig};
use opentropy::perspective::{perspective, PerspectiveSpec};
use opentropy::runner::{run_suite, RunConfig};
use opentropy::{Error, Field, Scalar};

#[derive(Parser)]
#[command(name = "opentropy", version, about = "Relative operator entropies and Loewner-order bound verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an inequality suite on generated instances.
    Verify(VerifyArgs),
    /// Evaluate one operator expression on matrices read from files.
    Compute(ComputeArgs),
    /// Refined Hermite–Hadamard quantities at (alpha, x).
    Hh(HhArgs),
    /// Compare matrix evaluations with scalar closed forms on commuting pairs.
    Oracle(OracleArgs),
}

#[derive(clap::Args)]
struct GenArgs {
    /// Matrix dimension; swept over 1..=8 when omitted.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value = "real")]
    field: Field,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "spec-lo", default_value_t = 0.1)]
    spec_lo: f64,
    #[arg(long = "spec-hi", default_value_t = 10.0)]
    spec_hi: f64,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[command(flatten)]
    gen: GenArgs,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_LOEWNER_TOL)]
    tol: f64,
    #[arg(long)]
    threads: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Expr {
    #[value(name = "S")]
    S,
    #[value(name = "S_a")]
    SA,
    #[value(name = "S_ab")]
    SAb,
    #[value(name = "geomean")]
    Geomean,
    #[value(name = "means")]
    Means,
    #[value(name = "perspective")]
    Perspective,
    #[value(name = "bound")]
    Bound,
}

#[derive(clap::Args)]
struct ComputeArgs {
    #[arg(long)]
    expr: Expr,
    #[arg(long = "A")]
    a: PathBuf,
    #[arg(long = "B")]
    b: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Bound operator for `--expr bound`: I, II, III, V, I', II', III', V',
    /// lower_shift, upper_shift, base_lower.
    #[arg(long)]
    kind: Option<BoundKind>,
    /// Perspective `f`: identity, square, sqrt, log, exp, inv or pow:<p>.
    #[arg(long, default_value = "log", value_parser = parse_elementary)]
    f: Elementary,
    /// Perspective `h`, same vocabulary as `--f`.
    #[arg(long, default_value = "identity", value_parser = parse_elementary)]
    h: Elementary,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct HhArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    x: f64,
    /// Also scan λ on a grid of this many points.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(clap::Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 50)]
    trials: u64,
    #[command(flatten)]
    gen: GenArgs,
    /// Rotate the shared eigenframe instead of using diagonal pairs.
    #[arg(long)]
    rotate: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_elementary(s: &str) -> Result<Elementary, String> {
    Ok(match s {
        "identity" => Elementary::Identity,
        "square" => Elementary::Square,
        "sqrt" => Elementary::Sqrt,
        "log" => Elementary::Log,
        "exp" => Elementary::Exp,
        "inv" => Elementary::Inv,
        other => match other.strip_prefix("pow:") {
            Some(p) => Elementary::Pow(p.parse().map_err(|e| format!("bad exponent `{p}`: {e}"))?),
            None => return Err(format!("unknown function `{other}`")),
        },
    })
}

/// Failure classes mapped to exit codes.
enum Outcome {
    Pass,
    ChecksFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Compute(args) => compute(args),
        Command::Hh(args) => hh(args),
        Command::Oracle(args) => oracle(args),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn write_out(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn verify(args: VerifyArgs) -> Result<Outcome, Error> {
    let cfg = RunConfig {
        suite: args.suite,
        trials: args.trials,
        tol: args.tol,
        dim: args.gen.dim,
        field: args.gen.field,
        seed: args.gen.seed,
        spectrum_lo: args.gen.spec_lo,
        spectrum_hi: args.gen.spec_hi,
        alpha: args.alpha,
        beta: args.beta,
        delta: args.delta,
        lambda: args.lambda,
        threads: args.threads,
    };
    let report = run_suite(&cfg)?;
    print!("{}", report.render_table());
    if let Some(path) = &args.out {
        write_out(path, &report.to_json()?)?;
    }
    Ok(if report.all_passed() {
        Outcome::Pass
    } else {
        Outcome::ChecksFailed
    })
}

fn compute(args: ComputeArgs) -> Result<Outcome, Error> {
    let a = read_matrix(&args.a)?;
    let b = read_matrix(&args.b)?;
    let json = match (a, b) {
        (AnyMatrix::Real(a), AnyMatrix::Real(b)) => compute_as(&args, &a, &b)?,
        (a, b) => compute_as(&args, &a.into_complex(), &b.into_complex())?,
    };
    match &args.out {
        Some(path) => write_out(path, &json)?,
        None => println!("{json}"),
    }
    Ok(Outcome::Pass)
}

fn compute_as<T: Scalar>(args: &ComputeArgs, a: &SymMatrix<T>, b: &SymMatrix<T>) -> Result<String, Error> {
    let single = |m: SymMatrix<T>| Ok(to_json(&m));
    match args.expr {
        Expr::S => single(rel_entropy(a, b)?),
        Expr::SA => single(rel_entropy_alpha(a, b, args.alpha)?),
        Expr::SAb => single(rel_entropy_alpha_beta(a, b, args.alpha, args.beta)?),
        Expr::Geomean => single(geo_mean(a, b, args.alpha, args.beta)?),
        Expr::Perspective => single(perspective(&PerspectiveSpec { f: args.f, h: args.h }, a, b)?),
        Expr::Bound => {
            let kind = args
                .kind
                .ok_or_else(|| Error::InvalidParameter("--expr bound needs --kind".into()))?;
            single(bound(kind, a, b, args.alpha, args.beta, args.delta)?)
        }
        Expr::Means => {
            let m = weighted_means(a, b, args.lambda)?;
            let field = |m: &SymMatrix<T>| -> Result<serde_json::Value, Error> { Ok(serde_json::from_str(&to_json(m))?) };
            let v = serde_json::json!({
                "harmonic": field(&m.harmonic)?,
                "geometric": field(&m.geometric)?,
                "arithmetic": field(&m.arithmetic)?,
            });
            Ok(serde_json::to_string_pretty(&v)?)
        }
    }
}

fn hh(args: HhArgs) -> Result<Outcome, Error> {
    let rec = hh_record(args.alpha, args.x)?;
    println!("{}", serde_json::to_string_pretty(&rec)?);
    let mut ok = rec.min_gap() >= -1e-12;
    if let Some(n) = args.grid {
        let g = grid_verify(args.alpha, args.x, n)?;
        println!("{}", serde_json::to_string_pretty(&g)?);
        ok &= g.pass;
    }
    Ok(if ok { Outcome::Pass } else { Outcome::ChecksFailed })
}

fn oracle(args: OracleArgs) -> Result<Outcome, Error> {
    let cfg = OracleConfig {
        trials: args.trials,
        dim: args.gen.dim,
        field: args.gen.field,
        spectrum_lo: args.gen.spec_lo,
        spectrum_hi: args.gen.spec_hi,
        seed: args.gen.seed,
        rotate: args.rotate,
    };
    let report = oracle_compare(&cfg)?;
    println!("scalar table at a=1, b=4, alpha=0, beta=1, delta=1:");
    let p = ChainParams {
        alpha: 0.0,
        beta: 1.0,
        delta: 1.0,
        lambda: 0.5,
    };
    for (name, v) in term_table(1.0, 4.0, &p) {
        println!("  {name:<12} {v:.6}");
    }
    println!("{:<12} {:>14} {:>14}", "term", "perspective", "explicit");
    for t in &report.terms {
        let e = t.explicit.map(|e| format!("{e:.3e}")).unwrap_or_else(|| "-".into());
        println!("{:<12} {:>14.3e} {:>14}", t.term, t.perspective, e);
    }
    println!(
        "{} evaluations, max deviation {:.3e}: {}",
        report.evaluations,
        report.max_deviation,
        if report.pass { "PASS" } else { "FAIL" }
    );
    if let Some(path) = &args.out {
        write_out(path, &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(if report.pass { Outcome::Pass } else { Outcome::ChecksFailed })
}
