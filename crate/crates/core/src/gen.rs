//! Deterministic random instances.
//!
//! Every draw for trial `t` comes from a ChaCha8 stream keyed by
//! `trial_seed(master_seed, t)`, with a separate stream per purpose, so a
//! trial's instance is independent of how many other trials ran or on which
//! thread.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{loewner_leq, mat_pow, Matrix, SymMatrix};
use crate::scalar::{Field, Scalar};

/// Largest allowed `spectrum_hi / spectrum_lo`.
pub const MAX_CONDITION: f64 = 1e4;
/// Relative Loewner tolerance the generated hypothesis must meet.
pub const HYPOTHESIS_TOL: f64 = 1e-9;
/// Every `BOUNDARY_PERIOD`-th trial uses the equality construction.
pub const BOUNDARY_PERIOD: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub dim: usize,
    pub field: Field,
    pub spectrum_lo: f64,
    pub spectrum_hi: f64,
    pub master_seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            dim: 4,
            field: Field::Real,
            spectrum_lo: 0.1,
            spectrum_hi: 10.0,
            master_seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=32).contains(&self.dim) {
            return Err(Error::InvalidParameter(format!("dim = {} must be in 1..=32", self.dim)));
        }
        if !(self.spectrum_lo > 0.0 && self.spectrum_lo.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "spectrum_lo = {} must be positive",
                self.spectrum_lo
            )));
        }
        if !(self.spectrum_hi >= self.spectrum_lo && self.spectrum_hi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "spectrum_hi = {} must be at least spectrum_lo",
                self.spectrum_hi
            )));
        }
        if self.spectrum_hi / self.spectrum_lo > MAX_CONDITION {
            return Err(Error::InvalidParameter(format!(
                "spectrum ratio {} exceeds the condition cap {MAX_CONDITION:e}",
                self.spectrum_hi / self.spectrum_lo
            )));
        }
        Ok(())
    }

    pub fn with_dim(self, dim: usize) -> Self {
        Self { dim, ..self }
    }
}

/// Per-trial seed: SplitMix64 finalizer over the master seed and trial index.
pub fn trial_seed(master_seed: u64, trial: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(mix(master_seed) ^ trial.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Independent streams within one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Base = 1,
    Partner = 2,
    Params = 3,
}

pub fn trial_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

fn gaussian<T: Scalar>(rng: &mut impl Rng) -> T {
    let re: f64 = rng.sample(StandardNormal);
    match T::FIELD {
        Field::Real => T::from_re(re),
        Field::Complex => {
            let im: f64 = rng.sample(StandardNormal);
            T::from_parts(re * std::f64::consts::FRAC_1_SQRT_2, im * std::f64::consts::FRAC_1_SQRT_2)
        }
    }
}

/// Unitary (orthogonal) frame from a Gaussian matrix by two passes of
/// modified Gram–Schmidt, with real positive diagonal.
pub fn random_frame<T: Scalar>(dim: usize, rng: &mut impl Rng) -> Matrix<T> {
    loop {
        let mut q = Matrix::<T>::from_fn(dim, |_, _| gaussian(rng));
        let mut ok = true;
        for j in 0..dim {
            for _ in 0..2 {
                for k in 0..j {
                    let mut dot = T::zero();
                    for i in 0..dim {
                        dot += q[(i, k)].conj() * q[(i, j)];
                    }
                    for i in 0..dim {
                        let qik = q[(i, k)];
                        q[(i, j)] = q[(i, j)] - qik * dot;
                    }
                }
            }
            let norm = (0..dim).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            let fix = q[(j, j)].phase().conj().scale(1.0 / norm);
            for i in 0..dim {
                q[(i, j)] = q[(i, j)] * fix;
            }
        }
        if ok {
            return q;
        }
    }
}

/// `Q · diag(values) · Q*`.
pub fn frame_recompose<T: Scalar>(q: &Matrix<T>, values: &[f64]) -> SymMatrix<T> {
    let n = q.dim();
    let d = Matrix::from_fn(n, |i, j| if i == j { T::from_re(values[i]) } else { T::zero() });
    SymMatrix::hermitian_part(&q.matmul(&d).matmul(&q.adjoint()))
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    let u: f64 = rng.random();
    (lo.ln() + u * (hi.ln() - lo.ln())).exp().clamp(lo, hi)
}

fn random_spd_with<T: Scalar>(cfg: &GenConfig, rng: &mut impl Rng) -> SymMatrix<T> {
    let values: Vec<f64> = (0..cfg.dim)
        .map(|_| log_uniform(rng, cfg.spectrum_lo, cfg.spectrum_hi))
        .collect();
    if cfg.dim == 1 {
        return SymMatrix::scalar(values[0]);
    }
    let q = random_frame::<T>(cfg.dim, rng);
    frame_recompose(&q, &values)
}

/// Strictly positive matrix with log-uniform spectrum in
/// `[spectrum_lo, spectrum_hi]` and a random eigenframe.
pub fn random_spd<T: Scalar>(cfg: &GenConfig, trial: u64) -> Result<SymMatrix<T>> {
    cfg.validate()?;
    let mut rng = trial_rng(trial_seed(cfg.master_seed, trial), Stream::Base);
    Ok(random_spd_with(cfg, &mut rng))
}

/// How the partner `B` relates to `δ A^β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `δ A^β ≤ B`.
    Dominating,
    /// `B ≤ δ A^β`.
    Dominated,
    /// Independent strictly positive `B`.
    Free,
}

/// Whether `trial` uses the equality construction.
pub fn is_boundary_trial(trial: u64) -> bool {
    trial % BOUNDARY_PERIOD == 0
}

/// Partner `B` for `A` with the Loewner relation given by `direction`.
///
/// Dominating: `B = A^{β/2} (δI + W) A^{β/2}` with `W = G G*` PSD.
/// Dominated: `B = A^{β/2} D A^{β/2}` with `spec D ⊂ [δ·lo/hi, δ]`.
/// Boundary trials (see [`is_boundary_trial`]) take `W = 0` / `D = δI`, and
/// `B = A` for [`Direction::Free`].
pub fn random_partner<T: Scalar>(
    a: &SymMatrix<T>,
    beta: f64,
    delta: f64,
    direction: Direction,
    cfg: &GenConfig,
    trial: u64,
) -> Result<SymMatrix<T>> {
    random_partner_with(a, beta, delta, direction, cfg, trial, is_boundary_trial(trial))
}

pub fn random_partner_with<T: Scalar>(
    a: &SymMatrix<T>,
    beta: f64,
    delta: f64,
    direction: Direction,
    cfg: &GenConfig,
    trial: u64,
    boundary: bool,
) -> Result<SymMatrix<T>> {
    cfg.validate()?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be positive")));
    }
    let n = a.dim();
    let mut rng = trial_rng(trial_seed(cfg.master_seed, trial), Stream::Partner);
    if direction == Direction::Free {
        if boundary {
            return Ok(a.clone());
        }
        return Ok(random_spd_with(&cfg.with_dim(n), &mut rng));
    }

    let core = match direction {
        Direction::Dominating => {
            let mut core = SymMatrix::<T>::identity(n).scaled(delta);
            if !boundary {
                let k = rng.random_range(1..=n);
                let g = Matrix::<T>::from_fn(n, |_, j| if j < k { gaussian(&mut rng) } else { T::zero() });
                let w = SymMatrix::hermitian_part(&g.matmul(&g.adjoint()));
                let norm = w.frobenius_norm();
                if norm > 0.0 {
                    let target: f64 = cfg.spectrum_hi * rng.random::<f64>();
                    core = core.add(&w.scaled(target / norm));
                }
            }
            core
        }
        Direction::Dominated => {
            if boundary {
                SymMatrix::identity(n).scaled(delta)
            } else {
                let lo = delta * cfg.spectrum_lo / cfg.spectrum_hi;
                let values: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, lo.min(delta), delta)).collect();
                if n == 1 {
                    SymMatrix::scalar(values[0])
                } else {
                    frame_recompose(&random_frame::<T>(n, &mut rng), &values)
                }
            }
        }
        Direction::Free => unreachable!(),
    };

    let half = mat_pow(a, beta / 2.0)?;
    let b = core.sandwiched(&half);

    let target = mat_pow(a, beta)?.scaled(delta);
    let (lo, hi) = match direction {
        Direction::Dominating => (&target, &b),
        _ => (&b, &target),
    };
    let check = loewner_leq(lo, hi, HYPOTHESIS_TOL)?;
    if !check.holds() {
        return Err(Error::Generator(format!(
            "{direction:?} partner fails its relation to delta*A^beta (margin {:e})",
            check.margin()
        )));
    }
    Ok(b)
}

/// A pair sharing an eigenframe, with the shared spectra exposed for scalar
/// comparisons: `A = Q diag(a) Q*`, `B = Q diag(b) Q*`.
#[derive(Debug, Clone)]
pub struct CommutingPair<T> {
    pub a: SymMatrix<T>,
    pub b: SymMatrix<T>,
    pub a_spec: Vec<f64>,
    pub b_spec: Vec<f64>,
    /// The shared eigenframe (identity when unrotated).
    pub frame: Matrix<T>,
}

/// Commuting pair whose ratios `x_i = b_i / a_i^β` satisfy `direction`
/// relative to `δ`. With `rotate = false` both matrices are diagonal.
pub fn random_commuting_pair<T: Scalar>(
    cfg: &GenConfig,
    trial: u64,
    beta: f64,
    delta: f64,
    direction: Direction,
    rotate: bool,
) -> Result<CommutingPair<T>> {
    cfg.validate()?;
    let n = cfg.dim;
    let mut rng = trial_rng(trial_seed(cfg.master_seed, trial), Stream::Base);
    let a_spec: Vec<f64> = (0..n)
        .map(|_| log_uniform(&mut rng, cfg.spectrum_lo, cfg.spectrum_hi))
        .collect();
    let ratio_span = cfg.spectrum_hi / cfg.spectrum_lo;
    let b_spec: Vec<f64> = a_spec
        .iter()
        .map(|&a| {
            let x = match direction {
                Direction::Dominating => delta * log_uniform(&mut rng, 1.0, ratio_span.sqrt().max(1.0)),
                Direction::Dominated => delta / log_uniform(&mut rng, 1.0, ratio_span.sqrt().max(1.0)),
                Direction::Free => log_uniform(&mut rng, 1.0 / ratio_span.sqrt(), ratio_span.sqrt()),
            };
            a.powf(beta) * x
        })
        .collect();
    let (a, b, frame) = if rotate && n > 1 {
        let q = random_frame::<T>(n, &mut rng);
        (frame_recompose(&q, &a_spec), frame_recompose(&q, &b_spec), q)
    } else {
        (SymMatrix::diagonal(&a_spec), SymMatrix::diagonal(&b_spec), Matrix::identity(n))
    };
    Ok(CommutingPair {
        a,
        b,
        a_spec,
        b_spec,
        frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::sym_eig;
    use num_complex::Complex64;

    #[test]
    fn unit_spectrum_scalar() {
        let cfg = GenConfig {
            dim: 1,
            spectrum_lo: 1.0,
            spectrum_hi: 1.0,
            ..GenConfig::default()
        };
        assert_eq!(random_spd::<f64>(&cfg, 0).unwrap(), SymMatrix::scalar(1.0));
        assert_eq!(random_spd::<Complex64>(&cfg, 5).unwrap(), SymMatrix::scalar(1.0));
    }

    #[test]
    fn same_trial_is_bit_identical() {
        let cfg = GenConfig {
            dim: 5,
            field: Field::Complex,
            master_seed: 42,
            ..GenConfig::default()
        };
        let a = random_spd::<Complex64>(&cfg, 17).unwrap();
        assert_eq!(a, random_spd::<Complex64>(&cfg, 17).unwrap());
        assert_ne!(a, random_spd::<Complex64>(&cfg, 18).unwrap());
    }

    #[test]
    fn spectrum_stays_in_range() {
        let cfg = GenConfig {
            dim: 4,
            master_seed: 3,
            ..GenConfig::default()
        };
        for trial in 0..20 {
            let e = sym_eig(&random_spd::<f64>(&cfg, trial).unwrap()).unwrap();
            assert!(e.min_eigenvalue() >= cfg.spectrum_lo * (1.0 - 1e-10));
            assert!(e.max_eigenvalue() <= cfg.spectrum_hi * (1.0 + 1e-10));
        }
    }

    #[test]
    fn frames_are_unitary() {
        let mut rng = trial_rng(9, Stream::Base);
        let q = random_frame::<Complex64>(6, &mut rng);
        let g = q.adjoint().matmul(&q);
        let defect = SymMatrix::hermitian_part(&g).max_abs_diff(&SymMatrix::identity(6));
        assert!(defect < 1e-14);
    }

    #[test]
    fn config_validation() {
        let ok = GenConfig::default();
        assert!(ok.validate().is_ok());
        assert!(GenConfig { dim: 0, ..ok }.validate().is_err());
        assert!(GenConfig { dim: 33, ..ok }.validate().is_err());
        assert!(GenConfig { spectrum_lo: 0.0, ..ok }.validate().is_err());
        assert!(GenConfig {
            spectrum_lo: 1e-3,
            spectrum_hi: 100.0,
            ..ok
        }
        .validate()
        .is_err());
    }

    #[test]
    fn boundary_partner_is_scaled_power() {
        let cfg = GenConfig::default();
        let a = random_spd::<f64>(&cfg, 0).unwrap();
        let b = random_partner(&a, 1.0, 1.0, Direction::Dominating, &cfg, 0).unwrap();
        assert!(b.max_abs_diff(&a) < 1e-13);
        let b = random_partner_with(&a, 2.0, 0.5, Direction::Dominated, &cfg, 1, true).unwrap();
        let expect = mat_pow(&a, 2.0).unwrap().scaled(0.5);
        assert!(b.max_abs_diff(&expect) < 1e-12 * expect.frobenius_norm());
    }

    #[test]
    fn identity_base_dominating() {
        let cfg = GenConfig::default().with_dim(3);
        let b = random_partner(&SymMatrix::<f64>::identity(3), 1.0, 1.0, Direction::Dominating, &cfg, 7)
            .unwrap();
        let w = b.sub(&SymMatrix::identity(3));
        assert!(sym_eig(&w).unwrap().min_eigenvalue() >= -1e-14);
    }

    #[test]
    fn dominating_delta_two() {
        let cfg = GenConfig {
            dim: 3,
            field: Field::Complex,
            master_seed: 11,
            ..GenConfig::default()
        };
        for trial in 1..10 {
            let a = random_spd::<Complex64>(&cfg, trial).unwrap();
            let b = random_partner(&a, 0.5, 2.0, Direction::Dominating, &cfg, trial).unwrap();
            let lhs = mat_pow(&a, 0.5).unwrap().scaled(2.0);
            let ord = loewner_leq(&lhs, &b, 1e-10).unwrap();
            assert!(ord.holds(), "{ord:?}");
        }
    }

    #[test]
    fn commuting_pairs_commute() {
        let cfg = GenConfig {
            dim: 4,
            master_seed: 5,
            ..GenConfig::default()
        };
        let p = random_commuting_pair::<f64>(&cfg, 2, 1.0, 1.0, Direction::Dominating, true).unwrap();
        let ab = p.a.matmul(&p.b);
        let ba = p.b.matmul(&p.a);
        let comm = SymMatrix::hermitian_part(&ab.sub(&ba)).frobenius_norm();
        assert!(comm < 1e-11, "{comm}");
        for (a, b) in p.a_spec.iter().zip(&p.b_spec) {
            assert!(b / a >= 1.0);
        }
    }
}
