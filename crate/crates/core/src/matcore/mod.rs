//! Dense self-adjoint matrices: arithmetic, eigendecomposition, functional
//! calculus, Loewner comparison and the Jordan identity.

pub mod eigen;
pub mod funcalc;
pub mod io;
pub mod jordan;
pub mod loewner;
pub mod matrix;

pub use eigen::{sym_eig, EigenPair};
pub use funcalc::{apply_fn, apply_fn_eig, mat_inv_pd, mat_pow, require_positive, Domain, Elementary, SpectralFn};
pub use io::AnyMatrix;
pub use jordan::{jordan_bound, jordan_check, jordan_product};
pub use loewner::{loewner_leq, loewner_scale, Ordering, DEFAULT_LOEWNER_TOL};
pub use matrix::{Matrix, SymMatrix};
