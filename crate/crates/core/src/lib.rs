//! Relative operator entropies of positive matrices, noncommutative
//! perspectives, and numerical verification of the Loewner-order bounds
//! relating them.

pub mod bounds;
pub mod entropy;
pub mod error;
pub mod functions;
pub mod gen;
pub mod hermite;
pub mod matcore;
pub mod oracle;
pub mod perspective;
pub mod runner;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
