use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not self-adjoint: max |M - M*| entry is {max_asymmetry:e} (allowed {allowed:e})")]
    NotSelfAdjoint { max_asymmetry: f64, allowed: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("matrix data malformed: {0}")]
    Malformed(String),

    #[error("{what}: eigenvalue {eigenvalue:e} is outside the domain of {function}")]
    Domain {
        what: String,
        function: String,
        eigenvalue: f64,
    },

    #[error("{function} produced a non-finite value at {x:e}")]
    NonFinite { function: String, x: f64 },

    #[error("Jacobi sweeps did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generated instance violates its construction: {0}")]
    Generator(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
