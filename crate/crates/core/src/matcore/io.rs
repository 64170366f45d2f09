//! Matrix file formats.
//!
//! JSON: `{"field": "real"|"complex", "dim": n, "data": [[row], ...]}` with
//! complex entries written as `[re, im]` pairs. Plain text (real only): `n`
//! on the first line followed by `n` whitespace-separated rows.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matcore::matrix::{Matrix, SymMatrix};
use crate::scalar::{Field, Scalar};

/// A self-adjoint matrix whose field is only known at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Real(SymMatrix<f64>),
    Complex(SymMatrix<Complex64>),
}

impl AnyMatrix {
    pub fn field(&self) -> Field {
        match self {
            AnyMatrix::Real(_) => Field::Real,
            AnyMatrix::Complex(_) => Field::Complex,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyMatrix::Real(m) => m.dim(),
            AnyMatrix::Complex(m) => m.dim(),
        }
    }

    pub fn into_complex(self) -> SymMatrix<Complex64> {
        match self {
            AnyMatrix::Complex(m) => m,
            AnyMatrix::Real(m) => {
                let n = m.dim();
                SymMatrix::hermitian_part(&Matrix::from_fn(n, |i, j| Complex64::new(m.get(i, j), 0.0)))
            }
        }
    }
}

impl From<SymMatrix<f64>> for AnyMatrix {
    fn from(m: SymMatrix<f64>) -> Self {
        AnyMatrix::Real(m)
    }
}

impl From<SymMatrix<Complex64>> for AnyMatrix {
    fn from(m: SymMatrix<Complex64>) -> Self {
        AnyMatrix::Complex(m)
    }
}

/// Serialized form of a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub field: Field,
    pub dim: usize,
    pub data: Vec<Vec<Value>>,
}

impl<T: Scalar> From<&SymMatrix<T>> for MatrixFile {
    fn from(m: &SymMatrix<T>) -> Self {
        let n = m.dim();
        let data = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x = m.get(i, j);
                        match T::FIELD {
                            Field::Real => Value::from(x.re()),
                            Field::Complex => Value::from(vec![x.re(), x.im()]),
                        }
                    })
                    .collect()
            })
            .collect();
        MatrixFile {
            field: T::FIELD,
            dim: n,
            data,
        }
    }
}

impl From<&AnyMatrix> for MatrixFile {
    fn from(m: &AnyMatrix) -> Self {
        match m {
            AnyMatrix::Real(m) => m.into(),
            AnyMatrix::Complex(m) => m.into(),
        }
    }
}

fn entry_real(v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Malformed(format!("expected a real number, got {v}")))
}

fn entry_complex(v: &Value) -> Result<Complex64> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            Ok(Complex64::new(entry_real(&pair[0])?, entry_real(&pair[1])?))
        }
        // a bare number is accepted as a purely real entry
        Value::Number(_) => Ok(Complex64::new(entry_real(v)?, 0.0)),
        other => Err(Error::Malformed(format!("expected [re, im], got {other}"))),
    }
}

impl TryFrom<&MatrixFile> for AnyMatrix {
    type Error = Error;

    fn try_from(f: &MatrixFile) -> Result<Self> {
        if f.data.len() != f.dim || f.data.iter().any(|r| r.len() != f.dim) {
            return Err(Error::Malformed(format!(
                "data is not {0}x{0} as declared by dim",
                f.dim
            )));
        }
        let flat = f.data.iter().flatten();
        Ok(match f.field {
            Field::Real => {
                let v = flat.map(entry_real).collect::<Result<Vec<_>>>()?;
                AnyMatrix::Real(SymMatrix::new(Matrix::from_row_major(f.dim, v)?)?)
            }
            Field::Complex => {
                let v = flat.map(entry_complex).collect::<Result<Vec<_>>>()?;
                AnyMatrix::Complex(SymMatrix::new(Matrix::from_row_major(f.dim, v)?)?)
            }
        })
    }
}

pub fn parse_json(s: &str) -> Result<AnyMatrix> {
    let f: MatrixFile = serde_json::from_str(s)?;
    AnyMatrix::try_from(&f)
}

pub fn parse_text(s: &str) -> Result<AnyMatrix> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Malformed("empty matrix file".into()))?
        .parse()
        .map_err(|e| Error::Malformed(format!("bad dimension line: {e}")))?;
    let mut data = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Malformed(format!("missing row {row}")))?;
        let vals = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| Error::Malformed(format!("row {row}: `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != n {
            return Err(Error::Malformed(format!(
                "row {row} has {} entries, expected {n}",
                vals.len()
            )));
        }
        data.extend(vals);
    }
    if lines.next().is_some() {
        return Err(Error::Malformed("trailing rows after the declared dimension".into()));
    }
    Ok(AnyMatrix::Real(SymMatrix::new(Matrix::from_row_major(n, data)?)?))
}

/// Parses either format, choosing JSON when the content starts with `{`.
pub fn parse_matrix(s: &str) -> Result<AnyMatrix> {
    if s.trim_start().starts_with('{') {
        parse_json(s)
    } else {
        parse_text(s)
    }
}

pub fn read_matrix(path: &Path) -> Result<AnyMatrix> {
    let s = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix(&s)
}

pub fn to_json<T: Scalar>(m: &SymMatrix<T>) -> String {
    serde_json::to_string(&MatrixFile::from(m)).expect("matrix serializes")
}

pub fn to_text(m: &SymMatrix<f64>) -> String {
    let mut s = format!("{}\n", m.dim());
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim()).map(|j| format!("{:e}", m.get(i, j))).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}
