use crate::error::Result;
use crate::matcore::matrix::{Matrix, SymMatrix};

/// Jordan product `X ∘ Y = (XY + YX) / 2`.
pub fn jordan_product(x: &Matrix<f64>, y: &Matrix<f64>) -> Matrix<f64> {
    x.matmul(y).add(&y.matmul(x)).scaled(0.5)
}

/// `‖ABA − (2(A∘B)∘A − A²∘B)‖_F` for real symmetric `A`, `B`.
pub fn jordan_check(a: &SymMatrix<f64>, b: &SymMatrix<f64>) -> Result<f64> {
    a.check_same_dim(b)?;
    let (a, b) = (a.as_matrix(), b.as_matrix());
    let aba = a.matmul(b).matmul(a);
    let ab = jordan_product(a, b);
    let a2 = a.matmul(a);
    let rhs = jordan_product(&ab, a).scaled(2.0).sub(&jordan_product(&a2, b));
    Ok(aba.sub(&rhs).frobenius_norm())
}

/// Contract bound `1e-10 · (1 + ‖A‖²_F ‖B‖_F)` for [`jordan_check`].
pub fn jordan_bound(a: &SymMatrix<f64>, b: &SymMatrix<f64>) -> f64 {
    let na = a.frobenius_norm();
    1e-10 * (1.0 + na * na * b.frobenius_norm())
}
