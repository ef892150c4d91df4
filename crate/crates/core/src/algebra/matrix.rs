use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Dense `n x n` complex matrix. Every algebra element in the crate
/// (elements of `sl(n, C)`, `su(n)`, frames, projections) is carried by this.
pub type ComplexMatrix = DMatrix<C64>;

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(n, n)
}

/// Frobenius norm. It dominates the operator norm, so every tolerance
/// stated against it also holds in operator norm.
pub fn norm(m: &ComplexMatrix) -> f64 {
    m.norm()
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn diagonal_part(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.nrows();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { m[(i, i)] } else { C64::new(0.0, 0.0) })
}

/// `ξ - Σ ξ_ii e_ii`.
pub fn off_diagonal(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.clone();
    for i in 0..m.nrows().min(m.ncols()) {
        out[(i, i)] = C64::new(0.0, 0.0);
    }
    out
}

pub fn max_abs_diagonal(m: &ComplexMatrix) -> f64 {
    (0..m.nrows().min(m.ncols()))
        .map(|i| m[(i, i)].norm())
        .fold(0.0, f64::max)
}

pub fn is_skew_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    norm(&(m + m.adjoint())) <= tol
}

/// 2-norm condition number from the singular values.
pub(crate) fn condition_number(m: &ComplexMatrix) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}
