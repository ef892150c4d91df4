use crate::algebra::{diagonal_part, max_abs_diagonal, off_diagonal, ComplexMatrix, DiagonalElement, DiagonalRegular};
use crate::error::{Error, Result};
use crate::grid::MatrixField;

use super::potential::PotentialField;

/// Deepest flow index `j` supported by [`super::flow_rhs`].
pub const MAX_DEPTH: usize = 6;

/// Diagonal residue of `(Q_j)_x + [u, Q_j]` that [`q_next`] tolerates.
pub const DIAGONAL_RESIDUE_TOL: f64 = 1e-8;

/// `[u, q]` with the diagonal computed entrywise so that off-diagonal `u`
/// against diagonal `q` gives an exactly zero diagonal.
fn bracket(u: &ComplexMatrix, q: &ComplexMatrix) -> ComplexMatrix {
    u * q - q * u
}

/// `X ↦ [X, a]` entrywise: `X_ij (a_j - a_i)`, exactly zero on the diagonal.
pub(crate) fn bracket_with_diagonal(x: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    let n = x.nrows();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { Default::default() } else { x[(i, j)] * (a[(j, j)] - a[(i, i)]) })
}

fn solve_off_diagonal(a: &DiagonalRegular, s: &ComplexMatrix) -> ComplexMatrix {
    let n = s.nrows();
    let d = a.entries();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { Default::default() } else { s[(i, j)] / (d[j] - d[i]) })
}

/// One recursion step from `Q_j` given the value of `(Q_j)_x + [u, Q_j]`.
/// Returns `Q_{j+1}` and the exact derivative of its diagonal part.
fn step_from_source(a: &DiagonalRegular, u: &MatrixField, source: &MatrixField) -> Result<(MatrixField, MatrixField)> {
    let off = source.map(|s| solve_off_diagonal(a, s));
    let slope = u.zip_map(&off, |u, o| -diagonal_part(&bracket(u, o)))?;
    let diag = slope.antiderivative_decaying()?;
    let next = off.zip_map(&diag, |o, d| o + d)?;
    Ok((next, slope))
}

fn source(u: &MatrixField, q: &MatrixField, dq: &MatrixField) -> Result<MatrixField> {
    let uq = u.zip_map(q, bracket)?;
    dq.zip_map(&uq, |a, b| a + b)
}

/// `Q_{j+1}` from `Q_j`: off-diagonal part by inverting `ad(a)` on
/// `(Q_j)_x + [u, Q_j]`, diagonal part by integrating
/// `D_x = -diag([u, Q_{j+1}^off])` from zero at the left end.
pub fn q_next(a: &DiagonalRegular, u: &PotentialField, q: &MatrixField) -> Result<MatrixField> {
    if q.grid() != u.field().grid() {
        return Err(Error::InvalidInput("Q_j and u live on different grids".into()));
    }
    let dq = q.derivative(1)?;
    let s = source(u.field(), q, &dq)?;
    let residue = s.values().iter().map(max_abs_diagonal).fold(0.0, f64::max);
    if residue > DIAGONAL_RESIDUE_TOL {
        return Err(Error::NotOffDiagonal { residue });
    }
    Ok(step_from_source(a, u.field(), &s)?.0)
}

/// `Q_{b,0..=J}(u)` on the grid of `u`.
///
/// Internally the diagonal derivative of each level is carried exactly from
/// the previous step instead of being re-differentiated, which keeps the
/// diagonal residue at rounding level.
#[derive(Debug, Clone)]
pub struct QSequence {
    a: DiagonalRegular,
    b: DiagonalElement,
    u: PotentialField,
    terms: Vec<MatrixField>,
}

impl QSequence {
    /// Levels `0..=depth`, `depth ≤ MAX_DEPTH + 1`.
    pub fn compute(a: &DiagonalRegular, b: &DiagonalElement, u: &PotentialField, depth: usize) -> Result<Self> {
        if depth > MAX_DEPTH + 1 {
            return Err(Error::InvalidInput(format!(
                "recursion depth {depth} exceeds the supported maximum {}",
                MAX_DEPTH + 1
            )));
        }
        let n = a.dim();
        if b.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
        }
        if u.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: u.dim() });
        }
        if !b.is_trace_free() {
            return Err(Error::InvalidInput(format!("b has nonzero trace {}", b.trace())));
        }
        let bm = b.to_matrix();
        let uf = u.field();
        let mut terms = vec![uf.map(|_| bm.clone())];
        let mut slope = uf.map(|_| ComplexMatrix::zeros(n, n));
        for _ in 0..depth {
            let q = terms.last().unwrap();
            let d_off = q.map(off_diagonal).derivative(1)?;
            let dq = d_off.zip_map(&slope, |o, d| o + d)?;
            let s = source(uf, q, &dq)?;
            let (next, next_slope) = step_from_source(a, uf, &s)?;
            terms.push(next);
            slope = next_slope;
        }
        Ok(Self { a: a.clone(), b: b.clone(), u: u.clone(), terms })
    }

    pub fn a(&self) -> &DiagonalRegular {
        &self.a
    }

    pub fn b(&self) -> &DiagonalElement {
        &self.b
    }

    pub fn potential(&self) -> &PotentialField {
        &self.u
    }

    pub fn depth(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[MatrixField] {
        &self.terms
    }

    pub fn term(&self, k: usize) -> &MatrixField {
        &self.terms[k]
    }

    /// `max_x ‖(Q_k)_x + [u, Q_k] - [Q_{k+1}, a]‖`, with every derivative
    /// taken by finite differences.
    pub fn recursion_residual(&self, k: usize) -> Result<f64> {
        if k >= self.depth() {
            return Err(Error::InvalidInput(format!("level {k} has no successor")));
        }
        let am = self.a.to_matrix();
        let q = &self.terms[k];
        let s = source(self.u.field(), q, &q.derivative(1)?)?;
        let rhs = self.terms[k + 1].map(|x| x * &am - &am * x);
        Ok((&s - &rhs).max_magnitude())
    }
}
