use nalgebra::DVector;
use num_complex::Complex64 as C64;

use super::matrix::{identity, norm, zeros, ComplexMatrix};
use crate::error::{Error, Result};

/// Relative singular-value threshold below which spanning columns count as
/// dependent.
pub const RANK_TOL: f64 = 1e-12;

/// Tolerance for `π² = π` and `π* = π`.
pub const PROJECTION_TOL: f64 = 1e-12;

/// Orthogonal projection of `C^n` onto a subspace, stored together with the
/// orthonormal basis of its image that was fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianProjection {
    matrix: ComplexMatrix,
    basis: ComplexMatrix,
}

impl HermitianProjection {
    /// Projection onto the span of `columns`. The columns must be linearly
    /// independent.
    pub fn from_span(columns: &[DVector<C64>]) -> Result<Self> {
        let first = columns
            .first()
            .ok_or_else(|| Error::InvalidInput("projection needs at least one column".into()))?;
        let n = first.len();
        if let Some(bad) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Self::from_columns(&ComplexMatrix::from_columns(columns))
    }

    /// Projection onto the column span of `v` (`n x k`, `k` independent columns).
    pub fn from_columns(v: &ComplexMatrix) -> Result<Self> {
        let k = v.ncols();
        if k == 0 {
            return Err(Error::InvalidInput("projection needs at least one column".into()));
        }
        if k > v.nrows() {
            return Err(Error::RankDeficient { rank: v.nrows(), expected: k });
        }
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("spanning columns contain non-finite entries".into()));
        }
        let rank = numerical_rank(v);
        if rank < k {
            return Err(Error::RankDeficient { rank, expected: k });
        }
        let basis = pivoted_orthonormalize(v, k);
        Ok(Self::from_orthonormal(basis))
    }

    /// Projection onto the span of columns known to be independent, however
    /// badly scaled their rows are. Gauss-Jordan column reduction with
    /// complete pivoting brings the columns to unit form before
    /// orthonormalization; only an exactly vanishing pivot is an error.
    pub(crate) fn from_independent_columns(v: &ComplexMatrix) -> Result<Self> {
        let (n, k) = v.shape();
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("spanning columns contain non-finite entries".into()));
        }
        if k == 0 || k > n {
            return Err(Error::RankDeficient { rank: k.min(n), expected: k });
        }
        let mut w = v.clone();
        let mut row_used = vec![false; n];
        let mut col_used = vec![false; k];
        for step in 0..k {
            let mut best = (0, 0, 0.0);
            for c in (0..k).filter(|&c| !col_used[c]) {
                let scale = (0..n).filter(|&r| !row_used[r]).map(|r| w[(r, c)].norm()).fold(0.0, f64::max);
                if scale == 0.0 {
                    return Err(Error::RankDeficient { rank: step, expected: k });
                }
                for r in (0..n).filter(|&r| !row_used[r]) {
                    let rel = w[(r, c)].norm() / scale;
                    if rel > best.2 {
                        best = (r, c, rel);
                    }
                }
            }
            let (r, c, _) = best;
            let pivot = w[(r, c)];
            let col = w.column(c) / pivot;
            w.set_column(c, &col);
            for other in (0..k).filter(|&o| o != c) {
                let f = w[(r, other)];
                if f != C64::new(0.0, 0.0) {
                    let updated = w.column(other) - &col * f;
                    w.set_column(other, &updated);
                }
            }
            row_used[r] = true;
            col_used[c] = true;
        }
        Ok(Self::from_orthonormal(pivoted_orthonormalize(&w, k)))
    }

    /// Validates an explicit matrix as a Hermitian projection.
    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
        }
        let idem = norm(&(&m * &m - &m));
        let herm = norm(&(m.adjoint() - &m));
        if idem > PROJECTION_TOL || herm > PROJECTION_TOL {
            return Err(Error::InvalidInput(format!(
                "not a Hermitian projection: |π²-π| = {idem:e}, |π*-π| = {herm:e}"
            )));
        }
        let rank = m.trace().re.round() as usize;
        if rank == 0 {
            return Ok(Self::zero(n));
        }
        let basis = pivoted_orthonormalize(&m, rank);
        Ok(Self { matrix: m, basis })
    }

    pub fn zero(n: usize) -> Self {
        Self { matrix: zeros(n), basis: ComplexMatrix::zeros(n, 0) }
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: identity(n), basis: identity(n) }
    }

    /// Projection onto the `i`-th coordinate axis.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut e = ComplexMatrix::zeros(n, 1);
        e[(i, 0)] = C64::new(1.0, 0.0);
        Self::from_orthonormal(e)
    }

    fn from_orthonormal(basis: ComplexMatrix) -> Self {
        let p = &basis * basis.adjoint();
        let matrix = (&p + p.adjoint()) * C64::new(0.5, 0.0);
        Self { matrix, basis }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Orthonormal basis of the image, `n x rank`.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// `I - π`, the projection onto the orthogonal complement.
    pub fn complement(&self) -> Self {
        let n = self.dim();
        let matrix = identity(n) - &self.matrix;
        let k = n - self.rank();
        let basis = if k == 0 {
            ComplexMatrix::zeros(n, 0)
        } else {
            pivoted_orthonormalize(&matrix, k)
        };
        Self { matrix, basis }
    }

    /// `0` or `I`: the projections that commute with everything.
    pub fn is_trivial(&self) -> bool {
        self.rank() == 0 || self.rank() == self.dim()
    }

    /// Largest deviation of an entry from its complex conjugate.
    pub fn reality_defect(&self) -> f64 {
        self.matrix.iter().map(|z| z.im.abs()).fold(0.0, f64::max) * 2.0
    }

    pub fn idempotency_defect(&self) -> f64 {
        norm(&(&self.matrix * &self.matrix - &self.matrix))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        norm(&(self.matrix.adjoint() - &self.matrix))
    }
}

fn numerical_rank(v: &ComplexMatrix) -> usize {
    let sv = v.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * max).count()
}

/// Modified Gram-Schmidt with column pivoting on the largest remaining norm,
/// with one re-orthogonalization pass. Returns the first `k` basis vectors.
fn pivoted_orthonormalize(v: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let n = v.nrows();
    let mut work: Vec<DVector<C64>> = v.column_iter().map(|c| c.into_owned()).collect();
    let mut q: Vec<DVector<C64>> = Vec::with_capacity(k);
    for _ in 0..k {
        let (pivot, _) = work
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.norm()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let mut col = work.swap_remove(pivot);
        for _ in 0..2 {
            for b in &q {
                let coeff = b.dotc(&col);
                col -= b * coeff;
            }
        }
        let len = col.norm();
        let col = col / C64::new(len, 0.0);
        for w in work.iter_mut() {
            let coeff = col.dotc(w);
            *w -= &col * coeff;
        }
        q.push(col);
    }
    if q.is_empty() {
        ComplexMatrix::zeros(n, 0)
    } else {
        ComplexMatrix::from_columns(&q)
    }
}
