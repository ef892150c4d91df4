use num_complex::Complex64 as C64;

use crate::algebra::{is_skew_hermitian, max_abs_diagonal, ComplexMatrix};
use crate::error::{Error, Result};
use crate::grid::{BoxGrid, Field, Grid1D, MatrixField};

/// Decay proxy: end values may not exceed this fraction of the largest value.
pub const DECAY_RATIO: f64 = 1e-8;

const DIAGONAL_TOL: f64 = 1e-14;

/// Off-diagonal potential `u(x)` sampled on a 1-D grid.
///
/// [`PotentialField::new`] admits any off-diagonal `sl(n, C)` potential (the
/// `q, r` of the `SL(2, C)` hierarchy are independent); use
/// [`PotentialField::unitary`] to additionally require values in `su(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialField {
    field: MatrixField,
}

impl PotentialField {
    pub fn new(field: MatrixField) -> Result<Self> {
        if field.grid().ndim() != 1 {
            return Err(Error::InvalidInput("potential must live on a 1-D grid".into()));
        }
        let peak = field.max_magnitude();
        let residue = field.values().iter().map(max_abs_diagonal).fold(0.0, f64::max);
        if residue > DIAGONAL_TOL * (1.0 + peak) {
            return Err(Error::NotOffDiagonal { residue });
        }
        let vals = field.values();
        let ends = vals[0].norm().max(vals[vals.len() - 1].norm());
        if ends > DECAY_RATIO * peak {
            return Err(Error::InvalidInput(format!(
                "potential does not decay: end value {ends:e} against peak {peak:e}"
            )));
        }
        Ok(Self { field })
    }

    /// Wraps a field produced by the crate itself, skipping validation.
    pub(crate) fn trusted(field: MatrixField) -> Self {
        Self { field }
    }

    /// Like [`PotentialField::new`], but every value must be skew-Hermitian.
    pub fn unitary(field: MatrixField) -> Result<Self> {
        if let Some(bad) = field.values().iter().find(|v| !is_skew_hermitian(v, 1e-10)) {
            return Err(Error::InvalidInput(format!(
                "potential value is not skew-Hermitian: {bad}"
            )));
        }
        Self::new(field)
    }

    /// `[[0, q], [r, 0]]`.
    pub fn sl2<Q, R>(grid: Grid1D, q: Q, r: R) -> Result<Self>
    where
        Q: Fn(f64) -> C64 + Sync,
        R: Fn(f64) -> C64 + Sync,
    {
        let field = Field::sample(BoxGrid::line(grid), |x| {
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(0, 1)] = q(x[0]);
            m[(1, 0)] = r(x[0]);
            Ok(m)
        })?;
        Self::new(field)
    }

    /// `[[0, q], [-q̄, 0]]`, the `SU(2)` restriction.
    pub fn su2<Q>(grid: Grid1D, q: Q) -> Result<Self>
    where
        Q: Fn(f64) -> C64 + Sync,
    {
        let q = &q;
        Self::sl2(grid, q, |x| -q(x).conj())
    }

    pub fn zero(grid: Grid1D, n: usize) -> Self {
        let field = Field::sample(BoxGrid::line(grid), |_| Ok(ComplexMatrix::zeros(n, n))).unwrap();
        Self { field }
    }

    pub fn dim(&self) -> usize {
        self.field.values()[0].nrows()
    }

    pub fn grid(&self) -> &Grid1D {
        self.field.grid().axis(0)
    }

    pub fn field(&self) -> &MatrixField {
        &self.field
    }

    pub fn into_field(self) -> MatrixField {
        self.field
    }

    /// Entry `(i, j)` as a scalar field.
    pub fn entry(&self, i: usize, j: usize) -> Field<C64> {
        self.field.map(|m| m[(i, j)])
    }
}
