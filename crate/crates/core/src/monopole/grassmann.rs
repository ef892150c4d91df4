use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{ComplexMatrix, HermitianProjection};
use crate::error::{Error, Result};

/// Beyond this modulus the map is evaluated in the chart at infinity.
pub const INFINITY_CHART: f64 = 1e8;

/// A holomorphic map `S² → Gr(k, Cⁿ)` given by `k` columns of polynomials
/// in `w`. `columns[c][i]` holds the ascending coefficients of entry `i` of
/// column `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrassmannMap {
    n: usize,
    columns: Vec<Vec<Vec<C64>>>,
}

impl GrassmannMap {
    pub fn new(n: usize, columns: Vec<Vec<Vec<C64>>>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidInput("a Grassmann map needs at least one column".into()));
        }
        if columns.len() > n {
            return Err(Error::RankDeficient { rank: n, expected: columns.len() });
        }
        for col in &columns {
            if col.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: col.len() });
            }
            if col.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidInput("polynomial coefficients must be finite".into()));
            }
            if col.iter().all(|p| p.iter().all(|z| z.norm() == 0.0)) {
                return Err(Error::InvalidInput("a column of the Grassmann map is identically zero".into()));
            }
        }
        Ok(Self { n, columns })
    }

    /// The constant map onto the span of `vectors`.
    pub fn constant(vectors: &[DVector<C64>]) -> Result<Self> {
        let n = vectors.first().map(|v| v.len()).unwrap_or(0);
        let columns = vectors.iter().map(|v| v.iter().map(|&z| vec![z]).collect()).collect();
        Self::new(n, columns)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<Vec<C64>>] {
        &self.columns
    }

    fn column_degree(col: &[Vec<C64>]) -> usize {
        col.iter()
            .map(|p| p.iter().rposition(|z| z.norm() != 0.0).unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.columns.iter().map(|c| Self::column_degree(c)).max().unwrap_or(0)
    }

    /// The polynomial matrix at `w`, or, for `|w| > INFINITY_CHART`, each
    /// column scaled by `w^{-deg}` and evaluated in `1/w`.
    pub fn columns_at(&self, w: C64) -> ComplexMatrix {
        let k = self.rank();
        let mut m = ComplexMatrix::zeros(self.n, k);
        let far = w.norm() > INFINITY_CHART;
        for (c, col) in self.columns.iter().enumerate() {
            let d = Self::column_degree(col);
            for (i, p) in col.iter().enumerate() {
                m[(i, c)] = if far {
                    let s = w.inv();
                    let mut acc = C64::new(0.0, 0.0);
                    for e in 0..=d {
                        acc = acc * s + p.get(e).copied().unwrap_or_default();
                    }
                    acc
                } else {
                    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, &z| acc * w + z)
                };
            }
        }
        m
    }

    pub fn eval(&self, w: C64) -> Result<HermitianProjection> {
        HermitianProjection::from_columns(&self.columns_at(w)).map_err(|e| match e {
            Error::RankDeficient { rank, expected } => Error::Degenerate { w, rank, expected },
            other => other,
        })
    }
}

/// `π₀(w)`.
pub fn grassmann_eval(pi0: &GrassmannMap, w: C64) -> Result<HermitianProjection> {
    pi0.eval(w)
}
