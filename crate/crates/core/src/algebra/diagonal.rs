use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::matrix::{max_abs_diagonal, ComplexMatrix};
use crate::error::{Error, Result};

const IMAGINARY_TOL: f64 = 1e-14;
const DIAGONAL_TOL: f64 = 1e-14;

/// A diagonal element of `u(n)`: every entry purely imaginary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalElement {
    entries: Vec<C64>,
}

impl DiagonalElement {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("diagonal element needs at least one entry".into()));
        }
        if let Some(z) = entries
            .iter()
            .find(|z| z.re.abs() > IMAGINARY_TOL || !z.im.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "diagonal entry {z} is not purely imaginary"
            )));
        }
        Ok(Self { entries })
    }

    /// `diag(i s_1, ..., i s_n)` from the imaginary parts.
    pub fn from_imaginary(parts: &[f64]) -> Result<Self> {
        Self::new(parts.iter().map(|&s| C64::new(0.0, s)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.iter().sum()
    }

    pub fn is_trace_free(&self) -> bool {
        self.trace().norm() <= 1e-12 * (1.0 + self.max_abs())
    }

    pub fn is_regular(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| (i + 1..n).all(|j| (self.entries[i] - self.entries[j]).norm() > 1e-12))
    }

    fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.entries.clone()))
    }
}

/// A regular element `a` of the diagonal subalgebra of `su(n)`: purely
/// imaginary, pairwise-distinct entries, trace zero. Regularity makes
/// `ad_a` invertible on off-diagonal matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiagonalElement", into = "DiagonalElement")]
pub struct DiagonalRegular(DiagonalElement);

impl DiagonalRegular {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        Self::try_from(DiagonalElement::new(entries)?)
    }

    pub fn from_imaginary(parts: &[f64]) -> Result<Self> {
        Self::try_from(DiagonalElement::from_imaginary(parts)?)
    }

    /// `diag(i, -i)`.
    pub fn su2() -> Self {
        Self::from_imaginary(&[1.0, -1.0]).unwrap()
    }

    /// `diag(i(n-1), i(n-3), ..., -i(n-1))`.
    pub fn standard(n: usize) -> Result<Self> {
        let parts: Vec<f64> = (0..n).map(|k| (n as f64 - 1.0) - 2.0 * k as f64).collect();
        Self::from_imaginary(&parts)
    }

    pub fn element(&self) -> &DiagonalElement {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn entries(&self) -> &[C64] {
        self.0.entries()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        self.0.to_matrix()
    }
}

impl TryFrom<DiagonalElement> for DiagonalRegular {
    type Error = Error;

    fn try_from(d: DiagonalElement) -> Result<Self> {
        if !d.is_regular() {
            return Err(Error::InvalidInput("diagonal entries must be pairwise distinct".into()));
        }
        if !d.is_trace_free() {
            return Err(Error::InvalidInput(format!("trace {} is not zero", d.trace())));
        }
        Ok(Self(d))
    }
}

impl From<DiagonalRegular> for DiagonalElement {
    fn from(d: DiagonalRegular) -> Self {
        d.0
    }
}

/// Solves `[η, a] = ξ` for off-diagonal `ξ`:
/// `η_ij = ξ_ij / (d_j - d_i)` off the diagonal, zero on it.
pub fn ad_inverse(a: &DiagonalRegular, xi: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    if xi.nrows() != n || xi.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: xi.nrows() });
    }
    let residue = max_abs_diagonal(xi);
    if residue > DIAGONAL_TOL {
        return Err(Error::NotOffDiagonal { residue });
    }
    Ok(ad_inverse_unchecked(a, xi))
}

pub(crate) fn ad_inverse_unchecked(a: &DiagonalRegular, xi: &ComplexMatrix) -> ComplexMatrix {
    let d = a.entries();
    let n = d.len();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(0.0, 0.0)
        } else {
            xi[(i, j)] / (d[j] - d[i])
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{commutator, norm};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ad_inverse_su2_unit() {
        let a = DiagonalRegular::su2();
        let mut xi = ComplexMatrix::zeros(2, 2);
        xi[(0, 1)] = c(1.0, 0.0);
        let eta = ad_inverse(&a, &xi).unwrap();
        assert!((eta[(0, 1)] - c(0.0, 0.5)).norm() < 1e-15);
        assert_eq!(eta[(1, 0)], c(0.0, 0.0));
        assert!(norm(&(commutator(&eta, &a.to_matrix()) - xi)) < 1e-15);
    }

    #[test]
    fn ad_inverse_zero() {
        let a = DiagonalRegular::standard(3).unwrap();
        let eta = ad_inverse(&a, &ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(norm(&eta), 0.0);
    }

    #[test]
    fn ad_inverse_rejects_diagonal() {
        let a = DiagonalRegular::su2();
        let xi = ComplexMatrix::identity(2, 2);
        assert!(matches!(ad_inverse(&a, &xi), Err(Error::NotOffDiagonal { .. })));
    }

    #[test]
    fn regularity_and_trace_checked() {
        assert!(DiagonalRegular::from_imaginary(&[1.0, 1.0, -2.0]).is_err());
        assert!(DiagonalRegular::from_imaginary(&[1.0, 2.0]).is_err());
        assert!(DiagonalElement::new(vec![c(1.0, 0.0)]).is_err());
        let s = DiagonalRegular::standard(4).unwrap();
        assert!(s.element().is_trace_free());
    }
}
