use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{ComplexMatrix, DiagonalElement, DiagonalRegular};
use crate::error::{Error, Result};

/// Largest `|Re|` of an exponent the vacuum will evaluate.
pub const EXPONENT_GUARD: f64 = 700.0;

/// The vacuum frame `exp(Σ_i D_i λ^{k_i} x_i)`, one diagonal generator and
/// power of `λ` per coordinate.
///
/// For the `(b, j)` flow the coordinates are `(x, t)` with terms `(a, 1)` and
/// `(b, j)`; for the `U(n)`-system they are `x_1, …, x_m` with terms
/// `(a_i, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VacuumFrame {
    terms: Vec<(DiagonalElement, u32)>,
}

impl VacuumFrame {
    /// `e^{aλx + bλ^j t}`.
    pub fn flow(a: &DiagonalRegular, b: &DiagonalElement, j: usize) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidInput("flow index j must be at least 1".into()));
        }
        if b.dim() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        Ok(Self { terms: vec![(a.element().clone(), 1), (b.clone(), j as u32)] })
    }

    /// `e^{Σ a_i λ x_i}`.
    pub fn un_system(a_list: &[DiagonalElement]) -> Result<Self> {
        let first = a_list.first().ok_or_else(|| Error::InvalidInput("need at least one generator".into()))?;
        if let Some(bad) = a_list.iter().find(|a| a.dim() != first.dim()) {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: bad.dim() });
        }
        Ok(Self { terms: a_list.iter().map(|a| (a.clone(), 1)).collect() })
    }

    pub fn dim(&self) -> usize {
        self.terms[0].0.dim()
    }

    /// Number of coordinates the frame depends on.
    pub fn ndim(&self) -> usize {
        self.terms.len()
    }

    pub fn generator(&self, k: usize) -> &DiagonalElement {
        &self.terms[k].0
    }

    pub fn power(&self, k: usize) -> u32 {
        self.terms[k].1
    }

    fn exponents(&self, coords: &[f64], lambda: C64) -> Result<Vec<C64>> {
        if coords.len() != self.terms.len() {
            return Err(Error::DimensionMismatch { expected: self.terms.len(), found: coords.len() });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for ((d, p), &x) in self.terms.iter().zip(coords) {
            let lp = lambda.powu(*p) * x;
            for (o, &di) in out.iter_mut().zip(d.entries()) {
                *o += di * lp;
            }
        }
        if let Some(e) = out.iter().find(|e| !(e.re.abs() <= EXPONENT_GUARD)) {
            return Err(Error::Overflow { exponent: e.re });
        }
        Ok(out)
    }

    /// Diagonal of the frame at `coords`.
    pub fn diagonal(&self, coords: &[f64], lambda: C64) -> Result<Vec<C64>> {
        Ok(self.exponents(coords, lambda)?.into_iter().map(C64::exp).collect())
    }

    pub fn eval(&self, coords: &[f64], lambda: C64) -> Result<ComplexMatrix> {
        Ok(ComplexMatrix::from_diagonal(&DVector::from_vec(self.diagonal(coords, lambda)?)))
    }

    pub fn eval_inverse(&self, coords: &[f64], lambda: C64) -> Result<ComplexMatrix> {
        let inv = self.exponents(coords, lambda)?.into_iter().map(|e| (-e).exp()).collect();
        Ok(ComplexMatrix::from_diagonal(&DVector::from_vec(inv)))
    }
}

/// `E_0(x, t, λ)` of the `(b, j)` flow.
pub fn vacuum_eval(vac: &VacuumFrame, x: f64, t: f64, lambda: C64) -> Result<ComplexMatrix> {
    vac.eval(&[x, t], lambda)
}
