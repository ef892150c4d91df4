use num_complex::Complex64 as C64;

use crate::algebra::{ComplexMatrix, DiagonalElement, DiagonalRegular};
use crate::error::{Error, Result};
use crate::grid::MatrixField;

use super::potential::PotentialField;
use super::recursion::{bracket_with_diagonal, QSequence, MAX_DEPTH};

fn check_depth(j: usize) -> Result<()> {
    if j == 0 || j > MAX_DEPTH {
        return Err(Error::InvalidInput(format!("flow index j = {j} outside 1..={MAX_DEPTH}")));
    }
    Ok(())
}

/// Right-hand side `u_t = [Q_{b,j+1}(u), a]` of the `(b, j)` flow.
pub fn flow_rhs(a: &DiagonalRegular, b: &DiagonalElement, j: usize, u: &PotentialField) -> Result<PotentialField> {
    check_depth(j)?;
    let seq = QSequence::compute(a, b, u, j + 1)?;
    let am = a.to_matrix();
    Ok(PotentialField::trusted(seq.term(j + 1).map(|q| bracket_with_diagonal(q, &am))))
}

/// The connection `θ = (aλ + u) dx + (bλ^j + Q_{b,1}λ^{j-1} + … + Q_{b,j}) dt`.
#[derive(Debug, Clone)]
pub struct LaxConnection {
    a: ComplexMatrix,
    u: MatrixField,
    coefficients: Vec<MatrixField>,
}

pub fn lax_connection(a: &DiagonalRegular, b: &DiagonalElement, j: usize, u: &PotentialField) -> Result<LaxConnection> {
    check_depth(j)?;
    let seq = QSequence::compute(a, b, u, j)?;
    Ok(LaxConnection { a: a.to_matrix(), u: u.field().clone(), coefficients: seq.terms().to_vec() })
}

impl LaxConnection {
    /// Degree `j` of `θ_t` in `λ`.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `Q_{b,k}`, the coefficient of `λ^{j-k}` in `θ_t`.
    pub fn coefficient(&self, k: usize) -> &MatrixField {
        &self.coefficients[k]
    }

    pub fn theta_x(&self, lambda: C64) -> MatrixField {
        let al = &self.a * lambda;
        self.u.map(|u| &al + u)
    }

    pub fn theta_t(&self, lambda: C64) -> MatrixField {
        let j = self.degree();
        let mut acc = self.coefficients[0].map(|q| q * lambda.powu(j as u32));
        for (k, q) in self.coefficients.iter().enumerate().skip(1) {
            let w = lambda.powu((j - k) as u32);
            acc = acc.zip_map(q, |s, q| s + q * w).expect("coefficients share a grid");
        }
        acc
    }

    pub fn theta_x_at(&self, index: usize, lambda: C64) -> ComplexMatrix {
        &self.a * lambda + &self.u.values()[index]
    }

    pub fn theta_t_at(&self, index: usize, lambda: C64) -> ComplexMatrix {
        let mut acc = self.coefficients[0].values()[index].clone();
        for q in &self.coefficients[1..] {
            acc = acc * lambda + &q.values()[index];
        }
        acc
    }
}
