use num_complex::Complex64 as C64;

use super::matrix::{identity, ComplexMatrix};
use super::projection::HermitianProjection;
use crate::error::{Error, Result};

/// Evaluations closer than this to the pole are refused with `NearPole`.
pub const NEAR_POLE_RADIUS: f64 = 1e-10;

/// The rational loop `λ ↦ I + (α - ᾱ)/(λ - α) π`, normalized to `I` at
/// infinity. It satisfies the `U(n)` reality condition
/// `g(λ̄)* g(λ) = I`, and its inverse is the factor with pole `ᾱ` and the
/// same projection.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePoleFactor {
    alpha: C64,
    pi: HermitianProjection,
}

impl SimplePoleFactor {
    pub fn new(alpha: C64, pi: HermitianProjection) -> Result<Self> {
        if alpha.im == 0.0 || !alpha.im.is_finite() || !alpha.re.is_finite() {
            return Err(Error::RealPole { alpha });
        }
        Ok(Self { alpha, pi })
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn projection(&self) -> &HermitianProjection {
        &self.pi
    }

    /// The factor with pole `ᾱ`, which is the pointwise inverse.
    pub fn inverse(&self) -> Self {
        Self { alpha: self.alpha.conj(), pi: self.pi.clone() }
    }

    /// Scalar coefficient `(α - ᾱ)/(λ - α)` in front of `π`.
    pub fn coefficient(&self, lambda: C64) -> Result<C64> {
        pole_coefficient(self.alpha, lambda)
    }

    pub fn eval(&self, lambda: C64) -> Result<ComplexMatrix> {
        let c = self.coefficient(lambda)?;
        Ok(identity(self.pi.dim()) + self.pi.matrix() * c)
    }
}

/// `(α - ᾱ)/(λ - α)`, refusing evaluation at or next to the pole.
pub(crate) fn pole_coefficient(alpha: C64, lambda: C64) -> Result<C64> {
    let d = lambda - alpha;
    if d == C64::new(0.0, 0.0) {
        return Err(Error::PoleEvaluation { alpha });
    }
    if d.norm() < NEAR_POLE_RADIUS {
        return Err(Error::NearPole { alpha, lambda, distance: d.norm() });
    }
    Ok((alpha - alpha.conj()) / d)
}
