use num_complex::Complex64 as C64;

use crate::algebra::{condition_number, norm, ComplexMatrix, HermitianProjection, SimplePoleFactor};
use crate::error::{Error, Result};

/// `f(α)` with a larger 2-norm condition number counts as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

/// The dressing factor `I + (α - ᾱ)/(λ - α) π^⊥`: the identity on `Im π`,
/// multiplication by `(λ - ᾱ)/(λ - α)` on its complement.
pub fn dressing_factor(alpha: C64, pi: &HermitianProjection) -> Result<SimplePoleFactor> {
    SimplePoleFactor::new(alpha, pi.complement())
}

/// `π̃`, the projection onto `f(α)^{-1}(Im π)`, so that
/// `g_{α,π} f g_{α,π̃}^{-1}` is holomorphic at `α` and `ᾱ`.
pub fn permute_factor<F>(f: F, alpha: C64, pi: &HermitianProjection) -> Result<HermitianProjection>
where
    F: Fn(C64) -> Result<ComplexMatrix>,
{
    if alpha.im == 0.0 {
        return Err(Error::RealPole { alpha });
    }
    if pi.is_trivial() {
        return Ok(pi.clone());
    }
    let fa = f(alpha)?;
    let n = pi.dim();
    if fa.nrows() != n || fa.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: fa.nrows() });
    }
    let condition = condition_number(&fa);
    if !(condition <= SINGULAR_CONDITION) {
        return Err(Error::SingularFrame { condition, location: Vec::new() });
    }
    let columns = fa
        .lu()
        .solve(pi.basis())
        .ok_or(Error::SingularFrame { condition, location: Vec::new() })?;
    HermitianProjection::from_columns(&columns)
}

/// `f̃ = g_{α,π} f g_{α,π̃}^{-1}` for a loop `f` holomorphic near `α`.
pub struct PermutedLoop<F> {
    f: F,
    g: SimplePoleFactor,
    g_tilde_inv: SimplePoleFactor,
}

pub fn permute_loop<F>(f: F, alpha: C64, pi: &HermitianProjection) -> Result<PermutedLoop<F>>
where
    F: Fn(C64) -> Result<ComplexMatrix>,
{
    let pi_tilde = permute_factor(&f, alpha, pi)?;
    let g = dressing_factor(alpha, pi)?;
    let g_tilde_inv = dressing_factor(alpha, &pi_tilde)?.inverse();
    Ok(PermutedLoop { f, g, g_tilde_inv })
}

impl<F> PermutedLoop<F>
where
    F: Fn(C64) -> Result<ComplexMatrix>,
{
    /// The projection `π̃`.
    pub fn projection(&self) -> HermitianProjection {
        self.g_tilde_inv.projection().complement()
    }

    pub fn eval(&self, lambda: C64) -> Result<ComplexMatrix> {
        Ok(self.g.eval(lambda)? * (self.f)(lambda)? * self.g_tilde_inv.eval(lambda)?)
    }

    /// `‖(1/2πi) ∮ f̃ dλ‖ / max ‖f̃‖` over the circle of `radius` around
    /// `center`, by the trapezoid rule on `angles` nodes. The trapezoid rule
    /// is spectrally accurate on circles, so this is at rounding level when
    /// `f̃` is holomorphic inside and of the order of the residue otherwise.
    pub fn residue_estimate(&self, center: C64, radius: f64, angles: usize) -> Result<f64> {
        let mut sum = ComplexMatrix::zeros(self.g.projection().dim(), self.g.projection().dim());
        let mut scale = 0.0f64;
        for k in 0..angles {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / angles as f64;
            let offset = C64::from_polar(radius, theta);
            let value = self.eval(center + offset)?;
            scale = scale.max(norm(&value));
            sum += value * offset;
        }
        Ok(norm(&sum) / angles as f64 / scale)
    }
}
