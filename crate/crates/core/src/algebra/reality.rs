use num_complex::Complex64 as C64;

use super::matrix::{identity, norm, ComplexMatrix};
use crate::error::Result;

/// `max_λ ‖E(λ̄)* E(λ) - I‖` over the samples: zero exactly when the loop
/// satisfies the `U(n)` reality condition at those points.
pub fn reality_defect<F>(frame: F, samples: &[C64]) -> Result<f64>
where
    F: Fn(C64) -> Result<ComplexMatrix>,
{
    let mut worst = 0.0f64;
    for &lambda in samples {
        let e = frame(lambda)?;
        let e_bar = frame(lambda.conj())?;
        let n = e.nrows();
        worst = worst.max(norm(&(e_bar.adjoint() * e - identity(n))));
    }
    Ok(worst)
}
