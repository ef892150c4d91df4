use crate::algebra::{commutator, DiagonalElement};
use crate::error::{Error, Result};
use crate::grid::MatrixField;

/// Largest value over the grid and over pairs `i < j` of
/// `‖[a_j, ∂_i v] - [a_i, ∂_j v] + [[a_i, v], [a_j, v]]‖`.
pub fn un_system_residual(v: &MatrixField, a_list: &[DiagonalElement]) -> Result<f64> {
    let dims = v.grid().ndim();
    if a_list.len() != dims {
        return Err(Error::DimensionMismatch { expected: dims, found: a_list.len() });
    }
    let n = v.values()[0].nrows();
    if let Some(bad) = a_list.iter().find(|a| a.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
    }
    let mats: Vec<_> = a_list.iter().map(DiagonalElement::to_matrix).collect();
    let derivs = (0..dims).map(|k| v.derivative_along(k, 1)).collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for i in 0..dims {
        for j in i + 1..dims {
            let (ai, aj) = (&mats[i], &mats[j]);
            let lhs = v.values().iter().enumerate().map(|(p, vp)| {
                let di = &derivs[i].values()[p];
                let dj = &derivs[j].values()[p];
                (commutator(aj, di) - commutator(ai, dj) + commutator(&commutator(ai, vp), &commutator(aj, vp))).norm()
            });
            worst = lhs.fold(worst, f64::max);
        }
    }
    Ok(worst)
}
