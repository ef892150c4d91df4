//! Dense complex matrix algebra for small `n`: diagonal elements of the
//! Cartan subalgebra, Hermitian projections, simple-pole loop factors and
//! the `U(n)` reality meter.

mod diagonal;
mod factor;
mod matrix;
mod projection;
mod reality;

pub use diagonal::{ad_inverse, DiagonalElement, DiagonalRegular};
pub use factor::{SimplePoleFactor, NEAR_POLE_RADIUS};
pub use matrix::{
    commutator, diagonal_part, identity, is_skew_hermitian, max_abs_diagonal, norm, off_diagonal,
    zeros, ComplexMatrix,
};
pub use projection::{HermitianProjection, PROJECTION_TOL, RANK_TOL};
pub use reality::reality_defect;

pub(crate) use factor::pole_coefficient;
pub(crate) use matrix::condition_number;
