//! Exact multi-soliton solutions of integrable systems by loop-group
//! dressing, with independent numerical verification.
//!
//! The crate covers the `SU(n)` hierarchy (translation flow, NLS, mKdV and
//! their higher analogues), the `U(n)` and `U(n)/O(n)` systems, and the
//! space-time monopole equation. Solutions come in closed form from
//! Bäcklund transformations applied to the vacuum frame; nothing is ever
//! time-stepped. Every construction can be checked against its Lax pair with
//! the finite-difference residuals in [`verify`].

pub mod algebra;
pub mod cli;
pub mod dressing;
pub mod error;
pub mod grid;
pub mod hierarchy;
pub mod io;
pub mod monopole;
pub mod verify;

pub use algebra::{ComplexMatrix, DiagonalElement, DiagonalRegular, HermitianProjection, SimplePoleFactor};
pub use error::{Error, Result};
pub use grid::{BoxGrid, Field, Grid1D, MatrixField, RealField, ScalarField};

pub use nalgebra;
pub use num_complex::Complex64 as C64;
