//! Space-time monopoles from rational frames: Ward solitons built from
//! holomorphic maps into a Grassmannian, Bäcklund transformations with
//! distinct simple poles, and extraction of `(A, φ)` on a grid.
//!
//! A frame `ψ(x, y, t, λ)` solves
//! `(λ∂_y - ∂_ξ)ψ = (λ(A_y + φ) - A_ξ)ψ` and
//! `(λ∂_η - ∂_y)ψ = (λA_η - A_y + φ)ψ`, with `ξ = (t + x)/2`,
//! `η = (t - x)/2` and `ψ(∞) = I`.

mod fields;
mod frame;
mod grassmann;

pub use fields::{
    bt_monopole, cross_check, extract_fields, h_inverse, h_matrix, monopole_residual, MonopoleFields, AXIS_T,
    AXIS_X, AXIS_Y, INTERIOR_MARGIN,
};
pub(crate) use fields::monopole_residual_detail;
pub use frame::{light_cone, ward_coordinate, ward_soliton, MonopoleFrame, MonopoleStep, Seed};
pub use grassmann::{grassmann_eval, GrassmannMap, INFINITY_CHART};
