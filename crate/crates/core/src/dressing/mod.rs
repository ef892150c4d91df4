//! Bäcklund transformations by dressing: simple-pole factors are permuted
//! past a frame, and each permutation adds a soliton to the solution.
//!
//! Frames are never sampled. Each [`DressedFrame`] is the vacuum times an
//! ordered list of factors, and the per-point projections `π̃_k` are found by
//! applying the inverse of the previous frame at `α_k`.

mod frame;
mod permute;
mod solution;
mod vacuum;

pub use frame::{DressedFrame, DressingStep, PermutedStep};
pub use permute::{dressing_factor, permute_factor, permute_loop, PermutedLoop, SINGULAR_CONDITION};
pub use solution::{
    dress_flow, dress_uo_restricted, dress_un_system, multi_soliton, SolitonSolution, System, REALITY_TOL,
};
pub use vacuum::{vacuum_eval, VacuumFrame, EXPONENT_GUARD};
