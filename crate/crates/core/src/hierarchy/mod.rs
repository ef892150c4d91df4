//! The ZS-AKNS recursion `Q_{b,j}(u)` on a sampled potential, flow
//! right-hand sides, and the Lax connection of each flow.
//!
//! For `u: ℝ → V_n` (off-diagonal) the sequence is fixed by
//! `(Q_{b,j})_x + [u, Q_{b,j}] = [Q_{b,j+1}, a]` with `Q_{b,0} = b` and
//! diagonal parts that vanish at the left end of the grid.

mod flow;
mod potential;
mod recursion;
mod unsystem;

pub use flow::{flow_rhs, lax_connection, LaxConnection};
pub use potential::{PotentialField, DECAY_RATIO};
pub use recursion::{q_next, QSequence, DIAGONAL_RESIDUE_TOL, MAX_DEPTH};
pub use unsystem::un_system_residual;
