use num_complex::Complex64 as C64;

use super::frame::DressedFrame;
use super::vacuum::VacuumFrame;
use crate::algebra::{ComplexMatrix, DiagonalElement, DiagonalRegular, HermitianProjection};
use crate::error::{Error, Result};
use crate::grid::{BoxGrid, Field, Grid1D, MatrixField};

/// Largest entrywise imaginary part tolerated in a projection used for the
/// `U(n)/O(n)` restriction.
pub const REALITY_TOL: f64 = 1e-12;

/// Which system a dressed frame solves.
#[derive(Debug, Clone, PartialEq)]
pub enum System {
    /// The `(b, j)` flow of the `SU(n)` hierarchy; coordinates `(x, t)`.
    Flow { a: DiagonalRegular, b: DiagonalElement, j: usize },
    /// The `U(n)`-system; coordinates `x_1, …, x_m`.
    UnSystem { a_list: Vec<DiagonalElement> },
}

/// A dressed frame together with the field it determines: the potential
/// `u = Σ_k (α_k - ᾱ_k)[a, π̃_k]` of a flow, or the map
/// `v = Σ_k (α_k - ᾱ_k) π̃_k^off` of the `U(n)`-system.
#[derive(Debug, Clone)]
pub struct SolitonSolution {
    system: System,
    frame: DressedFrame,
}

impl SolitonSolution {
    /// The vacuum `u = 0` of the `(b, j)` flow.
    pub fn flow_vacuum(a: &DiagonalRegular, b: &DiagonalElement, j: usize) -> Result<Self> {
        if !b.is_trace_free() {
            return Err(Error::InvalidInput(format!("b has nonzero trace {}", b.trace())));
        }
        let frame = DressedFrame::new(VacuumFrame::flow(a, b, j)?);
        Ok(Self { system: System::Flow { a: a.clone(), b: b.clone(), j }, frame })
    }

    /// The vacuum `v = 0` of the `U(n)`-system with generators `a_list`.
    pub fn un_vacuum(a_list: &[DiagonalElement]) -> Result<Self> {
        let frame = DressedFrame::new(VacuumFrame::un_system(a_list)?);
        Ok(Self { system: System::UnSystem { a_list: a_list.to_vec() }, frame })
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn frame(&self) -> &DressedFrame {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// The field at frame coordinates `coords`.
    pub fn potential(&self, coords: &[f64]) -> Result<ComplexMatrix> {
        let n = self.dim();
        let permuted = self.frame.projections(coords)?;
        let mut out = ComplexMatrix::zeros(n, n);
        let a = match &self.system {
            System::Flow { a, .. } => Some(a.entries().to_vec()),
            System::UnSystem { .. } => None,
        };
        for (step, p) in self.frame.steps().iter().zip(permuted.iter()) {
            if p.projection.is_trivial() {
                continue;
            }
            let w = step.alpha - step.alpha.conj();
            let m = p.projection.matrix();
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    out[(i, j)] += match &a {
                        Some(d) => m[(i, j)] * (d[i] - d[j]) * w,
                        None => m[(i, j)] * w,
                    };
                }
            }
        }
        Ok(out)
    }

    /// `u(x, t)` of a flow solution.
    pub fn potential_at(&self, x: f64, t: f64) -> Result<ComplexMatrix> {
        self.potential(&[x, t])
    }

    /// The field on `grid`, whose axes are the frame coordinates in order.
    pub fn sample(&self, grid: &BoxGrid) -> Result<MatrixField> {
        Field::sample(grid.clone(), |c| self.potential(c))
    }

    /// A flow potential on the space-time grid with axes `(t, x)`.
    pub fn sample_space_time(&self, t_axis: Grid1D, x_axis: Grid1D) -> Result<MatrixField> {
        let grid = BoxGrid::new(vec![t_axis, x_axis])?;
        Field::sample(grid, |c| self.potential(&[c[1], c[0]]))
    }
}

fn require_flow(sol: &SolitonSolution) -> Result<()> {
    match sol.system {
        System::Flow { .. } => Ok(()),
        _ => Err(Error::InvalidInput("expected a solution of a hierarchy flow".into())),
    }
}

fn require_un(sol: &SolitonSolution) -> Result<()> {
    match sol.system {
        System::UnSystem { .. } => Ok(()),
        _ => Err(Error::InvalidInput("expected a solution of the U(n)-system".into())),
    }
}

/// Bäcklund transformation of a flow solution at the pole `α` with `π`.
pub fn dress_flow(sol: &SolitonSolution, alpha: C64, pi: &HermitianProjection) -> Result<SolitonSolution> {
    require_flow(sol)?;
    Ok(SolitonSolution { system: sol.system.clone(), frame: sol.frame.with_step(alpha, pi)? })
}

/// Bäcklund transformation of a `U(n)`-system solution.
pub fn dress_un_system(sol: &SolitonSolution, alpha: C64, pi: &HermitianProjection) -> Result<SolitonSolution> {
    require_un(sol)?;
    Ok(SolitonSolution { system: sol.system.clone(), frame: sol.frame.with_step(alpha, pi)? })
}

/// Dressing at `α = is` with a real projection, which keeps a symmetric `v`
/// symmetric.
pub fn dress_uo_restricted(sol: &SolitonSolution, s: f64, pi: &HermitianProjection) -> Result<SolitonSolution> {
    if s == 0.0 || !s.is_finite() {
        return Err(Error::RealPole { alpha: C64::new(0.0, s) });
    }
    let defect = pi.reality_defect();
    if defect > REALITY_TOL {
        return Err(Error::NotRealProjection { defect });
    }
    dress_un_system(sol, C64::new(0.0, s), pi)
}

/// The pure multi-soliton obtained by dressing the vacuum of the `(b, j)`
/// flow once per step, in order.
pub fn multi_soliton(
    a: &DiagonalRegular,
    b: &DiagonalElement,
    j: usize,
    steps: &[(C64, HermitianProjection)],
) -> Result<SolitonSolution> {
    steps
        .iter()
        .try_fold(SolitonSolution::flow_vacuum(a, b, j)?, |sol, (alpha, pi)| dress_flow(&sol, *alpha, pi))
}
