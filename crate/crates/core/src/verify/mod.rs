//! Independent residual oracles. Every check differentiates sampled data
//! with the grid's finite-difference stencils and reports the largest
//! defect in max norm, with its location.
//!
//! Space-time fields live on grids with axes `(t, x)`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{commutator, norm, ComplexMatrix};
use crate::dressing::{SolitonSolution, System};
use crate::error::{Error, Result};
use crate::grid::{BoxGrid, Field, Grid1D, MatrixField, RealField, ScalarField};
use crate::hierarchy::{lax_connection, LaxConnection, PotentialField};
use crate::monopole::{monopole_residual_detail, MonopoleFields};

pub const AXIS_T: usize = 0;
pub const AXIS_X: usize = 1;

/// Points closer than this to a face are skipped.
pub const MARGIN: usize = 4;

/// Minimum grid sizes of the PDE residuals.
pub const MIN_X_POINTS: usize = 64;
pub const MIN_T_POINTS: usize = 16;

/// Samples closer than this to a pole or its conjugate are dropped.
pub const POLE_CLEARANCE: f64 = 1e-3;

/// A residual in max norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    /// Grid multi-index of the maximum.
    pub location: Vec<usize>,
    /// Largest residual for each spectral sample, when there are any.
    pub per_lambda: Vec<(C64, f64)>,
}

impl ResidualReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_abs <= tol
    }
}

/// `{±1, ±2, 1 + i, -1 + 2i, 3}` without the samples near `poles` or their
/// conjugates.
pub fn default_lambda_samples(poles: &[C64]) -> Vec<C64> {
    let c = C64::new;
    [c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0), c(1.0, 1.0), c(-1.0, 2.0), c(3.0, 0.0)]
        .into_iter()
        .filter(|l| poles.iter().all(|p| (l - p).norm() > POLE_CLEARANCE && (l - p.conj()).norm() > POLE_CLEARANCE))
        .collect()
}

fn interior_max<F>(grid: &BoxGrid, margin: usize, f: F) -> (f64, usize)
where
    F: Fn(usize) -> f64 + Sync,
{
    (0..grid.len())
        .into_par_iter()
        .filter(|&k| grid.is_interior(k, margin))
        .map(|k| (f(k), k))
        .reduce(|| (0.0, 0), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
}

fn check_space_time(grid: &BoxGrid) -> Result<()> {
    if grid.ndim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: grid.ndim() });
    }
    let (mt, mx) = (grid.axis(AXIS_T).m, grid.axis(AXIS_X).m);
    if mx < MIN_X_POINTS {
        return Err(Error::GridTooSmall { points: mx, required: MIN_X_POINTS });
    }
    if mt < MIN_T_POINTS {
        return Err(Error::GridTooSmall { points: mt, required: MIN_T_POINTS });
    }
    Ok(())
}

/// Curvature `∂_x θ_t - ∂_t θ_x + [θ_x, θ_t]` of the left-flat connection
/// `θ(λ) = θ_x dx + θ_t dt`, maximized over interior points and samples.
pub fn zero_curvature_residual<F>(theta: F, lambda_samples: &[C64]) -> Result<ResidualReport>
where
    F: Fn(C64) -> Result<(MatrixField, MatrixField)>,
{
    if lambda_samples.len() < 5 {
        return Err(Error::InvalidInput(format!(
            "zero-curvature check needs at least 5 spectral samples, got {}",
            lambda_samples.len()
        )));
    }
    let mut best = (-1.0, 0);
    let mut per_lambda = Vec::with_capacity(lambda_samples.len());
    let mut grid = None;
    for &l in lambda_samples {
        let (tx, tt) = theta(l)?;
        if tx.grid() != tt.grid() {
            return Err(Error::InvalidInput("θ_x and θ_t live on different grids".into()));
        }
        let g = tx.grid();
        if g.ndim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: g.ndim() });
        }
        for axis in g.axes() {
            if axis.m < 2 * MARGIN + 1 {
                return Err(Error::GridTooSmall { points: axis.m, required: 2 * MARGIN + 1 });
            }
        }
        let dtt_x = tt.derivative_along(AXIS_X, 1)?;
        let dtx_t = tx.derivative_along(AXIS_T, 1)?;
        let (r, at) = interior_max(g, MARGIN, |k| {
            let (x, t) = (&tx.values()[k], &tt.values()[k]);
            norm(&(&dtt_x.values()[k] - &dtx_t.values()[k] + commutator(x, t)))
        });
        if r > best.0 {
            best = (r, at);
        }
        grid.get_or_insert_with(|| g.clone());
        per_lambda.push((l, r));
    }
    let grid = grid.expect("at least one sample");
    Ok(ResidualReport { max_abs: best.0, location: grid.multi_index(best.1), per_lambda })
}

fn report(grid: &BoxGrid, (max_abs, at): (f64, usize)) -> ResidualReport {
    ResidualReport { max_abs, location: grid.multi_index(at), per_lambda: Vec::new() }
}

/// The monopole curvature as a report over the `(x, y, t)` grid of
/// `fields`.
pub fn monopole_report(fields: &MonopoleFields, lambda_samples: &[C64]) -> Result<ResidualReport> {
    let (max_abs, at, per_lambda) = monopole_residual_detail(fields, lambda_samples)?;
    Ok(ResidualReport { max_abs, location: fields.grid().multi_index(at), per_lambda })
}

/// `max |q_t - (i/2)(q_xx + 2|q|²q)|` over interior points.
pub fn nls_residual(q: &ScalarField) -> Result<ResidualReport> {
    let grid = q.grid();
    check_space_time(grid)?;
    let qt = q.derivative_along(AXIS_T, 1)?;
    let qxx = q.derivative_along(AXIS_X, 2)?;
    let half_i = C64::new(0.0, 0.5);
    Ok(report(
        grid,
        interior_max(grid, MARGIN, |k| {
            let v = q.values()[k];
            (qt.values()[k] - half_i * (qxx.values()[k] + 2.0 * v.norm_sqr() * v)).norm()
        }),
    ))
}

/// `max |q_t + (q_xxx + 6q²q_x)/4|` over interior points.
pub fn mkdv_residual(q: &RealField) -> Result<ResidualReport> {
    let grid = q.grid();
    check_space_time(grid)?;
    let qt = q.derivative_along(AXIS_T, 1)?;
    let qx = q.derivative_along(AXIS_X, 1)?;
    let qxxx = q.derivative_along(AXIS_X, 3)?;
    Ok(report(
        grid,
        interior_max(grid, MARGIN, |k| {
            let v = q.values()[k];
            (qt.values()[k] + 0.25 * (qxxx.values()[k] + 6.0 * v * v * qx.values()[k])).abs()
        }),
    ))
}

/// `max |q_t - q_x|` over interior points.
pub fn translation_residual(q: &ScalarField) -> Result<ResidualReport> {
    let grid = q.grid();
    check_space_time(grid)?;
    let qt = q.derivative_along(AXIS_T, 1)?;
    let qx = q.derivative_along(AXIS_X, 1)?;
    Ok(report(grid, interior_max(grid, MARGIN, |k| (qt.values()[k] - qx.values()[k]).norm())))
}

/// Entry `(i, j)` of a matrix field.
pub fn entry_field(field: &MatrixField, i: usize, j: usize) -> ScalarField {
    field.map(|m| m[(i, j)])
}

/// The Lax connection of a flow solution on a `(t, x)` grid, rebuilt from
/// the potential alone: one recursion per time slice.
#[derive(Debug, Clone)]
pub struct SpaceTimeConnection {
    grid: BoxGrid,
    slices: Vec<LaxConnection>,
}

impl SpaceTimeConnection {
    /// `u` on a `(t, x)` grid, for the `(b, j)` flow with `a`.
    pub fn from_potential(
        a: &crate::algebra::DiagonalRegular,
        b: &crate::algebra::DiagonalElement,
        j: usize,
        u: &MatrixField,
    ) -> Result<Self> {
        let grid = u.grid().clone();
        if grid.ndim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: grid.ndim() });
        }
        let x_axis = *grid.axis(AXIS_X);
        let mx = x_axis.m;
        let slices = (0..grid.axis(AXIS_T).m)
            .into_par_iter()
            .map(|it| {
                let values = u.values()[it * mx..(it + 1) * mx].to_vec();
                let slice = Field::new(BoxGrid::line(x_axis), values)?;
                lax_connection(a, b, j, &PotentialField::trusted(slice))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grid, slices })
    }

    /// The connection of a dressed flow solution.
    pub fn from_solution(sol: &SolitonSolution, t_axis: Grid1D, x_axis: Grid1D) -> Result<Self> {
        let System::Flow { a, b, j } = sol.system() else {
            return Err(Error::InvalidInput("expected a solution of a hierarchy flow".into()));
        };
        let u = sol.sample_space_time(t_axis, x_axis)?;
        Self::from_potential(a, b, *j, &u)
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    /// `(θ_x, θ_t)` at `λ`.
    pub fn theta(&self, lambda: C64) -> Result<(MatrixField, MatrixField)> {
        let mx = self.grid.axis(AXIS_X).m;
        let pick = |k: usize, f: &dyn Fn(&LaxConnection, usize) -> ComplexMatrix| f(&self.slices[k / mx], k % mx);
        let tx = (0..self.grid.len()).into_par_iter().map(|k| pick(k, &|s, i| s.theta_x_at(i, lambda))).collect();
        let tt = (0..self.grid.len()).into_par_iter().map(|k| pick(k, &|s, i| s.theta_t_at(i, lambda))).collect();
        Ok((Field::new(self.grid.clone(), tx)?, Field::new(self.grid.clone(), tt)?))
    }
}
