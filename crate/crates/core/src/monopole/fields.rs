use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::frame::{MonopoleFrame, Seed};
use crate::algebra::{commutator, identity, norm, zeros, ComplexMatrix};
use crate::error::{Error, Result};
use crate::grid::{BoxGrid, Field, MatrixField};

/// Axis order of monopole grids.
pub const AXIS_X: usize = 0;
pub const AXIS_Y: usize = 1;
pub const AXIS_T: usize = 2;

/// Points this close to a face are excluded from residuals and
/// cross-checks: the fields carry one-sided derivative stencils there and
/// the residual differentiates them again.
pub const INTERIOR_MARGIN: usize = 6;

/// The connection and Higgs field of a monopole on an `(x, y, t)` grid,
/// stored in light-cone form: `A_ξ`, `A_η`, `B₊ = A_y + φ`, `B₋ = A_y - φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonopoleFields {
    a_xi: MatrixField,
    a_eta: MatrixField,
    b_plus: MatrixField,
    b_minus: MatrixField,
}

impl MonopoleFields {
    /// `A = φ = 0`.
    pub fn vacuum(grid: &BoxGrid, n: usize) -> Result<Self> {
        check_grid(grid)?;
        let z = Field::new(grid.clone(), vec![zeros(n); grid.len()])?;
        Ok(Self { a_xi: z.clone(), a_eta: z.clone(), b_plus: z.clone(), b_minus: z })
    }

    pub fn from_light_cone(a_xi: MatrixField, a_eta: MatrixField, b_plus: MatrixField, b_minus: MatrixField) -> Result<Self> {
        check_grid(a_xi.grid())?;
        for f in [&a_eta, &b_plus, &b_minus] {
            if f.grid() != a_xi.grid() {
                return Err(Error::InvalidInput("monopole fields live on different grids".into()));
            }
        }
        Ok(Self { a_xi, a_eta, b_plus, b_minus })
    }

    /// From `(A_t, A_x, A_y, φ)`.
    pub fn from_components(a_t: &MatrixField, a_x: &MatrixField, a_y: &MatrixField, phi: &MatrixField) -> Result<Self> {
        Self::from_light_cone(
            a_t.zip_map(a_x, |t, x| t + x)?,
            a_t.zip_map(a_x, |t, x| t - x)?,
            a_y.zip_map(phi, |y, p| y + p)?,
            a_y.zip_map(phi, |y, p| y - p)?,
        )
    }

    pub fn grid(&self) -> &BoxGrid {
        self.a_xi.grid()
    }

    pub fn a_xi(&self) -> &MatrixField {
        &self.a_xi
    }

    pub fn a_eta(&self) -> &MatrixField {
        &self.a_eta
    }

    /// `A_y + φ`.
    pub fn b_plus(&self) -> &MatrixField {
        &self.b_plus
    }

    /// `A_y - φ`.
    pub fn b_minus(&self) -> &MatrixField {
        &self.b_minus
    }

    pub fn a_y(&self) -> MatrixField {
        self.b_plus.zip_map(&self.b_minus, |p, m| (p + m) * C64::new(0.5, 0.0)).expect("same grid")
    }

    pub fn phi(&self) -> MatrixField {
        self.b_plus.zip_map(&self.b_minus, |p, m| (p - m) * C64::new(0.5, 0.0)).expect("same grid")
    }

    /// `A_t = (A_ξ + A_η)/2`.
    pub fn a_t(&self) -> MatrixField {
        self.a_xi.zip_map(&self.a_eta, |p, m| (p + m) * C64::new(0.5, 0.0)).expect("same grid")
    }

    /// `A_x = (A_ξ - A_η)/2`.
    pub fn a_x(&self) -> MatrixField {
        self.a_xi.zip_map(&self.a_eta, |p, m| (p - m) * C64::new(0.5, 0.0)).expect("same grid")
    }

    /// Largest `‖X + X^*‖` over the four fields and all points.
    pub fn skew_defect(&self) -> f64 {
        self.all()
            .iter()
            .flat_map(|f| f.values().iter())
            .map(|m| norm(&(m + m.adjoint())))
            .fold(0.0, f64::max)
    }

    /// Pointwise `(Σ ‖field‖²)^{1/2}`.
    pub fn density(&self) -> Field<f64> {
        let values = (0..self.grid().len())
            .into_par_iter()
            .map(|k| self.all().iter().map(|f| f.values()[k].norm_squared()).sum::<f64>().sqrt())
            .collect();
        Field::new(self.grid().clone(), values).expect("grid length")
    }

    /// Largest field density on the spatial faces `x = ±L`, `y = ±L`
    /// relative to the largest density anywhere. Zero for the vacuum.
    pub fn face_decay_ratio(&self) -> f64 {
        let d = self.density();
        let peak = d.max_magnitude();
        if peak == 0.0 {
            return 0.0;
        }
        let (face, _) = d.argmax_magnitude(|k| self.grid().on_face(k, &[AXIS_X, AXIS_Y]));
        face / peak
    }

    fn all(&self) -> [&MatrixField; 4] {
        [&self.a_xi, &self.a_eta, &self.b_plus, &self.b_minus]
    }
}

fn check_grid(grid: &BoxGrid) -> Result<()> {
    if grid.ndim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: grid.ndim() });
    }
    Ok(())
}

/// `π̃_k` of step `k` at every grid point.
fn permuted_field(frame: &MonopoleFrame, k: usize, grid: &BoxGrid) -> Result<MatrixField> {
    Field::sample(grid.clone(), |c| Ok(frame.projections([c[0], c[1], c[2]])?[k].projection.matrix().clone()))
}

/// `∂_ξ = ∂_t + ∂_x`, `∂_η = ∂_t - ∂_x`, `∂_y`.
fn light_cone_derivatives(f: &MatrixField) -> Result<[MatrixField; 3]> {
    let dx = f.derivative_along(AXIS_X, 1)?;
    let dy = f.derivative_along(AXIS_Y, 1)?;
    let dt = f.derivative_along(AXIS_T, 1)?;
    Ok([dt.zip_map(&dx, |t, x| t + x)?, dt.zip_map(&dx, |t, x| t - x)?, dy])
}

/// `h = π̃ + (α/ᾱ) π̃^⊥`.
pub fn h_matrix(alpha: C64, pi: &ComplexMatrix) -> ComplexMatrix {
    let n = pi.nrows();
    pi + (identity(n) - pi) * (alpha / alpha.conj())
}

/// `h^{-1} = π̃ + (ᾱ/α) π̃^⊥`.
pub fn h_inverse(alpha: C64, pi: &ComplexMatrix) -> ComplexMatrix {
    let n = pi.nrows();
    pi + (identity(n) - pi) * (alpha.conj() / alpha)
}

/// Hermitian part of `d`, projected onto the tangent space of the
/// Grassmannian at `π`: `π D π^⊥ + π^⊥ D π`.
fn tangent(pi: &ComplexMatrix, d: &ComplexMatrix) -> ComplexMatrix {
    let n = pi.nrows();
    let sym = (d + d.adjoint()) * C64::new(0.5, 0.0);
    let perp = identity(n) - pi;
    pi * &sym * &perp + &perp * &sym * pi
}

/// The field update of one dressing step with pole `α` and permuted
/// projection field `π̃`:
///
/// `Ã_ξ = (1 - ᾱ/α)(∂_ξ π̃) h + h^{-1} A_ξ h`,
/// `Ã_y - φ̃ = (1 - ᾱ/α)(∂_y π̃) h + h^{-1}(A_y - φ) h`,
/// while `A_η` and `A_y + φ` are carried over unchanged.
fn update(fields: &MonopoleFields, alpha: C64, pi: &MatrixField) -> Result<MonopoleFields> {
    let [d_xi, _, d_y] = light_cone_derivatives(pi)?;
    let c = C64::new(1.0, 0.0) - alpha.conj() / alpha;
    let len = fields.grid().len();
    let (a_xi, b_minus): (Vec<_>, Vec<_>) = (0..len)
        .into_par_iter()
        .map(|k| {
            let p = &pi.values()[k];
            let h = h_matrix(alpha, p);
            let h_inv = h_inverse(alpha, p);
            let a = tangent(p, &d_xi.values()[k]) * c * &h + &h_inv * &fields.a_xi.values()[k] * &h;
            let b = tangent(p, &d_y.values()[k]) * c * &h + &h_inv * &fields.b_minus.values()[k] * &h;
            (a, b)
        })
        .unzip();
    let grid = fields.grid().clone();
    Ok(MonopoleFields {
        a_xi: Field::new(grid.clone(), a_xi)?,
        a_eta: fields.a_eta.clone(),
        b_plus: fields.b_plus.clone(),
        b_minus: Field::new(grid, b_minus)?,
    })
}

/// Bäcklund transformation of a monopole: adds the pole `α` with `seed` to
/// `frame` and updates `fields` accordingly.
pub fn bt_monopole(
    frame: &MonopoleFrame,
    fields: &MonopoleFields,
    alpha: C64,
    seed: Seed,
) -> Result<(MonopoleFrame, MonopoleFields)> {
    let next = frame.with_step(alpha, seed)?;
    if fields.a_xi.values().first().map(|m| m.nrows()) != Some(next.dim()) && !fields.grid().is_empty() {
        return Err(Error::DimensionMismatch {
            expected: next.dim(),
            found: fields.a_xi.values()[0].nrows(),
        });
    }
    let k = next.steps().len() - 1;
    let pi = permuted_field(&next, k, fields.grid())?;
    let updated = update(fields, alpha, &pi)?;
    Ok((next, updated))
}

/// The fields of `frame` on `grid`, accumulated step by step from the
/// vacuum.
pub fn extract_fields(frame: &MonopoleFrame, grid: &BoxGrid) -> Result<MonopoleFields> {
    let mut fields = MonopoleFields::vacuum(grid, frame.dim())?;
    for (k, step) in frame.steps().iter().enumerate() {
        let pi = permuted_field(frame, k, grid)?;
        fields = update(&fields, step.alpha, &pi)?;
    }
    Ok(fields)
}

/// `(λ²C₂ + λC₁ + C₀)` coefficients of the curvature
/// `L₂(X) - L₁(Y) + [X, Y]` with `X = λB₊ - A_ξ`, `Y = λA_η - B₋`,
/// `L₁ = λ∂_y - ∂_ξ`, `L₂ = λ∂_η - ∂_y`.
fn curvature_coefficients(fields: &MonopoleFields) -> Result<Vec<[ComplexMatrix; 3]>> {
    let [_, axi_eta, axi_y] = light_cone_derivatives(&fields.a_xi)?;
    let [aeta_xi, _, aeta_y] = light_cone_derivatives(&fields.a_eta)?;
    let [_, bp_eta, bp_y] = light_cone_derivatives(&fields.b_plus)?;
    let [bm_xi, _, bm_y] = light_cone_derivatives(&fields.b_minus)?;
    Ok((0..fields.grid().len())
        .into_par_iter()
        .map(|k| {
            let a_xi = &fields.a_xi.values()[k];
            let a_eta = &fields.a_eta.values()[k];
            let bp = &fields.b_plus.values()[k];
            let bm = &fields.b_minus.values()[k];
            let c2 = &bp_eta.values()[k] - &aeta_y.values()[k] + commutator(bp, a_eta);
            let c1 = -&axi_eta.values()[k] - &bp_y.values()[k] + &bm_y.values()[k] + &aeta_xi.values()[k]
                - commutator(bp, bm)
                - commutator(a_xi, a_eta);
            let c0 = &axi_y.values()[k] - &bm_xi.values()[k] + commutator(a_xi, bm);
            [c2, c1, c0]
        })
        .collect())
}

/// The largest curvature norm over interior points and the samples.
/// Returns the value with its flat grid index and the per-sample maxima.
pub(crate) fn monopole_residual_detail(
    fields: &MonopoleFields,
    lambda_samples: &[C64],
) -> Result<(f64, usize, Vec<(C64, f64)>)> {
    let grid = fields.grid();
    for axis in grid.axes() {
        if axis.m < 2 * INTERIOR_MARGIN + 1 {
            return Err(Error::GridTooSmall { points: axis.m, required: 2 * INTERIOR_MARGIN + 1 });
        }
    }
    let coeffs = curvature_coefficients(fields)?;
    let mut best = (0.0, 0);
    let mut per_lambda = Vec::with_capacity(lambda_samples.len());
    for &l in lambda_samples {
        let (r, at) = (0..grid.len())
            .into_par_iter()
            .filter(|&k| grid.is_interior(k, INTERIOR_MARGIN))
            .map(|k| {
                let [c2, c1, c0] = &coeffs[k];
                (norm(&(c2 * (l * l) + c1 * l + c0)), k)
            })
            .reduce(|| (0.0, 0), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
        if r > best.0 {
            best = (r, at);
        }
        per_lambda.push((l, r));
    }
    Ok((best.0, best.1, per_lambda))
}

/// Max over interior points and `lambda_samples` of the monopole curvature.
pub fn monopole_residual(fields: &MonopoleFields, lambda_samples: &[C64]) -> Result<f64> {
    Ok(monopole_residual_detail(fields, lambda_samples)?.0)
}

/// Recovers the fields from the frame itself: with `X(λ) = (λ∂_y - ∂_ξ)ψ ψ^{-1}`
/// and `Y(λ) = (λ∂_η - ∂_y)ψ ψ^{-1}` sampled at two values of `λ`, the
/// affine decompositions `X = λB₊ - A_ξ`, `Y = λA_η - B₋` are solved and
/// compared with `fields`. Returns the largest mismatch over interior
/// points.
pub fn cross_check(frame: &MonopoleFrame, fields: &MonopoleFields, l1: C64, l2: C64) -> Result<f64> {
    if l1 == l2 {
        return Err(Error::InvalidInput("cross-check needs two distinct λ".into()));
    }
    let grid = fields.grid();
    let lax = |l: C64| -> Result<(Vec<ComplexMatrix>, Vec<ComplexMatrix>)> {
        let psi = Field::sample(grid.clone(), |c| frame.eval([c[0], c[1], c[2]], l))?;
        let psi_inv = Field::sample(grid.clone(), |c| frame.eval_inverse([c[0], c[1], c[2]], l))?;
        let [d_xi, d_eta, d_y] = light_cone_derivatives(&psi)?;
        Ok((0..grid.len())
            .into_par_iter()
            .map(|k| {
                let inv = &psi_inv.values()[k];
                let x = (&d_y.values()[k] * l - &d_xi.values()[k]) * inv;
                let y = (&d_eta.values()[k] * l - &d_y.values()[k]) * inv;
                (x, y)
            })
            .unzip())
    };
    let (x1, y1) = lax(l1)?;
    let (x2, y2) = lax(l2)?;
    let inv_dl = (l1 - l2).inv();
    let worst = (0..grid.len())
        .into_par_iter()
        .filter(|&k| grid.is_interior(k, INTERIOR_MARGIN))
        .map(|k| {
            let b_plus = (&x1[k] - &x2[k]) * inv_dl;
            let a_xi = &b_plus * l1 - &x1[k];
            let a_eta = (&y1[k] - &y2[k]) * inv_dl;
            let b_minus = &a_eta * l1 - &y1[k];
            [
                norm(&(b_plus - &fields.b_plus.values()[k])),
                norm(&(a_xi - &fields.a_xi.values()[k])),
                norm(&(a_eta - &fields.a_eta.values()[k])),
                norm(&(b_minus - &fields.b_minus.values()[k])),
            ]
            .into_iter()
            .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}
