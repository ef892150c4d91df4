//! Uniform grids and sampled fields, with fourth-order finite differences and
//! a fourth-order cumulative integral.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::ComplexMatrix;
use crate::error::{Error, Result};

/// Smallest number of points along any axis.
pub const MIN_POINTS: usize = 16;

/// Uniformly spaced points `x_min, x_min + h, ..., x_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub m: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, m: usize) -> Result<Self> {
        if m < MIN_POINTS {
            return Err(Error::GridTooSmall { points: m, required: MIN_POINTS });
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "grid bounds [{x_min}, {x_max}] must be finite and increasing"
            )));
        }
        Ok(Self { x_min, x_max, m })
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.m - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.m {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.m).map(|i| self.point(i)).collect()
    }

    /// Same bounds with `2m - 1` points, i.e. spacing halved.
    pub fn refined(&self) -> Self {
        Self { m: 2 * self.m - 1, ..*self }
    }
}

/// Tensor product of uniform axes. Values are stored row-major: the last
/// axis varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxGrid {
    axes: Vec<Grid1D>,
}

impl BoxGrid {
    pub fn new(axes: Vec<Grid1D>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidInput("grid needs at least one axis".into()));
        }
        Ok(Self { axes })
    }

    pub fn line(axis: Grid1D) -> Self {
        Self { axes: vec![axis] }
    }

    pub fn axes(&self) -> &[Grid1D] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &Grid1D {
        &self.axes[k]
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.m).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.m).collect()
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.axes[axis + 1..].iter().map(|a| a.m).product()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for k in (0..self.axes.len()).rev() {
            idx[k] = flat % self.axes[k].m;
            flat /= self.axes[k].m;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (&i, a)| acc * a.m + i)
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.point(i))
            .collect()
    }

    /// Whether every index lies at least `margin` points from each face.
    pub fn is_interior(&self, flat: usize, margin: usize) -> bool {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .all(|(&i, a)| i >= margin && i + margin < a.m)
    }

    /// Whether the point lies on a face orthogonal to one of `axes`.
    pub fn on_face(&self, flat: usize, axes: &[usize]) -> bool {
        let idx = self.multi_index(flat);
        axes.iter().any(|&k| idx[k] == 0 || idx[k] + 1 == self.axes[k].m)
    }

    pub fn refined(&self) -> Self {
        Self { axes: self.axes.iter().map(Grid1D::refined).collect() }
    }
}

/// Values that can be combined linearly by a stencil.
pub trait FieldValue: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, w: f64, other: &Self);
    fn magnitude(&self) -> f64;
}

impl FieldValue for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, w: f64, other: &Self) {
        *self += w * other;
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl FieldValue for C64 {
    fn zero_like(&self) -> Self {
        C64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, w: f64, other: &Self) {
        *self += other * w;
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl FieldValue for ComplexMatrix {
    fn zero_like(&self) -> Self {
        DMatrix::zeros(self.nrows(), self.ncols())
    }
    fn add_scaled(&mut self, w: f64, other: &Self) {
        self.zip_apply(other, |a, b| *a += b * w);
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

const CELL_NODES: usize = 6;

/// `weights[o][k]`: integral over `[o, o+1]` of the Lagrange basis
/// polynomial of node `k` on the nodes `0..6`.
fn cell_weights() -> Vec<Vec<f64>> {
    let n = CELL_NODES;
    let vandermonde = DMatrix::<f64>::from_fn(n, n, |p, k| (k as f64).powi(p as i32));
    let lu = vandermonde.lu();
    (0..n - 1)
        .map(|o| {
            let (lo, hi) = (o as f64, o as f64 + 1.0);
            let moments = nalgebra::DVector::<f64>::from_fn(n, |p, _| {
                (hi.powi(p as i32 + 1) - lo.powi(p as i32 + 1)) / (p as f64 + 1.0)
            });
            lu.solve(&moments).expect("nodes are distinct").iter().copied().collect()
        })
        .collect()
}

/// Fornberg's recursion: weights of the derivatives `0..=order` at `z` for
/// function values at `nodes`. Returns `weights[d][k]`.
pub(crate) fn fornberg_weights(z: f64, nodes: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Finite-difference weights for every point of an axis: centered
/// sixth-order stencils in the interior, one-sided sixth-order windows of
/// `order + 6` points near the ends.
#[derive(Debug, Clone)]
pub(crate) struct Stencil {
    rows: Vec<(usize, Vec<f64>)>,
}

/// Formal accuracy of [`Stencil`].
pub const FD_ACCURACY: usize = 6;

impl Stencil {
    pub(crate) fn new(m: usize, h: f64, order: usize) -> Result<Self> {
        if !(1..=3).contains(&order) {
            return Err(Error::InvalidInput(format!("derivative order {order} not in 1..=3")));
        }
        let one_sided = order + FD_ACCURACY;
        if m < one_sided.max(MIN_POINTS) {
            return Err(Error::GridTooSmall { points: m, required: MIN_POINTS });
        }
        let half = (2 * ((order + 1) / 2) - 1 + FD_ACCURACY) / 2;
        let scale = h.powi(order as i32);
        let rows = (0..m)
            .map(|i| {
                let (start, width) = if i >= half && i + half < m {
                    (i - half, 2 * half + 1)
                } else if i < half {
                    (0, one_sided)
                } else {
                    (m - one_sided, one_sided)
                };
                let nodes: Vec<f64> = (start..start + width).map(|k| k as f64 - i as f64).collect();
                let w = fornberg_weights(0.0, &nodes, order);
                (start, w[order].iter().map(|x| x / scale).collect())
            })
            .collect();
        Ok(Self { rows })
    }
}

/// Values sampled on a [`BoxGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: BoxGrid,
    values: Vec<T>,
}

pub type MatrixField = Field<ComplexMatrix>;
pub type ScalarField = Field<C64>;
pub type RealField = Field<f64>;

impl<T: FieldValue> Field<T> {
    pub fn new(grid: BoxGrid, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: values.len() });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every grid point, in parallel.
    pub fn sample<F>(grid: BoxGrid, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<T> + Sync,
    {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|k| f(&grid.coords(k)))
            .collect::<Result<Vec<T>>>()?;
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn map<U, F>(&self, f: F) -> Field<U>
    where
        U: FieldValue,
        F: Fn(&T) -> U + Sync + Send,
    {
        Field { grid: self.grid.clone(), values: self.values.par_iter().map(f).collect() }
    }

    pub fn zip_map<U, V, F>(&self, other: &Field<U>, f: F) -> Result<Field<V>>
    where
        U: FieldValue,
        V: FieldValue,
        F: Fn(&T, &U) -> V + Sync + Send,
    {
        if self.grid != other.grid {
            return Err(Error::InvalidInput("fields live on different grids".into()));
        }
        Ok(Field {
            grid: self.grid.clone(),
            values: self.values.par_iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// `∂^order/∂x_axis^order` by sixth-order finite differences.
    pub fn derivative_along(&self, axis: usize, order: usize) -> Result<Self> {
        let g = *self.grid.axis(axis);
        let stencil = Stencil::new(g.m, g.spacing(), order)?;
        let stride = self.grid.stride(axis);
        let m = g.m;
        let values = (0..self.values.len())
            .into_par_iter()
            .map(|idx| {
                let p = (idx / stride) % m;
                let base = idx - p * stride;
                let (start, w) = &stencil.rows[p];
                let mut acc = self.values[idx].zero_like();
                for (k, &wk) in w.iter().enumerate() {
                    acc.add_scaled(wk, &self.values[base + (start + k) * stride]);
                }
                acc
            })
            .collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    /// Derivative along the single axis of a 1-D field.
    pub fn derivative(&self, order: usize) -> Result<Self> {
        self.derivative_along(0, order)
    }

    /// Cumulative integral along `axis` from the first grid point, with value
    /// zero there. Each cell is integrated with the quintic through the six
    /// nearest nodes, so the result is sixth-order accurate like the
    /// derivative stencils.
    pub fn antiderivative_along(&self, axis: usize) -> Result<Self> {
        let g = *self.grid.axis(axis);
        let (m, h) = (g.m, g.spacing());
        if m < MIN_POINTS {
            return Err(Error::GridTooSmall { points: m, required: MIN_POINTS });
        }
        let weights = cell_weights();
        let stride = self.grid.stride(axis);
        let mut values = self.values.clone();
        let line_starts: Vec<usize> =
            (0..self.values.len()).filter(|idx| (idx / stride) % m == 0).collect();
        let lines: Vec<Vec<T>> = line_starts
            .par_iter()
            .map(|&base| {
                let f = |k: usize| &self.values[base + k * stride];
                let mut out: Vec<T> = Vec::with_capacity(m);
                out.push(f(0).zero_like());
                for i in 0..m - 1 {
                    let start = i.saturating_sub(2).min(m - CELL_NODES);
                    let w = &weights[i - start];
                    let mut acc = out[i].clone();
                    for (k, &wk) in w.iter().enumerate() {
                        acc.add_scaled(wk * h, f(start + k));
                    }
                    out.push(acc);
                }
                out
            })
            .collect();
        for (base, line) in line_starts.into_iter().zip(lines) {
            for (k, v) in line.into_iter().enumerate() {
                values[base + k * stride] = v;
            }
        }
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn antiderivative_decaying(&self) -> Result<Self> {
        self.antiderivative_along(0)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.values.iter().map(FieldValue::magnitude).fold(0.0, f64::max)
    }

    /// Largest magnitude over points satisfying `keep`, with its flat index.
    pub fn argmax_magnitude<P: Fn(usize) -> bool>(&self, keep: P) -> (f64, usize) {
        self.values
            .iter()
            .enumerate()
            .filter(|(k, _)| keep(*k))
            .map(|(k, v)| (v.magnitude(), k))
            .fold((0.0, 0), |best, cur| if cur.0 > best.0 { cur } else { best })
    }
}

impl<T: FieldValue> std::ops::Sub for &Field<T> {
    type Output = Field<T>;

    fn sub(self, rhs: &Field<T>) -> Field<T> {
        assert_eq!(self.grid, rhs.grid, "fields live on different grids");
        let values = self
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(a, b)| {
                let mut d = a.clone();
                d.add_scaled(-1.0, b);
                d
            })
            .collect();
        Field { grid: self.grid.clone(), values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn real_line(x0: f64, x1: f64, m: usize, f: impl Fn(f64) -> f64 + Sync) -> RealField {
        Field::sample(BoxGrid::line(Grid1D::new(x0, x1, m).unwrap()), |x| Ok(f(x[0]))).unwrap()
    }

    fn max_err(a: &RealField, f: impl Fn(f64) -> f64) -> f64 {
        let g = a.grid().axis(0);
        a.values()
            .iter()
            .enumerate()
            .map(|(i, v)| (v - f(g.point(i))).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn fornberg_matches_textbook_central_weights() {
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
        let d1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        let d2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for k in 0..5 {
            assert!((w[1][k] - d1[k]).abs() < 1e-14);
            assert!((w[2][k] - d2[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let f = real_line(-1.0, 2.0, 40, |_| 3.5);
        for order in 1..=3 {
            assert!(f.derivative(order).unwrap().max_magnitude() < 1e-9);
        }
    }

    #[test]
    fn sine_derivative() {
        let f = real_line(-PI, PI, 256, f64::sin);
        assert!(max_err(&f.derivative(1).unwrap(), f64::cos) <= 1e-6);
    }

    #[test]
    fn gaussian_derivatives() {
        let f = real_line(-10.0, 10.0, 512, |x| (-x * x).exp());
        assert!(max_err(&f.derivative(1).unwrap(), |x| -2.0 * x * (-x * x).exp()) <= 1e-6);
        assert!(
            max_err(&f.derivative(2).unwrap(), |x| (4.0 * x * x - 2.0) * (-x * x).exp()) <= 1e-5
        );
        assert!(
            max_err(&f.derivative(3).unwrap(), |x| (12.0 * x - 8.0 * x.powi(3)) * (-x * x).exp())
                <= 1e-4
        );
    }

    #[test]
    fn derivative_converges_at_sixth_order() {
        let errs: Vec<f64> = [33, 65]
            .iter()
            .map(|&m| {
                let f = real_line(0.0, 2.0, m, f64::exp);
                max_err(&f.derivative(1).unwrap(), f64::exp)
            })
            .collect();
        assert!(errs[0] / errs[1] > 40.0, "ratio {}", errs[0] / errs[1]);
    }

    #[test]
    fn grid_too_small() {
        assert_eq!(Grid1D::new(0.0, 1.0, 8), Err(Error::GridTooSmall { points: 8, required: 16 }));
        assert!(Grid1D::new(1.0, 1.0, 32).is_err());
    }

    #[test]
    fn antiderivative_of_zero_and_gaussian() {
        let z = real_line(-10.0, 10.0, 200, |_| 0.0);
        assert_eq!(z.antiderivative_decaying().unwrap().max_magnitude(), 0.0);
        let f = real_line(-10.0, 10.0, 512, |x| (-x * x).exp());
        let erf_ref = |x: f64| PI.sqrt() / 2.0 * (statrs::function::erf::erf(x) + 1.0);
        assert!(max_err(&f.antiderivative_decaying().unwrap(), erf_ref) <= 1e-7);
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let prof = |x: f64| (1.0 + 0.5 * x) * (-(x - 0.5).powi(2)).exp();
        let f = real_line(-10.0, 10.0, 1024, prof);
        let back = f.derivative(1).unwrap().antiderivative_decaying().unwrap();
        assert!(max_err(&back, |x| prof(x) - prof(-10.0)) <= 1e-7);
    }

    #[test]
    fn mixed_axis_derivative() {
        let grid = BoxGrid::new(vec![
            Grid1D::new(-1.0, 1.0, 41).unwrap(),
            Grid1D::new(0.0, 2.0, 33).unwrap(),
        ])
        .unwrap();
        let f: ScalarField =
            Field::sample(grid.clone(), |p| Ok(C64::new((p[0] * p[1]).sin(), p[1]))).unwrap();
        let dt = f.derivative_along(1, 1).unwrap();
        let exact: ScalarField =
            Field::sample(grid, |p| Ok(C64::new(p[0] * (p[0] * p[1]).cos(), 1.0))).unwrap();
        assert!((&dt - &exact).max_magnitude() < 1e-5);
    }
}
