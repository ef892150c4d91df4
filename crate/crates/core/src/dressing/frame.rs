use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64 as C64;

use super::permute::dressing_factor;
use super::vacuum::VacuumFrame;
use crate::algebra::{identity, pole_coefficient, ComplexMatrix, HermitianProjection, SimplePoleFactor};
use crate::error::{Error, Result};

/// One dressing: the pole and the projection it was applied with.
#[derive(Debug, Clone, PartialEq)]
pub struct DressingStep {
    pub alpha: C64,
    pub projection: HermitianProjection,
}

/// Per-point data of one step: `π̃` and `π̃^⊥`.
#[derive(Debug, Clone)]
pub struct PermutedStep {
    pub projection: HermitianProjection,
    perp: ComplexMatrix,
}

impl PermutedStep {
    pub(crate) fn new(projection: HermitianProjection) -> Self {
        let perp = identity(projection.dim()) - projection.matrix();
        Self { projection, perp }
    }

    /// `π̃^⊥`.
    pub fn perp(&self) -> &ComplexMatrix {
        &self.perp
    }
}

type Cache = Mutex<HashMap<Vec<u64>, Arc<Vec<PermutedStep>>>>;

/// `E = g_K ⋯ g_1 E_0 g̃_1^{-1} ⋯ g̃_K^{-1}`, evaluated in closed form at any
/// point and any `λ` away from the poles. The per-point projections `π̃_k`
/// are computed on demand and memoized.
pub struct DressedFrame {
    vacuum: VacuumFrame,
    steps: Vec<DressingStep>,
    factors: Vec<Option<(SimplePoleFactor, SimplePoleFactor)>>,
    cache: Cache,
}

impl Clone for DressedFrame {
    fn clone(&self) -> Self {
        Self {
            vacuum: self.vacuum.clone(),
            steps: self.steps.clone(),
            factors: self.factors.clone(),
            cache: Mutex::default(),
        }
    }
}

impl fmt::Debug for DressedFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DressedFrame").field("vacuum", &self.vacuum).field("steps", &self.steps).finish()
    }
}

fn key(coords: &[f64]) -> Vec<u64> {
    coords.iter().map(|x| x.to_bits()).collect()
}

impl DressedFrame {
    pub fn new(vacuum: VacuumFrame) -> Self {
        Self { vacuum, steps: Vec::new(), factors: Vec::new(), cache: Mutex::default() }
    }

    pub fn vacuum(&self) -> &VacuumFrame {
        &self.vacuum
    }

    pub fn steps(&self) -> &[DressingStep] {
        &self.steps
    }

    pub fn dim(&self) -> usize {
        self.vacuum.dim()
    }

    /// The frame dressed once more at `α` with `π`.
    pub fn with_step(&self, alpha: C64, pi: &HermitianProjection) -> Result<Self> {
        if alpha.im == 0.0 || !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::RealPole { alpha });
        }
        if pi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: pi.dim() });
        }
        if self.steps.iter().any(|s| s.alpha == alpha || s.alpha == alpha.conj()) {
            return Err(Error::DuplicatePole { alpha });
        }
        let factor = if pi.is_trivial() {
            None
        } else {
            let g = dressing_factor(alpha, pi)?;
            let g_inv = g.inverse();
            Some((g, g_inv))
        };
        let mut next = self.clone();
        next.steps.push(DressingStep { alpha, projection: pi.clone() });
        next.factors.push(factor);
        Ok(next)
    }

    pub fn clear_cache(&self) {
        self.cache.lock().expect("cache lock").clear();
    }

    /// `π̃_k` at `coords` for every step.
    pub fn projections(&self, coords: &[f64]) -> Result<Arc<Vec<PermutedStep>>> {
        let k = key(coords);
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&k) {
            return Ok(hit.clone());
        }
        let computed = Arc::new(self.compute_projections(coords).map_err(|e| e.at(coords))?);
        self.cache.lock().expect("cache lock").insert(k, computed.clone());
        Ok(computed)
    }

    fn compute_projections(&self, coords: &[f64]) -> Result<Vec<PermutedStep>> {
        let mut out: Vec<PermutedStep> = Vec::with_capacity(self.steps.len());
        for (step, factor) in self.steps.iter().zip(&self.factors) {
            if factor.is_none() {
                out.push(PermutedStep::new(step.projection.clone()));
                continue;
            }
            let columns = self.apply_inverse(coords, step.alpha, &out, step.projection.basis().clone())?;
            out.push(PermutedStep::new(HermitianProjection::from_independent_columns(&columns)?));
        }
        Ok(out)
    }

    /// `E_k(λ)^{-1} v` for the frame truncated to the steps already in
    /// `permuted`, built from inverse factors and the inverse vacuum.
    fn apply_inverse(
        &self,
        coords: &[f64],
        lambda: C64,
        permuted: &[PermutedStep],
        mut v: ComplexMatrix,
    ) -> Result<ComplexMatrix> {
        let k = permuted.len();
        for (_, g_inv) in self.factors[..k].iter().rev().flatten() {
            v = g_inv.eval(lambda)? * v;
        }
        v = self.vacuum.eval_inverse(coords, lambda)? * v;
        for ((step, factor), p) in self.steps[..k].iter().zip(&self.factors[..k]).zip(permuted) {
            if factor.is_some() {
                let c = pole_coefficient(step.alpha, lambda)?;
                v = &v + &p.perp * (&v * c);
            }
        }
        Ok(v)
    }

    /// `E(coords, λ)`.
    pub fn eval(&self, coords: &[f64], lambda: C64) -> Result<ComplexMatrix> {
        let permuted = self.projections(coords)?;
        let mut e = self.vacuum.eval(coords, lambda)?;
        for ((step, factor), p) in self.steps.iter().zip(&self.factors).zip(permuted.iter()) {
            if let Some((g, _)) = factor {
                let c = pole_coefficient(step.alpha.conj(), lambda)?;
                let right = &e * &p.perp * c;
                e = g.eval(lambda)? * (e + right);
            }
        }
        Ok(e)
    }

    /// `E(coords, λ)^{-1}`.
    pub fn eval_inverse(&self, coords: &[f64], lambda: C64) -> Result<ComplexMatrix> {
        let permuted = self.projections(coords)?;
        self.apply_inverse(coords, lambda, &permuted, identity(self.dim()))
    }
}
