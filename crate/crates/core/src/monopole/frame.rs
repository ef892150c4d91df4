use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64 as C64;

use super::grassmann::GrassmannMap;
use crate::algebra::{identity, pole_coefficient, ComplexMatrix, HermitianProjection};
use crate::dressing::PermutedStep;
use crate::error::{Error, Result};

/// The data a monopole dressing step starts from.
#[derive(Debug, Clone, PartialEq)]
pub enum Seed {
    /// `π(x, y, t) = π₀(y + αξ + α^{-1}η)`.
    Ward(GrassmannMap),
    /// A constant projection.
    Constant(HermitianProjection),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonopoleStep {
    pub alpha: C64,
    pub seed: Seed,
}

/// `ξ = (t + x)/2`, `η = (t - x)/2`.
pub fn light_cone(x: f64, t: f64) -> (f64, f64) {
    ((t + x) / 2.0, (t - x) / 2.0)
}

/// `w = y + αξ + α^{-1}η`.
pub fn ward_coordinate(alpha: C64, x: f64, y: f64, t: f64) -> C64 {
    let (xi, eta) = light_cone(x, t);
    alpha * xi + alpha.inv() * eta + y
}

type Cache = Mutex<HashMap<[u64; 3], Arc<Vec<PermutedStep>>>>;

/// A rational monopole frame `ψ = g̃_K ⋯ g̃_1` with `ψ(∞) = I`, where
/// `g̃_k = I + (α_k - ᾱ_k)/(λ - α_k) π̃_k^⊥` and `π̃_k` projects onto
/// `ψ_{k-1}(α_k) Im π_k`. Points are `(x, y, t)`.
pub struct MonopoleFrame {
    steps: Vec<MonopoleStep>,
    n: usize,
    cache: Cache,
}

impl Clone for MonopoleFrame {
    fn clone(&self) -> Self {
        Self { steps: self.steps.clone(), n: self.n, cache: Mutex::default() }
    }
}

impl fmt::Debug for MonopoleFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonopoleFrame").field("n", &self.n).field("steps", &self.steps).finish()
    }
}

impl MonopoleFrame {
    /// `ψ = I`.
    pub fn vacuum(n: usize) -> Self {
        Self { steps: Vec::new(), n, cache: Mutex::default() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[MonopoleStep] {
        &self.steps
    }

    pub fn poles(&self) -> Vec<C64> {
        self.steps.iter().map(|s| s.alpha).collect()
    }

    pub fn with_step(&self, alpha: C64, seed: Seed) -> Result<Self> {
        if alpha.im == 0.0 || !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::RealPole { alpha });
        }
        let dim = match &seed {
            Seed::Ward(g) => g.dim(),
            Seed::Constant(p) => p.dim(),
        };
        if dim != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: dim });
        }
        if self.steps.iter().any(|s| s.alpha == alpha || s.alpha == alpha.conj()) {
            return Err(Error::DuplicatePole { alpha });
        }
        let mut next = self.clone();
        next.steps.push(MonopoleStep { alpha, seed });
        Ok(next)
    }

    /// The seed projection `π_k` at a point.
    pub fn seed_projection(&self, k: usize, p: [f64; 3]) -> Result<HermitianProjection> {
        let step = &self.steps[k];
        match &step.seed {
            Seed::Ward(g) => g.eval(ward_coordinate(step.alpha, p[0], p[1], p[2])),
            Seed::Constant(pi) => Ok(pi.clone()),
        }
    }

    /// `π̃_k` at a point, for every step.
    pub fn projections(&self, p: [f64; 3]) -> Result<Arc<Vec<PermutedStep>>> {
        let key = p.map(f64::to_bits);
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let computed = Arc::new(self.compute(p).map_err(|e| e.at(&p))?);
        self.cache.lock().expect("cache lock").insert(key, computed.clone());
        Ok(computed)
    }

    fn compute(&self, p: [f64; 3]) -> Result<Vec<PermutedStep>> {
        let mut out: Vec<PermutedStep> = Vec::with_capacity(self.steps.len());
        for (k, step) in self.steps.iter().enumerate() {
            let seed = self.seed_projection(k, p)?;
            if seed.is_trivial() {
                out.push(PermutedStep::new(seed));
                continue;
            }
            let image = apply(&out[..k], &self.steps[..k], step.alpha, seed.basis().clone())?;
            out.push(PermutedStep::new(HermitianProjection::from_independent_columns(&image)?));
        }
        Ok(out)
    }

    pub fn clear_cache(&self) {
        self.cache.lock().expect("cache lock").clear();
    }

    /// `ψ(x, y, t, λ)`.
    pub fn eval(&self, p: [f64; 3], lambda: C64) -> Result<ComplexMatrix> {
        let permuted = self.projections(p)?;
        apply(&permuted, &self.steps, lambda, identity(self.n))
    }

    /// `ψ^{-1}(λ) = ψ(λ̄)^*`, built from the inverse factors.
    pub fn eval_inverse(&self, p: [f64; 3], lambda: C64) -> Result<ComplexMatrix> {
        let permuted = self.projections(p)?;
        let mut v = identity(self.n);
        for (step, s) in self.steps.iter().zip(permuted.iter()) {
            if !s.projection.is_trivial() {
                let c = pole_coefficient(step.alpha.conj(), lambda)?;
                v = &v + &v * s.perp() * c;
            }
        }
        Ok(v)
    }

    /// The frame in the spectral parameter `μ`, `E_μ = ψ_λ` with
    /// `λ = -i(1 - μ)/(1 + μ)`.
    pub fn eval_mu(&self, p: [f64; 3], mu: C64) -> Result<ComplexMatrix> {
        let one = C64::new(1.0, 0.0);
        if (one + mu).norm() == 0.0 {
            return Ok(identity(self.n));
        }
        self.eval(p, -C64::i() * (one - mu) / (one + mu))
    }

    /// `ψ(0) = Π h_k^{-1}` with `h_k^{-1} = π̃_k + (ᾱ_k/α_k) π̃_k^⊥`.
    pub fn eval_at_zero(&self, p: [f64; 3]) -> Result<ComplexMatrix> {
        self.eval(p, C64::new(0.0, 0.0))
    }
}

/// `g̃_k ⋯ g̃_1 v` at `λ` for the first `k = permuted.len()` steps.
fn apply(permuted: &[PermutedStep], steps: &[MonopoleStep], lambda: C64, mut v: ComplexMatrix) -> Result<ComplexMatrix> {
    for (step, s) in steps.iter().zip(permuted) {
        if !s.projection.is_trivial() {
            let c = pole_coefficient(step.alpha, lambda)?;
            v = &v + s.perp() * (&v * c);
        }
    }
    Ok(v)
}

/// Single-step frame of Ward's 1-soliton.
pub fn ward_soliton(alpha: C64, pi0: &GrassmannMap) -> Result<MonopoleFrame> {
    MonopoleFrame::vacuum(pi0.dim()).with_step(alpha, Seed::Ward(pi0.clone()))
}
