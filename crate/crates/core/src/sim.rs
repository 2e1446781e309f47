//! Path simulators on uniform grids.
//!
//! Every seeded entry point draws from [`substream`]`(seed, 0)`; ensembles
//! use [`map_paths`] so path `i` always sees stream `i`. The `*_with`
//! variants take any generator and are what the ensemble helpers call.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, invalid, Result};
use crate::model::AbmParams;
use crate::path::Path;
use crate::rng::{map_paths, substream};

fn check_grid(steps: usize, horizon: f64) -> Result<()> {
    if steps == 0 {
        return Err(invalid("steps", "must be >= 1"));
    }
    ensure_positive("horizon", horizon)
}

/// Cumulative sum of `steps` independent `N(0, Δ)` increments, starting at 0.
pub fn brownian_with<R: Rng + ?Sized>(steps: usize, horizon: f64, rng: &mut R) -> Path {
    let sd = (horizon / steps as f64).sqrt();
    let mut w = 0.0;
    let mut values = Vec::with_capacity(steps + 1);
    values.push(0.0);
    for _ in 0..steps {
        let z: f64 = rng.sample(StandardNormal);
        w += sd * z;
        values.push(w);
    }
    Path::new(Path::uniform_times(steps, horizon), values)
}

pub fn abm_path_with<R: Rng + ?Sized>(
    params: &AbmParams,
    horizon: f64,
    steps: usize,
    rng: &mut R,
) -> Path {
    let mut p = brownian_with(steps, horizon, rng);
    for (v, t) in p.values.iter_mut().zip(&p.times) {
        *v = params.initial_value + params.drift * t + params.volatility * *v;
    }
    p
}

/// `A_k = A₀ + ρt_k + vW_k`, exact in law at the grid points.
pub fn simulate_abm(params: &AbmParams, horizon: f64, steps: usize, seed: u64) -> Result<Path> {
    params.validate()?;
    check_grid(steps, horizon)?;
    Ok(abm_path_with(params, horizon, steps, &mut substream(seed, 0)))
}

/// Terminal values `A₀ + ρT + v√T·Z`, one substream per path.
pub fn abm_terminal_sample(
    params: &AbmParams,
    horizon: f64,
    paths: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    params.validate()?;
    ensure_positive("horizon", horizon)?;
    let mean = params.initial_value + params.drift * horizon;
    let sd = params.volatility * horizon.sqrt();
    Ok(map_paths(seed, paths, |_, rng| {
        let z: f64 = rng.sample(StandardNormal);
        mean + sd * z
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbmParams {
    pub mu: f64,
    pub sigma: f64,
    pub s0: f64,
}

impl GbmParams {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("mu", self.mu)?;
        ensure_positive("sigma", self.sigma)?;
        ensure_positive("s0", self.s0)
    }
}

pub fn gbm_path_with<R: Rng + ?Sized>(
    params: &GbmParams,
    horizon: f64,
    steps: usize,
    rng: &mut R,
) -> Path {
    let mut p = brownian_with(steps, horizon, rng);
    let m = params.mu - 0.5 * params.sigma * params.sigma;
    for (v, t) in p.values.iter_mut().zip(&p.times) {
        *v = params.s0 * (m * t + params.sigma * *v).exp();
    }
    p
}

/// `S_k = S₀·exp((μ − σ²/2)t_k + σW_k)`.
pub fn simulate_gbm(params: &GbmParams, horizon: f64, steps: usize, seed: u64) -> Result<Path> {
    params.validate()?;
    check_grid(steps, horizon)?;
    Ok(gbm_path_with(params, horizon, steps, &mut substream(seed, 0)))
}

/// Default ratio `ε/√Δ` of the occupation-time local time estimator.
pub const LOCAL_TIME_EPS_FACTOR: f64 = 1.0;

/// Brownian path split into `min(B,0)`, `max(B,0)` and local time at zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrownianDecomposition {
    pub path: Path,
    pub min_part: Path,
    pub max_part: Path,
    pub local_time: Path,
}

impl BrownianDecomposition {
    /// Decomposes an existing Brownian path on a uniform grid.
    ///
    /// Local time is `(1/2ε)·Leb{s ≤ t: |B_s| < ε}` with `ε = eps_factor·√Δ`,
    /// the occupation time accumulated by left-point rule.
    pub fn from_path(path: Path, eps_factor: f64) -> Self {
        let n = path.len() - 1;
        let dt = path.times[n] / n as f64;
        let eps = eps_factor * dt.sqrt();
        let mut lt = Vec::with_capacity(n + 1);
        let mut occupied = 0usize;
        lt.push(0.0);
        for &b in &path.values[..n] {
            if b.abs() < eps {
                occupied += 1;
            }
            lt.push(occupied as f64 * dt / (2.0 * eps));
        }
        let times = path.times.clone();
        let min_part = path.values.iter().map(|&b| b.min(0.0)).collect();
        let max_part = path.values.iter().map(|&b| b.max(0.0)).collect();
        Self {
            min_part: Path::new(times.clone(), min_part),
            max_part: Path::new(times.clone(), max_part),
            local_time: Path::new(times, lt),
            path,
        }
    }

    /// `|B_t| − L_t`, the discrete stand-in for `∫sgn(B)dB`.
    pub fn tanaka_residual(&self) -> Path {
        let v = self
            .path
            .values
            .iter()
            .zip(&self.local_time.values)
            .map(|(b, l)| b.abs() - l)
            .collect();
        Path::new(self.path.times.clone(), v)
    }
}

pub fn brownian_decompose_with<R: Rng + ?Sized>(
    steps: usize,
    horizon: f64,
    eps_factor: f64,
    rng: &mut R,
) -> BrownianDecomposition {
    BrownianDecomposition::from_path(brownian_with(steps, horizon, rng), eps_factor)
}

pub fn brownian_decompose(steps: usize, horizon: f64, seed: u64) -> Result<BrownianDecomposition> {
    check_grid(steps, horizon)?;
    Ok(brownian_decompose_with(
        steps,
        horizon,
        LOCAL_TIME_EPS_FACTOR,
        &mut substream(seed, 0),
    ))
}

/// Coupled walk: while `Y > X` only `X` moves (by `+ξ`), otherwise only `Y`
/// moves (by `−ξ`). Values are rescaled by `n^(−1/2)` and placed at `k/n`.
pub fn horizontal_vertical_walk(xi: &[f64], scale: usize) -> Result<(Path, Path)> {
    if scale == 0 {
        return Err(invalid("scale", "must be >= 1"));
    }
    let (mut x, mut y) = (0.0f64, 0.0f64);
    let mut xs = Vec::with_capacity(xi.len() + 1);
    let mut ys = Vec::with_capacity(xi.len() + 1);
    xs.push(0.0);
    ys.push(0.0);
    let norm = 1.0 / (scale as f64).sqrt();
    for &s in xi {
        if y > x {
            x += s;
        } else {
            y -= s;
        }
        xs.push(x * norm);
        ys.push(y * norm);
    }
    let times: Vec<f64> = (0..=xi.len()).map(|k| k as f64 / scale as f64).collect();
    Ok((Path::new(times.clone(), xs), Path::new(times, ys)))
}

/// Weights `(γ⁻, γ⁰, γ⁺)` on `min(B,0)`, local time and `max(B,0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkewTriplet {
    pub gamma_minus: f64,
    pub gamma_zero: f64,
    pub gamma_plus: f64,
}

impl SkewTriplet {
    pub const fn new(gamma_minus: f64, gamma_zero: f64, gamma_plus: f64) -> Self {
        Self {
            gamma_minus,
            gamma_zero,
            gamma_plus,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("gamma_minus", self.gamma_minus)?;
        ensure_finite("gamma_zero", self.gamma_zero)?;
        ensure_finite("gamma_plus", self.gamma_plus)
    }
}

/// `Z = γ⁻·min(B,0) + γ⁰·L + γ⁺·max(B,0)` pointwise.
pub fn z_gamma_path(decomp: &BrownianDecomposition, gamma: &SkewTriplet) -> Result<Path> {
    gamma.validate()?;
    let v = decomp
        .min_part
        .values
        .iter()
        .zip(&decomp.local_time.values)
        .zip(&decomp.max_part.values)
        .map(|((lo, l), hi)| gamma.gamma_minus * lo + gamma.gamma_zero * l + gamma.gamma_plus * hi)
        .collect();
    Ok(Path::new(decomp.path.times.clone(), v))
}

/// Generalized skew Brownian motion from three independent Brownian paths,
/// drawn in order from `rng`:
/// `(γ⁻+γ⁰)·min(B₁,0) − γ⁰·B₂ + (γ⁺+γ⁰)·max(B₃,0)`.
///
/// `B₂` stands in for `∫sgn(B₂)dB₂`, which has the same law.
pub fn gsbm_path_with<R: Rng + ?Sized>(
    gamma: &SkewTriplet,
    steps: usize,
    horizon: f64,
    rng: &mut R,
) -> Path {
    let b1 = brownian_with(steps, horizon, rng);
    let b2 = brownian_with(steps, horizon, rng);
    let b3 = brownian_with(steps, horizon, rng);
    let lo = gamma.gamma_minus + gamma.gamma_zero;
    let hi = gamma.gamma_plus + gamma.gamma_zero;
    let v = (0..=steps)
        .map(|k| {
            lo * b1.values[k].min(0.0) - gamma.gamma_zero * b2.values[k]
                + hi * b3.values[k].max(0.0)
        })
        .collect();
    Path::new(b1.times, v)
}

pub fn gsbm_path(gamma: &SkewTriplet, steps: usize, horizon: f64, seed: u64) -> Result<Path> {
    gamma.validate()?;
    check_grid(steps, horizon)?;
    Ok(gsbm_path_with(gamma, steps, horizon, &mut substream(seed, 0)))
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta.abs() < 1.0 {
        Ok(())
    } else {
        Err(invalid("delta", format!("must satisfy |delta| < 1, got {delta}")))
    }
}

/// Up-weight `α = (1+δ)/2` of the sign-mixture representation.
pub fn sbm_alpha(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok((1.0 + delta) / 2.0)
}

/// `√(1−δ²)·B₁ + δ·|B₂|`.
pub fn ito_mckean_with<R: Rng + ?Sized>(
    delta: f64,
    steps: usize,
    horizon: f64,
    rng: &mut R,
) -> Path {
    let b1 = brownian_with(steps, horizon, rng);
    let b2 = brownian_with(steps, horizon, rng);
    let c = (1.0 - delta * delta).sqrt();
    let v = b1
        .values
        .iter()
        .zip(&b2.values)
        .map(|(x, y)| c * x + delta * y.abs())
        .collect();
    Path::new(b1.times, v)
}

/// `|B|` with probability `α = (1+δ)/2`, else `−|B|`; one coin per path.
pub fn ito_mckean_mixture_with<R: Rng + ?Sized>(
    delta: f64,
    steps: usize,
    horizon: f64,
    rng: &mut R,
) -> Path {
    let alpha = (1.0 + delta) / 2.0;
    let sign = if rng.random::<f64>() < alpha { 1.0 } else { -1.0 };
    let mut b = brownian_with(steps, horizon, rng);
    for v in &mut b.values {
        *v = sign * v.abs();
    }
    b
}

pub fn ito_mckean_sbm(delta: f64, steps: usize, horizon: f64, seed: u64) -> Result<Path> {
    check_delta(delta)?;
    check_grid(steps, horizon)?;
    Ok(ito_mckean_with(delta, steps, horizon, &mut substream(seed, 0)))
}

pub fn ito_mckean_sbm_mixture(delta: f64, steps: usize, horizon: f64, seed: u64) -> Result<Path> {
    check_delta(delta)?;
    check_grid(steps, horizon)?;
    Ok(ito_mckean_mixture_with(
        delta,
        steps,
        horizon,
        &mut substream(seed, 0),
    ))
}

/// ABM with absorption at zero; needs `initial_value > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsorbedPathSpec {
    pub abm: AbmParams,
    pub horizon: f64,
}

impl AbsorbedPathSpec {
    pub fn validate(&self) -> Result<()> {
        self.abm.validate()?;
        ensure_positive("horizon", self.horizon)?;
        if self.abm.initial_value <= 0.0 {
            return Err(invalid("initial_value", "must be > 0 for an absorbed path"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbsorbedPath {
    pub path: Path,
    /// First grid time with a non-positive value, if any.
    pub absorption_time: Option<f64>,
}

pub fn absorbed_path_with<R: Rng + ?Sized>(
    spec: &AbsorbedPathSpec,
    steps: usize,
    rng: &mut R,
) -> AbsorbedPath {
    let mut path = abm_path_with(&spec.abm, spec.horizon, steps, rng);
    let hit = path.values.iter().position(|&v| v <= 0.0);
    if let Some(k) = hit {
        for v in &mut path.values[k..] {
            *v = 0.0;
        }
    }
    AbsorbedPath {
        absorption_time: hit.map(|k| path.times[k]),
        path,
    }
}

/// Follows the ABM until the first grid value `<= 0`, then stays at 0.
pub fn simulate_absorbed(spec: &AbsorbedPathSpec, steps: usize, seed: u64) -> Result<AbsorbedPath> {
    spec.validate()?;
    check_grid(steps, spec.horizon)?;
    Ok(absorbed_path_with(spec, steps, &mut substream(seed, 0)))
}
