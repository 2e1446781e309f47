//! Independent oracles shared by the integration tests. Nothing here calls
//! into the pricing code under test.
#![allow(dead_code)]

use rand::Rng;
use rand_distr::StandardNormal;

pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `E[g(σZ + m)]` for standard normal `Z` by quadrature on `±12` deviations.
pub fn gaussian_expectation(g: impl Fn(f64) -> f64, m: f64, sigma: f64) -> f64 {
    simpson(|z| g(m + sigma * z) * norm_pdf(z), -12.0, 12.0, 20_000)
}

/// Up/down moves with mean `mΔ` and variance `s²Δ` under up-probability `p`.
pub fn moves(m: f64, s: f64, p: f64, dt: f64) -> (f64, f64) {
    let spread = s * (dt / (p * (1.0 - p))).sqrt();
    let up = m * dt + (1.0 - p) * spread;
    (up, up - spread)
}

/// One step of an additive tree: moves, pricing probability, carry.
#[derive(Clone, Copy, Debug)]
pub struct AdditiveStep {
    pub up: f64,
    pub down: f64,
    pub q: f64,
    pub carry: f64,
}

/// Steps of the additive tree with per-step `p_k` and uniform `Δ`.
/// `martingale` selects the rate-adjusted tilt `(ρ − r)/v` instead of `ρ/v`.
pub fn additive_steps(ps: &[f64], rho: f64, v: f64, r: f64, horizon: f64, martingale: bool) -> Vec<AdditiveStep> {
    let dt = horizon / ps.len() as f64;
    ps.iter()
        .map(|&p| {
            let (up, down) = moves(rho, v, p, dt);
            // q solves q·up + (1−q)·down = target.
            let target = if martingale { r * dt } else { 0.0 };
            AdditiveStep {
                up,
                down,
                q: (target - down) / (up - down),
                carry: r * dt,
            }
        })
        .collect()
}

/// Sum over all `2^n` paths of `Π q·payoff(A_n)` plus the accumulated carry.
pub fn enumerate_additive(a0: f64, steps: &[AdditiveStep], payoff: impl Fn(f64) -> f64) -> f64 {
    let n = steps.len();
    let mut total = 0.0;
    for mask in 0u64..(1 << n) {
        let mut a = a0;
        let mut w = 1.0;
        for (k, s) in steps.iter().enumerate() {
            if mask >> k & 1 == 1 {
                a += s.up;
                w *= s.q;
            } else {
                a += s.down;
                w *= 1.0 - s.q;
            }
        }
        total += w * payoff(a);
    }
    total + steps.iter().map(|s| s.carry).sum::<f64>()
}

/// Classical multiplicative tree by enumeration over all `2^n` paths.
#[allow(clippy::too_many_arguments)]
pub fn enumerate_classical(
    s0: f64,
    n: usize,
    horizon: f64,
    p: f64,
    mu: f64,
    sigma: f64,
    r: f64,
    payoff: impl Fn(f64) -> f64,
) -> f64 {
    let dt = horizon / n as f64;
    let (u, d) = moves(mu, sigma, p, dt);
    let q = (r * dt - d) / (u - d);
    let mut total = 0.0;
    for mask in 0u64..(1 << n) {
        let mut s = s0;
        let mut w = 1.0;
        for k in 0..n {
            if mask >> k & 1 == 1 {
                s *= 1.0 + u;
                w *= q;
            } else {
                s *= 1.0 + d;
                w *= 1.0 - q;
            }
        }
        total += w * payoff(s);
    }
    total / (1.0 + r * dt).powi(n as i32)
}

/// Closed-form Bachelier call `E[max(m + sZ − K, 0)]`.
pub fn normal_call(m: f64, s: f64, k: f64) -> f64 {
    let d = (m - k) / s;
    let cdf = 0.5 * erfc_by_quadrature(-d / std::f64::consts::SQRT_2);
    (m - k) * cdf + s * norm_pdf(d)
}

/// `erfc` by quadrature of the Gaussian density, accurate to ~1e-13 for
/// moderate arguments.
fn erfc_by_quadrature(x: f64) -> f64 {
    // erfc(x) = 2·P(Z > x√2)
    let lo = x * std::f64::consts::SQRT_2;
    if lo > 0.0 {
        2.0 * simpson(norm_pdf, lo, lo + 40.0, 40_000)
    } else {
        2.0 * (1.0 - simpson(norm_pdf, -lo, -lo + 40.0, 40_000))
    }
}

/// Exact draw of `½L₁ + min(B₁, 0)` for standard Brownian motion.
///
/// By Lévy's identity `(L₁, |B₁|)` has the law of `(M, M − W)` where `W` is
/// standard normal and `M` the running maximum of a Brownian bridge from 0
/// to `W`; the sign of `B₁` is an independent fair coin.
pub fn half_local_time_plus_negative_part<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let w: f64 = rng.sample(StandardNormal);
    let u: f64 = 1.0 - rng.random::<f64>();
    let m = 0.5 * (w + (w * w - 2.0 * u.ln()).sqrt());
    let negative = rng.random::<bool>();
    0.5 * m - if negative { m - w } else { 0.0 }
}

/// `P(inf_{s≤T} (x + ρs + vB_s) ≤ 0)` for `x > 0`.
pub fn abm_hitting_probability(x: f64, rho: f64, v: f64, horizon: f64) -> f64 {
    let s = v * horizon.sqrt();
    let phi = |z: f64| 1.0 - 0.5 * erfc_by_quadrature(z / std::f64::consts::SQRT_2);
    phi((-x - rho * horizon) / s) + (-2.0 * rho * x / (v * v)).exp() * phi((-x + rho * horizon) / s)
}
