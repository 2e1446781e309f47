//! Multiplicative binomial tree `S_{k+1} = S_k(1 + u)` or `S_k(1 + d)` with a
//! compounding bank account `(1 + rΔ)` per step.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{tilted_probability, two_point_moves, UpDown};
use crate::error::{ensure_finite, ensure_positive, ensure_probability, invalid, Error, Result};
use crate::rng::map_paths;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalTreeSpec {
    pub steps: usize,
    pub horizon: f64,
    pub up_prob: f64,
    /// Instantaneous mean return μ.
    pub mean_return: f64,
    /// Instantaneous return variance σ².
    pub variance_return: f64,
    pub riskless_rate: f64,
    pub initial_price: f64,
}

impl ClassicalTreeSpec {
    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    pub fn sigma(&self) -> f64 {
        self.variance_return.sqrt()
    }

    /// Checks parameter ranges only; the no-arbitrage gate is
    /// [`classical_rn_prob`].
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(invalid("steps", "must be >= 1"));
        }
        ensure_positive("horizon", self.horizon)?;
        ensure_probability("up_prob", self.up_prob)?;
        ensure_finite("mean_return", self.mean_return)?;
        ensure_positive("variance_return", self.variance_return)?;
        ensure_finite("riskless_rate", self.riskless_rate)?;
        if self.riskless_rate < 0.0 {
            return Err(invalid("riskless_rate", "must be >= 0"));
        }
        ensure_positive("initial_price", self.initial_price)?;
        let m = two_point_moves(self.mean_return, self.sigma(), self.up_prob, self.dt());
        if m.down <= -1.0 {
            return Err(invalid(
                "steps",
                format!("down return {} <= -1 makes prices non-positive", m.down),
            ));
        }
        Ok(())
    }
}

/// Per-step returns `(u, d)` matching mean `μΔ` and variance `σ²Δ` under `p`.
pub fn classical_updown(spec: &ClassicalTreeSpec) -> Result<UpDown> {
    spec.validate()?;
    Ok(two_point_moves(
        spec.mean_return,
        spec.sigma(),
        spec.up_prob,
        spec.dt(),
    ))
}

/// `q = p − θ√(p(1−p)Δ)`, `θ = (μ − r)/σ`.
pub fn classical_rn_prob(spec: &ClassicalTreeSpec) -> Result<f64> {
    spec.validate()?;
    let theta = (spec.mean_return - spec.riskless_rate) / spec.sigma();
    let q = tilted_probability(spec.up_prob, theta, spec.dt());
    if q > 0.0 && q < 1.0 {
        Ok(q)
    } else {
        Err(Error::Arbitrage {
            step: 0,
            q,
            state: None,
        })
    }
}

/// Backward induction `C_k = (qC^u + (1−q)C^d)/(1 + rΔ)` on the recombining tree.
pub fn classical_price<F: Fn(f64) -> f64>(spec: &ClassicalTreeSpec, payoff: F) -> Result<f64> {
    let q = classical_rn_prob(spec)?;
    let m = classical_updown(spec)?;
    let n = spec.steps;
    let discount = 1.0 / (1.0 + spec.riskless_rate * spec.dt());
    let (gu, gd) = ((1.0 + m.up).ln(), (1.0 + m.down).ln());
    let mut values: Vec<f64> = (0..=n)
        .map(|j| {
            let s = spec.initial_price * (j as f64 * gu + (n - j) as f64 * gd).exp();
            payoff(s)
        })
        .collect();
    for level in (0..n).rev() {
        for j in 0..=level {
            values[j] = discount * (q * values[j + 1] + (1.0 - q) * values[j]);
        }
    }
    Ok(values[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// Up-moves with the historical probability `p`.
    Natural,
    /// Up-moves with the risk-neutral probability `q`.
    RiskNeutral,
}

/// Terminal prices of independently sampled tree paths, one substream each.
pub fn sample_classical_terminal(
    spec: &ClassicalTreeSpec,
    measure: Measure,
    paths: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let m = classical_updown(spec)?;
    let prob = match measure {
        Measure::Natural => spec.up_prob,
        Measure::RiskNeutral => classical_rn_prob(spec)?,
    };
    let (gu, gd) = ((1.0 + m.up).ln(), (1.0 + m.down).ln());
    let n = spec.steps;
    Ok(map_paths(seed, paths, |_, rng| {
        let ups = (0..n).filter(|_| rng.random::<f64>() < prob).count();
        spec.initial_price * (ups as f64 * gu + (n - ups) as f64 * gd).exp()
    }))
}
