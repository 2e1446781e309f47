//! Discrete-time pricing trees.
//!
//! [`classical`] is the multiplicative return tree whose risk-neutral
//! probability keeps the natural-world `p` and mean return `μ`, so option
//! prices depend on both. [`bachelier`] is the additive analogue priced
//! against a simple-interest account.

pub mod bachelier;
pub mod classical;
mod convergence;

pub use bachelier::{
    bachelier_lattice, bachelier_price, bachelier_rn_prob, bachelier_updown, sample_coins,
    tree_to_cadlag_path, BachelierTreeSpec, CadlagTreePath, Lattice, RnMode, TreePrice, UpProbs,
};
pub use classical::{
    classical_price, classical_rn_prob, classical_updown, sample_classical_terminal,
    ClassicalTreeSpec, Measure,
};
pub use convergence::{convergence_study, ConvergenceReport, ConvergenceRow};

use serde::Serialize;

/// The two increments (additive tree) or returns (classical tree) of one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpDown {
    pub up: f64,
    pub down: f64,
}

/// `up = mΔ + √((1−p)/p)·s√Δ`, `down = mΔ − √(p/(1−p))·s√Δ`: mean `mΔ` and
/// variance `s²Δ` under `p`.
pub(crate) fn two_point_moves(mean_rate: f64, scale: f64, p: f64, dt: f64) -> UpDown {
    let drift = mean_rate * dt;
    let diffusion = scale * dt.sqrt();
    UpDown {
        up: drift + ((1.0 - p) / p).sqrt() * diffusion,
        down: drift - (p / (1.0 - p)).sqrt() * diffusion,
    }
}

/// `p − θ√(p(1−p)Δ)`.
pub(crate) fn tilted_probability(p: f64, theta: f64, dt: f64) -> f64 {
    p - theta * (p * (1.0 - p) * dt).sqrt()
}
