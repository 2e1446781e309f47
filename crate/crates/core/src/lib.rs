//! Pricing and simulation toolkit for Bachelier's market model with a
//! simple-interest riskless account and ESG-adjusted prices.
//!
//! - [`model`]: closed-form call prices, hedges, measure change, implied rates.
//! - [`binomial`]: classical and Bachelier binomial trees.
//! - [`pathdep`]: factor-driven path-dependent pricing.
//! - [`sim`]: ABM/GBM, local time, skew Brownian motions, absorbed paths.
//! - [`esg`]: relative scores, adjusted prices, score transforms.

pub mod binomial;
pub mod error;
pub mod esg;
pub mod model;
pub mod normal;
pub mod path;
pub mod pathdep;
pub mod payoff;
pub mod rng;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
pub use path::Path;
pub use payoff::Payoff;

/// Crate version, echoed in result documents.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
