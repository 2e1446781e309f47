use thiserror::Error;

/// Errors raised by the pricing engines and simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Pricing was requested at or after maturity; evaluate the payoff instead.
    #[error("maturity reached: t = {t} is not before T = {maturity}")]
    MaturityReached { t: f64, maturity: f64 },

    #[error("degenerate market: both assets have volatility {volatility}{}", at_time(.time))]
    DegenerateMarket { volatility: f64, time: Option<f64> },

    /// A risk-neutral probability left (0, 1).
    #[error("arbitrage: risk-neutral probability {q} outside (0,1) at step {step}{}", in_state(.state))]
    Arbitrage {
        step: usize,
        q: f64,
        state: Option<f64>,
    },

    #[error("input error: {0}")]
    Input(String),

    #[error("estimation error: {0}")]
    Estimation(String),

    #[error("non-recombining tree with {steps} steps exceeds the enumeration cap of {max}")]
    TreeTooLarge { steps: usize, max: usize },

    #[error("unidentifiable: {0}")]
    Unidentifiable(String),
}

fn at_time(t: &Option<f64>) -> String {
    t.map(|t| format!(" at t = {t}")).unwrap_or_default()
}

fn in_state(s: &Option<f64>) -> String {
    s.map(|s| format!(" (conditioning partial sum {s})"))
        .unwrap_or_default()
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn ensure_finite(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {x}")))
    }
}

pub(crate) fn ensure_positive(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {x}")))
    }
}

pub(crate) fn ensure_probability(name: &'static str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must lie in (0,1), got {p}")))
    }
}
