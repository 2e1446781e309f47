use bachelier_core::stats::SampleStats;
use serde::Serialize;

use crate::csv_io::PriceSeries;

/// Fewest price changes accepted by [`estimate_spot_params`].
pub const MIN_CHANGES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpotEstimate {
    /// Per year.
    pub drift: f64,
    /// Per square-root year.
    pub volatility: f64,
    pub dt: f64,
    pub changes: usize,
    pub drift_std_error: f64,
}

/// `ρ̂ = mean(changes)/Δ`, `v̂ = √(s²/Δ)` with the unbiased sample variance.
pub fn estimate_spot_params(series: &PriceSeries) -> bachelier_core::Result<SpotEstimate> {
    let changes = series.changes();
    if changes.len() < MIN_CHANGES {
        return Err(bachelier_core::Error::Input(format!(
            "{} price changes; need at least {MIN_CHANGES}",
            changes.len()
        )));
    }
    let dt = series.uniform_step()?;
    let s = SampleStats::from_slice(&changes);
    let volatility = (s.variance / dt).sqrt();
    if volatility == 0.0 {
        log::warn!("estimated volatility is zero; the series cannot parametrize a Bachelier market");
    }
    Ok(SpotEstimate {
        drift: s.mean / dt,
        volatility,
        dt,
        changes: changes.len(),
        drift_std_error: s.std_error / dt,
    })
}
