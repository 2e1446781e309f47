//! ESG-adjusted prices.
//!
//! A stock's traded price is scaled by the market's ESG affinity `γ` times
//! the company's ESG score relative to a benchmark:
//! `S^ESG = S·(1 + γ·(Z_company − Z_bench)/Z_bench)`. The result can be
//! negative, which is why the risky asset is modelled additively.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, invalid, Error, Result};

pub const SCORE_MAX: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsgRecord {
    /// Fractional years.
    pub time: f64,
    pub stock_price: f64,
    pub company_score: f64,
    pub benchmark_score: f64,
}

impl EsgRecord {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("time", self.time)?;
        ensure_positive("stock_price", self.stock_price)?;
        if !(0.0..=SCORE_MAX).contains(&self.company_score) {
            return Err(invalid(
                "company_score",
                format!("must lie in [0,100], got {}", self.company_score),
            ));
        }
        if !(self.benchmark_score > 0.0 && self.benchmark_score <= SCORE_MAX) {
            return Err(invalid(
                "benchmark_score",
                format!("must lie in (0,100], got {}", self.benchmark_score),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsgAffinity {
    pub gamma: f64,
}

/// Optional regulatory bounds on the affinity. No bounds apply by default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AffinityBounds {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl AffinityBounds {
    pub fn check(&self, affinity: EsgAffinity) -> Result<()> {
        let g = affinity.gamma;
        if self.lower.is_some_and(|lo| g < lo) || self.upper.is_some_and(|hi| g > hi) {
            return Err(invalid(
                "gamma",
                format!("{g} outside bounds [{:?}, {:?}]", self.lower, self.upper),
            ));
        }
        Ok(())
    }
}

/// `(Z_company − Z_bench)/Z_bench`, always `>= −1`.
pub fn relative_score(record: &EsgRecord) -> Result<f64> {
    if !(record.benchmark_score > 0.0) {
        return Err(invalid(
            "benchmark_score",
            format!("must be > 0, got {}", record.benchmark_score),
        ));
    }
    record.validate()?;
    Ok((record.company_score - record.benchmark_score) / record.benchmark_score)
}

pub fn esg_adjusted_price(record: &EsgRecord, affinity: EsgAffinity) -> Result<f64> {
    ensure_finite("gamma", affinity.gamma)?;
    let rel = relative_score(record)?;
    Ok(record.stock_price * (1.0 + affinity.gamma * rel))
}

/// Affinity that reproduces an observed adjusted price.
pub fn implied_affinity(observed_adjusted_price: f64, record: &EsgRecord) -> Result<EsgAffinity> {
    ensure_finite("observed_adjusted_price", observed_adjusted_price)?;
    let rel = relative_score(record)?;
    if rel == 0.0 {
        return Err(Error::Unidentifiable(
            "relative ESG score is zero; every affinity fits".into(),
        ));
    }
    Ok(EsgAffinity {
        gamma: (observed_adjusted_price / record.stock_price - 1.0) / rel,
    })
}

fn check_score(score: f64) -> Result<()> {
    if (0.0..=SCORE_MAX).contains(&score) {
        Ok(())
    } else {
        Err(invalid("score", format!("must lie in [0,100], got {score}")))
    }
}

/// `(e^(ax) − 1)/a`, `a > 0`.
pub fn exp_transform(score: f64, a: f64) -> Result<f64> {
    check_score(score)?;
    ensure_positive("a", a)?;
    Ok((a * score).exp_m1() / a)
}

/// `100/(100 + b − x) − 100/(100 + b)`, `0 < b < 1`.
pub fn geo_transform(score: f64, b: f64) -> Result<f64> {
    check_score(score)?;
    if !(b > 0.0 && b < 1.0) {
        return Err(invalid("b", format!("must lie in (0,1), got {b}")));
    }
    Ok(SCORE_MAX / (SCORE_MAX + b - score) - SCORE_MAX / (SCORE_MAX + b))
}

/// Score observations read as a left-constant step function of time.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSeries {
    times: Vec<f64>,
    scores: Vec<f64>,
}

impl ScoreSeries {
    pub fn new(times: Vec<f64>, scores: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times.len() != scores.len() {
            return Err(Error::Input("score series needs matching non-empty columns".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Input("score times must be strictly increasing".into()));
        }
        for &s in &scores {
            check_score(s)?;
        }
        Ok(Self { times, scores })
    }

    /// Latest observation at or before `t` (the first one before the series starts).
    pub fn at(&self, t: f64) -> f64 {
        let idx = self.times.partition_point(|&s| s <= t);
        self.scores[idx.saturating_sub(1)]
    }
}
