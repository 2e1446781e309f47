//! Bachelier's market: an arithmetic Brownian motion risky asset priced
//! against a simple-interest riskless account.
//!
//! Closed forms here are the building blocks for everything else: the call
//! price with and without a riskless rate, the replicating hedge, the
//! Girsanov weight and the riskless rate implied by two traded assets.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, invalid, Error, Result};
use crate::normal;

/// `A_t = A₀ + ρt + vB_t`. `initial_value` may be negative (ESG-adjusted prices).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbmParams {
    pub initial_value: f64,
    pub drift: f64,
    pub volatility: f64,
}

impl AbmParams {
    pub fn new(initial_value: f64, drift: f64, volatility: f64) -> Result<Self> {
        let p = Self {
            initial_value,
            drift,
            volatility,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("initial_value", self.initial_value)?;
        ensure_finite("drift", self.drift)?;
        ensure_positive("volatility", self.volatility)
    }

    /// Market price of risk `(ρ − r)/v` against a simple rate `r`.
    pub fn market_price_of_risk(&self, simple_rate: f64) -> MarketPriceOfRisk {
        MarketPriceOfRisk {
            theta: (self.drift - simple_rate) / self.volatility,
        }
    }
}

/// Simple interest account `β_t = β₀ + r·t`. Negative rates are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiaParams {
    pub initial_balance: f64,
    pub simple_rate: f64,
}

impl SiaParams {
    pub fn new(initial_balance: f64, simple_rate: f64) -> Result<Self> {
        let p = Self {
            initial_balance,
            simple_rate,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("initial_balance", self.initial_balance)?;
        ensure_finite("simple_rate", self.simple_rate)
    }

    pub fn balance_at(&self, t: f64) -> f64 {
        self.initial_balance + self.simple_rate * t
    }
}

/// European call: strike `K` (any real), maturity `T > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanillaCall {
    pub strike: f64,
    pub maturity: f64,
}

impl VanillaCall {
    pub fn new(strike: f64, maturity: f64) -> Result<Self> {
        let c = Self { strike, maturity };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("strike", self.strike)?;
        ensure_positive("maturity", self.maturity)
    }

    pub fn payoff(&self, terminal: f64) -> f64 {
        call_payoff(terminal, self.strike)
    }

    fn time_to_maturity(&self, t: f64) -> Result<f64> {
        self.validate()?;
        ensure_finite("t", t)?;
        if t < 0.0 {
            return Err(invalid("t", format!("must be >= 0, got {t}")));
        }
        if t >= self.maturity {
            return Err(Error::MaturityReached {
                t,
                maturity: self.maturity,
            });
        }
        Ok(self.maturity - t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketPriceOfRisk {
    pub theta: f64,
}

/// `max(x − K, 0)`.
pub fn call_payoff(terminal: f64, strike: f64) -> f64 {
    (terminal - strike).max(0.0)
}

/// `E[max(λ₀ + λ₁N, 0)] = λ₀Φ(λ₀/λ₁) + λ₁φ(λ₀/λ₁)` for `λ₁ > 0`.
pub fn normal_call_expectation(lambda0: f64, lambda1: f64) -> f64 {
    let d = lambda0 / lambda1;
    lambda0 * normal::cdf(d) + lambda1 * normal::pdf(d)
}

/// Bachelier call price with zero riskless rate at time `t` given the spot.
pub fn bachelier_call_zero_rate(
    params: &AbmParams,
    opt: &VanillaCall,
    t: f64,
    spot: f64,
) -> Result<f64> {
    params.validate()?;
    let tau = opt.time_to_maturity(t)?;
    ensure_finite("spot", spot)?;
    Ok(normal_call_expectation(
        spot - opt.strike,
        params.volatility * tau.sqrt(),
    ))
}

/// Call price against a simple-interest account:
/// `λ₀Φ(λ₀/λ₁) + λ₁φ(λ₀/λ₁) − r(T−t)` with `λ₀ = spot − K + r(T−t)`,
/// `λ₁ = v√(T−t)`.
///
/// Any finite rate is accepted. A rate at or above the drift (non-positive
/// market price of risk) only logs a warning.
pub fn bachelier_call_sia(
    abm: &AbmParams,
    sia: &SiaParams,
    opt: &VanillaCall,
    t: f64,
    spot: f64,
) -> Result<f64> {
    abm.validate()?;
    sia.validate()?;
    let tau = opt.time_to_maturity(t)?;
    ensure_finite("spot", spot)?;
    if sia.simple_rate >= abm.drift {
        log::warn!(
            "simple rate {} >= drift {}: market price of risk is not positive",
            sia.simple_rate,
            abm.drift
        );
    }
    let carry = sia.simple_rate * tau;
    let lambda0 = spot - opt.strike + carry;
    let lambda1 = abm.volatility * tau.sqrt();
    Ok(normal_call_expectation(lambda0, lambda1) - carry)
}

/// Replicating portfolio: `stock_units` of the asset plus `account_units`
/// in a unit account.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hedge {
    pub stock_units: f64,
    pub account_units: f64,
}

/// `a = Φ(d)`, `b = −KΦ(d) + v√(T−t)φ(d)`, `d = (spot − K)/(v√(T−t))`.
pub fn bachelier_hedge(params: &AbmParams, opt: &VanillaCall, t: f64, spot: f64) -> Result<Hedge> {
    params.validate()?;
    let tau = opt.time_to_maturity(t)?;
    ensure_finite("spot", spot)?;
    let scale = params.volatility * tau.sqrt();
    let d = (spot - opt.strike) / scale;
    let delta = normal::cdf(d);
    Ok(Hedge {
        stock_units: delta,
        account_units: -opt.strike * delta + scale * normal::pdf(d),
    })
}

/// Density `exp(−θB_T − θ²T/2)` of the risk-neutral measure.
pub fn radon_nikodym_weight(
    theta: MarketPriceOfRisk,
    brownian_terminal: f64,
    horizon: f64,
) -> Result<f64> {
    ensure_finite("theta", theta.theta)?;
    ensure_finite("brownian_terminal", brownian_terminal)?;
    ensure_positive("horizon", horizon)?;
    let th = theta.theta;
    Ok((-th * brownian_terminal - 0.5 * th * th * horizon).exp())
}

/// Riskless rate that equalises the market prices of risk of two assets
/// driven by the same Brownian motion: `(ρ₁v₂ − ρ₂v₁)/(v₂ − v₁)`.
pub fn implied_simple_rate(asset1: &AbmParams, asset2: &AbmParams) -> Result<f64> {
    implied_rate_at(asset1, asset2, None)
}

fn implied_rate_at(a: &AbmParams, b: &AbmParams, time: Option<f64>) -> Result<f64> {
    ensure_finite("drift", a.drift)?;
    ensure_finite("drift", b.drift)?;
    ensure_positive("volatility", a.volatility)?;
    ensure_positive("volatility", b.volatility)?;
    if a.volatility == b.volatility {
        return Err(Error::DegenerateMarket {
            volatility: a.volatility,
            time,
        });
    }
    Ok((a.drift * b.volatility - b.drift * a.volatility) / (b.volatility - a.volatility))
}

/// Piecewise-constant, left-continuous-in-index path: `values[i]` holds on
/// `[times[i], times[i+1])`, and the last value holds from `times[last]` on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeIndexed<T> {
    pub times: Vec<f64>,
    pub values: Vec<T>,
}

impl<T: Copy> TimeIndexed<T> {
    pub fn new(times: Vec<f64>, values: Vec<T>) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return Err(Error::Input(format!(
                "time-indexed path needs matching non-empty times ({}) and values ({})",
                times.len(),
                values.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Input(
                "time stamps must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self { times, values })
    }

    pub fn constant(value: T) -> Self {
        Self {
            times: vec![0.0],
            values: vec![value],
        }
    }

    /// Value in force at `t`; before the first stamp the first value applies.
    pub fn at(&self, t: f64) -> T {
        let idx = self.times.partition_point(|&s| s <= t);
        self.values[idx.saturating_sub(1)]
    }
}

/// Pointwise implied rate on the union of both assets' time stamps.
pub fn implied_simple_rate_path(
    asset1: &TimeIndexed<AbmParams>,
    asset2: &TimeIndexed<AbmParams>,
) -> Result<TimeIndexed<f64>> {
    let mut times: Vec<f64> = asset1.times.iter().chain(&asset2.times).copied().collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let values = times
        .iter()
        .map(|&t| implied_rate_at(&asset1.at(t), &asset2.at(t), Some(t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeIndexed { times, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn abm(v: f64) -> AbmParams {
        AbmParams::new(100.0, 0.0, v).unwrap()
    }

    fn atm() -> VanillaCall {
        VanillaCall::new(100.0, 1.0).unwrap()
    }

    #[test]
    fn zero_rate_atm_reference() {
        let c = bachelier_call_zero_rate(&abm(20.0), &atm(), 0.0, 100.0).unwrap();
        assert!((c - 20.0 / (2.0 * PI).sqrt()).abs() < 1e-12);
        assert!((c - 7.978_85).abs() < 1e-5);
    }

    #[test]
    fn zero_rate_limits() {
        let opt = atm();
        let near = bachelier_call_zero_rate(&abm(20.0), &opt, 1.0 - 1e-12, 100.0).unwrap();
        assert!(near < 1e-4);
        let deep = bachelier_call_zero_rate(&abm(1e-9), &opt, 0.0, 150.0).unwrap();
        assert!((deep - 50.0).abs() < 1e-9);
    }

    #[test]
    fn at_maturity_rejects() {
        let err = bachelier_call_zero_rate(&abm(20.0), &atm(), 1.0, 100.0).unwrap_err();
        assert!(matches!(err, Error::MaturityReached { .. }));
        let sia = SiaParams::new(1.0, 0.01).unwrap();
        assert!(bachelier_call_sia(&abm(20.0), &sia, &atm(), 2.0, 100.0).is_err());
        assert!(bachelier_hedge(&abm(20.0), &atm(), 1.0, 100.0).is_err());
        assert_eq!(atm().payoff(130.0), 30.0);
    }

    #[test]
    fn sia_reference_values() {
        let a = abm(20.0);
        let zero = SiaParams::new(1.0, 0.0).unwrap();
        let c0 = bachelier_call_sia(&a, &zero, &atm(), 0.0, 100.0).unwrap();
        assert_eq!(c0, bachelier_call_zero_rate(&a, &atm(), 0.0, 100.0).unwrap());
        // lambda0 = 0.02, lambda1 = 20, evaluated independently of the helper.
        let sia = SiaParams::new(1.0, 0.02).unwrap();
        let c = bachelier_call_sia(&a, &sia, &atm(), 0.0, 100.0).unwrap();
        let d: f64 = 0.02 / 20.0;
        let expect = 0.02 * 0.5 * libm::erfc(-d / 2f64.sqrt())
            + 20.0 * (-0.5 * d * d).exp() / (2.0 * PI).sqrt()
            - 0.02;
        assert!((c - expect).abs() < 1e-12);
        assert!((c - 7.968_86).abs() < 2e-5);
        let swiss = SiaParams::new(1.0, -0.0008).unwrap();
        let cs = bachelier_call_sia(&a, &swiss, &atm(), 0.0, 100.0).unwrap();
        assert!(cs.is_finite() && cs > 0.0);
    }

    #[test]
    fn negative_strike_and_spot_accepted() {
        let opt = VanillaCall::new(-5.0, 0.5).unwrap();
        let c = bachelier_call_zero_rate(&abm(3.0), &opt, 0.0, -4.0).unwrap();
        assert!(c > 1.0);
    }

    #[test]
    fn hedge_reference() {
        let h = bachelier_hedge(&abm(20.0), &atm(), 0.0, 100.0).unwrap();
        assert_eq!(h.stock_units, 0.5);
        assert!((h.account_units + 42.021_15).abs() < 1e-5);
        let c = bachelier_call_zero_rate(&abm(20.0), &atm(), 0.0, 100.0).unwrap();
        assert!((h.stock_units * 100.0 + h.account_units - c).abs() < 1e-12);
        let deep = bachelier_hedge(&abm(20.0), &atm(), 0.0, 300.0).unwrap();
        assert!(deep.stock_units > 0.999);
    }

    #[test]
    fn radon_nikodym_values() {
        let w = radon_nikodym_weight(MarketPriceOfRisk { theta: 0.0 }, 1.7, 2.0).unwrap();
        assert_eq!(w, 1.0);
        let w = radon_nikodym_weight(MarketPriceOfRisk { theta: 1.0 }, 0.0, 1.0).unwrap();
        assert!((w - 0.606_53).abs() < 1e-5);
        assert!(radon_nikodym_weight(MarketPriceOfRisk { theta: 1.0 }, 0.0, 0.0).is_err());
    }

    #[test]
    fn implied_rate_examples() {
        let a = AbmParams::new(1.0, 0.05, 0.1).unwrap();
        let b = AbmParams::new(1.0, 0.08, 0.2).unwrap();
        let r = implied_simple_rate(&a, &b).unwrap();
        assert!((r - 0.02).abs() < 1e-15);
        let (ta, tb) = (a.market_price_of_risk(r), b.market_price_of_risk(r));
        assert!((ta.theta - tb.theta).abs() < 1e-14);

        let same = AbmParams::new(1.0, 0.07, 0.3).unwrap();
        let other = AbmParams::new(1.0, 0.07, 0.9).unwrap();
        assert!((implied_simple_rate(&same, &other).unwrap() - 0.07).abs() < 1e-15);
        let z1 = AbmParams::new(1.0, 0.0, 0.3).unwrap();
        let z2 = AbmParams::new(1.0, 0.0, 0.4).unwrap();
        assert_eq!(implied_simple_rate(&z1, &z2).unwrap(), 0.0);
        assert!(matches!(
            implied_simple_rate(&z1, &z1),
            Err(Error::DegenerateMarket { time: None, .. })
        ));
    }

    #[test]
    fn implied_rate_path_examples() {
        let a = AbmParams::new(1.0, 0.05, 0.1).unwrap();
        let b = AbmParams::new(1.0, 0.08, 0.2).unwrap();
        let p1 = TimeIndexed::new(vec![0.0, 1.0], vec![a, b]).unwrap();
        let p2 = TimeIndexed::new(vec![0.0, 1.0], vec![b, a]).unwrap();
        let r = implied_simple_rate_path(&p1, &p2).unwrap();
        assert_eq!(r.times, vec![0.0, 1.0]);
        for v in &r.values {
            assert!((v - 0.02).abs() < 1e-15);
        }

        let c = implied_simple_rate_path(&TimeIndexed::constant(a), &TimeIndexed::constant(b)).unwrap();
        assert_eq!(c.values.len(), 1);
        assert!((c.at(5.0) - 0.02).abs() < 1e-15);

        let v1 = TimeIndexed::new(
            vec![0.0, 0.5, 1.0],
            vec![
                AbmParams::new(0.0, 0.03, 0.1).unwrap(),
                AbmParams::new(0.0, 0.03, 0.4).unwrap(),
                AbmParams::new(0.0, 0.03, 0.2).unwrap(),
            ],
        )
        .unwrap();
        let v2 = TimeIndexed::new(
            vec![0.0, 0.25],
            vec![
                AbmParams::new(0.0, 0.03, 0.3).unwrap(),
                AbmParams::new(0.0, 0.03, 0.25).unwrap(),
            ],
        )
        .unwrap();
        let r = implied_simple_rate_path(&v1, &v2).unwrap();
        assert_eq!(r.times, vec![0.0, 0.25, 0.5, 1.0]);
        assert!(r.values.iter().all(|x| (x - 0.03).abs() < 1e-15));

        let bad = TimeIndexed::new(vec![0.0, 2.0], vec![a, b]).unwrap();
        let err = implied_simple_rate_path(&bad, &TimeIndexed::constant(b)).unwrap_err();
        assert_eq!(
            err,
            Error::DegenerateMarket {
                volatility: 0.2,
                time: Some(2.0)
            }
        );
    }

    #[test]
    fn time_indexed_left_constant() {
        let p = TimeIndexed::new(vec![0.0, 1.0, 2.0], vec![1, 2, 3]).unwrap();
        assert_eq!(p.at(-1.0), 1);
        assert_eq!(p.at(0.999), 1);
        assert_eq!(p.at(1.0), 2);
        assert_eq!(p.at(9.0), 3);
        assert!(TimeIndexed::new(vec![1.0, 1.0], vec![1, 2]).is_err());
    }
}
