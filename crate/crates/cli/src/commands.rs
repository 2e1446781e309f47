use bachelier_core::binomial::{
    bachelier_price, bachelier_rn_prob, classical_price, classical_rn_prob, convergence_study,
    BachelierTreeSpec, ClassicalTreeSpec, RnMode,
};
use bachelier_core::esg::{
    esg_adjusted_price, exp_transform, geo_transform, implied_affinity, relative_score,
    AffinityBounds, EsgAffinity, EsgRecord,
};
use bachelier_core::model::{
    bachelier_call_sia, bachelier_call_zero_rate, bachelier_hedge, implied_simple_rate, AbmParams,
    SiaParams, VanillaCall,
};
use bachelier_core::pathdep::{
    estimate_factor_sign_probs, pathdep_price, FactorModelParams, FeedbackFn, PathDepAssetParams,
    PathDepPricing, SignSample,
};
use bachelier_core::stats::SampleStats;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::*;
use crate::csv_io::{self, Schema};
use crate::error::Result;
use crate::estimate::estimate_spot_params;
use crate::figures;

/// JSON result document plus any side artifacts.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub inputs: RunConfig,
    pub results: Value,
    pub seed: u64,
    pub version: &'static str,
    /// CSV payload of `simulate`.
    #[serde(skip)]
    pub csv: Option<String>,
    /// Aligned-text rendering, where a command has one.
    #[serde(skip)]
    pub table: Option<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn run_command(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let mut csv = None;
    let mut table = None;
    let results = match &config.command {
        CommandConfig::Price(a) => price(a)?,
        CommandConfig::Tree(a) => tree(a, config)?,
        CommandConfig::Pathdep(a) => pathdep(a, config)?,
        CommandConfig::Simulate(a) => {
            let out = figures::simulate(a, config)?;
            csv = Some(out.csv);
            out.summary
        }
        CommandConfig::Esg(a) => esg(a)?,
        CommandConfig::Estimate(a) => estimate(a)?,
        CommandConfig::ImpliedRate(a) => implied_rate(a)?,
        CommandConfig::ImpliedAffinity(a) => affinity(a)?,
        CommandConfig::ConvergenceReport(a) => {
            let (v, t) = convergence(a, config)?;
            table = Some(t);
            v
        }
    };
    Ok(Report {
        command: config.command.name(),
        inputs: config.clone(),
        results,
        seed: config.seed,
        version: bachelier_core::VERSION,
        csv,
        table,
    })
}

fn price(a: &PriceArgs) -> Result<Value> {
    let abm = AbmParams::new(a.initial_value, a.drift, a.volatility)?;
    let sia = SiaParams::new(1.0, a.rate)?;
    let opt = VanillaCall::new(a.strike, a.maturity)?;
    let spot = a.spot.unwrap_or(a.initial_value);
    let value = bachelier_call_sia(&abm, &sia, &opt, a.time, spot)?;
    let zero_rate = bachelier_call_zero_rate(&abm, &opt, a.time, spot)?;
    let hedge = bachelier_hedge(&abm, &opt, a.time, spot)?;
    Ok(json!({
        "value": value,
        "zero_rate_value": zero_rate,
        "zero_rate_hedge": hedge,
        "market_price_of_risk": abm.market_price_of_risk(a.rate).theta,
    }))
}

fn tree(a: &TreeArgs, cfg: &RunConfig) -> Result<Value> {
    let payoff = a.payoff.payoff(a.strike);
    match a.engine {
        TreeEngine::Bachelier => {
            let mut spec = BachelierTreeSpec::new(
                cfg.steps,
                a.maturity,
                a.up_prob,
                a.drift,
                a.volatility,
                a.rate,
                a.initial_value,
            )
            .with_mode(cfg.rn_mode);
            if let Some(ps) = &a.step_probs {
                spec = spec.with_step_probs(ps.clone());
            }
            let out = bachelier_price(&spec, |x| payoff.eval(x))?;
            let mut v = json!({
                "value": out.price,
                "root_hedge": out.root_hedge,
                "risk_neutral_prob_step0": bachelier_rn_prob(&spec, 0)?,
                "recombining": spec.is_recombining(),
            });
            if a.payoff == PayoffKind::Call {
                let abm = AbmParams::new(a.initial_value, a.drift, a.volatility)?;
                let opt = VanillaCall::new(a.strike, a.maturity)?;
                let sia = SiaParams::new(1.0, a.rate)?;
                v["closed_form"] = json!(bachelier_call_sia(&abm, &sia, &opt, 0.0, a.initial_value)?);
            }
            Ok(v)
        }
        TreeEngine::Classical => {
            let spec = ClassicalTreeSpec {
                steps: cfg.steps,
                horizon: a.maturity,
                up_prob: a.up_prob,
                mean_return: a.drift,
                variance_return: a.volatility * a.volatility,
                riskless_rate: a.rate,
                initial_price: a.initial_value,
            };
            Ok(json!({
                "value": classical_price(&spec, |x| payoff.eval(x))?,
                "risk_neutral_prob": classical_rn_prob(&spec)?,
            }))
        }
    }
}

fn pathdep(a: &PathdepArgs, cfg: &RunConfig) -> Result<Value> {
    let mut factor = FactorModelParams {
        drift: a.factor_drift,
        volatility: a.factor_volatility,
        initial_value: 1.0,
        sign_prob_coeffs: [a.p0, a.p1, a.p2],
    };
    let mut estimated = Value::Null;
    if let Some(path) = &a.factor_csv {
        let data = csv_io::load_factor_changes(path)?;
        let dt = csv_io::uniform_step(&data.times)?;
        let fit = estimate_factor_sign_probs(&[SignSample {
            dt,
            changes: data.changes.clone(),
        }])?;
        let s = SampleStats::from_slice(&data.changes);
        factor.drift = s.mean / dt;
        factor.volatility = (s.variance / dt).sqrt();
        factor.sign_prob_coeffs = fit.coeffs;
        estimated = json!({
            "dt": dt,
            "observations": data.changes.len(),
            "factor_drift": factor.drift,
            "factor_volatility": factor.volatility,
            "sign_prob": fit.coeffs[0],
            "sign_prob_std_error": fit.std_errors[0],
        });
    }
    let feedback_fn = match (&a.feedback_fn, a.feedback) {
        (Some(f), _) => f.clone(),
        (None, FeedbackKind::Sign) => FeedbackFn::sign(),
        (None, FeedbackKind::One) => FeedbackFn::constant(1.0),
        (None, FeedbackKind::Zero) => FeedbackFn::constant(0.0),
    };
    let asset = PathDepAssetParams {
        drift: a.drift,
        vol_direct: a.vol_direct,
        vol_feedback: a.vol_feedback,
        feedback_fn,
    };
    let pricing = PathDepPricing {
        initial_price: a.initial_value,
        steps: cfg.steps,
        horizon: a.maturity,
        paths: cfg.paths,
        seed: cfg.seed,
        simple_rate: a.rate,
        rn_mode: cfg.rn_mode,
    };
    let payoff = a.payoff.payoff(a.strike);
    let est = pathdep_price(&asset, &factor, |x| payoff.eval(x), &pricing)?;
    Ok(json!({
        "value": est.price,
        "std_error": est.std_error,
        "factor_estimates": estimated,
    }))
}

fn esg(a: &EsgArgs) -> Result<Value> {
    let records = match &a.input {
        Some(path) => csv_io::load_esg_records(path)?,
        None => vec![EsgRecord {
            time: 0.0,
            stock_price: a.price,
            company_score: a.company_score,
            benchmark_score: a.benchmark_score,
        }],
    };
    let affinity = EsgAffinity { gamma: a.gamma };
    let rows = records
        .iter()
        .map(|r| {
            Ok(json!({
                "time": r.time,
                "price": r.stock_price,
                "relative_score": relative_score(r)?,
                "adjusted_price": esg_adjusted_price(r, affinity)?,
                "company_score_exp": exp_transform(r.company_score, a.exp_a)?,
                "company_score_geo": geo_transform(r.company_score, a.geo_b)?,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "gamma": a.gamma, "records": rows }))
}

fn estimate(a: &EstimateArgs) -> Result<Value> {
    let path = a.input.as_ref().expect("validated");
    match a.schema {
        Schema::Prices => {
            let series = csv_io::load_prices(path)?;
            let est = estimate_spot_params(&series)?;
            let mut diagnostics = Vec::new();
            if let Err(e) = AbmParams::new(series.values[0], est.drift, est.volatility) {
                diagnostics.push(e.to_string());
            }
            Ok(json!({ "estimate": est, "diagnostics": diagnostics }))
        }
        Schema::FactorChanges => {
            let data = csv_io::load_factor_changes(path)?;
            let dt = csv_io::uniform_step(&data.times)?;
            let fit = estimate_factor_sign_probs(&[SignSample {
                dt,
                changes: data.changes.clone(),
            }])?;
            Ok(json!({ "dt": dt, "fit": fit }))
        }
        Schema::EsgRecords => Err(crate::error::CliError::Config(
            "estimate supports the prices and factor-changes schemas".into(),
        )),
    }
}

fn implied_rate(a: &ImpliedRateArgs) -> Result<Value> {
    let a1 = AbmParams::new(0.0, a.drift1, a.vol1)?;
    let a2 = AbmParams::new(0.0, a.drift2, a.vol2)?;
    Ok(json!({ "simple_rate": implied_simple_rate(&a1, &a2)? }))
}

fn affinity(a: &ImpliedAffinityArgs) -> Result<Value> {
    let record = EsgRecord {
        time: 0.0,
        stock_price: a.price,
        company_score: a.company_score,
        benchmark_score: a.benchmark_score,
    };
    let gamma = implied_affinity(a.observed, &record)?;
    AffinityBounds {
        lower: a.lower_bound,
        upper: a.upper_bound,
    }
    .check(gamma)?;
    Ok(json!({ "gamma": gamma.gamma, "relative_score": relative_score(&record)? }))
}

fn convergence(a: &ConvergenceArgs, cfg: &RunConfig) -> Result<(Value, String)> {
    let abm = AbmParams::new(a.initial_value, a.drift, a.volatility)?;
    let opt = VanillaCall::new(a.strike, a.maturity)?;
    let closed_form = bachelier_call_sia(&abm, &SiaParams::new(1.0, a.rate)?, &opt, 0.0, a.initial_value)?;
    let zero_rate_plus_carry =
        bachelier_call_zero_rate(&abm, &opt, 0.0, a.initial_value)? + a.rate * a.maturity;
    let modes = if a.rate != 0.0 {
        vec![RnMode::AsWritten, RnMode::MartingaleConsistent]
    } else {
        vec![cfg.rn_mode]
    };
    let call = |x: f64| (x - a.strike).max(0.0);
    let mut reports = Vec::new();
    for mode in &modes {
        let base = BachelierTreeSpec::new(
            a.depths.first().copied().unwrap_or(1),
            a.maturity,
            a.up_prob,
            a.drift,
            a.volatility,
            a.rate,
            a.initial_value,
        )
        .with_mode(*mode);
        reports.push(convergence_study(&base, &a.depths, call, closed_form)?);
    }

    let mut table = format!("{:>8}", "n");
    for mode in &modes {
        let name = mode_name(*mode);
        table += &format!(" {:>16} {:>12}", format!("{name} price"), "|error|");
    }
    if modes.len() == 2 {
        table += &format!(" {:>12}", "gap");
    }
    table.push('\n');
    for (i, &n) in a.depths.iter().enumerate() {
        table += &format!("{n:>8}");
        for r in &reports {
            table += &format!(" {:>16.8} {:>12.3e}", r.rows[i].price, r.rows[i].abs_error);
        }
        if reports.len() == 2 {
            table += &format!(" {:>12.8}", reports[1].rows[i].price - reports[0].rows[i].price);
        }
        table.push('\n');
    }
    table += &format!("closed form {closed_form:.8}; zero-rate price + rT {zero_rate_plus_carry:.8}\n");

    let by_mode: Vec<Value> = modes
        .iter()
        .zip(&reports)
        .map(|(m, r)| json!({ "rn_mode": m, "rows": r.rows, "fitted_order": r.fitted_order }))
        .collect();
    let gap: Value = if reports.len() == 2 {
        json!(reports[0]
            .rows
            .iter()
            .zip(&reports[1].rows)
            .map(|(w, m)| json!({ "steps": w.steps, "martingale_minus_as_written": m.price - w.price }))
            .collect::<Vec<_>>())
    } else {
        Value::Null
    };
    Ok((
        json!({
            "closed_form": closed_form,
            "zero_rate_plus_carry": zero_rate_plus_carry,
            "modes": by_mode,
            "gap": gap,
        }),
        table,
    ))
}

fn mode_name(mode: RnMode) -> &'static str {
    match mode {
        RnMode::AsWritten => "as-written",
        RnMode::MartingaleConsistent => "martingale",
    }
}
