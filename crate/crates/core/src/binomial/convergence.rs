use serde::Serialize;

use super::bachelier::{bachelier_price, BachelierTreeSpec};
use crate::error::Result;
use crate::stats::log_log_slope;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub steps: usize,
    pub price: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub reference: f64,
    pub rows: Vec<ConvergenceRow>,
    /// `−slope` of `ln|error|` against `ln n`; `1/√n` decay gives 0.5.
    pub fitted_order: f64,
}

/// Reprices `base` at each step count and fits the error decay order
/// against a reference value (usually a closed form).
pub fn convergence_study<F: Fn(f64) -> f64>(
    base: &BachelierTreeSpec,
    step_counts: &[usize],
    payoff: F,
    reference: f64,
) -> Result<ConvergenceReport> {
    let rows = step_counts
        .iter()
        .map(|&steps| {
            let spec = BachelierTreeSpec {
                steps,
                step_sizes: None,
                ..base.clone()
            };
            let price = bachelier_price(&spec, &payoff)?.price;
            Ok(ConvergenceRow {
                steps,
                price,
                abs_error: (price - reference).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ns: Vec<f64> = rows.iter().map(|r| r.steps as f64).collect();
    let errs: Vec<f64> = rows.iter().map(|r| r.abs_error).collect();
    let fitted_order = if rows.len() >= 2 && errs.iter().all(|&e| e > 0.0) {
        -log_log_slope(&ns, &errs)
    } else {
        f64::NAN
    };
    Ok(ConvergenceReport {
        reference,
        rows,
        fitted_order,
    })
}
