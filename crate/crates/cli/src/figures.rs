//! Plot data as CSV: the score transforms, the local-time decomposition,
//! skew Brownian families and single simulated paths.

use bachelier_core::esg::{exp_transform, geo_transform};
use bachelier_core::model::AbmParams;
use bachelier_core::pathdep::{csyip_pair, FeedbackFn};
use bachelier_core::rng::{map_paths, substream};
use bachelier_core::sim::*;
use rand::Rng;
use serde_json::{json, Value};

use crate::config::{Figure, Process, RunConfig, SimulateArgs};
use crate::error::{CliError, Result};

pub struct SimOutput {
    pub csv: String,
    pub summary: Value,
}

/// Column-major table rendered as CSV with shortest round-trip floats.
fn render(header: &[String], columns: &[Vec<f64>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Config(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for i in 0..columns[0].len() {
        w.write_record(columns.iter().map(|c| c[i].to_string())).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn signs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, 0);
    (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
}

pub fn simulate(a: &SimulateArgs, cfg: &RunConfig) -> Result<SimOutput> {
    let (steps, seed, h) = (cfg.steps, cfg.seed, a.horizon);
    if let Some(fig) = a.figure {
        return figure(fig, steps, h, seed);
    }
    let process = a
        .process
        .ok_or_else(|| CliError::Config("simulate needs --figure or --process".into()))?;
    let abm = || AbmParams::new(a.initial_value, a.drift, a.volatility);
    let mut extra = json!({});
    let (header, columns) = match process {
        Process::Abm => {
            let p = simulate_abm(&abm()?, h, steps, seed)?;
            (names(&["t", "value"]), vec![p.times, p.values])
        }
        Process::Gbm => {
            let params = GbmParams {
                mu: a.drift,
                sigma: a.volatility,
                s0: a.initial_value,
            };
            let p = simulate_gbm(&params, h, steps, seed)?;
            (names(&["t", "value"]), vec![p.times, p.values])
        }
        Process::Absorbed => {
            let spec = AbsorbedPathSpec {
                abm: abm()?,
                horizon: h,
            };
            let p = simulate_absorbed(&spec, steps, seed)?;
            extra = json!({ "absorption_time": p.absorption_time });
            (names(&["t", "value"]), vec![p.path.times, p.path.values])
        }
        Process::ItoMckean => {
            let p = ito_mckean_sbm(a.delta, steps, h, seed)?;
            (names(&["t", "value"]), vec![p.times, p.values])
        }
        Process::ItoMckeanMixture => {
            let p = ito_mckean_sbm_mixture(a.delta, steps, h, seed)?;
            (names(&["t", "value"]), vec![p.times, p.values])
        }
        Process::Gsbm => {
            let g = gamma(&a.gamma)?;
            let p = gsbm_path(&g, steps, h, seed)?;
            (names(&["t", "value"]), vec![p.times, p.values])
        }
        Process::HvWalk => {
            let (x, y) = horizontal_vertical_walk(&signs(steps, seed), steps)?;
            (names(&["t", "x", "y"]), vec![x.times, x.values, y.values])
        }
        Process::Csyip => {
            let dt = h / steps as f64;
            let (x, y) = csyip_pair(&signs(steps, seed), &FeedbackFn::sign(), dt)?;
            (names(&["t", "x", "y"]), vec![x.times, x.values, y.values])
        }
    };
    let terminal: Vec<f64> = columns[1..].iter().map(|c| c[c.len() - 1]).collect();
    extra["rows"] = json!(columns[0].len());
    extra["terminal"] = json!(terminal);
    extra["columns"] = json!(header);
    Ok(SimOutput {
        csv: render(&header, &columns)?,
        summary: extra,
    })
}

fn gamma(g: &[f64]) -> Result<SkewTriplet> {
    match g {
        [lo, zero, hi] => Ok(SkewTriplet::new(*lo, *zero, *hi)),
        _ => Err(CliError::Config(format!("gamma needs 3 values, got {}", g.len()))),
    }
}

fn figure(fig: Figure, steps: usize, horizon: f64, seed: u64) -> Result<SimOutput> {
    let (header, columns) = match fig {
        Figure::A1 | Figure::A2 => {
            let xs: Vec<f64> = (0..=200).map(|i| i as f64 * 0.5).collect();
            let ys = xs
                .iter()
                .map(|&x| match fig {
                    Figure::A1 => exp_transform(x, 0.05),
                    _ => geo_transform(x, 0.5),
                })
                .collect::<bachelier_core::Result<Vec<f64>>>()?;
            let name = if fig == Figure::A1 { "f_exp" } else { "f_geo" };
            (names(&["x", name]), vec![xs, ys])
        }
        Figure::B3 => {
            let d = brownian_decompose(steps, horizon, seed)?;
            let z = z_gamma_path(&d, &SkewTriplet::new(1.0, 1.0, 1.0))?;
            (
                names(&["t", "brownian", "local_time", "z_111"]),
                vec![d.path.times, d.path.values, d.local_time.values, z.values],
            )
        }
        Figure::B4 | Figure::B5 => {
            let g = if fig == Figure::B4 {
                SkewTriplet::new(2.0, -1.0, 2.0)
            } else {
                SkewTriplet::new(11.0, -1.0, 2.0)
            };
            if steps == 0 || !(horizon > 0.0) {
                return Err(CliError::Config("need steps >= 1 and horizon > 0".into()));
            }
            let paths = map_paths(seed, 10, |_, rng| gsbm_path_with(&g, steps, horizon, rng));
            let mut header = names(&["t"]);
            let mut columns = vec![paths[0].times.clone()];
            for (i, p) in paths.into_iter().enumerate() {
                header.push(format!("w_{i}"));
                columns.push(p.values);
            }
            (header, columns)
        }
    };
    Ok(SimOutput {
        csv: render(&header, &columns)?,
        summary: json!({ "figure": fig, "rows": columns[0].len(), "columns": header }),
    })
}
