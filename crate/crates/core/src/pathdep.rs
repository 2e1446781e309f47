//! Factor-driven, path-dependent Bachelier pricing.
//!
//! A factor's observed price changes are reduced to normalized signs `ξ_k`
//! (mean 0, variance 1 under the factor's up-probability). The asset then
//! moves by
//!
//! ```text
//! c_k = ρΔ + v√Δ·ξ_k + γ√Δ·ξ_k·h(√Δ·Σ_{i<k} ξ_i)
//! ```
//!
//! so its volatility at each step depends on the factor's past through the
//! feedback function `h`. Pricing simulates `ξ` under per-step risk-neutral
//! probabilities solved from the two reachable increments at each state.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::binomial::RnMode;
use crate::error::{ensure_finite, ensure_positive, ensure_probability, invalid, Error, Result};
use crate::path::Path;
use crate::rng::map_paths;
use crate::stats::SampleStats;

/// One closed-form piece of a feedback function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    Constant { value: f64 },
    Linear { intercept: f64, slope: f64 },
    /// `scale·sgn(x)` with `sgn(0) = 0`.
    Sign { scale: f64 },
    /// `value` on `[lower, upper)`, zero elsewhere.
    Indicator { lower: f64, upper: f64, value: f64 },
}

impl Piece {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            Piece::Constant { value } => value,
            Piece::Linear { intercept, slope } => intercept + slope * x,
            Piece::Sign { scale } => {
                if x > 0.0 {
                    scale
                } else if x < 0.0 {
                    -scale
                } else {
                    0.0
                }
            }
            Piece::Indicator {
                lower,
                upper,
                value,
            } => {
                if x >= lower && x < upper {
                    value
                } else {
                    0.0
                }
            }
        }
    }

    fn params(&self) -> Vec<f64> {
        match *self {
            Piece::Constant { value } => vec![value],
            Piece::Linear { intercept, slope } => vec![intercept, slope],
            Piece::Sign { scale } => vec![scale],
            Piece::Indicator {
                lower,
                upper,
                value,
            } => vec![lower, upper, value],
        }
    }
}

/// Piecewise feedback function: `pieces[i]` applies on
/// `[breakpoints[i-1], breakpoints[i])` with open ends at ±∞. Every piece has
/// finite one-sided limits everywhere, so the whole function does too.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackFn {
    #[serde(default)]
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Piece>,
}

impl FeedbackFn {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        let h = Self {
            breakpoints,
            pieces,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn constant(value: f64) -> Self {
        Self {
            breakpoints: vec![],
            pieces: vec![Piece::Constant { value }],
        }
    }

    pub fn sign() -> Self {
        Self {
            breakpoints: vec![],
            pieces: vec![Piece::Sign { scale: 1.0 }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pieces.len() != self.breakpoints.len() + 1 {
            return Err(invalid(
                "feedback_fn",
                format!(
                    "{} breakpoints need {} pieces, got {}",
                    self.breakpoints.len(),
                    self.breakpoints.len() + 1,
                    self.pieces.len()
                ),
            ));
        }
        if self.breakpoints.iter().any(|b| !b.is_finite())
            || self.breakpoints.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(invalid(
                "feedback_fn",
                "breakpoints must be finite and strictly increasing",
            ));
        }
        for piece in &self.pieces {
            if piece.params().iter().any(|p| !p.is_finite()) {
                return Err(invalid("feedback_fn", format!("non-finite piece {piece:?}")));
            }
            if let Piece::Indicator { lower, upper, .. } = piece {
                if upper <= lower {
                    return Err(invalid("feedback_fn", "indicator needs lower < upper"));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        self.pieces[idx].eval(x)
    }
}

/// Factor dynamics with step-size dependent up-probability
/// `p(Δ) = p₀ + p₁√Δ + p₂Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorModelParams {
    pub drift: f64,
    pub volatility: f64,
    pub initial_value: f64,
    pub sign_prob_coeffs: [f64; 3],
}

impl FactorModelParams {
    pub fn up_prob(&self, dt: f64) -> f64 {
        let [p0, p1, p2] = self.sign_prob_coeffs;
        p0 + p1 * dt.sqrt() + p2 * dt
    }

    /// Validates the parameters for a working step size `dt`.
    pub fn validate_at(&self, dt: f64) -> Result<()> {
        ensure_finite("drift", self.drift)?;
        ensure_positive("volatility", self.volatility)?;
        ensure_positive("initial_value", self.initial_value)?;
        ensure_positive("dt", dt)?;
        let [p0, p1, p2] = self.sign_prob_coeffs;
        ensure_probability("sign_prob_coeffs[0]", p0)?;
        ensure_finite("sign_prob_coeffs[1]", p1)?;
        ensure_finite("sign_prob_coeffs[2]", p2)?;
        let p = self.up_prob(dt);
        if p > 0.0 && p < 1.0 {
            Ok(())
        } else {
            Err(invalid(
                "sign_prob_coeffs",
                format!("p(dt = {dt}) = {p} outside (0,1); use a finer step"),
            ))
        }
    }
}

/// Normalized sign values for up-probability `p`.
pub fn sign_values(p: f64) -> (f64, f64) {
    (((1.0 - p) / p).sqrt(), -(p / (1.0 - p)).sqrt())
}

/// Asset with factor-feedback volatility. `vol_direct` and `vol_feedback`
/// may take any real values but not both be zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDepAssetParams {
    pub drift: f64,
    pub vol_direct: f64,
    pub vol_feedback: f64,
    pub feedback_fn: FeedbackFn,
}

impl PathDepAssetParams {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("drift", self.drift)?;
        ensure_finite("vol_direct", self.vol_direct)?;
        ensure_finite("vol_feedback", self.vol_feedback)?;
        if self.vol_direct == 0.0 && self.vol_feedback == 0.0 {
            return Err(invalid(
                "vol_direct",
                "vol_direct and vol_feedback cannot both be zero",
            ));
        }
        self.feedback_fn.validate()
    }

    /// Coefficient of `√Δ·ξ_k` given the partial sum seen by `h`.
    fn scale(&self, partial_sum: f64) -> f64 {
        self.vol_direct + self.vol_feedback * self.feedback_fn.eval(partial_sum)
    }
}

/// `Z_k = (c_k − ρΔ)/(v√Δ)` mapped to `√((1−p)/p)` when `Z_k ≥ 0` and to
/// `−√(p/(1−p))` otherwise.
pub fn strip_factor_signs(changes: &[f64], factor: &FactorModelParams, dt: f64) -> Result<Vec<f64>> {
    if changes.is_empty() {
        return Err(Error::Input("no factor price changes".into()));
    }
    factor.validate_at(dt)?;
    let (up, down) = sign_values(factor.up_prob(dt));
    let scale = factor.volatility * dt.sqrt();
    changes
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if !c.is_finite() {
                return Err(Error::Input(format!("change {i} is not finite: {c}")));
            }
            let z = (c - factor.drift * dt) / scale;
            Ok(if z >= 0.0 { up } else { down })
        })
        .collect()
}

/// Observed changes at one sampling interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignSample {
    pub dt: f64,
    pub changes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignProbFit {
    pub coeffs: [f64; 3],
    /// Standard errors from binomial sampling noise of each frequency.
    pub std_errors: [f64; 3],
    /// Empirical up-frequency per sample.
    pub frequencies: Vec<f64>,
}

pub const MIN_SIGN_OBSERVATIONS: usize = 30;

/// Estimates `(p₀, p₁, p₂)` from the frequency of non-negative centered
/// changes. One sampling interval gives `(p̂, 0, 0)`; three or more are
/// fitted by least squares on `(1, √Δ, Δ)`.
pub fn estimate_factor_sign_probs(samples: &[SignSample]) -> Result<SignProbFit> {
    if samples.is_empty() || samples.len() == 2 {
        return Err(Error::Estimation(format!(
            "need one or at least three sampling intervals, got {}",
            samples.len()
        )));
    }
    let mut freqs = Vec::with_capacity(samples.len());
    let mut counts = Vec::with_capacity(samples.len());
    for s in samples {
        ensure_positive("dt", s.dt)?;
        if s.changes.len() < MIN_SIGN_OBSERVATIONS {
            return Err(Error::Estimation(format!(
                "{} observations at dt = {}; need at least {MIN_SIGN_OBSERVATIONS}",
                s.changes.len(),
                s.dt
            )));
        }
        if let Some(bad) = s.changes.iter().find(|c| !c.is_finite()) {
            return Err(Error::Input(format!("non-finite change {bad}")));
        }
        let n = s.changes.len() as f64;
        let mean = s.changes.iter().sum::<f64>() / n;
        let ups = s.changes.iter().filter(|&&c| c - mean >= 0.0).count();
        freqs.push(ups as f64 / n);
        counts.push(n);
    }

    let (coeffs, std_errors) = if samples.len() == 1 {
        let p = freqs[0];
        ([p, 0.0, 0.0], [(p * (1.0 - p) / counts[0]).sqrt(), 0.0, 0.0])
    } else {
        fit_quadratic_in_sqrt_dt(samples, &freqs, &counts)?
    };

    let fit = SignProbFit {
        coeffs,
        std_errors,
        frequencies: freqs,
    };
    let fitted: Vec<f64> = samples
        .iter()
        .map(|s| coeffs[0] + coeffs[1] * s.dt.sqrt() + coeffs[2] * s.dt)
        .collect();
    if fitted.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
        return Err(Error::Estimation(format!(
            "fitted up-probabilities {fitted:?} leave (0,1); coefficients {coeffs:?}"
        )));
    }
    Ok(fit)
}

fn fit_quadratic_in_sqrt_dt(
    samples: &[SignSample],
    freqs: &[f64],
    counts: &[f64],
) -> Result<([f64; 3], [f64; 3])> {
    let rows: Vec<[f64; 3]> = samples
        .iter()
        .map(|s| [1.0, s.dt.sqrt(), s.dt])
        .collect();
    let mut xtx = [[0.0; 3]; 3];
    for r in &rows {
        for i in 0..3 {
            for j in 0..3 {
                xtx[i][j] += r[i] * r[j];
            }
        }
    }
    let inv = invert3(&xtx).ok_or_else(|| {
        Error::Estimation("sampling intervals do not identify (p0, p1, p2)".into())
    })?;
    // A = (XᵀX)⁻¹Xᵀ; coefficients A·f, covariance A·diag(p(1−p)/n)·Aᵀ.
    let a: Vec<[f64; 3]> = rows
        .iter()
        .map(|r| {
            let mut col = [0.0; 3];
            for i in 0..3 {
                col[i] = (0..3).map(|j| inv[i][j] * r[j]).sum();
            }
            col
        })
        .collect();
    let mut coeffs = [0.0; 3];
    let mut var = [0.0; 3];
    for (k, col) in a.iter().enumerate() {
        let noise = freqs[k] * (1.0 - freqs[k]) / counts[k];
        for i in 0..3 {
            coeffs[i] += col[i] * freqs[k];
            var[i] += col[i] * col[i] * noise;
        }
    }
    Ok((coeffs, var.map(f64::sqrt)))
}

fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let scale = m.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    if det.abs() <= 1e-14 * scale.powi(3) {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det;
        }
    }
    Some(inv)
}

/// Factor price path driven by `signs` (`true` = up) on a uniform grid.
pub fn factor_tree_path(
    factor: &FactorModelParams,
    steps: usize,
    horizon: f64,
    signs: &[bool],
) -> Result<Path> {
    if steps == 0 {
        return Err(invalid("steps", "must be >= 1"));
    }
    ensure_positive("horizon", horizon)?;
    if signs.len() != steps {
        return Err(Error::Input(format!(
            "{} signs for {steps} steps",
            signs.len()
        )));
    }
    let dt = horizon / steps as f64;
    factor.validate_at(dt)?;
    let (up, down) = sign_values(factor.up_prob(dt));
    let (drift, diffusion) = (factor.drift * dt, factor.volatility * dt.sqrt());
    let mut a = factor.initial_value;
    let mut values = Vec::with_capacity(steps + 1);
    values.push(a);
    for &s in signs {
        a += drift + diffusion * if s { up } else { down };
        values.push(a);
    }
    Ok(Path::new(Path::uniform_times(steps, horizon), values))
}

/// `X_k = √Δ·Σ_{i≤k} ξ_i`, `Y_k = √Δ·Σ_{i≤k} ξ_i·h(X_{i−1})`.
pub fn csyip_pair(signs: &[f64], h: &FeedbackFn, dt: f64) -> Result<(Path, Path)> {
    ensure_positive("dt", dt)?;
    h.validate()?;
    let sq = dt.sqrt();
    let mut xs = Vec::with_capacity(signs.len() + 1);
    let mut ys = Vec::with_capacity(signs.len() + 1);
    let (mut x, mut y) = (0.0, 0.0);
    xs.push(x);
    ys.push(y);
    for &xi in signs {
        y += xi * h.eval(x) * sq;
        x += xi * sq;
        xs.push(x);
        ys.push(y);
    }
    let times = Path::uniform_times(signs.len(), dt * signs.len() as f64);
    Ok((Path::new(times.clone(), xs), Path::new(times, ys)))
}

/// Asset path from normalized signs, starting at `initial`.
pub fn pathdep_asset_path(
    asset: &PathDepAssetParams,
    signs: &[f64],
    dt: f64,
    initial: f64,
) -> Result<Path> {
    asset.validate()?;
    ensure_positive("dt", dt)?;
    ensure_finite("initial", initial)?;
    let sq = dt.sqrt();
    let mut partial = 0.0;
    let mut a = initial;
    let mut values = Vec::with_capacity(signs.len() + 1);
    values.push(a);
    for &xi in signs {
        a += asset.drift * dt + asset.scale(partial) * sq * xi;
        partial += sq * xi;
        values.push(a);
    }
    let times = Path::uniform_times(signs.len(), dt * signs.len() as f64);
    Ok(Path::new(times, values))
}

/// Monte Carlo settings for [`pathdep_price`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathDepPricing {
    pub initial_price: f64,
    pub steps: usize,
    pub horizon: f64,
    pub paths: usize,
    pub seed: u64,
    pub simple_rate: f64,
    #[serde(default)]
    pub rn_mode: RnMode,
}

pub const MIN_PATHS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub price: f64,
    pub std_error: f64,
}

/// Prices a terminal payoff on the path-dependent asset.
///
/// At each step the two reachable increments `u_k`, `d_k` follow from the
/// realized partial sum; the up-probability is `(target − d_k)/(u_k − d_k)`
/// with target `0` ([`RnMode::AsWritten`]) or `rΔ`
/// ([`RnMode::MartingaleConsistent`]). The deterministic carry `r·T` is added
/// to the payoff mean.
pub fn pathdep_price<F>(
    asset: &PathDepAssetParams,
    factor: &FactorModelParams,
    payoff: F,
    cfg: &PathDepPricing,
) -> Result<McEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    asset.validate()?;
    if cfg.steps == 0 {
        return Err(invalid("steps", "must be >= 1"));
    }
    ensure_positive("horizon", cfg.horizon)?;
    ensure_finite("initial_price", cfg.initial_price)?;
    ensure_finite("simple_rate", cfg.simple_rate)?;
    if cfg.paths < MIN_PATHS {
        return Err(invalid(
            "paths",
            format!("need at least {MIN_PATHS}, got {}", cfg.paths),
        ));
    }
    let dt = cfg.horizon / cfg.steps as f64;
    factor.validate_at(dt)?;
    let (xi_up, xi_down) = sign_values(factor.up_prob(dt));
    let sq = dt.sqrt();
    let target = match cfg.rn_mode {
        RnMode::AsWritten => 0.0,
        RnMode::MartingaleConsistent => cfg.simple_rate * dt,
    };
    let p = factor.up_prob(dt);

    let outcomes = map_paths(cfg.seed, cfg.paths, |_, rng| -> Result<f64> {
        let mut partial = 0.0;
        let mut a = cfg.initial_price;
        for step in 0..cfg.steps {
            let scale = asset.scale(partial);
            let up = asset.drift * dt + scale * sq * xi_up;
            let down = asset.drift * dt + scale * sq * xi_down;
            let q = if up == down {
                // Deterministic step: only consistent if it already hits the target.
                if up == target {
                    p
                } else {
                    return Err(Error::Arbitrage {
                        step,
                        q: f64::NAN,
                        state: Some(partial),
                    });
                }
            } else {
                (target - down) / (up - down)
            };
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::Arbitrage {
                    step,
                    q,
                    state: Some(partial),
                });
            }
            let is_up = rng.random::<f64>() < q;
            a += if is_up { up } else { down };
            partial += sq * if is_up { xi_up } else { xi_down };
        }
        Ok(payoff(a))
    });
    let values = outcomes.into_iter().collect::<Result<Vec<f64>>>()?;
    let stats = SampleStats::from_slice(&values);
    Ok(McEstimate {
        price: stats.mean + cfg.simple_rate * cfg.horizon,
        std_error: stats.std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factor(p: f64) -> FactorModelParams {
        FactorModelParams {
            drift: 0.05,
            volatility: 0.2,
            initial_value: 10.0,
            sign_prob_coeffs: [p, 0.0, 0.0],
        }
    }

    #[test]
    fn feedback_pieces() {
        let h = FeedbackFn::new(
            vec![-1.0, 0.0, 2.0],
            vec![
                Piece::Constant { value: -3.0 },
                Piece::Linear {
                    intercept: 1.0,
                    slope: 2.0,
                },
                Piece::Sign { scale: 0.5 },
                Piece::Indicator {
                    lower: 3.0,
                    upper: 4.0,
                    value: 7.0,
                },
            ],
        )
        .unwrap();
        assert_eq!(h.eval(-5.0), -3.0);
        assert_eq!(h.eval(-1.0), -1.0);
        assert_eq!(h.eval(-0.5), 0.0);
        assert_eq!(h.eval(0.0), 0.0);
        assert_eq!(h.eval(1.0), 0.5);
        assert_eq!(h.eval(2.5), 0.0);
        assert_eq!(h.eval(3.0), 7.0);
        assert_eq!(FeedbackFn::sign().eval(0.0), 0.0);
        assert_eq!(FeedbackFn::sign().eval(-2.0), -1.0);
        assert!(FeedbackFn::new(vec![1.0], vec![Piece::Constant { value: 1.0 }]).is_err());
        assert!(FeedbackFn::new(
            vec![1.0, 0.0],
            vec![Piece::Constant { value: 1.0 }; 3]
        )
        .is_err());
    }

    #[test]
    fn strip_examples() {
        let f = factor(0.5);
        let dt = 0.01;
        let flat = vec![f.drift * dt; 5];
        let xi = strip_factor_signs(&flat, &f, dt).unwrap();
        assert!(xi.iter().all(|&x| x == 1.0));
        let xi = strip_factor_signs(&[0.3, -0.3, 0.0], &f, dt).unwrap();
        assert_eq!(xi, vec![1.0, -1.0, -1.0]);

        let xi = strip_factor_signs(&[1.0, -1.0], &factor(0.8), dt).unwrap();
        assert!((xi[0] - 0.5).abs() < 1e-15);
        assert!((xi[1] + 2.0).abs() < 1e-15);
        let (u, d) = sign_values(0.8);
        assert!((0.8 * u + 0.2 * d).abs() < 1e-15);
        assert!((0.8 * u * u + 0.2 * d * d - 1.0).abs() < 1e-15);
        assert!(strip_factor_signs(&[], &f, dt).is_err());
    }

    #[test]
    fn estimate_errors() {
        let few = SignSample {
            dt: 0.01,
            changes: vec![1.0; 10],
        };
        assert!(matches!(
            estimate_factor_sign_probs(&[few]),
            Err(Error::Estimation(_))
        ));
        let positive = SignSample {
            dt: 0.01,
            changes: vec![1.0; 40],
        };
        // Constant data centers to zero, all counted as up.
        let err = estimate_factor_sign_probs(&[positive]).unwrap_err();
        assert!(matches!(err, Error::Estimation(ref m) if m.contains("[1.0]")));
    }

    #[test]
    fn invert3_roundtrip() {
        let m = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let inv = invert3(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| m[i][k] * inv[k][j]).sum();
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn factor_path_all_up() {
        let f = FactorModelParams {
            drift: 0.1,
            volatility: 0.3,
            initial_value: 5.0,
            sign_prob_coeffs: [0.5, 0.0, 0.0],
        };
        let n = 16;
        let p = factor_tree_path(&f, n, 2.0, &vec![true; n]).unwrap();
        let dt: f64 = 2.0 / n as f64;
        let expect = 5.0 + 0.1 * 2.0 + 0.3 * n as f64 * dt.sqrt();
        assert!((p.terminal() - expect).abs() < 1e-12);
        assert!(factor_tree_path(&f, n, 2.0, &[true; 3]).is_err());
    }

    #[test]
    fn csyip_identities() {
        let signs = [1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0];
        let (x, y) = csyip_pair(&signs, &FeedbackFn::constant(1.0), 0.01).unwrap();
        assert_eq!(x.values, y.values);
        let (_, y0) = csyip_pair(&signs, &FeedbackFn::constant(0.0), 0.01).unwrap();
        assert!(y0.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn asset_path_reductions() {
        let signs = [0.5, -2.0, 0.5, 0.5, -2.0];
        let dt = 0.04;
        let plain = PathDepAssetParams {
            drift: 0.3,
            vol_direct: 1.5,
            vol_feedback: 0.0,
            feedback_fn: FeedbackFn::sign(),
        };
        let p = pathdep_asset_path(&plain, &signs, dt, 2.0).unwrap();
        let mut a = 2.0;
        for (k, &xi) in signs.iter().enumerate() {
            a += 0.3 * dt + 1.5 * dt.sqrt() * xi;
            assert!((p.values[k + 1] - a).abs() < 1e-14);
        }
        let fb = PathDepAssetParams {
            drift: 0.3,
            vol_direct: 0.0,
            vol_feedback: 1.5,
            feedback_fn: FeedbackFn::constant(1.0),
        };
        let q = pathdep_asset_path(&fb, &signs, dt, 2.0).unwrap();
        assert_eq!(p.values, q.values);
        let both_zero = PathDepAssetParams {
            vol_direct: 0.0,
            vol_feedback: 0.0,
            ..plain
        };
        assert!(pathdep_asset_path(&both_zero, &signs, dt, 0.0).is_err());
    }

    #[test]
    fn constant_payoff_is_exact() {
        let asset = PathDepAssetParams {
            drift: 0.02,
            vol_direct: 1.0,
            vol_feedback: 0.5,
            feedback_fn: FeedbackFn::sign(),
        };
        let cfg = PathDepPricing {
            initial_price: 10.0,
            steps: 50,
            horizon: 1.0,
            paths: 200,
            seed: 3,
            simple_rate: 0.0,
            rn_mode: RnMode::AsWritten,
        };
        let est = pathdep_price(&asset, &factor(0.5), |_| 4.25, &cfg).unwrap();
        assert_eq!(est.price, 4.25);
        assert_eq!(est.std_error, 0.0);
        let too_few = PathDepPricing { paths: 99, ..cfg };
        assert!(pathdep_price(&asset, &factor(0.5), |_| 1.0, &too_few).is_err());
    }

    #[test]
    fn arbitrage_reports_step_and_state() {
        // Feedback switches the scale to zero once the partial sum is positive,
        // leaving a deterministic drift step that cannot earn zero.
        let asset = PathDepAssetParams {
            drift: 1.0,
            vol_direct: 1.0,
            vol_feedback: -1.0,
            feedback_fn: FeedbackFn::new(
                vec![0.0],
                vec![Piece::Constant { value: 0.0 }, Piece::Constant { value: 1.0 }],
            )
            .unwrap(),
        };
        let cfg = PathDepPricing {
            initial_price: 0.0,
            steps: 20,
            horizon: 1.0,
            paths: 100,
            seed: 1,
            simple_rate: 0.0,
            rn_mode: RnMode::AsWritten,
        };
        let err = pathdep_price(&asset, &factor(0.5), |x| x, &cfg).unwrap_err();
        match err {
            Error::Arbitrage { state, .. } => assert!(state.unwrap() >= 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
