//! Additive binomial tree for Bachelier's market.
//!
//! Prices move by `u_k` or `d_k` per step, the account grows by `rΔ_k`, and
//! backward induction adds (rather than discounts by) the simple-rate
//! carry: `G_k = qG^u + (1−q)G^d + rΔ_k`.
//!
//! The risk-neutral probability comes in two flavours, see [`RnMode`].

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{tilted_probability, two_point_moves, UpDown};
use crate::error::{ensure_finite, ensure_positive, ensure_probability, invalid, Error, Result};
use crate::path::Path;

/// Largest non-recombining tree priced by full enumeration.
pub const MAX_ENUMERATION_STEPS: usize = 24;

/// Which risk-neutral probability the tree uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RnMode {
    /// `q = p − (ρ/v)√(p(1−p)Δ)`: zero expected price change per step.
    #[default]
    AsWritten,
    /// `q = p − ((ρ−r)/v)√(p(1−p)Δ)`: expected price change `rΔ` per step.
    #[serde(rename = "martingale")]
    MartingaleConsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UpProbs {
    Constant(f64),
    PerStep(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BachelierTreeSpec {
    pub steps: usize,
    pub horizon: f64,
    pub up_probs: UpProbs,
    pub drift: f64,
    pub volatility: f64,
    pub simple_rate: f64,
    pub initial_price: f64,
    #[serde(default)]
    pub rn_mode: RnMode,
    /// Optional non-uniform step sizes summing to `horizon`.
    #[serde(default)]
    pub step_sizes: Option<Vec<f64>>,
    /// Initial balance of the simple-interest account.
    #[serde(default = "one")]
    pub account_initial: f64,
}

fn one() -> f64 {
    1.0
}

impl BachelierTreeSpec {
    /// Uniform grid with a constant up-probability, [`RnMode::AsWritten`].
    pub fn new(
        steps: usize,
        horizon: f64,
        up_prob: f64,
        drift: f64,
        volatility: f64,
        simple_rate: f64,
        initial_price: f64,
    ) -> Self {
        Self {
            steps,
            horizon,
            up_probs: UpProbs::Constant(up_prob),
            drift,
            volatility,
            simple_rate,
            initial_price,
            rn_mode: RnMode::AsWritten,
            step_sizes: None,
            account_initial: 1.0,
        }
    }

    pub fn with_mode(mut self, mode: RnMode) -> Self {
        self.rn_mode = mode;
        self
    }

    pub fn with_step_probs(mut self, probs: Vec<f64>) -> Self {
        self.up_probs = UpProbs::PerStep(probs);
        self
    }

    pub fn with_step_sizes(mut self, sizes: Vec<f64>) -> Self {
        self.step_sizes = Some(sizes);
        self
    }

    pub fn up_prob(&self, step: usize) -> f64 {
        match &self.up_probs {
            UpProbs::Constant(p) => *p,
            UpProbs::PerStep(ps) => ps[step],
        }
    }

    pub fn dt(&self, step: usize) -> f64 {
        match &self.step_sizes {
            Some(sizes) => sizes[step],
            None => self.horizon / self.steps as f64,
        }
    }

    /// Grid times `t_0 = 0, …, t_n = T`.
    pub fn times(&self) -> Vec<f64> {
        match &self.step_sizes {
            None => Path::uniform_times(self.steps, self.horizon),
            Some(sizes) => std::iter::once(0.0)
                .chain(sizes.iter().scan(0.0, |t, dt| {
                    *t += dt;
                    Some(*t)
                }))
                .collect(),
        }
    }

    /// Parameter checks plus the no-arbitrage gate at every step.
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(invalid("steps", "must be >= 1"));
        }
        ensure_positive("horizon", self.horizon)?;
        ensure_finite("drift", self.drift)?;
        ensure_positive("volatility", self.volatility)?;
        ensure_finite("simple_rate", self.simple_rate)?;
        ensure_finite("initial_price", self.initial_price)?;
        ensure_positive("account_initial", self.account_initial)?;
        match &self.up_probs {
            UpProbs::Constant(p) => ensure_probability("up_probs", *p)?,
            UpProbs::PerStep(ps) => {
                if ps.len() != self.steps {
                    return Err(Error::Input(format!(
                        "{} per-step probabilities for {} steps",
                        ps.len(),
                        self.steps
                    )));
                }
                for &p in ps {
                    ensure_probability("up_probs", p)?;
                }
            }
        }
        if let Some(sizes) = &self.step_sizes {
            if sizes.len() != self.steps {
                return Err(Error::Input(format!(
                    "{} step sizes for {} steps",
                    sizes.len(),
                    self.steps
                )));
            }
            for &dt in sizes {
                ensure_positive("step_sizes", dt)?;
            }
            let total: f64 = sizes.iter().sum();
            if (total - self.horizon).abs() > 1e-9 * self.horizon.max(1.0) {
                return Err(invalid(
                    "step_sizes",
                    format!("sum {total} differs from horizon {}", self.horizon),
                ));
            }
        }
        for step in 0..self.steps {
            self.checked_rn_prob(step)?;
        }
        Ok(())
    }

    fn moves(&self, step: usize) -> UpDown {
        two_point_moves(self.drift, self.volatility, self.up_prob(step), self.dt(step))
    }

    fn rn_prob_unchecked(&self, step: usize) -> f64 {
        let theta = match self.rn_mode {
            RnMode::AsWritten => self.drift / self.volatility,
            RnMode::MartingaleConsistent => (self.drift - self.simple_rate) / self.volatility,
        };
        tilted_probability(self.up_prob(step), theta, self.dt(step))
    }

    fn checked_rn_prob(&self, step: usize) -> Result<f64> {
        let q = self.rn_prob_unchecked(step);
        if q > 0.0 && q < 1.0 {
            Ok(q)
        } else {
            Err(Error::Arbitrage {
                step,
                q,
                state: None,
            })
        }
    }

    /// Every step has the same increments, so the tree recombines.
    pub fn is_recombining(&self) -> bool {
        let uniform_p = match &self.up_probs {
            UpProbs::Constant(_) => true,
            UpProbs::PerStep(ps) => ps.windows(2).all(|w| w[0] == w[1]),
        };
        let uniform_dt = self
            .step_sizes
            .as_ref()
            .is_none_or(|s| s.windows(2).all(|w| w[0] == w[1]));
        uniform_p && uniform_dt
    }

    fn check_step(&self, step: usize) -> Result<()> {
        if step < self.steps {
            Ok(())
        } else {
            Err(invalid(
                "step",
                format!("{step} out of range for {} steps", self.steps),
            ))
        }
    }
}

/// Price increments `(u, d)` of `step`.
pub fn bachelier_updown(spec: &BachelierTreeSpec, step: usize) -> Result<UpDown> {
    spec.validate()?;
    spec.check_step(step)?;
    Ok(spec.moves(step))
}

/// Risk-neutral up-probability of `step` under `spec.rn_mode`.
pub fn bachelier_rn_prob(spec: &BachelierTreeSpec, step: usize) -> Result<f64> {
    spec.validate()?;
    spec.check_step(step)?;
    spec.checked_rn_prob(step)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreePrice {
    pub price: f64,
    /// `(G^u − G^d)/(u − d)` at the root.
    pub root_hedge: f64,
}

/// Backward induction on the tree. Recombining trees use an `(n+1)`-level
/// lattice; otherwise all `2^n` paths are enumerated (at most
/// [`MAX_ENUMERATION_STEPS`] steps).
pub fn bachelier_price<F: Fn(f64) -> f64>(spec: &BachelierTreeSpec, payoff: F) -> Result<TreePrice> {
    spec.validate()?;
    if spec.is_recombining() {
        let n = spec.steps;
        let m = spec.moves(0);
        let q = spec.rn_prob_unchecked(0);
        let carry = spec.simple_rate * spec.dt(0);
        let mut values: Vec<f64> = (0..=n)
            .map(|j| payoff(leaf_price(spec.initial_price, m, n, j)))
            .collect();
        let mut hedge = f64::NAN;
        for level in (0..n).rev() {
            if level == 0 {
                hedge = (values[1] - values[0]) / (m.up - m.down);
            }
            for j in 0..=level {
                values[j] = q * values[j + 1] + (1.0 - q) * values[j] + carry;
            }
        }
        return Ok(TreePrice {
            price: values[0],
            root_hedge: hedge,
        });
    }
    if spec.steps > MAX_ENUMERATION_STEPS {
        return Err(Error::TreeTooLarge {
            steps: spec.steps,
            max: MAX_ENUMERATION_STEPS,
        });
    }
    let steps: Vec<(UpDown, f64, f64)> = (0..spec.steps)
        .map(|k| {
            (
                spec.moves(k),
                spec.rn_prob_unchecked(k),
                spec.simple_rate * spec.dt(k),
            )
        })
        .collect();
    let m0 = steps[0].0;
    let gu = enumerate(&steps, 1, spec.initial_price + m0.up, &payoff);
    let gd = enumerate(&steps, 1, spec.initial_price + m0.down, &payoff);
    let (_, q0, c0) = steps[0];
    Ok(TreePrice {
        price: q0 * gu + (1.0 - q0) * gd + c0,
        root_hedge: (gu - gd) / (m0.up - m0.down),
    })
}

fn enumerate<F: Fn(f64) -> f64>(steps: &[(UpDown, f64, f64)], k: usize, price: f64, payoff: &F) -> f64 {
    if k == steps.len() {
        return payoff(price);
    }
    let (m, q, carry) = steps[k];
    let gu = enumerate(steps, k + 1, price + m.up, payoff);
    let gd = enumerate(steps, k + 1, price + m.down, payoff);
    q * gu + (1.0 - q) * gd + carry
}

fn leaf_price(initial: f64, m: UpDown, n: usize, ups: usize) -> f64 {
    initial + ups as f64 * m.up + (n - ups) as f64 * m.down
}

/// Node values and hedge ratios of a recombining tree. `values[k][j]` is the
/// option value after `k` steps with `j` up-moves; `hedges[k][j]` the stock
/// holding chosen at that node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lattice {
    pub prices: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
    pub hedges: Vec<Vec<f64>>,
}

/// Full lattice for a recombining tree (memory grows as `n²`).
pub fn bachelier_lattice<F: Fn(f64) -> f64>(spec: &BachelierTreeSpec, payoff: F) -> Result<Lattice> {
    spec.validate()?;
    if !spec.is_recombining() {
        return Err(Error::Input(
            "lattice view needs a recombining tree (constant p and step size)".into(),
        ));
    }
    let n = spec.steps;
    let m = spec.moves(0);
    let q = spec.rn_prob_unchecked(0);
    let carry = spec.simple_rate * spec.dt(0);
    let prices: Vec<Vec<f64>> = (0..=n)
        .map(|k| (0..=k).map(|j| leaf_price(spec.initial_price, m, k, j)).collect())
        .collect();
    let mut values = vec![Vec::new(); n + 1];
    let mut hedges = vec![Vec::new(); n];
    values[n] = prices[n].iter().map(|&x| payoff(x)).collect();
    for k in (0..n).rev() {
        let next = &values[k + 1];
        hedges[k] = (0..=k)
            .map(|j| (next[j + 1] - next[j]) / (m.up - m.down))
            .collect();
        values[k] = (0..=k)
            .map(|j| q * next[j + 1] + (1.0 - q) * next[j] + carry)
            .collect();
    }
    Ok(Lattice {
        prices,
        values,
        hedges,
    })
}

/// Price path and companion account path generated by one coin sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CadlagTreePath {
    pub price: Path,
    pub account: Path,
}

/// Walk the tree along `coins` (`true` = up). Both paths are read as
/// right-continuous step functions via [`Path::step_value_at`].
pub fn tree_to_cadlag_path(spec: &BachelierTreeSpec, coins: &[bool]) -> Result<CadlagTreePath> {
    spec.validate()?;
    if coins.len() != spec.steps {
        return Err(Error::Input(format!(
            "coin sequence has {} entries for {} steps",
            coins.len(),
            spec.steps
        )));
    }
    let times = spec.times();
    let mut price = Vec::with_capacity(spec.steps + 1);
    let mut account = Vec::with_capacity(spec.steps + 1);
    let (mut a, mut b) = (spec.initial_price, spec.account_initial);
    price.push(a);
    account.push(b);
    for (k, &up) in coins.iter().enumerate() {
        let m = spec.moves(k);
        a += if up { m.up } else { m.down };
        b += spec.simple_rate * spec.dt(k);
        price.push(a);
        account.push(b);
    }
    Ok(CadlagTreePath {
        price: Path::new(times.clone(), price),
        account: Path::new(times, account),
    })
}

/// Natural-world coins: step `k` is up with probability `p_k`.
pub fn sample_coins<R: Rng + ?Sized>(spec: &BachelierTreeSpec, rng: &mut R) -> Vec<bool> {
    (0..spec.steps)
        .map(|k| rng.random::<f64>() < spec.up_prob(k))
        .collect()
}
