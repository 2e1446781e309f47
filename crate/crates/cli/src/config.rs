//! Run configuration. Every command's parameters can come from flags or from
//! a JSON file; both paths share the same structs so the defaults agree.

use std::path::PathBuf;

use bachelier_core::binomial::RnMode;
use bachelier_core::pathdep::FeedbackFn;
use clap::{Args, FromArgMatches, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::csv_io::Schema;
use crate::error::{CliError, Result};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_PATHS: usize = 10_000;
pub const DEFAULT_STEPS: usize = 1_000;

/// Builds an args struct from its clap defaults alone.
fn clap_defaults<T: Args + FromArgMatches>() -> T {
    let cmd = T::augment_args(clap::Command::new("defaults").no_binary_name(true));
    let matches = cmd.get_matches_from(std::iter::empty::<String>());
    T::from_arg_matches(&matches).expect("every argument has a default")
}

macro_rules! clap_default {
    ($($t:ty),*) => {
        $(impl Default for $t {
            fn default() -> Self {
                clap_defaults()
            }
        })*
    };
}

pub fn parse_rn_mode(s: &str) -> std::result::Result<RnMode, String> {
    match s {
        "as-written" => Ok(RnMode::AsWritten),
        "martingale" => Ok(RnMode::MartingaleConsistent),
        _ => Err(format!("expected as-written or martingale, got {s}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PayoffKind {
    Call,
    Put,
    Digital,
    Forward,
}

impl PayoffKind {
    pub fn payoff(self, strike: f64) -> bachelier_core::Payoff {
        use bachelier_core::Payoff;
        match self {
            PayoffKind::Call => Payoff::Call { strike },
            PayoffKind::Put => Payoff::Put { strike },
            PayoffKind::Digital => Payoff::Digital { strike },
            PayoffKind::Forward => Payoff::Forward { strike },
        }
    }
}

/// Closed-form call price, hedge and market price of risk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
#[command(allow_negative_numbers = true)]
pub struct PriceArgs {
    /// Initial asset value A₀.
    #[arg(long, default_value_t = 100.0)]
    pub initial_value: f64,
    /// Drift ρ per year.
    #[arg(long, default_value_t = 0.05)]
    pub drift: f64,
    /// Volatility v per √year.
    #[arg(long, default_value_t = 20.0)]
    pub volatility: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rate: f64,
    #[arg(long, default_value_t = 100.0)]
    pub strike: f64,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
    /// Valuation time.
    #[arg(long, default_value_t = 0.0)]
    pub time: f64,
    /// Spot at the valuation time; defaults to A₀.
    #[arg(long)]
    pub spot: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TreeEngine {
    Bachelier,
    Classical,
}

/// Binomial tree price. `--steps` sets the tree depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
#[command(allow_negative_numbers = true)]
pub struct TreeArgs {
    #[arg(long, value_enum, default_value_t = TreeEngine::Bachelier)]
    pub engine: TreeEngine,
    #[arg(long, default_value_t = 100.0)]
    pub initial_value: f64,
    /// Additive drift ρ (bachelier) or mean return μ (classical).
    #[arg(long, default_value_t = 0.05)]
    pub drift: f64,
    /// Additive volatility v (bachelier) or return volatility σ (classical).
    #[arg(long, default_value_t = 20.0)]
    pub volatility: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rate: f64,
    /// Natural-world up-probability.
    #[arg(long, default_value_t = 0.5)]
    pub up_prob: f64,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
    #[arg(long, value_enum, default_value_t = PayoffKind::Call)]
    pub payoff: PayoffKind,
    #[arg(long, default_value_t = 100.0)]
    pub strike: f64,
    /// Per-step up-probabilities (bachelier engine only; config file).
    #[arg(skip)]
    pub step_probs: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FeedbackKind {
    /// h(x) = sgn(x)
    Sign,
    /// h ≡ 1
    One,
    /// h ≡ 0
    Zero,
}

/// Monte Carlo price on the factor-feedback asset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
#[command(allow_negative_numbers = true)]
pub struct PathdepArgs {
    #[arg(long, default_value_t = 100.0)]
    pub initial_value: f64,
    #[arg(long, default_value_t = 0.05)]
    pub drift: f64,
    /// Direct volatility v.
    #[arg(long, default_value_t = 20.0)]
    pub vol_direct: f64,
    /// Feedback volatility γ.
    #[arg(long, default_value_t = 5.0)]
    pub vol_feedback: f64,
    #[arg(long, value_enum, default_value_t = FeedbackKind::Sign)]
    pub feedback: FeedbackKind,
    /// Full piecewise feedback function (config file); overrides `feedback`.
    #[arg(skip)]
    pub feedback_fn: Option<FeedbackFn>,
    #[arg(long, default_value_t = 0.05)]
    pub factor_drift: f64,
    #[arg(long, default_value_t = 0.2)]
    pub factor_volatility: f64,
    /// Coefficients of p(Δ) = p₀ + p₁√Δ + p₂Δ.
    #[arg(long, default_value_t = 0.5)]
    pub p0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p2: f64,
    /// Observed factor changes (t,change); replaces the factor drift,
    /// volatility and sign probability with estimates.
    #[arg(long)]
    pub factor_csv: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
    #[arg(long, value_enum, default_value_t = PayoffKind::Call)]
    pub payoff: PayoffKind,
    #[arg(long, default_value_t = 100.0)]
    pub strike: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Figure {
    /// Exponential score transform, a = 0.05.
    #[value(name = "A1")]
    A1,
    /// Geometric score transform, b = 0.5.
    #[value(name = "A2")]
    A2,
    /// Brownian path, local time and Z^(1,1,1).
    #[value(name = "B3")]
    B3,
    /// Ten trajectories of W^(2,−1,2).
    #[value(name = "B4")]
    B4,
    /// Ten trajectories of W^(11,−1,2).
    #[value(name = "B5")]
    B5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Process {
    Abm,
    Gbm,
    Absorbed,
    ItoMckean,
    ItoMckeanMixture,
    Gsbm,
    HvWalk,
    Csyip,
}

/// Figure data or a single simulated path, as CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[arg(long, value_enum, ignore_case = true, conflicts_with = "process")]
    pub figure: Option<Figure>,
    #[arg(long, value_enum)]
    pub process: Option<Process>,
    /// CSV destination; stdout if omitted.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 1.0)]
    pub initial_value: f64,
    /// Drift ρ (ABM) or μ (GBM).
    #[arg(long, default_value_t = 0.0)]
    pub drift: f64,
    /// Volatility v (ABM) or σ (GBM).
    #[arg(long, default_value_t = 1.0)]
    pub volatility: f64,
    /// Skew parameter δ for the Itô–McKean processes.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// γ⁻, γ⁰, γ⁺ for the generalized skew Brownian motion.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.0, 1.0])]
    pub gamma: Vec<f64>,
}

/// ESG-adjusted prices for one record or a CSV of records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
#[command(allow_negative_numbers = true)]
pub struct EsgArgs {
    /// ESG records CSV (date,price,company_score,benchmark_score).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 165.15)]
    pub price: f64,
    #[arg(long, default_value_t = 72.63)]
    pub company_score: f64,
    #[arg(long, default_value_t = 50.0)]
    pub benchmark_score: f64,
    /// ESG affinity γ.
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    /// Curvature of the exponential score transform.
    #[arg(long, default_value_t = 0.05)]
    pub exp_a: f64,
    /// Shift of the geometric score transform.
    #[arg(long, default_value_t = 0.5)]
    pub geo_b: f64,
}

/// Drift and volatility (prices) or sign probability (factor changes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
#[command(allow_negative_numbers = true)]
pub struct EstimateArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Schema::Prices)]
    pub schema: Schema,
}

/// Simple rate implied by two assets driven by one Brownian motion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
#[command(allow_negative_numbers = true)]
pub struct ImpliedRateArgs {
    #[arg(long, default_value_t = 0.05)]
    pub drift1: f64,
    #[arg(long, default_value_t = 0.1)]
    pub vol1: f64,
    #[arg(long, default_value_t = 0.08)]
    pub drift2: f64,
    #[arg(long, default_value_t = 0.2)]
    pub vol2: f64,
}

/// ESG affinity implied by an observed adjusted price.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
#[command(allow_negative_numbers = true)]
pub struct ImpliedAffinityArgs {
    #[arg(long, default_value_t = 173.4075)]
    pub observed: f64,
    #[arg(long, default_value_t = 165.15)]
    pub price: f64,
    #[arg(long, default_value_t = 55.0)]
    pub company_score: f64,
    #[arg(long, default_value_t = 50.0)]
    pub benchmark_score: f64,
    #[arg(long)]
    pub lower_bound: Option<f64>,
    #[arg(long)]
    pub upper_bound: Option<f64>,
}

/// Tree error against the closed form over a list of depths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
#[command(allow_negative_numbers = true)]
pub struct ConvergenceArgs {
    #[arg(long, default_value_t = 100.0)]
    pub initial_value: f64,
    #[arg(long, default_value_t = 0.05)]
    pub drift: f64,
    #[arg(long, default_value_t = 20.0)]
    pub volatility: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rate: f64,
    #[arg(long, default_value_t = 0.5)]
    pub up_prob: f64,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
    #[arg(long, default_value_t = 100.0)]
    pub strike: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [64usize, 256, 1024, 4096])]
    pub depths: Vec<usize>,
}

clap_default!(
    PriceArgs,
    TreeArgs,
    PathdepArgs,
    SimulateArgs,
    EsgArgs,
    EstimateArgs,
    ImpliedRateArgs,
    ImpliedAffinityArgs,
    ConvergenceArgs
);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum CommandConfig {
    Price(PriceArgs),
    Tree(TreeArgs),
    Pathdep(PathdepArgs),
    Simulate(SimulateArgs),
    Esg(EsgArgs),
    Estimate(EstimateArgs),
    ImpliedRate(ImpliedRateArgs),
    ImpliedAffinity(ImpliedAffinityArgs),
    ConvergenceReport(ConvergenceArgs),
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Price(_) => "price",
            CommandConfig::Tree(_) => "tree",
            CommandConfig::Pathdep(_) => "pathdep",
            CommandConfig::Simulate(_) => "simulate",
            CommandConfig::Esg(_) => "esg",
            CommandConfig::Estimate(_) => "estimate",
            CommandConfig::ImpliedRate(_) => "implied-rate",
            CommandConfig::ImpliedAffinity(_) => "implied-affinity",
            CommandConfig::ConvergenceReport(_) => "convergence-report",
        }
    }
}

/// Fully resolved configuration, echoed in every result document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub paths: usize,
    pub steps: usize,
    pub output_path: Option<PathBuf>,
    pub rn_mode: RnMode,
    pub command: CommandConfig,
}

impl RunConfig {
    pub fn new(command: CommandConfig) -> Self {
        Self {
            seed: DEFAULT_SEED,
            paths: DEFAULT_PATHS,
            steps: DEFAULT_STEPS,
            output_path: None,
            rn_mode: RnMode::default(),
            command,
        }
    }

    /// Checks that referenced input files exist.
    pub fn validate(&self) -> Result<()> {
        let inputs: Vec<&PathBuf> = match &self.command {
            CommandConfig::Pathdep(a) => a.factor_csv.iter().collect(),
            CommandConfig::Esg(a) => a.input.iter().collect(),
            CommandConfig::Estimate(a) => {
                let p = a
                    .input
                    .as_ref()
                    .ok_or_else(|| CliError::Config("estimate needs --input".into()))?;
                vec![p]
            }
            _ => Vec::new(),
        };
        for p in inputs {
            if !p.is_file() {
                return Err(CliError::Config(format!("input file {} not found", p.display())));
            }
        }
        if self.steps == 0 {
            return Err(CliError::Config("steps must be >= 1".into()));
        }
        if self.paths == 0 {
            return Err(CliError::Config("paths must be >= 1".into()));
        }
        Ok(())
    }
}

/// Layout of a `--config` file: every field optional, command included.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub paths: Option<usize>,
    pub steps: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub rn_mode: Option<RnMode>,
    pub command: Option<CommandConfig>,
}

impl ConfigFile {
    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}
