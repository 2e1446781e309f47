use serde::{Deserialize, Serialize};

/// Terminal payoffs on the leaf price. Engines accept any `Fn(f64) -> f64`;
/// this enum covers the contracts the command line exposes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payoff {
    Call { strike: f64 },
    Put { strike: f64 },
    /// Pays 1 when the terminal price is at or above the strike.
    Digital { strike: f64 },
    /// Terminal price minus a fixed amount.
    Forward { strike: f64 },
    Constant { value: f64 },
}

impl Payoff {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Payoff::Call { strike } => (x - strike).max(0.0),
            Payoff::Put { strike } => (strike - x).max(0.0),
            Payoff::Digital { strike } => {
                if x >= strike {
                    1.0
                } else {
                    0.0
                }
            }
            Payoff::Forward { strike } => x - strike,
            Payoff::Constant { value } => value,
        }
    }
}
